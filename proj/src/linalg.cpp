// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/linalg.hpp"

#include <cmath>
#include <limits>

#include "mcrand/error.hpp"

namespace mcrand {

double default_pinv_tolerance() noexcept
{
    return std::sqrt(std::numeric_limits<double>::epsilon());
}

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& m, std::optional<double> rel_tol)
{
    if (m.rows() != m.cols()) {
        fail(ErrorKind::InvalidArgument, "pseudo_inverse needs a square matrix");
    }
    const Eigen::Index n = m.rows();
    PseudoInverse out;
    out.matrix = Eigen::MatrixXd::Zero(n, n);
    if (n == 0) {
        return out;
    }
    const double scale = m.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) {
        fail(ErrorKind::Numeric, "pseudo_inverse input has non-finite entries");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        fail(ErrorKind::InvalidArgument, "pseudo_inverse input is not symmetric");
    }
    if (scale == 0) {
        return out;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
        fail(ErrorKind::Numeric, "eigendecomposition failed to converge");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double cutoff = rel_tol.value_or(default_pinv_tolerance()) * lambda.cwiseAbs().maxCoeff();

    Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::fabs(lambda(i)) > cutoff) {
            inv(i) = 1.0 / lambda(i);
            ++out.rank;
        }
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    out.matrix = v * inv.asDiagonal() * v.transpose();
    // Symmetrize away rounding.
    out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
    return out;
}

}  // namespace mcrand
