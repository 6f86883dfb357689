// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include <Eigen/Dense>

namespace mcrand {

//! Default relative cutoff for pseudo_inverse: sqrt(machine epsilon).
double default_pinv_tolerance() noexcept;

struct PseudoInverse {
    Eigen::MatrixXd matrix;
    int rank = 0;
};

/*!
 * Moore-Penrose inverse of a symmetric positive semidefinite matrix.
 *
 * Computed from the symmetric eigendecomposition; eigenvalues with
 * |lambda| <= rel_tol * max|lambda| are treated as zero. Throws
 * Error(InvalidArgument) if the input is not square or is asymmetric beyond
 * 1e-10 relative to its largest entry.
 */
PseudoInverse pseudo_inverse(const Eigen::MatrixXd& m,
                             std::optional<double> rel_tol = std::nullopt);

}  // namespace mcrand
