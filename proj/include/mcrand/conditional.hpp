// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "mcrand/moments.hpp"
#include "mcrand/scores.hpp"
#include "mcrand/test_result.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

//! Numerical policy for conditioning on the institution counts.
struct ConditioningOptions {
    //! Relative eigenvalue cutoff for the generalized inverse; defaults to
    //! default_pinv_tolerance().
    std::optional<double> pinv_tolerance;
    //! Largest relative residual of the count deviation outside the column
    //! space of Var(n_A) before the conditioning is rejected.
    double column_space_tolerance = 1e-6;
    //! Negative conditional variances down to -tol * var_S are clamped to 0.
    double negative_variance_tolerance = 1e-8;
};

struct ConditionalMoments {
    double cond_mean = 0;
    double cond_var = 0;
    int rank_var_n = 0;
    Eigen::VectorXd deviation;  //!< n_A - N_.. / 2
    double uncond_mean = 0;
    double uncond_var = 0;
};

/*!
 * Mean and variance of S_A given the per-institution arm-A totals n_A,
 * from the (K+1)-variate normal approximation:
 *
 *   E[S_A | n_A]   = E[S_A] + c' V^+ (n_A - N_../2)
 *   Var(S_A | n_A) = Var(S_A) - c' V^+ c
 *
 * with c = Cov(S_A, n_A), V = Var(n_A) and V^+ its Moore-Penrose inverse.
 */
ConditionalMoments conditional_moments(const JointMoments& moments,
                                       std::span<const double> observed_n_a,
                                       const ConditioningOptions& options = {});

//! Conditional randomization test of S_A given the observed institution
//! counts.
TestResult conditional_test(const TrialData& data, const ScoreVector& scores,
                            const ConditioningOptions& options = {});
TestResult conditional_test(const TrialData& data, ScoreKind kind,
                            const ConditioningOptions& options = {});

//! Dispatches on mode to conditional_test or unconditional_test.
TestResult randomization_test(const TrialData& data, const ScoreVector& scores,
                              InferenceMode mode, const ConditioningOptions& options = {});

}  // namespace mcrand
