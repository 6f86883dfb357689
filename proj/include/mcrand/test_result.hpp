// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace mcrand {

enum class InferenceMode { Conditional, Unconditional };

const char* to_string(InferenceMode mode) noexcept;
InferenceMode parse_inference_mode(std::string_view name);

//! Normal-approximation randomization test of S_A.
struct TestResult {
    InferenceMode mode = InferenceMode::Unconditional;
    double statistic = 0;  //!< S_A, the arm-A score total
    double mean = 0;
    double variance = 0;
    double z = 0;
    double p_one_sided = 1;  //!< P(Z >= z): large S_A favours A
    double p_two_sided = 1;
    double effect_d = 0;  //!< (2/(NP)) (2 S_A - S)
    bool degenerate = false;  //!< zero variance with S_A at its mean
    double unconditional_mean = 0;
    double unconditional_variance = 0;
    int rank_var_n = 0;

    //! p-value for the requested sidedness (1 or 2).
    double p_value(int sided) const { return sided == 1 ? p_one_sided : p_two_sided; }
};

/*!
 * Fills z and p-values from (statistic, mean, variance).
 *
 * `reference_variance` sets the scale for deciding that `variance` is zero.
 * Zero variance with the statistic at its mean gives z = 0 and p = 1; zero
 * variance with the statistic away from its mean throws Error(Numeric).
 */
TestResult finish_test(InferenceMode mode, double statistic, double mean, double variance,
                       double reference_variance, double effect_d);

}  // namespace mcrand
