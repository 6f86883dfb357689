// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace mcrand {

//! Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
double normal_cdf(double x) noexcept;

//! Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x) noexcept;

//! 2 (1 - Phi(|z|)), clamped to [0, 1].
double two_sided_p(double z) noexcept;

//! Two-sided p-value of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

//! Upper-tail p-value of chi-square with `df` degrees of freedom.
double chi_square_sf(double x, double df);

//! Sample quantile with linear interpolation between order statistics
//! (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double prob);

double mean(std::span<const double> xs) noexcept;

//! Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs) noexcept;

}  // namespace mcrand
