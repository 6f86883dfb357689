// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "mcrand/error.hpp"

namespace mcrand {

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) noexcept
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double two_sided_p(double z) noexcept
{
    return std::clamp(2.0 * normal_sf(std::fabs(z)), 0.0, 1.0);
}

double student_t_two_sided_p(double t, double df)
{
    if (!(df > 0)) {
        fail(ErrorKind::InvalidArgument, "t distribution needs positive degrees of freedom");
    }
    if (!std::isfinite(t)) {
        return 0.0;
    }
    const boost::math::students_t dist(df);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0,
                      1.0);
}

double chi_square_sf(double x, double df)
{
    if (!(df > 0)) {
        fail(ErrorKind::InvalidArgument, "chi-square needs positive degrees of freedom");
    }
    if (x <= 0) {
        return 1.0;
    }
    if (!std::isfinite(x)) {
        return 0.0;
    }
    const boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double quantile_sorted(std::span<const double> sorted, double prob)
{
    if (sorted.empty()) {
        fail(ErrorKind::InvalidArgument, "quantile of an empty sample");
    }
    prob = std::clamp(prob, 0.0, 1.0);
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean(std::span<const double> xs) noexcept
{
    if (xs.empty()) {
        return 0.0;
    }
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) noexcept
{
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean(xs);
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace mcrand
