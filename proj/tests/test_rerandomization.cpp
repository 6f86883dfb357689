// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "mcrand/error.hpp"
#include "mcrand/rerandomization.hpp"

using namespace mcrand;
using testing::make_trial;

namespace {

TrialData two_arm(const std::vector<double>& t1, const std::vector<int>& e1, const std::vector<double>& t2,
                  const std::vector<int>& e2)
{
    std::vector<Outcome> y;
    std::string arms;
    for (std::size_t i = 0; i < t1.size(); ++i) {
        y.push_back(Outcome::survival(t1[i], e1[i] != 0));
        arms += 'A';
    }
    for (std::size_t i = 0; i < t2.size(); ++i) {
        y.push_back(Outcome::survival(t2[i], e2[i] != 0));
        arms += 'B';
    }
    return make_trial(static_cast<int>(y.size()), 1, std::vector<int>(y.size(), 0), arms, y);
}

}  // namespace

TEST_CASE("mortality ratio arithmetic")
{
    // Arm 1: 2 deaths over 10 person-time; arm 2: 1 death over 10.
    const auto d = two_arm({2, 3, 5}, {1, 1, 0}, {4, 4, 2}, {1, 0, 0});
    const auto m = mortality_ratio(d);
    CHECK(m.deaths_1 == 2);
    CHECK(m.deaths_2 == 1);
    CHECK(m.followup_1 == doctest::Approx(10));
    CHECK(m.ratio == doctest::Approx(2));

    const auto same = two_arm({1, 2, 3}, {1, 0, 1}, {1, 2, 3}, {1, 0, 1});
    CHECK(mortality_ratio(same).ratio == doctest::Approx(1));

    const auto none = two_arm({1, 2}, {1, 1}, {1, 2}, {0, 0});
    try {
        mortality_ratio(none);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidData);
    }
}

TEST_CASE("pooled order puts deaths first at ties")
{
    const auto d = two_arm({2, 1}, {0, 1}, {2, 3}, {1, 0});
    const auto o = pooled_order(d);
    REQUIRE(o.size() == 4);
    CHECK(o[0].time == 1);
    CHECK(o[1].time == 2);
    CHECK(o[1].event);
    CHECK_FALSE(o[2].event);
}

TEST_CASE("rerandomization probabilities")
{
    // With ratio 1 deaths and censorings go to arm 1 at the at-risk share, so
    // the fraction of arm-1 follow-up from the first observation is n1/(n1+n2).
    std::vector<Observation> obs{{1, true}, {2, true}, {3, true}, {4, true}};
    RandomStream rng(1, 1);
    int first_arm1 = 0;
    constexpr int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        // n1 = 1, n2 = 3: arm 1 gets the first death with probability 1/4.
        const auto v = rerandomize_once(obs, 1, 3, 1.0, rng);
        if (v && *v > 0) {
            // ratio = (d1/f1)/(d2/f2); with one arm-1 patient d1 = 1 and f1 is its time.
            // Arm 1 received observation 1 exactly when f1 = 1, i.e. ratio = 1/(3/9) = 3.
            if (std::fabs(*v - 3.0) < 1e-12) ++first_arm1;
        }
    }
    CHECK(std::fabs(first_arm1 / static_cast<double>(reps) - 0.25) < 3 * std::sqrt(0.25 * 0.75 / reps));

    // Once arm 2 is exhausted the rest go to arm 1.
    std::vector<Observation> tail{{1, true}, {2, true}, {3, true}};
    RandomStream rng2(1, 2);
    for (int r = 0; r < 100; ++r) {
        const auto v = rerandomize_once(tail, 2, 1, 1.0, rng2);
        if (v) CHECK(*v > 0);
    }
}

TEST_CASE("confidence interval brackets the estimate and is reproducible")
{
    CoverageScenario s;
    s.seed = 4;
    const auto d = coverage_trial(s, 0);
    const auto a = confidence_interval(d, 400, 0.95, 11, 1);
    const auto b = confidence_interval(d, 400, 0.95, 11, 3);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.lower < a.observed.ratio);
    CHECK(a.observed.ratio < a.upper);
    CHECK(a.realizations.size() + static_cast<std::size_t>(a.discarded) == 400);
    CHECK_THROWS_AS(confidence_interval(d, 50, 0.95, 11), Error);
}

TEST_CASE("symmetric data gives an interval containing one")
{
    std::vector<double> t;
    std::vector<int> e;
    for (int i = 0; i < 40; ++i) {
        t.push_back(0.1 * (i + 1));
        e.push_back(i % 3 ? 1 : 0);
    }
    const auto d = two_arm(t, e, t, e);
    const auto ci = confidence_interval(d, 1000, 0.95, 5);
    CHECK(ci.observed.ratio == doctest::Approx(1));
    CHECK(ci.lower < 1);
    CHECK(ci.upper > 1);
}

TEST_CASE("percentile interval uses type 7 quantiles")
{
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto [lo, hi] = percentile_interval(v, 0.5);
    CHECK(lo == doctest::Approx(2));
    CHECK(hi == doctest::Approx(4));
}
