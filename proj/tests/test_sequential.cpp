// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "mcrand/error.hpp"
#include "mcrand/sequential.hpp"
#include "mcrand/simulation.hpp"

using namespace mcrand;

TEST_CASE("O'Brien-Fleming boundaries")
{
    CHECK(obf_boundary(4, 4) == doctest::Approx(2.024).epsilon(1e-12));
    CHECK(obf_boundary(1, 4) == doctest::Approx(4.048).epsilon(1e-12));
    CHECK(std::round(obf_boundary(2, 4) * 1000) / 1000 == doctest::Approx(2.862));
    CHECK(std::round(obf_boundary(3, 4) * 1000) / 1000 == doctest::Approx(2.337));
    CHECK_THROWS_AS(obf_boundary(0, 4), Error);
    CHECK_THROWS_AS(obf_boundary(5, 4), Error);
}

TEST_CASE("plans")
{
    const auto p = obrien_fleming_plan(4, 30, 0.025, 1);
    CHECK(p.look_blocks == std::vector<int>{7, 15, 22, 30});
    CHECK(p.information(2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(obrien_fleming_plan(3, 30, 0.025, 1), Error);
    CHECK_NOTHROW(obrien_fleming_plan(3, 30, 0.025, 1, 2.0));
    CHECK_THROWS_AS(obrien_fleming_plan(4, 30, 0.025, 1, std::nullopt, {5, 4, 20, 30}), Error);
    CHECK_THROWS_AS(obrien_fleming_plan(4, 30, 0.025, 1, std::nullopt, {5, 10, 20, 25}), Error);
    CHECK(obrien_fleming_plan(4, 30, 0.05, 2).c_final == doctest::Approx(2.024));
}

namespace {

TrialData null_trial(int blocks, std::uint64_t rep)
{
    Scenario s;
    s.n_total = 4 * blocks;
    s.num_institutions = 5;
    s.effect = 0;
    s.id = 77;
    auto rng = replication_stream(s, rep);
    return gen_continuous(s, rng);
}

}  // namespace

TEST_CASE("monitoring a partial stream")
{
    const auto plan = obrien_fleming_plan(4, 20, 0.025, 1);
    const auto full = null_trial(20, 1);

    auto run = monitor_sequential(full.prefix(3), ScoreKind::Identity, plan);
    CHECK(run.looks.empty());
    CHECK_FALSE(run.finished);

    run = monitor_sequential(full.prefix(12), ScoreKind::Identity, plan);
    CHECK(run.looks.size() == 2);
    CHECK_FALSE(run.finished);
    CHECK_THROWS_AS(run_sequential(full.prefix(12), ScoreKind::Identity, plan), Error);

    const auto whole = run_sequential(full, ScoreKind::Identity, plan);
    CHECK(whole.finished);
    // Looks seen on a prefix are the looks of the full run.
    for (std::size_t i = 0; i < run.looks.size() && i < whole.looks.size(); ++i) {
        CHECK(run.looks[i].statistic == doctest::Approx(whole.looks[i].statistic).epsilon(1e-12));
    }
}

TEST_CASE("look decisions")
{
    const auto plan = obrien_fleming_plan(4, 20, 0.025, 1);
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const auto run = run_sequential(null_trial(20, rep), ScoreKind::Identity, plan);
        for (const auto& l : run.looks) {
            if (l.look < 4 && l.statistic <= l.boundary) CHECK(l.decision == LookDecision::Continue);
            if (l.look == 4 && l.statistic <= l.boundary) CHECK(l.decision == LookDecision::AcceptAtFinal);
            if (l.statistic > l.boundary) CHECK(l.decision == LookDecision::Reject);
        }
    }
    CHECK(parse_look_decision("accept-at-final") == LookDecision::AcceptAtFinal);
}
