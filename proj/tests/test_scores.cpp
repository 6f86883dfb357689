// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "mcrand/random.hpp"
#include "mcrand/scores.hpp"

using namespace mcrand;

namespace {

std::vector<Outcome> surv(const std::vector<double>& t, const std::vector<int>& e)
{
    std::vector<Outcome> out;
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back(Outcome::survival(t[i], e[i] != 0));
    return out;
}

void check_vec(const std::vector<double>& got, const std::vector<double>& want)
{
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("identity and binary scores pass values through")
{
    check_vec(identity_scores(std::vector{Outcome::continuous(1), Outcome::continuous(2)}), {1, 2});
    check_vec(identity_scores(std::vector<Outcome>(4, Outcome::continuous(0))), {0, 0, 0, 0});
    const std::vector b{Outcome::binary(1), Outcome::binary(0), Outcome::binary(1), Outcome::binary(0)};
    const auto s = binary_scores(b);
    check_vec(s, {1, 0, 1, 0});
    CHECK(std::accumulate(s.begin(), s.end(), 0.0) == 2);
}

TEST_CASE("logrank scores")
{
    check_vec(logrank_scores(surv({1, 2, 3}, {1, 1, 1})), {2.0 / 3, 1.0 / 6, -5.0 / 6});
    check_vec(logrank_scores(surv({1, 2, 3}, {0, 0, 0})), {0, 0, 0});
    check_vec(logrank_scores(surv({1, 2}, {1, 0})), {0.5, -0.5});
}

TEST_CASE("gehan scores")
{
    check_vec(gehan_scores(surv({1, 2, 3}, {1, 1, 1})), {-2, 0, 2});
    check_vec(gehan_scores(surv({1, 2, 3}, {0, 0, 0})), {0, 0, 0});
    check_vec(gehan_scores(surv({1, 5}, {1, 0})), {-1, 1});
}

TEST_CASE("tied deaths and censorings")
{
    // A death and a censoring at the same time: the censoring is taken to
    // follow the death, so the censored patient is at risk at the death and
    // definitely outlives it.
    check_vec(logrank_scores(surv({2, 2}, {1, 0})), {0.5, -0.5});
    check_vec(gehan_scores(surv({2, 2}, {1, 0})), {-1, 1});
    check_vec(gehan_scores(surv({2, 2}, {1, 1})), {0, 0});
}

TEST_CASE("censored scores sum to zero and ignore the time scale")
{
    RandomStream rng(11, 0);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 * (1 + static_cast<int>(rng.below(6)));
        std::vector<double> t;
        std::vector<int> e;
        for (int i = 0; i < n; ++i) {
            t.push_back(std::round(rng.exponential(1.0) * 4) / 4 + 0.25);
            e.push_back(rng.bernoulli(0.7) ? 1 : 0);
        }
        std::vector<double> scaled;
        for (double x : t) scaled.push_back(3.5 * x);
        for (auto kind : {ScoreKind::Logrank, ScoreKind::Gehan}) {
            const auto s = block_scores(surv(t, e), kind);
            CHECK(std::fabs(std::accumulate(s.begin(), s.end(), 0.0)) <= 1e-12 * n);
            CHECK(block_scores(surv(scaled, e), kind) == s);
        }
    }
}

TEST_CASE("score names")
{
    CHECK(parse_score_kind("gehan") == ScoreKind::Gehan);
    CHECK(std::string(to_string(ScoreKind::Logrank)) == "logrank");
    CHECK(default_score(OutcomeKind::Survival) == ScoreKind::Logrank);
    CHECK(default_score(OutcomeKind::Binary) == ScoreKind::Binary);
    CHECK_THROWS(parse_score_kind("wilcoxon"));
}
