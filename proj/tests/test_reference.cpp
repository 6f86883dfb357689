// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
//
// Expected values were computed independently with scipy/statsmodels and a
// direct transcription of the logrank and Gehan formulas.
#include <doctest.h>

#include "helpers.hpp"
#include "mcrand/csv.hpp"
#include "mcrand/error.hpp"
#include "mcrand/reference_tests.hpp"

using namespace mcrand;

namespace {

TrialData fixture(const char* name, std::optional<OutcomeKind> kind = std::nullopt)
{
    CsvOptions o;
    o.outcome = kind;
    return read_trial_csv(std::string(MCRAND_TEST_DATA) + "/" + name, o);
}

}  // namespace

TEST_CASE("t tests")
{
    const auto d = fixture("continuous.csv");
    auto r = t_test(d);
    CHECK(r.statistic == doctest::Approx(1.8158729425963436).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.08304435367034821).epsilon(1e-9));
    r = stratified_t(d);
    CHECK(r.statistic == doctest::Approx(2.1192907279080804).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.08758426924090183).epsilon(1e-9));
}

TEST_CASE("binary comparators")
{
    const auto d = fixture("binary.csv", OutcomeKind::Binary);
    auto r = mantel_haenszel(d);
    CHECK(r.statistic * r.statistic == doctest::Approx(1.173913043478261).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.2785986718379625).epsilon(1e-9));
    r = pooled_2x2_chi2(d);
    CHECK(r.statistic * r.statistic == doctest::Approx(1.5104895104895104).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.21906440661100474).epsilon(1e-9));
}

TEST_CASE("survival comparators")
{
    const auto d = fixture("survival.csv");
    auto r = logrank_test(d);
    CHECK(r.statistic == doctest::Approx(-1.9551853472386191).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.05056119742352756).epsilon(1e-9));
    r = stratified_logrank(d);
    CHECK(r.statistic == doctest::Approx(-1.668983896380313).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.09512057129475812).epsilon(1e-9));
    r = stratified_gehan(d);
    // Oriented like the logrank: positive for an excess of deaths in A.
    CHECK(r.statistic == doctest::Approx(-1.9192898346492004).epsilon(1e-10));
    CHECK(r.p_two_sided == doctest::Approx(0.054947663787087396).epsilon(1e-9));
}

TEST_CASE("pooled 2x2 with a zero margin")
{
    std::vector<Outcome> y(8, Outcome::binary(1));
    const auto d = testing::make_trial(4, 1, std::vector<int>(8, 0), "ABABBABA", y);
    const auto r = pooled_2x2_chi2(d);
    CHECK(r.p_two_sided == 1);
    CHECK(mantel_haenszel(d).p_two_sided == 1);
}

TEST_CASE("reference report skips incompatible tests")
{
    const auto d = fixture("continuous.csv");
    const auto rep = reference_tests(d);
    CHECK(rep.p_values.count("t-test") == 1);
    CHECK(rep.p_values.count("stratified-t") == 1);
    CHECK(rep.p_values.count("logrank") == 0);
    CHECK(rep.notices.size() == 5);
    CHECK_THROWS_AS(logrank_test(d), Error);
    CHECK(parse_reference_test("mantel-haenszel") == ReferenceTest::MantelHaenszel);
    CHECK_FALSE(parse_reference_test("wilcoxon").has_value());
}
