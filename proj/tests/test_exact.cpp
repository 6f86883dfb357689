// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "mcrand/error.hpp"
#include "mcrand/exact.hpp"
#include "mcrand/scores.hpp"

using namespace mcrand;
using testing::continuous;
using testing::make_trial;

namespace {

InstitutionLayout layout_2x2()
{
    return {4, 2, 2, {2, 2, 2, 2}};
}

}  // namespace

TEST_CASE("sample space sizes")
{
    CHECK(sample_space_size({4, 1, 1, {4}}) == 6);
    CHECK(sample_space_size(layout_2x2()) == 36);
    InstitutionLayout big{4, 25, 1, std::vector<int>(25, 4)};
    BigInt six25 = 1;
    for (int i = 0; i < 25; ++i) six25 *= 6;
    CHECK(sample_space_size(big) == six25);
    CHECK(sample_space_size(big).str().substr(0, 3) == "284");
}

TEST_CASE("conditional space sizes")
{
    const auto l = layout_2x2();
    CHECK(conditional_space_size(l, std::vector<int>{2, 2}) == 18);
    CHECK(conditional_space_size(l, std::vector<int>{0, 4}) == 1);
    CHECK_THROWS_AS(conditional_space_size(l, std::vector<int>{1, 2}), Error);

    BigInt total = 0;
    for (const auto& [n_a, count] : conditional_space_sizes(l)) total += count;
    CHECK(total == 36);

    const InstitutionLayout one{4, 3, 1, {4, 4, 4}};
    CHECK(conditional_space_size(one, std::vector<int>{6}) == sample_space_size(one));
}

TEST_CASE("balanced subsets are lexicographic")
{
    const auto s = balanced_subsets(4);
    // {0,1}, {0,2}, {0,3}, {1,2}, {1,3}, {2,3}
    CHECK(s == std::vector<std::uint64_t>{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100});
}

TEST_CASE("exact distribution matches brute force")
{
    const std::vector<int> inst{0, 1, 1, 0, 0, 0, 1, 1};
    const std::vector<double> y{1.5, 2, 0.3, 4, 2, 5, 1, 3};
    const auto d = make_trial(4, 2, inst, "AABBABAB", continuous(y));
    const auto s = compute_scores(d, ScoreKind::Identity);
    const auto t = tabulate_counts(d);

    EnumerationOptions opts;
    opts.condition_on = t.institution_a;
    const auto ex = exact_distribution(d, s, opts);
    const auto o = testing::oracle_conditional(4, 2, inst, y, t.institution_a, *ex.observed);
    CHECK(ex.conditional_points == static_cast<long>(o.points));
    CHECK(ex.exact_mean == doctest::Approx(o.mean).epsilon(1e-12));
    CHECK(ex.exact_var == doctest::Approx(o.var).epsilon(1e-12));
    CHECK(*ex.p_two_sided == doctest::Approx(o.p_two_sided).epsilon(1e-12));

    const auto um = exact_joint_moments(d, s);
    const auto om = testing::oracle_moments(4, 2, inst, y);
    CHECK(um.points == 36);
    CHECK(um.var_S == doctest::Approx(om.var_S).epsilon(1e-12));
}

TEST_CASE("single institution conditioning equals the unconditional law")
{
    const auto d = make_trial(4, 1, std::vector<int>(8, 0), "ABABBABA", continuous({1, 2, 3, 4, 5, 6, 7, 8}));
    const auto s = compute_scores(d, ScoreKind::Identity);
    EnumerationOptions u;
    u.keep_distribution = true;
    EnumerationOptions c = u;
    c.condition_on = std::vector<int>{4};
    const auto a = exact_distribution(d, s, u);
    const auto b = exact_distribution(d, s, c);
    CHECK(a.distribution == b.distribution);
    CHECK(*a.p_two_sided == *b.p_two_sided);
}

TEST_CASE("constant scores give a point mass")
{
    const auto d = make_trial(4, 1, std::vector<int>(4, 0), "ABAB", continuous({2, 2, 2, 2}));
    EnumerationOptions o;
    o.keep_distribution = true;
    const auto r = exact_distribution(d, compute_scores(d, ScoreKind::Identity), o);
    CHECK(r.distribution.size() == 1);
    CHECK(*r.p_two_sided == 1);
}

TEST_CASE("enumeration refuses designs above the cap")
{
    const auto d = make_trial(4, 1, std::vector<int>(16, 0), "ABABABABABABABAB", continuous(std::vector<double>(16, 1)));
    EnumerationOptions o;
    o.cap = 100;
    try {
        exact_distribution(d, compute_scores(d, ScoreKind::Identity), o);
        FAIL("expected a capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
        CHECK(std::string(e.what()).find("1296") != std::string::npos);
    }
}
