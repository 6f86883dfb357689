// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrand/trial.hpp"

namespace mcrand {

// Classical comparators. Each returns a two-sided p-value; the statistic's
// sign is positive when arm A has the larger mean, success rate or excess
// of deaths. Incompatible outcome kinds throw Error(InvalidData).

struct ReferenceStatistic {
    double statistic = 0;
    double p_two_sided = 1;
};

//! Pooled-variance two-sample t test ignoring blocks and institutions.
ReferenceStatistic t_test(const TrialData& data);

//! One-sample t on block contrasts ybar_A,j - ybar_B,j with P - 1 df.
ReferenceStatistic stratified_t(const TrialData& data);

//! Mantel-Haenszel over the P block 2x2 tables, no continuity correction.
ReferenceStatistic mantel_haenszel(const TrialData& data);

//! Pearson chi-square on the pooled 2x2 table, no continuity correction.
//! A zero margin gives p = 1.
ReferenceStatistic pooled_2x2_chi2(const TrialData& data);

//! Logrank test on all patients, hypergeometric variance. Statistic is
//! (O_A - E_A) / sqrt(V).
ReferenceStatistic logrank_test(const TrialData& data);

//! Logrank stratified by block: sum_j (O - E)_j / sqrt(sum_j V_j).
ReferenceStatistic stratified_logrank(const TrialData& data);

//! Gehan (Mantel form) stratified by block with permutation variance.
ReferenceStatistic stratified_gehan(const TrialData& data);

enum class ReferenceTest {
    TTest,
    StratifiedT,
    MantelHaenszel,
    Pooled2x2,
    Logrank,
    StratifiedLogrank,
    StratifiedGehan,
};

const char* to_string(ReferenceTest t) noexcept;
std::optional<ReferenceTest> parse_reference_test(std::string_view name);
bool compatible(ReferenceTest t, OutcomeKind kind) noexcept;
ReferenceStatistic run_reference_test(ReferenceTest t, const TrialData& data);

struct ReferenceReport {
    std::map<std::string, double> p_values;
    std::vector<std::string> notices;  //!< one per skipped test
};

//! Runs the requested tests (all seven when empty), skipping those whose
//! outcome kind does not match the data.
ReferenceReport reference_tests(const TrialData& data,
                                const std::vector<ReferenceTest>& tests = {});

}  // namespace mcrand
