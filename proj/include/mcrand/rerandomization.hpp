// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcrand/random.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

//! Arm 1 is A, arm 2 is B.
struct MortalitySummary {
    int deaths_1 = 0;
    int deaths_2 = 0;
    int n_1 = 0;
    int n_2 = 0;
    double followup_1 = 0;
    double followup_2 = 0;
    double m_1 = 0;
    double m_2 = 0;
    double ratio = 0;  //!< m_1 / m_2
};

//! Throws Error(InvalidData) on non-survival outcomes, an arm without
//! follow-up, or no deaths in arm 2.
MortalitySummary mortality_ratio(const TrialData& data);

struct Observation {
    double time = 0;
    bool event = false;
};

//! Pooled observations ordered by time, deaths before censorings at ties.
std::vector<Observation> pooled_order(const TrialData& data);

/*!
 * One rerandomization: walking the ordered observations, a death goes to
 * arm 1 with probability r n_1 / (r n_1 + n_2) and a censoring with
 * probability n_1 / (n_1 + n_2), where n_i is the number still at risk in
 * arm i. Each observation adds its time to its arm's follow-up. Returns
 * nullopt when arm 2 ends with no deaths or arm 1 with no follow-up.
 */
std::optional<double> rerandomize_once(std::span<const Observation> ordered, int n1, int n2,
                                       double ratio, RandomStream& rng);

struct ConfidenceInterval {
    double level = 0.95;
    double lower = 0;
    double upper = 0;
    MortalitySummary observed;
    int requested = 0;
    int discarded = 0;
    std::vector<std::string> warnings;  //!< set when over 5% are discarded
    std::vector<double> realizations;  //!< sorted, discarded ones excluded
};

//! Percentile interval (type 7 quantiles) of `reps` rerandomized ratios.
//! Realization r uses RandomStream(seed, stream_id(stream, r)).
ConfidenceInterval confidence_interval(const TrialData& data, int reps, double level,
                                       std::uint64_t seed, int workers = 1,
                                       std::uint64_t stream = 0);

//! Percentile interval of an existing realization set.
std::pair<double, double> percentile_interval(std::span<const double> sorted, double level);

struct CoverageScenario {
    int n_per_arm = 100;
    double hazard_1 = 1.5;
    double hazard_2 = 1.0;
    double censoring_max = 2.5;  //!< uniform censoring on [0, censoring_max]
    int trials = 500;
    int reps = 1000;
    double level = 0.95;
    std::uint64_t seed = 0;
};

struct CoverageResult {
    double true_ratio = 0;
    int trials = 0;
    int covered = 0;
    int skipped = 0;  //!< trials with no arm-2 deaths
    double coverage = 0;
    double se = 0;
};

//! Simulates two-arm exponential trials and counts intervals containing
//! hazard_1 / hazard_2.
CoverageResult ci_coverage(const CoverageScenario& s, int workers = 1);

//! Trial k of a coverage study: one block holding both arms.
TrialData coverage_trial(const CoverageScenario& s, int trial);

}  // namespace mcrand
