// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrand/reference_tests.hpp"
#include "mcrand/scores.hpp"
#include "mcrand/simulation.hpp"
#include "mcrand/test_result.hpp"

namespace mcrand {

/*!
 * A test evaluated on each simulated trial. Names:
 *   conditional[-SCORE], randomization[-SCORE]       fixed-sample tests
 *   gst-conditional[-SCORE], gst-unconditional[-SCORE] four-look OBF runs
 *   t-test, stratified-t, mantel-haenszel, pooled-2x2,
 *   logrank, stratified-logrank, stratified-gehan     reference tests
 * SCORE defaults to the outcome's natural score.
 */
struct TestSpec {
    enum class Family { Randomization, Sequential, Reference };
    std::string name;
    Family family = Family::Randomization;
    InferenceMode mode = InferenceMode::Conditional;
    std::optional<ScoreKind> score;
    ReferenceTest reference = ReferenceTest::TTest;
};

//! Throws Error(Config) on an unknown name.
TestSpec parse_test_spec(std::string_view name);

struct PowerOptions {
    std::vector<double> alphas{0.05};
    int workers = 1;
    int gst_looks = 4;
    double gst_alpha = 0.025;  //!< one-sided
    std::optional<double> gst_c_final;
};

struct TestPower {
    std::string test;
    double alpha = 0.05;  //!< the plan's alpha for sequential tests
    int rejections = 0;
    int replications = 0;
    int failures = 0;  //!< replications where the test raised an error
    double proportion = 0;
    double se = 0;  //!< sqrt(p(1-p)/R)
    double mean_runtime_seconds = 0;  //!< not deterministic
};

struct PowerResult {
    Scenario scenario;  //!< with the calibrated censoring bound
    std::vector<TestPower> tests;  //!< test-major, then alpha
};

/*!
 * Runs scenario.replications independent trials. Replication r draws from
 * RandomStream(seed, stream_id(scenario.id, r)), so proportions do not
 * depend on the number of workers. Every test sees the same trials.
 */
PowerResult estimate_power(const Scenario& scenario, const std::vector<std::string>& tests,
                           const PowerOptions& options = {});

struct PowerTable {
    int id = 0;
    std::vector<std::string> columns;  //!< cell labels such as n120_K10
    struct Row {
        int block_size = 0;
        std::string test;  //!< display label
        std::vector<double> power;
        std::vector<double> se;
    };
    std::vector<Row> rows;
    int replications = 0;
};

//! Replications used at a given scale: max(1, round(5000 * scale)).
int table_replications(double scale);

//! Scenario grid of table 1..5, in column order per block size.
std::vector<Scenario> table_scenarios(int table, double scale, std::uint64_t seed);

PowerTable reproduce_table(int table, double scale, std::uint64_t seed, int workers = 1);

//! block_size,test,<cells>,se_<cells>; four decimals.
std::string table_csv(const PowerTable& t);

//! Effect size used for continuous outcomes in the group-sequential table.
inline constexpr double kSequentialContinuousEffect = 0.57;

}  // namespace mcrand
