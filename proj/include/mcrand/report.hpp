// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcrand/conditional.hpp"
#include "mcrand/config.hpp"
#include "mcrand/exact.hpp"
#include "mcrand/rerandomization.hpp"
#include "mcrand/sequential.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

using Json = nlohmann::ordered_json;

const char* library_version() noexcept;

struct InstitutionCount {
    std::string label;
    int patients = 0;
    int arm_a = 0;

    bool operator==(const InstitutionCount&) const = default;
};

//! Result of `analyze`. Serialized layout (keys in this order): version,
//! mode, outcome, score, sided, alpha, statistic, mean, variance, z,
//! p_one_sided, p_two_sided, p_value, reject, effect_d, degenerate,
//! unconditional_mean, unconditional_variance, rank_var_n, design,
//! institutions, seed, config.
struct AnalysisReport {
    std::string version;
    std::string mode;
    std::string outcome;
    std::string score;
    int sided = 2;
    double alpha = 0.05;
    double statistic = 0;
    double mean = 0;
    double variance = 0;
    double z = 0;
    double p_one_sided = 1;
    double p_two_sided = 1;
    double p_value = 1;
    bool reject = false;
    double effect_d = 0;
    bool degenerate = false;
    double unconditional_mean = 0;
    double unconditional_variance = 0;
    int rank_var_n = 0;
    TrialDesign design;
    std::vector<InstitutionCount> institutions;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> config;

    bool operator==(const AnalysisReport&) const = default;
};

void to_json(Json& j, const AnalysisReport& r);
void from_json(const Json& j, AnalysisReport& r);

struct AnalyzeOptions {
    std::optional<ScoreKind> score;  //!< natural score when absent
    InferenceMode mode = InferenceMode::Conditional;
    int sided = 2;
    double alpha = 0.05;
    ConditioningOptions conditioning;
};

AnalysisReport analyze(const TrialData& data, const AnalyzeOptions& options = {});

//! Exact enumeration of a dataset, with the normal approximation alongside.
Json oracle_report(const TrialData& data, std::optional<ScoreKind> score, bool conditional,
                   const BigInt& cap, bool include_distribution);

//! Sample-space sizes for a bare layout.
Json layout_oracle_report(const InstitutionLayout& layout, const std::optional<std::vector<int>>& n_a);

Json plan_json(const GstPlan& plan);

struct MonitorReport {
    Json json;
    std::string status;  //!< rejected, accepted, continue or waiting
};

/*!
 * Monitors a (possibly partial) trial. When `previous` holds an earlier
 * report, its looks must agree with the recomputed ones, otherwise
 * Error(InvalidData) is raised.
 */
MonitorReport monitor_report(const TrialData& data, const GstPlan& plan, ScoreKind score,
                             InferenceMode mode, const std::optional<Json>& previous);

Json ci_report(const ConfidenceInterval& ci, std::uint64_t seed);

struct SimulationOutput {
    std::string csv;
    std::string json;
    std::string manifest;
};

//! Runs a simulate request. Output is byte-identical for a given request
//! and seed whatever the worker count.
SimulationOutput run_simulation(const SimulationRequest& request, std::uint64_t seed, int workers);

}  // namespace mcrand
