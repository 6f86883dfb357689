// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
//
// mcrand command-line interface. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcrand/mcrand.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitConfig = 4;
constexpr int kExitInternal = 1;

struct Failure {
    int code;
    std::string message;
};

int exit_code(mcrand_status s)
{
    switch (s) {
        case MCRAND_OK: return kExitOk;
        case MCRAND_E_DATA:
        case MCRAND_E_IO: return kExitData;
        case MCRAND_E_NUMERIC:
        case MCRAND_E_CAPACITY: return kExitNumeric;
        case MCRAND_E_ARGUMENT:
        case MCRAND_E_CONFIG: return kExitConfig;
        case MCRAND_E_INTERNAL: return kExitInternal;
    }
    return kExitInternal;
}

void check(mcrand_status s)
{
    if (s != MCRAND_OK) throw Failure{exit_code(s), mcrand_last_error()};
}

struct StringDeleter {
    void operator()(char* p) const { mcrand_free_string(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct DatasetDeleter {
    void operator()(mcrand_dataset* p) const { mcrand_dataset_free(p); }
};
using Dataset = std::unique_ptr<mcrand_dataset, DatasetDeleter>;

struct PlanDeleter {
    void operator()(mcrand_gst_plan* p) const { mcrand_gst_plan_free(p); }
};
using Plan = std::unique_ptr<mcrand_gst_plan, PlanDeleter>;

const std::map<std::string, int> kOutcomes = {{"continuous", MCRAND_OUTCOME_CONTINUOUS},
                                              {"binary", MCRAND_OUTCOME_BINARY},
                                              {"survival", MCRAND_OUTCOME_SURVIVAL}};
const std::map<std::string, int> kScores = {{"identity", MCRAND_SCORE_IDENTITY},
                                            {"binary", MCRAND_SCORE_BINARY},
                                            {"logrank", MCRAND_SCORE_LOGRANK},
                                            {"gehan", MCRAND_SCORE_GEHAN}};
const std::map<std::string, int> kModes = {{"conditional", MCRAND_MODE_CONDITIONAL},
                                           {"unconditional", MCRAND_MODE_UNCONDITIONAL}};

int lookup(const std::map<std::string, int>& table, const std::string& key, int fallback)
{
    if (key.empty()) return fallback;
    return table.at(key);
}

std::string read_file(const std::string& path, int code)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{code, "cannot open '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Failure{kExitData, "cannot write '" + path + "'"};
}

void emit(const char* text, const std::string& output)
{
    std::fputs(text, stdout);
    if (!output.empty()) write_file(output, text);
}

std::vector<int> int_list(const std::string& text, char sep)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Failure{kExitConfig, "not an integer: '" + item + "'"};
        }
    }
    return out;
}

struct DataFlags {
    std::string path;
    std::string outcome;
    int block_size = 0;

    void add(CLI::App* app, bool required = true)
    {
        auto* opt = app->add_option("--data", path, "Trial CSV (patient_id,block,institution,arm,y|time,event)");
        if (required) opt->required();
        opt->check(CLI::ExistingFile);
        app->add_option("--outcome", outcome, "Outcome kind; needed to read a 0/1 y column as binary")
            ->check(CLI::IsMember({"continuous", "binary", "survival"}));
        app->add_option("--block-size", block_size, "Block size N; inferred from block 1 when omitted")
            ->check(CLI::PositiveNumber);
    }

    Dataset load(bool drop_partial = false) const
    {
        mcrand_dataset* d = nullptr;
        check(mcrand_dataset_read_csv(path.c_str(), lookup(kOutcomes, outcome, MCRAND_OUTCOME_AUTO),
                                      block_size, drop_partial ? 1 : 0, &d));
        return Dataset(d);
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Randomization inference for multi-center permuted-block trials"};
    app.set_version_flag("--version", std::string(mcrand_version()));
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Conditional or unconditional randomization test");
    DataFlags analyze_data;
    analyze_data.add(analyze);
    std::string analyze_score, analyze_mode = "conditional", analyze_out;
    int analyze_sided = 2;
    double analyze_alpha = 0.05;
    analyze->add_option("--score", analyze_score, "Score: identity, binary, logrank or gehan (default: natural for the outcome)")
        ->check(CLI::IsMember({"identity", "binary", "logrank", "gehan"}));
    analyze->add_option("--mode", analyze_mode, "conditional or unconditional")->capture_default_str()
        ->check(CLI::IsMember({"conditional", "unconditional"}));
    analyze->add_option("--sided", analyze_sided, "1 or 2")->capture_default_str()->check(CLI::IsMember({1, 2}));
    analyze->add_option("--alpha", analyze_alpha, "Significance level for the reject flag")->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--output", analyze_out, "Also write the JSON report here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo power and coverage studies");
    std::string sim_config, sim_prefix;
    std::uint64_t sim_seed = 0;
    int sim_workers = 1;
    simulate->add_option("--config", sim_config, "Flat key = value study config")->required();
    simulate->add_option("--seed", sim_seed, "Master seed (required)")->required();
    simulate->add_option("--workers", sim_workers, "Worker threads; results do not depend on it")->capture_default_str()
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim_prefix,
                         "Output prefix for <prefix>.csv, <prefix>.json and <prefix>.manifest.json "
                         "(default: config path without extension)");

    // monitor
    auto* monitor = app.add_subcommand("monitor", "Group-sequential look(s) on accumulating data");
    DataFlags monitor_data;
    monitor_data.add(monitor, false);
    std::string plan_path, look_blocks, monitor_score, monitor_mode = "conditional", state_path, monitor_out;
    int looks = 4, max_blocks = 0, plan_sided = 1, direction = 1;
    double plan_alpha = 0.025, c_final = 0;
    monitor->add_option("--plan", plan_path, "Plan file (looks, max_blocks, alpha, sided, direction, c_final, look_blocks)")
        ->check(CLI::ExistingFile);
    monitor->add_option("--looks", looks, "Number of looks L")->capture_default_str()->check(CLI::PositiveNumber);
    monitor->add_option("--max-blocks", max_blocks, "Planned number of blocks P_max");
    monitor->add_option("--plan-alpha", plan_alpha, "Overall significance level")->capture_default_str();
    monitor->add_option("--plan-sided", plan_sided, "1 or 2")->capture_default_str()->check(CLI::IsMember({1, 2}));
    monitor->add_option("--direction", direction, "One-sided direction: 1 rejects for large S_A, -1 for small")->capture_default_str()
        ->check(CLI::IsMember({1, -1}));
    monitor->add_option("--c-final", c_final, "Final boundary constant (default 2.024 for L=4, one-sided 0.025)");
    monitor->add_option("--look-blocks", look_blocks, "Cumulative blocks at each look, e.g. 5,10,15,20");
    monitor->add_option("--score", monitor_score, "Score (default: natural for the outcome)")
        ->check(CLI::IsMember({"identity", "binary", "logrank", "gehan"}));
    monitor->add_option("--mode", monitor_mode, "conditional or unconditional")->capture_default_str()
        ->check(CLI::IsMember({"conditional", "unconditional"}));
    monitor->add_option("--state", state_path,
                        "Report from earlier looks; checked against the data, then overwritten");
    monitor->add_option("--output", monitor_out, "Also write the JSON report here");
    monitor->footer("Without --data the plan and its boundaries are printed.");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact enumeration of the randomization distribution");
    DataFlags oracle_data;
    oracle_data.add(oracle, false);
    std::string layout, n_a, oracle_score, oracle_out;
    bool unconditional = false, distribution = false;
    std::uint64_t cap = 10000000;
    oracle->add_option("--layout", layout, "Per-block institution counts, blocks separated by '/', e.g. 2,2/2,2");
    oracle->add_option("--n-a", n_a, "Arm-A totals per institution for the conditional space size, e.g. 2,2");
    oracle->add_option("--score", oracle_score, "Score (default: natural for the outcome)")
        ->check(CLI::IsMember({"identity", "binary", "logrank", "gehan"}));
    oracle->add_flag("--unconditional", unconditional, "Enumerate the full space instead of the conditional one");
    oracle->add_flag("--distribution", distribution, "Include the full distribution of S_A");
    oracle->add_option("--cap", cap, "Maximum number of assignments to enumerate")->capture_default_str();
    oracle->add_option("--output", oracle_out, "Also write the JSON report here");

    // ci
    auto* ci = app.add_subcommand("ci", "Rerandomization confidence interval for the mortality ratio");
    DataFlags ci_data;
    ci_data.add(ci);
    std::uint64_t ci_seed = 0;
    int reps = 1000, ci_workers = 1;
    double level = 0.95;
    std::string ci_out;
    ci->add_option("--seed", ci_seed, "Seed (required)")->required();
    ci->add_option("--reps", reps, "Number of rerandomizations")->capture_default_str()->check(CLI::Range(100, 100000000));
    ci->add_option("--level", level, "Confidence level")->capture_default_str()->check(CLI::Range(0.5, 0.9999));
    ci->add_option("--workers", ci_workers, "Worker threads; results do not depend on it")->capture_default_str()
        ->check(CLI::PositiveNumber);
    ci->add_option("--output", ci_out, "Also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) {
            const auto d = analyze_data.load();
            char* out = nullptr;
            check(mcrand_analyze_json(d.get(), lookup(kScores, analyze_score, MCRAND_SCORE_DEFAULT),
                                      kModes.at(analyze_mode), analyze_sided, analyze_alpha, &out));
            CString s(out);
            emit(s.get(), analyze_out);
        } else if (simulate->parsed()) {
            const auto text = read_file(sim_config, kExitConfig);
            char *csv = nullptr, *json = nullptr, *manifest = nullptr;
            check(mcrand_simulate(text.data(), text.size(), sim_seed, sim_workers, &csv, &json, &manifest));
            CString c(csv), j(json), m(manifest);
            std::string prefix = sim_prefix;
            if (prefix.empty()) {
                const auto slash = sim_config.find_last_of('/');
                const auto dot = sim_config.find_last_of('.');
                prefix = dot != std::string::npos && (slash == std::string::npos || dot > slash)
                             ? sim_config.substr(0, dot)
                             : sim_config;
            }
            write_file(prefix + ".csv", c.get());
            write_file(prefix + ".json", j.get());
            write_file(prefix + ".manifest.json", m.get());
            std::fputs(c.get(), stdout);
        } else if (monitor->parsed()) {
            mcrand_gst_plan* p = nullptr;
            if (!plan_path.empty()) {
                check(mcrand_gst_plan_read(plan_path.c_str(), &p));
            } else {
                if (max_blocks <= 0) throw Failure{kExitConfig, "missing required key 'max_blocks' (--plan or --max-blocks)"};
                std::vector<int> lb;
                if (!look_blocks.empty()) {
                    lb = int_list(look_blocks, ',');
                    if (static_cast<int>(lb.size()) != looks) {
                        throw Failure{kExitConfig, "--look-blocks needs one entry per look"};
                    }
                }
                check(mcrand_gst_plan_create(looks, max_blocks, plan_alpha, plan_sided, direction, c_final,
                                             lb.empty() ? nullptr : lb.data(), &p));
            }
            const Plan plan(p);
            char* out = nullptr;
            if (monitor_data.path.empty()) {
                check(mcrand_gst_plan_json(plan.get(), &out));
            } else {
                const auto d = monitor_data.load(true);
                std::optional<std::string> previous;
                if (!state_path.empty()) {
                    std::ifstream probe(state_path);
                    if (probe) previous = read_file(state_path, kExitData);
                }
                check(mcrand_monitor_json(d.get(), plan.get(), lookup(kScores, monitor_score, MCRAND_SCORE_DEFAULT),
                                          kModes.at(monitor_mode), previous ? previous->c_str() : nullptr, &out));
            }
            CString s(out);
            emit(s.get(), monitor_out);
            if (!state_path.empty() && !monitor_data.path.empty()) write_file(state_path, s.get());
        } else if (oracle->parsed()) {
            char* out = nullptr;
            if (!layout.empty()) {
                if (!oracle_data.path.empty()) throw Failure{kExitConfig, "give either --data or --layout"};
                std::vector<std::vector<int>> blocks;
                std::stringstream ss(layout);
                std::string block;
                while (std::getline(ss, block, '/')) blocks.push_back(int_list(block, ','));
                const int k = blocks.empty() ? 0 : static_cast<int>(blocks.front().size());
                std::vector<int> counts;
                int n = 0;
                for (const auto& b : blocks) {
                    if (static_cast<int>(b.size()) != k) throw Failure{kExitData, "every block needs " + std::to_string(k) + " institution counts"};
                    int sum = 0;
                    for (int c : b) sum += c;
                    if (n == 0) n = sum;
                    counts.insert(counts.end(), b.begin(), b.end());
                }
                std::vector<int> na;
                if (!n_a.empty()) {
                    na = int_list(n_a, ',');
                    if (static_cast<int>(na.size()) != k) throw Failure{kExitData, "--n-a needs one entry per institution"};
                }
                check(mcrand_layout_oracle_json(n, static_cast<int>(blocks.size()), k, counts.data(),
                                                na.empty() ? nullptr : na.data(), &out));
            } else {
                if (oracle_data.path.empty()) throw Failure{kExitConfig, "give --data or --layout"};
                if (!n_a.empty()) throw Failure{kExitConfig, "--n-a applies to --layout; data supplies its own totals"};
                const auto d = oracle_data.load();
                check(mcrand_oracle_json(d.get(), lookup(kScores, oracle_score, MCRAND_SCORE_DEFAULT),
                                         unconditional ? 0 : 1, cap, distribution ? 1 : 0, &out));
            }
            CString s(out);
            emit(s.get(), oracle_out);
        } else if (ci->parsed()) {
            const auto d = ci_data.load();
            char* out = nullptr;
            check(mcrand_ci_json(d.get(), reps, level, ci_seed, ci_workers, &out));
            CString s(out);
            emit(s.get(), ci_out);
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "mcrand: error: %s\n", f.message.c_str());
        return f.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mcrand: error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitOk;
}
