// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/power.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mcrand/conditional.hpp"
#include "mcrand/error.hpp"
#include "mcrand/parallel.hpp"
#include "mcrand/sequential.hpp"

namespace mcrand {

TestSpec parse_test_spec(std::string_view name)
{
    TestSpec spec;
    spec.name = std::string(name);
    if (auto ref = parse_reference_test(name)) {
        spec.family = TestSpec::Family::Reference;
        spec.reference = *ref;
        return spec;
    }
    std::string_view rest = name;
    if (rest.starts_with("gst-")) {
        spec.family = TestSpec::Family::Sequential;
        rest.remove_prefix(4);
    }
    std::string_view mode = rest;
    const auto dash = rest.find('-');
    if (dash != std::string_view::npos) {
        mode = rest.substr(0, dash);
        try {
            spec.score = parse_score_kind(rest.substr(dash + 1));
        } catch (const Error&) {
            fail(ErrorKind::Config, "unknown test '" + spec.name + "'");
        }
    }
    if (mode == "conditional") {
        spec.mode = InferenceMode::Conditional;
    } else if (mode == "randomization" || mode == "unconditional") {
        spec.mode = InferenceMode::Unconditional;
    } else {
        fail(ErrorKind::Config, "unknown test '" + spec.name + "'");
    }
    return spec;
}

namespace {

using Clock = std::chrono::steady_clock;

// +1 when the alternative pushes S_A up, -1 when it pushes it down.
int expected_direction(const Scenario& s, ScoreKind score)
{
    switch (s.outcome) {
        case OutcomeKind::Continuous: return s.effect >= 0 ? 1 : -1;
        case OutcomeKind::Binary: return s.effect >= s.base_rate ? 1 : -1;
        case OutcomeKind::Survival: {
            // A longer mean survival on A means fewer deaths (logrank scores
            // fall) and more wins (Gehan scores rise).
            const int longer = s.effect >= 1.0 ? 1 : -1;
            return score == ScoreKind::Logrank ? -longer : longer;
        }
    }
    return 1;
}

struct Replication {
    std::vector<std::uint8_t> reject;  // test-major, alpha-minor
    std::vector<std::uint8_t> failed;
    std::vector<double> seconds;
};

}  // namespace

PowerResult estimate_power(const Scenario& scenario, const std::vector<std::string>& tests,
                           const PowerOptions& options)
{
    if (tests.empty()) fail(ErrorKind::Config, "no tests requested");
    if (options.alphas.empty()) fail(ErrorKind::Config, "no significance levels requested");
    const Scenario s = prepared(scenario);
    std::vector<TestSpec> specs;
    for (const auto& t : tests) specs.push_back(parse_test_spec(t));
    for (const auto& spec : specs) {
        if (spec.family == TestSpec::Family::Reference && !compatible(spec.reference, s.outcome)) {
            fail(ErrorKind::Config, "test '" + spec.name + "' is not defined for "
                                        + to_string(s.outcome) + " outcomes");
        }
    }

    const int num_blocks = s.n_total / s.block_size;
    std::vector<std::optional<GstPlan>> plans(specs.size());
    for (std::size_t t = 0; t < specs.size(); ++t) {
        if (specs[t].family != TestSpec::Family::Sequential) continue;
        auto plan = obrien_fleming_plan(options.gst_looks, num_blocks, options.gst_alpha, 1,
                                        options.gst_c_final);
        plan.direction = expected_direction(s, specs[t].score.value_or(default_score(s.outcome)));
        plans[t] = std::move(plan);
    }

    const std::size_t na = options.alphas.size();
    std::vector<Replication> reps(static_cast<std::size_t>(s.replications));
    parallel_for(reps.size(), options.workers, [&](std::size_t r) {
        auto rng = replication_stream(s, r);
        const auto data = generate_trial(s, rng);
        std::map<ScoreKind, ScoreVector> score_cache;
        const auto scores_for = [&](const TestSpec& spec) -> const ScoreVector& {
            const auto kind = spec.score.value_or(default_score(s.outcome));
            auto it = score_cache.find(kind);
            if (it == score_cache.end()) it = score_cache.emplace(kind, compute_scores(data, kind)).first;
            return it->second;
        };
        Replication& out = reps[r];
        out.reject.assign(specs.size() * na, 0);
        out.failed.assign(specs.size(), 0);
        out.seconds.assign(specs.size(), 0.0);
        for (std::size_t t = 0; t < specs.size(); ++t) {
            const auto& spec = specs[t];
            const auto start = Clock::now();
            try {
                if (spec.family == TestSpec::Family::Sequential) {
                    const auto run = run_sequential(data, scores_for(spec), *plans[t],
                                                    GstOptions{spec.mode, {}});
                    for (std::size_t a = 0; a < na; ++a) out.reject[t * na + a] = run.rejected();
                } else {
                    const double p = spec.family == TestSpec::Family::Reference
                                         ? run_reference_test(spec.reference, data).p_two_sided
                                         : randomization_test(data, scores_for(spec), spec.mode).p_two_sided;
                    for (std::size_t a = 0; a < na; ++a) {
                        out.reject[t * na + a] = p < options.alphas[a];
                    }
                }
            } catch (const Error&) {
                out.failed[t] = 1;
            }
            out.seconds[t] = std::chrono::duration<double>(Clock::now() - start).count();
        }
    });

    PowerResult result;
    result.scenario = s;
    for (std::size_t t = 0; t < specs.size(); ++t) {
        const bool sequential = specs[t].family == TestSpec::Family::Sequential;
        for (std::size_t a = 0; a < (sequential ? 1 : na); ++a) {
            TestPower tp;
            tp.test = specs[t].name;
            tp.alpha = sequential ? options.gst_alpha : options.alphas[a];
            tp.replications = s.replications;
            double secs = 0;
            for (const auto& rep : reps) {
                tp.rejections += rep.reject[t * na + a];
                tp.failures += rep.failed[t];
                secs += rep.seconds[t];
            }
            tp.proportion = static_cast<double>(tp.rejections) / tp.replications;
            tp.se = std::sqrt(tp.proportion * (1 - tp.proportion) / tp.replications);
            tp.mean_runtime_seconds = secs / tp.replications;
            result.tests.push_back(tp);
        }
    }
    return result;
}

namespace {

struct Column {
    int n;
    int k;
};

struct RowSpec {
    std::string test;
    std::string label;
};

struct TableLayout {
    std::vector<int> block_sizes;
    std::vector<Column> columns;
    std::vector<RowSpec> rows;
};

const std::vector<Column>& fixed_sample_columns()
{
    static const std::vector<Column> cols = {
        {120, 10}, {120, 20}, {120, 40},                        //
        {240, 20}, {240, 40}, {240, 60}, {240, 80},             //
        {360, 20}, {360, 40}, {360, 60}, {360, 80}, {360, 100},
    };
    return cols;
}

TableLayout layout(int table)
{
    switch (table) {
        case 1:
        case 2:
            return {{4, 8},
                    fixed_sample_columns(),
                    {{"conditional", "Conditional test"},
                     {"randomization", "Randomization test"},
                     {"stratified-t", "Stratified t"},
                     {"t-test", "t-test"}}};
        case 3:
            return {{4, 8},
                    fixed_sample_columns(),
                    {{"conditional", "Conditional test"},
                     {"mantel-haenszel", "Mantel-Haenszel"},
                     {"randomization", "Randomization test"},
                     {"pooled-2x2", "Single 2x2 table"}}};
        case 4:
            return {{4, 8},
                    fixed_sample_columns(),
                    {{"conditional-gehan", "CT (Gehan score)"},
                     {"stratified-gehan", "Stratified Gehan"},
                     {"conditional-logrank", "CT (Logrank score)"},
                     {"randomization-logrank", "RT (Logrank score)"},
                     {"stratified-logrank", "Stratified Logrank"},
                     {"logrank", "Logrank test"}}};
        case 5:
            return {{4, 8},
                    {{480, 10}, {480, 20}, {480, 40}, {480, 60}},
                    {{"gst-conditional", "Conditional"},
                     {"gst-unconditional", "Unconditional"}}};
        default: break;
    }
    fail(ErrorKind::Config, "unknown table " + std::to_string(table) + "; expected 1..5");
}

Scenario base_scenario(int table, OutcomeKind outcome)
{
    Scenario s;
    s.outcome = outcome;
    switch (outcome) {
        case OutcomeKind::Continuous:
            s.effect = table == 5 ? kSequentialContinuousEffect : 1.07;
            s.institution_sd = 2.0;
            s.block_effects = table == 2;
            break;
        case OutcomeKind::Binary:
            s.effect = 0.7;
            s.base_rate = 0.5;
            s.institution_sd = 1.73;
            break;
        case OutcomeKind::Survival:
            s.effect = 1.5;
            s.institution_df = table == 5 ? 4 : 1;
            s.scale_institution_effect = table == 5;
            s.censoring_target = table == 5 ? 0.185 : 0.19;
            break;
    }
    return s;
}

std::vector<OutcomeKind> table_outcomes(int table)
{
    switch (table) {
        case 1:
        case 2: return {OutcomeKind::Continuous};
        case 3: return {OutcomeKind::Binary};
        case 4: return {OutcomeKind::Survival};
        default: return {OutcomeKind::Continuous, OutcomeKind::Binary, OutcomeKind::Survival};
    }
}

std::string column_label(const Column& c)
{
    return "n" + std::to_string(c.n) + "_K" + std::to_string(c.k);
}

}  // namespace

int table_replications(double scale)
{
    if (!(scale > 0 && scale <= 1)) fail(ErrorKind::Config, "scale must lie in (0, 1]");
    return std::max(1, static_cast<int>(std::lround(5000.0 * scale)));
}

std::vector<Scenario> table_scenarios(int table, double scale, std::uint64_t seed)
{
    const auto lay = layout(table);
    const int reps = table_replications(scale);
    std::vector<Scenario> out;
    for (auto outcome : table_outcomes(table)) {
        for (int n_block : lay.block_sizes) {
            for (const auto& c : lay.columns) {
                Scenario s = base_scenario(table, outcome);
                s.n_total = c.n;
                s.num_institutions = c.k;
                s.block_size = n_block;
                s.replications = reps;
                s.seed = seed;
                s.id = stream_id(static_cast<std::uint64_t>(table),
                                 static_cast<std::uint64_t>(outcome),
                                 stream_id(static_cast<std::uint64_t>(n_block),
                                           static_cast<std::uint64_t>(c.n),
                                           static_cast<std::uint64_t>(c.k)));
                s.name = "table" + std::to_string(table) + "_" + to_string(outcome) + "_N"
                         + std::to_string(n_block) + "_" + column_label(c);
                out.push_back(s);
            }
        }
    }
    return out;
}

PowerTable reproduce_table(int table, double scale, std::uint64_t seed, int workers)
{
    const auto lay = layout(table);
    const auto scenarios = table_scenarios(table, scale, seed);
    PowerTable t;
    t.id = table;
    t.replications = table_replications(scale);
    for (const auto& c : lay.columns) t.columns.push_back(column_label(c));

    std::vector<std::string> tests;
    for (const auto& r : lay.rows) tests.push_back(r.test);
    PowerOptions opts;
    opts.workers = workers;

    std::size_t idx = 0;
    for (auto outcome : table_outcomes(table)) {
        const std::string prefix = table == 5 ? std::string(to_string(outcome)) + " " : "";
        for (int n_block : lay.block_sizes) {
            std::vector<PowerTable::Row> rows(lay.rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                rows[r].block_size = n_block;
                rows[r].test = prefix + lay.rows[r].label;
                if (table == 5 && outcome == OutcomeKind::Survival) {
                    rows[r].test = prefix + (r == 0 ? "Conditional (Logrank score)" : "Stratified Logrank");
                }
            }
            for (std::size_t c = 0; c < lay.columns.size(); ++c) {
                const auto res = estimate_power(scenarios[idx++], tests, opts);
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    rows[r].power.push_back(res.tests[r].proportion);
                    rows[r].se.push_back(res.tests[r].se);
                }
            }
            t.rows.insert(t.rows.end(), rows.begin(), rows.end());
        }
    }
    return t;
}

std::string table_csv(const PowerTable& t)
{
    std::ostringstream os;
    os << "block_size,test";
    for (const auto& c : t.columns) os << ',' << c;
    for (const auto& c : t.columns) os << ",se_" << c;
    os << '\n';
    char buf[32];
    for (const auto& r : t.rows) {
        os << r.block_size << ',' << r.test;
        for (double v : r.power) {
            std::snprintf(buf, sizeof buf, "%.4f", v);
            os << ',' << buf;
        }
        for (double v : r.se) {
            std::snprintf(buf, sizeof buf, "%.4f", v);
            os << ',' << buf;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace mcrand
