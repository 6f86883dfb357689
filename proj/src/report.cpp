// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcrand/error.hpp"
#include "mcrand/moments.hpp"
#include "mcrand/power.hpp"

namespace mcrand {

const char* library_version() noexcept
{
    return MCRAND_VERSION_STRING;
}

void to_json(Json& j, const AnalysisReport& r)
{
    Json inst = Json::array();
    for (const auto& i : r.institutions) {
        inst.push_back({{"label", i.label}, {"patients", i.patients}, {"arm_a", i.arm_a}});
    }
    j = Json{{"version", r.version},
             {"mode", r.mode},
             {"outcome", r.outcome},
             {"score", r.score},
             {"sided", r.sided},
             {"alpha", r.alpha},
             {"statistic", r.statistic},
             {"mean", r.mean},
             {"variance", r.variance},
             {"z", r.z},
             {"p_one_sided", r.p_one_sided},
             {"p_two_sided", r.p_two_sided},
             {"p_value", r.p_value},
             {"reject", r.reject},
             {"effect_d", r.effect_d},
             {"degenerate", r.degenerate},
             {"unconditional_mean", r.unconditional_mean},
             {"unconditional_variance", r.unconditional_variance},
             {"rank_var_n", r.rank_var_n},
             {"design",
              {{"block_size", r.design.block_size},
               {"num_blocks", r.design.num_blocks},
               {"num_institutions", r.design.num_institutions}}},
             {"institutions", inst},
             {"seed", r.seed ? Json(*r.seed) : Json(nullptr)},
             {"config", r.config}};
}

void from_json(const Json& j, AnalysisReport& r)
{
    j.at("version").get_to(r.version);
    j.at("mode").get_to(r.mode);
    j.at("outcome").get_to(r.outcome);
    j.at("score").get_to(r.score);
    j.at("sided").get_to(r.sided);
    j.at("alpha").get_to(r.alpha);
    j.at("statistic").get_to(r.statistic);
    j.at("mean").get_to(r.mean);
    j.at("variance").get_to(r.variance);
    j.at("z").get_to(r.z);
    j.at("p_one_sided").get_to(r.p_one_sided);
    j.at("p_two_sided").get_to(r.p_two_sided);
    j.at("p_value").get_to(r.p_value);
    j.at("reject").get_to(r.reject);
    j.at("effect_d").get_to(r.effect_d);
    j.at("degenerate").get_to(r.degenerate);
    j.at("unconditional_mean").get_to(r.unconditional_mean);
    j.at("unconditional_variance").get_to(r.unconditional_variance);
    j.at("rank_var_n").get_to(r.rank_var_n);
    const auto& d = j.at("design");
    d.at("block_size").get_to(r.design.block_size);
    d.at("num_blocks").get_to(r.design.num_blocks);
    d.at("num_institutions").get_to(r.design.num_institutions);
    r.institutions.clear();
    for (const auto& i : j.at("institutions")) {
        r.institutions.push_back({i.at("label").get<std::string>(), i.at("patients").get<int>(),
                                  i.at("arm_a").get<int>()});
    }
    const auto& seed = j.at("seed");
    r.seed = seed.is_null() ? std::nullopt : std::optional<std::uint64_t>(seed.get<std::uint64_t>());
    j.at("config").get_to(r.config);
}

namespace {

std::vector<InstitutionCount> institution_counts(const TrialData& data, const CountTable& t)
{
    std::vector<InstitutionCount> out;
    for (int k = 0; k < t.num_institutions; ++k) {
        out.push_back({data.institution_label(k), t.institution_total[static_cast<std::size_t>(k)],
                       t.institution_a[static_cast<std::size_t>(k)]});
    }
    return out;
}

Json test_json(const TestResult& r)
{
    return {{"mode", to_string(r.mode)},
            {"statistic", r.statistic},
            {"mean", r.mean},
            {"variance", r.variance},
            {"z", r.z},
            {"p_one_sided", r.p_one_sided},
            {"p_two_sided", r.p_two_sided},
            {"effect_d", r.effect_d},
            {"degenerate", r.degenerate}};
}

}  // namespace

AnalysisReport analyze(const TrialData& data, const AnalyzeOptions& options)
{
    if (options.sided != 1 && options.sided != 2) fail(ErrorKind::InvalidArgument, "sided must be 1 or 2");
    if (!(options.alpha > 0 && options.alpha < 1)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    require_valid(data);
    const auto kind = outcome_kind(data);
    const auto score = options.score.value_or(default_score(kind));
    const auto scores = compute_scores(data, score);
    const auto counts = tabulate_counts(data);
    const auto res = randomization_test(data, scores, options.mode, options.conditioning);

    AnalysisReport r;
    r.version = library_version();
    r.mode = to_string(options.mode);
    r.outcome = to_string(kind);
    r.score = to_string(score);
    r.sided = options.sided;
    r.alpha = options.alpha;
    r.statistic = res.statistic;
    r.mean = res.mean;
    r.variance = res.variance;
    r.z = res.z;
    r.p_one_sided = res.p_one_sided;
    r.p_two_sided = res.p_two_sided;
    r.p_value = res.p_value(options.sided);
    r.reject = r.p_value < options.alpha;
    r.effect_d = res.effect_d;
    r.degenerate = res.degenerate;
    r.unconditional_mean = res.unconditional_mean;
    r.unconditional_variance = res.unconditional_variance;
    r.rank_var_n = res.rank_var_n;
    r.design = data.design;
    r.institutions = institution_counts(data, counts);
    char tol[32];
    std::snprintf(tol, sizeof tol, "%.17g",
                  options.conditioning.pinv_tolerance.value_or(std::sqrt(2.220446049250313e-16)));
    r.config = {{"mode", r.mode},
                {"score", r.score},
                {"sided", std::to_string(options.sided)},
                {"alpha", Json(options.alpha).dump()},
                {"pinv_tolerance", tol}};
    return r;
}

Json oracle_report(const TrialData& data, std::optional<ScoreKind> score, bool conditional,
                   const BigInt& cap, bool include_distribution)
{
    require_valid(data);
    const auto kind = score.value_or(default_score(outcome_kind(data)));
    const auto scores = compute_scores(data, kind);
    const auto counts = tabulate_counts(data);
    EnumerationOptions opts;
    opts.cap = cap;
    opts.keep_distribution = include_distribution;
    if (conditional) opts.condition_on = counts.institution_a;
    const auto ex = exact_distribution(data, scores, opts);
    const auto normal = randomization_test(data, scores,
                                           conditional ? InferenceMode::Conditional
                                                       : InferenceMode::Unconditional);
    Json j{{"version", library_version()},
           {"score", to_string(kind)},
           {"conditional", conditional},
           {"total_points", ex.total_points.str()},
           {"conditional_points", ex.conditional_points.str()},
           {"n_a", counts.institution_a},
           {"exact_mean", ex.exact_mean},
           {"exact_variance", ex.exact_var},
           {"observed", ex.observed.value_or(NAN)},
           {"exact_p_two_sided", ex.p_two_sided.value_or(NAN)},
           {"exact_p_upper", ex.p_upper.value_or(NAN)},
           {"normal", test_json(normal)}};
    if (include_distribution) {
        Json dist = Json::array();
        for (const auto& [s, p] : ex.distribution) dist.push_back({s, p});
        j["distribution"] = dist;
    }
    return j;
}

Json layout_oracle_report(const InstitutionLayout& layout, const std::optional<std::vector<int>>& n_a)
{
    Json j{{"version", library_version()},
           {"block_size", layout.block_size},
           {"num_blocks", layout.num_blocks},
           {"num_institutions", layout.num_institutions},
           {"sample_space_size", sample_space_size(layout).str()}};
    if (n_a) {
        j["n_a"] = *n_a;
        j["conditional_space_size"] = conditional_space_size(layout, *n_a).str();
    }
    return j;
}

Json plan_json(const GstPlan& plan)
{
    return {{"looks", plan.num_looks},     {"max_blocks", plan.max_blocks},
            {"look_blocks", plan.look_blocks}, {"boundaries", plan.boundaries},
            {"alpha", plan.alpha},         {"sided", plan.sided},
            {"direction", plan.direction}, {"c_final", plan.c_final}};
}

MonitorReport monitor_report(const TrialData& data, const GstPlan& plan, ScoreKind score,
                             InferenceMode mode, const std::optional<Json>& previous)
{
    const auto run = monitor_sequential(data, score, plan, GstOptions{mode, {}});
    const int available = data.design.block_size > 0
                              ? static_cast<int>(data.patients.size()) / data.design.block_size
                              : 0;
    MonitorReport out;
    if (run.rejected()) {
        out.status = "rejected";
    } else if (run.finished) {
        out.status = "accepted";
    } else if (run.looks.empty()) {
        out.status = "waiting";
    } else {
        out.status = "continue";
    }

    Json looks = Json::array();
    for (const auto& l : run.looks) {
        looks.push_back({{"look", l.look},
                         {"blocks", l.blocks},
                         {"information", l.information},
                         {"statistic", l.statistic},
                         {"boundary", l.boundary},
                         {"decision", to_string(l.decision)},
                         {"result", test_json(l.result)}});
    }

    if (previous) {
        if (previous->value("plan", Json()) != plan_json(plan)) {
            fail(ErrorKind::InvalidData, "state was produced under a different plan");
        }
        const auto& prev = previous->at("looks");
        if (prev.size() > run.looks.size()) {
            fail(ErrorKind::InvalidData, "state records " + std::to_string(prev.size())
                                             + " looks but the data supports "
                                             + std::to_string(run.looks.size()));
        }
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double s0 = prev[i].at("statistic").get<double>();
            const double s1 = run.looks[i].statistic;
            if (prev[i].at("blocks").get<int>() != run.looks[i].blocks
                || std::fabs(s0 - s1) > 1e-9 * (1 + std::fabs(s0))
                || prev[i].at("decision").get<std::string>() != to_string(run.looks[i].decision)) {
                fail(ErrorKind::InvalidData, "look " + std::to_string(i + 1)
                                                 + " no longer matches the recorded state");
            }
        }
    }

    Json next = nullptr;
    if (!run.finished) {
        const int l = static_cast<int>(run.looks.size()) + 1;
        next = {{"look", l}, {"blocks", plan.look_blocks[static_cast<std::size_t>(l - 1)]}};
    }
    out.json = Json{{"version", library_version()},
                    {"mode", to_string(mode)},
                    {"score", to_string(score)},
                    {"plan", plan_json(plan)},
                    {"blocks_available", available},
                    {"looks", looks},
                    {"status", out.status},
                    {"stopped_at", run.stopped_at ? Json(*run.stopped_at) : Json(nullptr)},
                    {"next_look", next}};
    return out;
}

Json ci_report(const ConfidenceInterval& ci, std::uint64_t seed)
{
    const auto& m = ci.observed;
    return {{"version", library_version()},
            {"seed", seed},
            {"level", ci.level},
            {"reps", ci.requested},
            {"observed",
             {{"deaths_a", m.deaths_1},
              {"deaths_b", m.deaths_2},
              {"followup_a", m.followup_1},
              {"followup_b", m.followup_2},
              {"rate_a", m.m_1},
              {"rate_b", m.m_2},
              {"ratio", m.ratio}}},
            {"lower", ci.lower},
            {"upper", ci.upper},
            {"discarded", ci.discarded},
            {"warnings", ci.warnings}};
}

namespace {

std::string fixed4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string hex(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json scenario_json(const Scenario& s)
{
    Json j{{"name", s.name},
           {"id", hex(s.id)},
           {"outcome", to_string(s.outcome)},
           {"n_total", s.n_total},
           {"num_institutions", s.num_institutions},
           {"block_size", s.block_size},
           {"effect", s.effect},
           {"replications", s.replications}};
    switch (s.outcome) {
        case OutcomeKind::Continuous:
            j["institution_sd"] = s.institution_sd;
            j["block_effects"] = s.block_effects;
            break;
        case OutcomeKind::Binary:
            j["base_rate"] = s.base_rate;
            j["institution_sd"] = s.institution_sd;
            break;
        case OutcomeKind::Survival:
            j["institution_df"] = s.institution_df;
            j["scale_institution_effect"] = s.scale_institution_effect;
            j["censoring_target"] = s.censoring_target;
            j["censoring_tau"] = s.censoring_tau ? Json(*s.censoring_tau) : Json(nullptr);
            break;
    }
    return j;
}

constexpr const char* kStreamRule =
    "replication r of a scenario draws from Philox4x32-10 keyed by the seed with stream "
    "stream_id(scenario id, r)";

}  // namespace

SimulationOutput run_simulation(const SimulationRequest& req, std::uint64_t seed, int workers)
{
    SimulationOutput out;
    Json manifest{{"version", library_version()}, {"seed", seed}, {"config", req.echo}};
    std::ostringstream csv;
    switch (req.study) {
        case SimulationRequest::Study::Table: {
            const auto table = reproduce_table(req.table, req.scale, seed, workers);
            out.csv = table_csv(table);
            Json rows = Json::array();
            for (const auto& r : table.rows) {
                rows.push_back({{"block_size", r.block_size}, {"test", r.test}, {"power", r.power}, {"se", r.se}});
            }
            out.json = Json{{"version", library_version()},
                            {"study", "table"},
                            {"table", req.table},
                            {"replications", table.replications},
                            {"seed", seed},
                            {"columns", table.columns},
                            {"rows", rows}}
                           .dump(2);
            Json scen = Json::array();
            for (const auto& s : table_scenarios(req.table, req.scale, seed)) scen.push_back(scenario_json(prepared(s)));
            manifest["scenarios"] = scen;
            manifest["stream_rule"] = kStreamRule;
            break;
        }
        case SimulationRequest::Study::Scenario: {
            PowerOptions opts = req.power;
            opts.workers = workers;
            const auto res = estimate_power(req.scenario, req.tests, opts);
            csv << "test,alpha,replications,rejections,failures,power,se\n";
            Json tests = Json::array();
            for (const auto& t : res.tests) {
                csv << t.test << ',' << Json(t.alpha).dump() << ',' << t.replications << ','
                    << t.rejections << ',' << t.failures << ',' << fixed4(t.proportion) << ','
                    << fixed4(t.se) << '\n';
                tests.push_back({{"test", t.test},
                                 {"alpha", t.alpha},
                                 {"replications", t.replications},
                                 {"rejections", t.rejections},
                                 {"failures", t.failures},
                                 {"power", t.proportion},
                                 {"se", t.se}});
            }
            out.csv = csv.str();
            out.json = Json{{"version", library_version()},
                            {"study", "scenario"},
                            {"seed", seed},
                            {"scenario", scenario_json(res.scenario)},
                            {"results", tests}}
                           .dump(2);
            manifest["scenarios"] = Json::array({scenario_json(res.scenario)});
            manifest["stream_rule"] = kStreamRule;
            break;
        }
        case SimulationRequest::Study::CiCoverage: {
            const auto res = ci_coverage(req.coverage, workers);
            csv << "true_ratio,trials,covered,skipped,coverage,se\n"
                << Json(res.true_ratio).dump() << ',' << res.trials << ',' << res.covered << ','
                << res.skipped << ',' << fixed4(res.coverage) << ',' << fixed4(res.se) << '\n';
            out.csv = csv.str();
            const auto& c = req.coverage;
            out.json = Json{{"version", library_version()},
                            {"study", "ci-coverage"},
                            {"seed", seed},
                            {"scenario",
                             {{"n_per_arm", c.n_per_arm},
                              {"hazard_1", c.hazard_1},
                              {"hazard_2", c.hazard_2},
                              {"censoring_max", c.censoring_max},
                              {"trials", c.trials},
                              {"reps", c.reps},
                              {"level", c.level}}},
                            {"true_ratio", res.true_ratio},
                            {"covered", res.covered},
                            {"skipped", res.skipped},
                            {"coverage", res.coverage},
                            {"se", res.se}}
                           .dump(2);
            manifest["stream_rule"] =
                "trial k draws data from stream stream_id(0x636f76, k) and its rerandomizations "
                "from stream_id(stream_id(0x6369, k), r)";
            break;
        }
    }
    out.json += '\n';
    out.manifest = manifest.dump(2) + '\n';
    return out;
}

}  // namespace mcrand
