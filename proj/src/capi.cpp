// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/mcrand.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "mcrand/config.hpp"
#include "mcrand/csv.hpp"
#include "mcrand/error.hpp"
#include "mcrand/report.hpp"

struct mcrand_dataset {
    mcrand::TrialData data;
};

struct mcrand_gst_plan {
    mcrand::GstPlan plan;
};

namespace {

thread_local std::string last_error;

mcrand_status status_of(mcrand::ErrorKind kind)
{
    using mcrand::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidArgument: return MCRAND_E_ARGUMENT;
        case ErrorKind::InvalidDesign:
        case ErrorKind::InvalidData: return MCRAND_E_DATA;
        case ErrorKind::Numeric: return MCRAND_E_NUMERIC;
        case ErrorKind::Config: return MCRAND_E_CONFIG;
        case ErrorKind::Capacity: return MCRAND_E_CAPACITY;
        case ErrorKind::Io: return MCRAND_E_IO;
    }
    return MCRAND_E_INTERNAL;
}

template <class F>
mcrand_status guarded(F&& f)
{
    try {
        f();
        last_error.clear();
        return MCRAND_OK;
    } catch (const mcrand::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("malformed JSON state: ") + e.what();
        return MCRAND_E_DATA;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MCRAND_E_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return MCRAND_E_INTERNAL;
    }
}

void require(bool ok, const char* what)
{
    if (!ok) mcrand::fail(mcrand::ErrorKind::InvalidArgument, what);
}

char* dup(const std::string& s)
{
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::optional<mcrand::OutcomeKind> outcome_of(int v)
{
    switch (v) {
        case MCRAND_OUTCOME_AUTO: return std::nullopt;
        case MCRAND_OUTCOME_CONTINUOUS: return mcrand::OutcomeKind::Continuous;
        case MCRAND_OUTCOME_BINARY: return mcrand::OutcomeKind::Binary;
        case MCRAND_OUTCOME_SURVIVAL: return mcrand::OutcomeKind::Survival;
    }
    mcrand::fail(mcrand::ErrorKind::InvalidArgument, "unknown outcome " + std::to_string(v));
}

std::optional<mcrand::ScoreKind> score_of(int v)
{
    if (v == MCRAND_SCORE_DEFAULT) return std::nullopt;
    require(v >= MCRAND_SCORE_IDENTITY && v <= MCRAND_SCORE_GEHAN, "unknown score");
    return static_cast<mcrand::ScoreKind>(v);
}

mcrand::ScoreKind resolved_score(int v, const mcrand::TrialData& data)
{
    return score_of(v).value_or(mcrand::default_score(mcrand::outcome_kind(data)));
}

mcrand::InferenceMode mode_of(int v)
{
    require(v == MCRAND_MODE_CONDITIONAL || v == MCRAND_MODE_UNCONDITIONAL, "unknown mode");
    return v == MCRAND_MODE_CONDITIONAL ? mcrand::InferenceMode::Conditional
                                        : mcrand::InferenceMode::Unconditional;
}

mcrand::CsvOptions csv_options(int outcome, int block_size, int drop_partial)
{
    require(block_size >= 0, "block_size must be non-negative");
    mcrand::CsvOptions o;
    o.outcome = outcome_of(outcome);
    if (block_size > 0) o.block_size = block_size;
    o.drop_partial_final_block = drop_partial != 0;
    return o;
}

}  // namespace

extern "C" {

const char* mcrand_version(void)
{
    return mcrand::library_version();
}

const char* mcrand_last_error(void)
{
    return last_error.c_str();
}

const char* mcrand_status_name(mcrand_status status)
{
    switch (status) {
        case MCRAND_OK: return "ok";
        case MCRAND_E_ARGUMENT: return "invalid argument";
        case MCRAND_E_DATA: return "data error";
        case MCRAND_E_NUMERIC: return "numeric error";
        case MCRAND_E_CONFIG: return "config error";
        case MCRAND_E_CAPACITY: return "capacity exceeded";
        case MCRAND_E_IO: return "i/o error";
        case MCRAND_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void mcrand_free_string(char* s)
{
    std::free(s);
}

mcrand_status mcrand_dataset_read_csv(const char* path, int outcome, int block_size,
                                      int drop_partial, mcrand_dataset** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        auto d = mcrand::read_trial_csv(path, csv_options(outcome, block_size, drop_partial));
        *out = new mcrand_dataset{std::move(d)};
    });
}

mcrand_status mcrand_dataset_parse_csv(const char* text, size_t length, int outcome, int block_size,
                                       int drop_partial, mcrand_dataset** out)
{
    return guarded([&] {
        require((text || length == 0) && out, "null argument");
        auto d = mcrand::parse_trial_csv(std::string_view(text ? text : "", length),
                                         csv_options(outcome, block_size, drop_partial));
        *out = new mcrand_dataset{std::move(d)};
    });
}

mcrand_status mcrand_dataset_create(int outcome, int block_size, int num_institutions,
                                    const mcrand_patient* patients, size_t count,
                                    mcrand_dataset** out)
{
    return guarded([&] {
        require(out && (patients || count == 0), "null argument");
        require(block_size > 0 && count % static_cast<size_t>(block_size) == 0,
                "patient count must be a multiple of block_size");
        const auto kind = outcome_of(outcome);
        require(kind.has_value(), "outcome must be given");
        mcrand::TrialData d;
        d.design = {block_size, static_cast<int>(count / static_cast<size_t>(block_size)), num_institutions};
        d.design.check();
        for (size_t i = 0; i < count; ++i) {
            const auto& p = patients[i];
            require(p.arm >= MCRAND_ARM_A && p.arm <= MCRAND_ARM_UNASSIGNED, "unknown arm");
            mcrand::PatientRecord r;
            r.block = static_cast<int>(i / static_cast<size_t>(block_size));
            r.position = static_cast<int>(i % static_cast<size_t>(block_size));
            r.institution = p.institution;
            r.arm = static_cast<mcrand::Arm>(p.arm);
            switch (*kind) {
                case mcrand::OutcomeKind::Continuous: r.outcome = mcrand::Outcome::continuous(p.value); break;
                case mcrand::OutcomeKind::Binary: r.outcome = mcrand::Outcome::binary(static_cast<int>(p.value)); break;
                case mcrand::OutcomeKind::Survival: r.outcome = mcrand::Outcome::survival(p.value, p.event != 0); break;
            }
            d.patients.push_back(r);
        }
        *out = new mcrand_dataset{std::move(d)};
    });
}

mcrand_status mcrand_dataset_randomize(int block_size, int num_institutions, const int* institutions,
                                       size_t count, uint64_t seed, uint64_t stream,
                                       mcrand_dataset** out)
{
    return guarded([&] {
        require(out && institutions, "null argument");
        require(block_size > 0 && count % static_cast<size_t>(block_size) == 0,
                "arrival count must be a multiple of block_size");
        const mcrand::TrialDesign design{block_size, static_cast<int>(count / static_cast<size_t>(block_size)),
                                         num_institutions};
        mcrand::RandomStream rng(seed, stream);
        auto d = mcrand::randomize_trial(design, std::span<const int>(institutions, count), rng);
        *out = new mcrand_dataset{std::move(d)};
    });
}

void mcrand_dataset_free(mcrand_dataset* data)
{
    delete data;
}

mcrand_status mcrand_dataset_info_get(const mcrand_dataset* data, mcrand_dataset_info* out)
{
    return guarded([&] {
        require(data && out, "null argument");
        const auto& d = data->data;
        out->block_size = d.design.block_size;
        out->num_blocks = d.design.num_blocks;
        out->num_institutions = d.design.num_institutions;
        out->num_patients = static_cast<int>(d.patients.size());
        out->outcome = d.patients.empty() ? MCRAND_OUTCOME_AUTO
                                          : static_cast<int>(mcrand::outcome_kind(d));
    });
}

mcrand_status mcrand_dataset_patient(const mcrand_dataset* data, size_t index, mcrand_patient* out)
{
    return guarded([&] {
        require(data && out, "null argument");
        require(index < data->data.patients.size(), "patient index out of range");
        const auto& p = data->data.patients[index];
        *out = {p.institution, static_cast<int>(p.arm), p.outcome.value, p.outcome.event ? 1 : 0};
    });
}

mcrand_status mcrand_dataset_validate(const mcrand_dataset* data)
{
    return guarded([&] {
        require(data, "null argument");
        mcrand::require_valid(data->data);
    });
}

mcrand_status mcrand_dataset_to_csv(const mcrand_dataset* data, char** out)
{
    return guarded([&] {
        require(data && out, "null argument");
        *out = dup(mcrand::format_trial_csv(data->data));
    });
}

mcrand_status mcrand_test(const mcrand_dataset* data, int score, int mode, mcrand_test_result* out)
{
    return guarded([&] {
        require(data && out, "null argument");
        const auto& d = data->data;
        mcrand::require_valid(d);
        const auto scores = mcrand::compute_scores(d, resolved_score(score, d));
        const auto r = mcrand::randomization_test(d, scores, mode_of(mode));
        *out = {mode, r.statistic, r.mean, r.variance, r.z, r.p_one_sided, r.p_two_sided,
                r.effect_d, r.degenerate ? 1 : 0, r.unconditional_mean, r.unconditional_variance,
                r.rank_var_n};
    });
}

mcrand_status mcrand_analyze_json(const mcrand_dataset* data, int score, int mode, int sided,
                                  double alpha, char** out)
{
    return guarded([&] {
        require(data && out, "null argument");
        mcrand::AnalyzeOptions o;
        o.score = score_of(score);
        o.mode = mode_of(mode);
        o.sided = sided;
        o.alpha = alpha;
        const mcrand::Json j = mcrand::analyze(data->data, o);
        *out = dup(j.dump(2) + "\n");
    });
}

mcrand_status mcrand_oracle_json(const mcrand_dataset* data, int score, int conditional,
                                 uint64_t cap, int include_distribution, char** out)
{
    return guarded([&] {
        require(data && out, "null argument");
        require(cap > 0, "cap must be positive");
        const auto j = mcrand::oracle_report(data->data, score_of(score), conditional != 0,
                                             mcrand::BigInt(cap), include_distribution != 0);
        *out = dup(j.dump(2) + "\n");
    });
}

mcrand_status mcrand_layout_oracle_json(int block_size, int num_blocks, int num_institutions,
                                        const int* counts, const int* n_a, char** out)
{
    return guarded([&] {
        require(counts && out, "null argument");
        const mcrand::TrialDesign design{block_size, num_blocks, num_institutions};
        design.check();
        mcrand::InstitutionLayout layout{block_size, num_blocks, num_institutions,
                                         std::vector<int>(counts, counts + num_blocks * num_institutions)};
        for (int j = 0; j < num_blocks; ++j) {
            int sum = 0;
            for (int k = 0; k < num_institutions; ++k) {
                if (layout.at(j, k) < 0) mcrand::fail(mcrand::ErrorKind::InvalidData, "negative count in layout");
                sum += layout.at(j, k);
            }
            if (sum != block_size) {
                mcrand::fail(mcrand::ErrorKind::InvalidData,
                             "block " + std::to_string(j + 1) + " of the layout holds "
                                 + std::to_string(sum) + " patients; expected "
                                 + std::to_string(block_size));
            }
        }
        std::optional<std::vector<int>> na;
        if (n_a) na.emplace(n_a, n_a + num_institutions);
        *out = dup(mcrand::layout_oracle_report(layout, na).dump(2) + "\n");
    });
}

mcrand_status mcrand_obf_boundary(int look, int num_looks, double c_final, double* out)
{
    return guarded([&] {
        require(out, "null argument");
        *out = mcrand::obf_boundary(look, num_looks, c_final > 0 ? c_final : mcrand::kObfFinal4);
    });
}

mcrand_status mcrand_gst_plan_create(int num_looks, int max_blocks, double alpha, int sided,
                                     int direction, double c_final, const int* look_blocks,
                                     mcrand_gst_plan** out)
{
    return guarded([&] {
        require(out, "null argument");
        require(num_looks >= 1, "num_looks must be positive");
        std::vector<int> looks;
        if (look_blocks) looks.assign(look_blocks, look_blocks + num_looks);
        auto plan = mcrand::obrien_fleming_plan(num_looks, max_blocks, alpha, sided,
                                                c_final > 0 ? std::optional<double>(c_final) : std::nullopt,
                                                looks);
        if (direction != 1 && direction != -1) mcrand::fail(mcrand::ErrorKind::Config, "direction must be 1 or -1");
        plan.direction = direction;
        *out = new mcrand_gst_plan{std::move(plan)};
    });
}

mcrand_status mcrand_gst_plan_read(const char* path, mcrand_gst_plan** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        const auto cfg = mcrand::FlatConfig::read(path, mcrand::plan_keys());
        *out = new mcrand_gst_plan{mcrand::plan_from_config(cfg)};
    });
}

void mcrand_gst_plan_free(mcrand_gst_plan* plan)
{
    delete plan;
}

mcrand_status mcrand_gst_plan_boundary(const mcrand_gst_plan* plan, int look, double* out)
{
    return guarded([&] {
        require(plan && out, "null argument");
        require(look >= 1 && look <= plan->plan.num_looks, "look out of range");
        *out = plan->plan.boundaries[static_cast<size_t>(look - 1)];
    });
}

mcrand_status mcrand_gst_plan_json(const mcrand_gst_plan* plan, char** out)
{
    return guarded([&] {
        require(plan && out, "null argument");
        *out = dup(mcrand::plan_json(plan->plan).dump(2) + "\n");
    });
}

mcrand_status mcrand_monitor_json(const mcrand_dataset* data, const mcrand_gst_plan* plan, int score,
                                  int mode, const char* previous_json, char** out)
{
    return guarded([&] {
        require(data && plan && out, "null argument");
        std::optional<mcrand::Json> prev;
        if (previous_json) prev = mcrand::Json::parse(previous_json);
        const auto r = mcrand::monitor_report(data->data, plan->plan, resolved_score(score, data->data),
                                              mode_of(mode), prev);
        *out = dup(r.json.dump(2) + "\n");
    });
}

mcrand_status mcrand_ci_json(const mcrand_dataset* data, int reps, double level, uint64_t seed,
                             int workers, char** out)
{
    return guarded([&] {
        require(data && out, "null argument");
        const auto ci = mcrand::confidence_interval(data->data, reps, level, seed, workers);
        *out = dup(mcrand::ci_report(ci, seed).dump(2) + "\n");
    });
}

mcrand_status mcrand_simulate(const char* config_text, size_t length, uint64_t seed, int workers,
                              char** csv, char** json, char** manifest)
{
    return guarded([&] {
        require((config_text || length == 0) && csv && json && manifest, "null argument");
        const auto cfg = mcrand::FlatConfig::parse(std::string_view(config_text ? config_text : "", length),
                                                   mcrand::simulation_keys());
        const auto req = mcrand::simulation_request(cfg, seed);
        const auto res = mcrand::run_simulation(req, seed, workers);
        char* c = dup(res.csv);
        char* j = nullptr;
        try {
            j = dup(res.json);
            *manifest = dup(res.manifest);
        } catch (...) {
            std::free(c);
            std::free(j);
            throw;
        }
        *csv = c;
        *json = j;
    });
}

}  // extern "C"
