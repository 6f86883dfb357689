// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/sequential.hpp"

#include <cmath>
#include <string>

#include "mcrand/error.hpp"

namespace mcrand {

double obf_boundary(int look, int num_looks, double c_final)
{
    if (num_looks < 1 || look < 1 || look > num_looks) {
        fail(ErrorKind::InvalidArgument, "look " + std::to_string(look) + " outside 1.."
                                             + std::to_string(num_looks));
    }
    if (!(c_final > 0)) {
        fail(ErrorKind::InvalidArgument, "final boundary must be positive");
    }
    return c_final * std::sqrt(static_cast<double>(num_looks) / look);
}

const char* to_string(LookDecision d) noexcept
{
    switch (d) {
        case LookDecision::Reject: return "reject";
        case LookDecision::Continue: return "continue";
        case LookDecision::AcceptAtFinal: return "accept-at-final";
    }
    return "unknown";
}

LookDecision parse_look_decision(std::string_view name)
{
    if (name == "reject") return LookDecision::Reject;
    if (name == "continue") return LookDecision::Continue;
    if (name == "accept-at-final") return LookDecision::AcceptAtFinal;
    fail(ErrorKind::InvalidArgument, "unknown look decision '" + std::string(name) + "'");
}

void GstPlan::check() const
{
    if (num_looks < 1) fail(ErrorKind::Config, "number of looks must be positive");
    if (max_blocks < num_looks) {
        fail(ErrorKind::Config, "max_blocks (" + std::to_string(max_blocks)
                                    + ") must be at least the number of looks");
    }
    if (look_blocks.size() != static_cast<std::size_t>(num_looks)
        || boundaries.size() != static_cast<std::size_t>(num_looks)) {
        fail(ErrorKind::Config, "look schedule and boundaries need one entry per look");
    }
    for (int l = 0; l < num_looks; ++l) {
        const auto i = static_cast<std::size_t>(l);
        if (look_blocks[i] < 1 || (l > 0 && look_blocks[i] <= look_blocks[i - 1])) {
            fail(ErrorKind::Config, "look blocks must be positive and strictly increasing");
        }
        if (!(boundaries[i] > 0) || (l > 0 && boundaries[i] > boundaries[i - 1])) {
            fail(ErrorKind::Config, "boundaries must be positive and non-increasing");
        }
    }
    if (look_blocks.back() != max_blocks) {
        fail(ErrorKind::Config, "the final look must use all " + std::to_string(max_blocks)
                                    + " blocks");
    }
    if (sided != 1 && sided != 2) fail(ErrorKind::Config, "sided must be 1 or 2");
    if (direction != 1 && direction != -1) fail(ErrorKind::Config, "direction must be +1 or -1");
    if (!(alpha > 0 && alpha < 1)) fail(ErrorKind::Config, "alpha must lie in (0, 1)");
}

double GstPlan::information(int look) const
{
    return static_cast<double>(look_blocks.at(static_cast<std::size_t>(look - 1))) / max_blocks;
}

GstPlan obrien_fleming_plan(int num_looks, int max_blocks, double alpha, int sided,
                            std::optional<double> c_final, std::vector<int> look_blocks)
{
    GstPlan plan;
    plan.num_looks = num_looks;
    plan.max_blocks = max_blocks;
    plan.alpha = alpha;
    plan.sided = sided;
    if (c_final) {
        plan.c_final = *c_final;
    } else {
        const double per_side = sided == 2 ? alpha / 2 : alpha;
        if (num_looks != 4 || std::fabs(per_side - 0.025) > 1e-12) {
            fail(ErrorKind::Config, "c_final is required unless L = 4 at one-sided alpha 0.025");
        }
        plan.c_final = kObfFinal4;
    }
    if (look_blocks.empty()) {
        for (int l = 1; l <= num_looks; ++l) {
            look_blocks.push_back(static_cast<int>(static_cast<long>(l) * max_blocks / num_looks));
        }
    }
    plan.look_blocks = std::move(look_blocks);
    if (num_looks < 1) fail(ErrorKind::Config, "number of looks must be positive");
    for (int l = 1; l <= num_looks; ++l) {
        plan.boundaries.push_back(obf_boundary(l, num_looks, plan.c_final));
    }
    plan.check();
    return plan;
}

namespace {

ScoreVector prefix_scores(const ScoreVector& scores, int blocks)
{
    ScoreVector out;
    out.kind = scores.kind;
    out.block_size = scores.block_size;
    const auto n = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(scores.block_size);
    out.values.assign(scores.values.begin(), scores.values.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

int complete_blocks(const TrialData& data)
{
    return data.design.block_size > 0
               ? static_cast<int>(data.patients.size()) / data.design.block_size
               : 0;
}

}  // namespace

GstLook interim_test(const TrialData& cumulative, const ScoreVector& scores, const GstPlan& plan,
                     int look, const GstOptions& options)
{
    plan.check();
    if (look < 1 || look > plan.num_looks) {
        fail(ErrorKind::InvalidArgument, "look " + std::to_string(look) + " outside 1.."
                                             + std::to_string(plan.num_looks));
    }
    const int p_l = plan.look_blocks[static_cast<std::size_t>(look - 1)];
    if (cumulative.design.num_blocks != p_l) {
        fail(ErrorKind::InvalidData, "look " + std::to_string(look) + " needs "
                                         + std::to_string(p_l) + " blocks; data has "
                                         + std::to_string(cumulative.design.num_blocks));
    }
    GstLook out;
    out.look = look;
    out.blocks = p_l;
    out.information = plan.information(look);
    out.boundary = plan.boundaries[static_cast<std::size_t>(look - 1)];
    out.result = randomization_test(cumulative, scores, options.mode, options.conditioning);
    out.statistic = out.result.z;
    const bool cross = plan.sided == 2 ? std::fabs(out.statistic) > out.boundary
                                       : plan.direction * out.statistic > out.boundary;
    if (cross) {
        out.decision = LookDecision::Reject;
    } else {
        out.decision = look == plan.num_looks ? LookDecision::AcceptAtFinal : LookDecision::Continue;
    }
    return out;
}

GstRun monitor_sequential(const TrialData& data, const ScoreVector& scores, const GstPlan& plan,
                          const GstOptions& options)
{
    plan.check();
    const int available = complete_blocks(data);
    if (scores.values.size() < static_cast<std::size_t>(available * data.design.block_size)) {
        fail(ErrorKind::InvalidArgument, "scores do not cover the available blocks");
    }
    GstRun run;
    for (int l = 1; l <= plan.num_looks; ++l) {
        const int p_l = plan.look_blocks[static_cast<std::size_t>(l - 1)];
        if (p_l > available) break;
        auto look = interim_test(data.prefix(p_l), prefix_scores(scores, p_l), plan, l, options);
        const bool reject = look.decision == LookDecision::Reject;
        const bool final_look = l == plan.num_looks;
        run.looks.push_back(std::move(look));
        if (reject) {
            run.stopped_at = l;
            run.finished = true;
            break;
        }
        if (final_look) run.finished = true;
    }
    return run;
}

GstRun monitor_sequential(const TrialData& data, ScoreKind kind, const GstPlan& plan,
                          const GstOptions& options)
{
    TrialData avail = data;
    avail.design.num_blocks = complete_blocks(data);
    if (avail.design.num_blocks < 1) {
        return {};
    }
    avail.patients.resize(static_cast<std::size_t>(avail.design.num_patients()));
    return monitor_sequential(avail, compute_scores(avail, kind), plan, options);
}

namespace {

void require_finished(const GstRun& run, const GstPlan& plan, const TrialData& data)
{
    if (!run.finished) {
        fail(ErrorKind::InvalidData, "incomplete trial: " + std::to_string(complete_blocks(data))
                                         + " of " + std::to_string(plan.max_blocks)
                                         + " blocks available and no boundary crossed");
    }
}

}  // namespace

GstRun run_sequential(const TrialData& data, const ScoreVector& scores, const GstPlan& plan,
                      const GstOptions& options)
{
    auto run = monitor_sequential(data, scores, plan, options);
    require_finished(run, plan, data);
    return run;
}

GstRun run_sequential(const TrialData& data, ScoreKind kind, const GstPlan& plan,
                      const GstOptions& options)
{
    auto run = monitor_sequential(data, kind, plan, options);
    require_finished(run, plan, data);
    return run;
}

}  // namespace mcrand
