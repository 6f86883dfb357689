// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/scores.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mcrand/error.hpp"

namespace mcrand {

const char* to_string(ScoreKind kind) noexcept
{
    switch (kind) {
        case ScoreKind::Identity: return "identity";
        case ScoreKind::Binary: return "binary";
        case ScoreKind::Logrank: return "logrank";
        case ScoreKind::Gehan: return "gehan";
    }
    return "unknown";
}

ScoreKind parse_score_kind(std::string_view name)
{
    if (name == "identity") return ScoreKind::Identity;
    if (name == "binary") return ScoreKind::Binary;
    if (name == "logrank") return ScoreKind::Logrank;
    if (name == "gehan") return ScoreKind::Gehan;
    fail(ErrorKind::InvalidArgument, "unknown score kind '" + std::string(name) + "'");
}

ScoreKind default_score(OutcomeKind kind) noexcept
{
    switch (kind) {
        case OutcomeKind::Continuous: return ScoreKind::Identity;
        case OutcomeKind::Binary: return ScoreKind::Binary;
        case OutcomeKind::Survival: return ScoreKind::Logrank;
    }
    return ScoreKind::Identity;
}

namespace {

void require_kind(std::span<const Outcome> block, OutcomeKind kind, const char* score)
{
    for (const auto& o : block) {
        if (o.kind != kind) {
            fail(ErrorKind::InvalidData, std::string(score) + " scores need "
                                             + to_string(kind) + " outcomes, got "
                                             + to_string(o.kind));
        }
    }
}

void require_survival(std::span<const Outcome> block, const char* score)
{
    if (block.empty()) {
        fail(ErrorKind::InvalidData, std::string(score) + " scores need a non-empty block");
    }
    require_kind(block, OutcomeKind::Survival, score);
    for (const auto& o : block) {
        if (!(o.value > 0) || !std::isfinite(o.value)) {
            fail(ErrorKind::InvalidData,
                 std::string(score) + " scores need positive survival times");
        }
    }
}

// True when a definitely outlived b.
bool outlives(const Outcome& a, const Outcome& b)
{
    return b.event && (a.value > b.value || (a.value == b.value && !a.event));
}

}  // namespace

std::vector<double> identity_scores(std::span<const Outcome> block)
{
    require_kind(block, OutcomeKind::Continuous, "identity");
    std::vector<double> out(block.size());
    std::transform(block.begin(), block.end(), out.begin(),
                   [](const Outcome& o) { return o.value; });
    return out;
}

std::vector<double> binary_scores(std::span<const Outcome> block)
{
    require_kind(block, OutcomeKind::Binary, "binary");
    std::vector<double> out(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (block[i].value != 0.0 && block[i].value != 1.0) {
            fail(ErrorKind::InvalidData, "binary outcome must be 0 or 1");
        }
        out[i] = block[i].value;
    }
    return out;
}

std::vector<double> logrank_scores(std::span<const Outcome> block)
{
    require_survival(block, "logrank");
    const std::size_t n = block.size();

    // Sort by time, deaths ahead of censorings at equal times.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (block[a].value != block[b].value) {
            return block[a].value < block[b].value;
        }
        return block[a].event && !block[b].event;
    });

    std::vector<double> out(n);
    double cumulative_hazard = 0;
    std::size_t pos = 0;
    while (pos < n) {
        const double t = block[order[pos]].value;
        std::size_t end = pos;
        int deaths = 0;
        while (end < n && block[order[end]].value == t) {
            deaths += block[order[end]].event ? 1 : 0;
            ++end;
        }
        const auto at_risk = static_cast<double>(n - pos);
        cumulative_hazard += deaths / at_risk;
        for (std::size_t r = pos; r < end; ++r) {
            const auto& o = block[order[r]];
            out[order[r]] = (o.event ? 1.0 : 0.0) - cumulative_hazard;
        }
        pos = end;
    }
    return out;
}

std::vector<double> gehan_scores(std::span<const Outcome> block)
{
    require_survival(block, "gehan");
    const std::size_t n = block.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (outlives(block[i], block[k])) {
                out[i] += 1;
                out[k] -= 1;
            } else if (outlives(block[k], block[i])) {
                out[k] += 1;
                out[i] -= 1;
            }
        }
    }
    return out;
}

std::vector<double> block_scores(std::span<const Outcome> block, ScoreKind kind)
{
    switch (kind) {
        case ScoreKind::Identity: return identity_scores(block);
        case ScoreKind::Binary: return binary_scores(block);
        case ScoreKind::Logrank: return logrank_scores(block);
        case ScoreKind::Gehan: return gehan_scores(block);
    }
    fail(ErrorKind::InvalidArgument, "unknown score kind");
}

ScoreVector compute_scores(const TrialData& data, ScoreKind kind)
{
    ScoreVector sv;
    sv.kind = kind;
    sv.block_size = data.design.block_size;
    sv.values.reserve(data.patients.size());
    std::vector<Outcome> outcomes(static_cast<std::size_t>(data.design.block_size));
    for (int j = 0; j < data.design.num_blocks; ++j) {
        const auto recs = data.block(j);
        std::transform(recs.begin(), recs.end(), outcomes.begin(),
                       [](const PatientRecord& p) { return p.outcome; });
        const auto s = block_scores(outcomes, kind);
        sv.values.insert(sv.values.end(), s.begin(), s.end());
    }
    return sv;
}

}  // namespace mcrand
