// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mcrand/trial.hpp"

namespace mcrand {

enum class ScoreKind { Identity, Binary, Logrank, Gehan };

const char* to_string(ScoreKind kind) noexcept;
ScoreKind parse_score_kind(std::string_view name);

//! Per-patient scores in arrival order; entries [j*N, (j+1)*N) belong to
//! block j.
struct ScoreVector {
    ScoreKind kind = ScoreKind::Identity;
    int block_size = 0;
    std::vector<double> values;

    int num_blocks() const
    {
        return block_size > 0 ? static_cast<int>(values.size()) / block_size : 0;
    }
    std::span<const double> block(int j) const
    {
        const auto n = static_cast<std::size_t>(block_size);
        return std::span<const double>(values).subspan(static_cast<std::size_t>(j) * n, n);
    }
};

// Single-block transforms. Each throws Error(InvalidData) on an outcome of
// the wrong kind.
std::vector<double> identity_scores(std::span<const Outcome> block);
std::vector<double> binary_scores(std::span<const Outcome> block);

//! Logrank (Nelson-Aalen residual) score e_i - sum_{t_(m) <= t_i} d_m/n_m
//! with risk sets confined to the block. A censoring tied with a death is
//! treated as occurring just after it.
std::vector<double> logrank_scores(std::span<const Outcome> block);

//! Gehan score: number of block-mates patient i definitely outlived minus
//! the number that definitely outlived i.
std::vector<double> gehan_scores(std::span<const Outcome> block);

std::vector<double> block_scores(std::span<const Outcome> block, ScoreKind kind);

//! Applies the transform block by block over the whole trial.
ScoreVector compute_scores(const TrialData& data, ScoreKind kind);

//! Natural score for an outcome kind (identity, binary, logrank).
ScoreKind default_score(OutcomeKind kind) noexcept;

}  // namespace mcrand
