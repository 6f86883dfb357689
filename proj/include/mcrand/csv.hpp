// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mcrand/trial.hpp"

namespace mcrand {

// Trial CSV layouts (comma-separated, UTF-8, one header line):
//   patient_id,block,institution,arm,y             continuous or binary
//   patient_id,block,institution,arm,time,event    survival
// block is a 1-based integer, arm is A or B, event is 0 or 1. Institution
// labels are free text; they are numbered in numeric order when every label
// is an integer and in lexicographic order otherwise.

struct CsvOptions {
    //! Required to read a y column as binary; otherwise inferred.
    std::optional<OutcomeKind> outcome;
    //! Block size N; inferred from the size of block 1 when absent.
    std::optional<int> block_size;
    //! Drop a trailing block with fewer than N records instead of rejecting
    //! it. Used when monitoring a trial that is still enrolling.
    bool drop_partial_final_block = false;
};

OutcomeKind parse_outcome_kind(std::string_view name);

/*!
 * Parses a trial CSV. Malformed text throws Error(InvalidData) naming the
 * line. The result is checked with require_valid(), so an incomplete final
 * block or an unbalanced block is also reported as InvalidData.
 */
TrialData parse_trial_csv(std::string_view text, const CsvOptions& options = {});

//! Throws Error(Io) when the file cannot be read.
TrialData read_trial_csv(const std::string& path, const CsvOptions& options = {});

std::string format_trial_csv(const TrialData& data);

}  // namespace mcrand
