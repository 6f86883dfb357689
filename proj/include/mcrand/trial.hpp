// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcrand/random.hpp"

namespace mcrand {

enum class Arm : std::uint8_t { A, B, Unassigned };

enum class OutcomeKind : std::uint8_t { Continuous, Binary, Survival };

const char* to_string(OutcomeKind kind) noexcept;
const char* to_string(Arm arm) noexcept;

//! Observed outcome. For survival outcomes `value` is the follow-up time and
//! `event` is true when the death was observed (false = censored).
struct Outcome {
    OutcomeKind kind = OutcomeKind::Continuous;
    double value = 0;
    bool event = false;

    static Outcome continuous(double y) { return {OutcomeKind::Continuous, y, false}; }
    static Outcome binary(int y) { return {OutcomeKind::Binary, static_cast<double>(y), false}; }
    static Outcome survival(double time, bool died) { return {OutcomeKind::Survival, time, died}; }

    bool operator==(const Outcome&) const = default;
};

//! Fixed frame of the randomization distribution: P blocks of N patients
//! drawn from K institutions.
struct TrialDesign {
    int block_size = 0;
    int num_blocks = 0;
    int num_institutions = 0;

    int num_patients() const { return block_size * num_blocks; }

    //! Throws Error(InvalidDesign) unless N >= 2 is even, P >= 1 and K >= 1.
    void check() const;

    bool operator==(const TrialDesign&) const = default;
};

//! One enrolled patient. Indices are zero-based; block membership is
//! positional (consecutive runs of N arrivals).
struct PatientRecord {
    int block = 0;
    int position = 0;
    int institution = 0;
    Arm arm = Arm::Unassigned;
    Outcome outcome;

    bool operator==(const PatientRecord&) const = default;
};

struct TrialData {
    TrialDesign design;
    std::vector<PatientRecord> patients;
    //! Optional display labels, one per institution index.
    std::vector<std::string> institution_labels;

    std::span<const PatientRecord> block(int j) const
    {
        const auto n = static_cast<std::size_t>(design.block_size);
        return std::span<const PatientRecord>(patients).subspan(
            static_cast<std::size_t>(j) * n, n);
    }

    //! The first `blocks` blocks, with the design shrunk accordingly.
    TrialData prefix(int blocks) const;

    std::string institution_label(int k) const;
};

//! Per-block and per-institution counts of patients and of arm-A
//! assignments (N_jk, N_.k, n_kA^j, n_kA). Matrices are row-major P x K.
struct CountTable {
    int num_blocks = 0;
    int num_institutions = 0;
    int block_size = 0;
    std::vector<int> block_institution;
    std::vector<int> institution_total;
    std::vector<int> block_institution_a;
    std::vector<int> institution_a;

    int patients(int j, int k) const
    {
        return block_institution[static_cast<std::size_t>(j * num_institutions + k)];
    }
    int assigned_a(int j, int k) const
    {
        return block_institution_a[static_cast<std::size_t>(j * num_institutions + k)];
    }
};

//! Balanced random allocation of one block: exactly N/2 patients get A and
//! all C(N, N/2) patterns are equally likely.
std::vector<Arm> randomize_block(int block_size, RandomStream& rng);

//! Assigns arms block by block to an arrival sequence of institution
//! indices (zero-based). Outcomes are left as continuous zeros.
TrialData randomize_trial(const TrialDesign& design,
                          std::span<const int> institution_sequence,
                          RandomStream& rng);

//! Throws Error(InvalidData) naming the first unbalanced block.
CountTable tabulate_counts(const TrialData& data);

struct Violation {
    std::string code;
    std::string message;
};

//! Structural checks; problems are returned rather than thrown.
std::vector<Violation> validate(const TrialData& data);

//! Throws Error(InvalidData) carrying every violation message.
void require_valid(const TrialData& data);

//! Outcome kind of the first patient; validate() checks homogeneity.
OutcomeKind outcome_kind(const TrialData& data);

}  // namespace mcrand
