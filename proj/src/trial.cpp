// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/trial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mcrand/error.hpp"

namespace mcrand {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::InvalidDesign: return "invalid design";
        case ErrorKind::InvalidData: return "invalid data";
        case ErrorKind::Numeric: return "numeric failure";
        case ErrorKind::Config: return "configuration error";
        case ErrorKind::Capacity: return "capacity exceeded";
        case ErrorKind::Io: return "i/o error";
    }
    return "unknown error";
}

const char* to_string(OutcomeKind kind) noexcept
{
    switch (kind) {
        case OutcomeKind::Continuous: return "continuous";
        case OutcomeKind::Binary: return "binary";
        case OutcomeKind::Survival: return "survival";
    }
    return "unknown";
}

const char* to_string(Arm arm) noexcept
{
    switch (arm) {
        case Arm::A: return "A";
        case Arm::B: return "B";
        case Arm::Unassigned: return "unassigned";
    }
    return "unknown";
}

void TrialDesign::check() const
{
    if (block_size < 2 || block_size % 2 != 0) {
        fail(ErrorKind::InvalidDesign,
             "block size must be a positive even integer, got "
                 + std::to_string(block_size));
    }
    if (num_blocks < 1) {
        fail(ErrorKind::InvalidDesign,
             "number of blocks must be positive, got " + std::to_string(num_blocks));
    }
    if (num_institutions < 1) {
        fail(ErrorKind::InvalidDesign, "number of institutions must be positive, got "
                                           + std::to_string(num_institutions));
    }
}

TrialData TrialData::prefix(int blocks) const
{
    if (blocks < 1 || blocks > design.num_blocks) {
        fail(ErrorKind::InvalidArgument, "prefix of " + std::to_string(blocks)
                                             + " blocks requested from a trial with "
                                             + std::to_string(design.num_blocks));
    }
    TrialData out;
    out.design = design;
    out.design.num_blocks = blocks;
    const auto n = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(design.block_size);
    out.patients.assign(patients.begin(),
                        patients.begin() + static_cast<std::ptrdiff_t>(std::min(n, patients.size())));
    out.institution_labels = institution_labels;
    return out;
}

std::string TrialData::institution_label(int k) const
{
    if (k >= 0 && static_cast<std::size_t>(k) < institution_labels.size()) {
        return institution_labels[static_cast<std::size_t>(k)];
    }
    return std::to_string(k + 1);
}

std::vector<Arm> randomize_block(int block_size, RandomStream& rng)
{
    if (block_size < 2 || block_size % 2 != 0) {
        fail(ErrorKind::InvalidDesign,
             "block size must be a positive even integer, got " + std::to_string(block_size));
    }
    const auto n = static_cast<std::size_t>(block_size);
    std::vector<Arm> arms(n, Arm::B);
    std::fill(arms.begin(), arms.begin() + static_cast<std::ptrdiff_t>(n / 2), Arm::A);
    // Fisher-Yates: a uniform permutation of the multiset makes every
    // balanced pattern equally likely.
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto r = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(arms[i], arms[r]);
    }
    return arms;
}

TrialData randomize_trial(const TrialDesign& design, std::span<const int> institution_sequence,
                          RandomStream& rng)
{
    design.check();
    if (institution_sequence.size() != static_cast<std::size_t>(design.num_patients())) {
        fail(ErrorKind::InvalidArgument,
             "institution sequence has " + std::to_string(institution_sequence.size())
                 + " entries; design needs " + std::to_string(design.num_patients()));
    }
    TrialData data;
    data.design = design;
    data.patients.reserve(institution_sequence.size());
    for (int j = 0; j < design.num_blocks; ++j) {
        const auto arms = randomize_block(design.block_size, rng);
        for (int i = 0; i < design.block_size; ++i) {
            const int k = institution_sequence[static_cast<std::size_t>(j * design.block_size + i)];
            if (k < 0 || k >= design.num_institutions) {
                fail(ErrorKind::InvalidArgument,
                     "institution index " + std::to_string(k) + " outside 0.."
                         + std::to_string(design.num_institutions - 1));
            }
            data.patients.push_back({j, i, k, arms[static_cast<std::size_t>(i)], Outcome{}});
        }
    }
    return data;
}

CountTable tabulate_counts(const TrialData& data)
{
    const auto& d = data.design;
    d.check();
    if (data.patients.size() != static_cast<std::size_t>(d.num_patients())) {
        fail(ErrorKind::InvalidData, "expected " + std::to_string(d.num_patients())
                                         + " patients, found "
                                         + std::to_string(data.patients.size()));
    }
    CountTable t;
    t.num_blocks = d.num_blocks;
    t.num_institutions = d.num_institutions;
    t.block_size = d.block_size;
    const auto cells = static_cast<std::size_t>(d.num_blocks) * static_cast<std::size_t>(d.num_institutions);
    t.block_institution.assign(cells, 0);
    t.block_institution_a.assign(cells, 0);
    t.institution_total.assign(static_cast<std::size_t>(d.num_institutions), 0);
    t.institution_a.assign(static_cast<std::size_t>(d.num_institutions), 0);

    for (int j = 0; j < d.num_blocks; ++j) {
        int assigned_a = 0;
        for (const auto& p : data.block(j)) {
            if (p.institution < 0 || p.institution >= d.num_institutions) {
                fail(ErrorKind::InvalidData, "block " + std::to_string(j + 1)
                                                 + " has an institution index out of range");
            }
            if (p.arm == Arm::Unassigned) {
                fail(ErrorKind::InvalidData,
                     "block " + std::to_string(j + 1) + " has an unassigned patient");
            }
            const auto cell = static_cast<std::size_t>(j * d.num_institutions + p.institution);
            ++t.block_institution[cell];
            ++t.institution_total[static_cast<std::size_t>(p.institution)];
            if (p.arm == Arm::A) {
                ++t.block_institution_a[cell];
                ++t.institution_a[static_cast<std::size_t>(p.institution)];
                ++assigned_a;
            }
        }
        if (2 * assigned_a != d.block_size) {
            fail(ErrorKind::InvalidData, "block " + std::to_string(j + 1) + " is unbalanced: "
                                             + std::to_string(assigned_a) + " of "
                                             + std::to_string(d.block_size)
                                             + " patients assigned to A");
        }
    }
    return t;
}

namespace {

bool valid_outcome(const Outcome& o)
{
    switch (o.kind) {
        case OutcomeKind::Continuous: return std::isfinite(o.value);
        case OutcomeKind::Binary: return o.value == 0.0 || o.value == 1.0;
        case OutcomeKind::Survival: return std::isfinite(o.value) && o.value > 0;
    }
    return false;
}

}  // namespace

std::vector<Violation> validate(const TrialData& data)
{
    std::vector<Violation> out;
    auto add = [&out](std::string code, std::string message) {
        out.push_back({std::move(code), std::move(message)});
    };
    const auto& d = data.design;
    try {
        d.check();
    } catch (const Error& e) {
        add("invalid-design", e.what());
        return out;
    }
    const int n = d.block_size;

    // Block sizes, judged from the block indices carried by each record.
    std::vector<int> per_block(static_cast<std::size_t>(d.num_blocks), 0);
    for (std::size_t r = 0; r < data.patients.size(); ++r) {
        const auto& p = data.patients[r];
        if (p.block < 0 || p.block >= d.num_blocks) {
            add("record-order", "record " + std::to_string(r + 1) + " refers to block "
                                    + std::to_string(p.block + 1) + " outside 1.."
                                    + std::to_string(d.num_blocks));
            continue;
        }
        ++per_block[static_cast<std::size_t>(p.block)];
    }
    for (int j = 0; j < d.num_blocks; ++j) {
        const int c = per_block[static_cast<std::size_t>(j)];
        if (c == n) {
            continue;
        }
        if (j == d.num_blocks - 1 && c < n) {
            add("incomplete-final-block", "incomplete final block: block " + std::to_string(j + 1)
                                              + " has " + std::to_string(c) + " of "
                                              + std::to_string(n) + " patients");
        } else {
            add("block-size-mismatch", "block " + std::to_string(j + 1) + " has "
                                           + std::to_string(c) + " patients; expected "
                                           + std::to_string(n));
        }
    }
    if (!out.empty()) {
        return out;
    }

    bool order_ok = true;
    for (std::size_t r = 0; r < data.patients.size() && order_ok; ++r) {
        const auto& p = data.patients[r];
        if (p.block != static_cast<int>(r) / n || p.position != static_cast<int>(r) % n) {
            add("record-order", "record " + std::to_string(r + 1)
                                    + " is out of arrival order for block "
                                    + std::to_string(p.block + 1));
            order_ok = false;
        }
    }

    bool unassigned_reported = false;
    for (const auto& p : data.patients) {
        if (p.institution < 0 || p.institution >= d.num_institutions) {
            add("institution-range", "block " + std::to_string(p.block + 1)
                                         + " has institution index "
                                         + std::to_string(p.institution + 1) + " outside 1.."
                                         + std::to_string(d.num_institutions));
        }
        if (p.arm == Arm::Unassigned && !unassigned_reported) {
            add("unassigned-arm", "block " + std::to_string(p.block + 1)
                                      + " contains a patient without an arm");
            unassigned_reported = true;
        }
    }

    if (order_ok && !unassigned_reported) {
        for (int j = 0; j < d.num_blocks; ++j) {
            int a = 0;
            for (const auto& p : data.block(j)) {
                a += p.arm == Arm::A ? 1 : 0;
            }
            if (2 * a != n) {
                add("block-imbalance", "block " + std::to_string(j + 1) + " is unbalanced: "
                                           + std::to_string(a) + " of " + std::to_string(n)
                                           + " patients assigned to A");
            }
        }
    }

    if (!data.patients.empty()) {
        const auto kind = data.patients.front().outcome.kind;
        bool mixed = false;
        bool bad_reported = false;
        for (std::size_t r = 0; r < data.patients.size(); ++r) {
            const auto& o = data.patients[r].outcome;
            mixed = mixed || o.kind != kind;
            if (!valid_outcome(o) && !bad_reported) {
                add("invalid-outcome", "record " + std::to_string(r + 1) + " in block "
                                           + std::to_string(data.patients[r].block + 1)
                                           + " has an invalid " + to_string(o.kind)
                                           + " outcome");
                bad_reported = true;
            }
        }
        if (mixed) {
            add("heterogeneous-outcomes", "heterogeneous outcomes: records mix outcome kinds");
        }
    }
    return out;
}

void require_valid(const TrialData& data)
{
    const auto violations = validate(data);
    if (violations.empty()) {
        return;
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        os << (i ? "; " : "") << violations[i].message;
    }
    fail(ErrorKind::InvalidData, os.str());
}

OutcomeKind outcome_kind(const TrialData& data)
{
    return data.patients.empty() ? OutcomeKind::Continuous : data.patients.front().outcome.kind;
}

}  // namespace mcrand
