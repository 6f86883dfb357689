// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcrand/random.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

struct Scenario {
    std::string name;
    //! Folded with the replication index into the per-replication stream.
    std::uint64_t id = 0;
    OutcomeKind outcome = OutcomeKind::Continuous;
    int n_total = 120;
    int num_institutions = 10;
    int block_size = 4;
    bool block_effects = false;

    //! Continuous: raw-scale mean difference A - B. Binary: success
    //! probability on A. Survival: mean survival ratio A / B.
    double effect = 1.07;
    //! Binary success probability on B.
    double base_rate = 0.5;
    //! Institution effect spread: normal sd (continuous, binary) or chi-square
    //! degrees of freedom (survival).
    double institution_sd = 2.0;
    int institution_df = 1;
    //! Divide chi-square institution effects by their df (mean 1).
    bool scale_institution_effect = false;
    double censoring_target = 0.19;
    //! Upper end of the uniform censoring law; calibrated when absent.
    std::optional<double> censoring_tau;

    int replications = 5000;
    std::uint64_t seed = 0;

    //! Throws Error(Config) on inconsistent settings.
    void check() const;
};

//! ⌊n/K⌋ or ⌈n/K⌉ patients per institution, in uniformly shuffled arrival
//! order. Returns 0-based institution indices.
std::vector<int> assign_institutions(int n_total, int num_institutions, RandomStream& rng);

//! Block effect for block j of P when block effects are on: -1, -0.5, 0.5, 1
//! by quartile of the block index.
double block_effect(int block, int num_blocks) noexcept;

//! log(1 + delta / sqrt(e)): the log-scale shift of exp(Z), Z ~ N(0,1), whose
//! raw mean moves by delta.
double lognormal_shift(double delta);

TrialData gen_continuous(const Scenario& s, RandomStream& rng);
TrialData gen_binary(const Scenario& s, RandomStream& rng);
//! Requires s.censoring_tau (see calibrate_censoring).
TrialData gen_survival(const Scenario& s, RandomStream& rng);
TrialData generate_trial(const Scenario& s, RandomStream& rng);

/*!
 * Expected censoring fraction under uniform [0, tau] censoring, averaged
 * over arms and a fixed sample of institution effects.
 */
double expected_censoring(const Scenario& s, double tau);

//! Bisection on tau until the expected censoring fraction is within 1e-4 of
//! the target. Throws Error(Numeric) if it does not converge.
double calibrate_censoring(const Scenario& s);

//! Scenario with the censoring bound filled in when it is a survival
//! scenario without one.
Scenario prepared(Scenario s);

//! Per-replication random stream.
RandomStream replication_stream(const Scenario& s, std::uint64_t replication);

}  // namespace mcrand
