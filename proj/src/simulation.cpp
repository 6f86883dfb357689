// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <string>

#include "mcrand/error.hpp"

namespace mcrand {

void Scenario::check() const
{
    if (block_size < 2 || block_size % 2 != 0) {
        fail(ErrorKind::Config, "block_size must be a positive even integer");
    }
    if (n_total < block_size || n_total % block_size != 0) {
        fail(ErrorKind::Config, "n_total (" + std::to_string(n_total)
                                    + ") must be a positive multiple of block_size ("
                                    + std::to_string(block_size) + ")");
    }
    if (num_institutions < 1 || num_institutions > n_total) {
        fail(ErrorKind::Config, "num_institutions must lie in 1..n_total");
    }
    if (replications < 1) fail(ErrorKind::Config, "replications must be at least 1");
    switch (outcome) {
        case OutcomeKind::Continuous:
            if (!(1.0 + effect / std::sqrt(std::exp(1.0)) > 0)) {
                fail(ErrorKind::Config, "continuous effect too negative for the lognormal shift");
            }
            if (!(institution_sd >= 0)) fail(ErrorKind::Config, "institution_sd must be >= 0");
            break;
        case OutcomeKind::Binary:
            if (!(effect > 0 && effect < 1 && base_rate > 0 && base_rate < 1)) {
                fail(ErrorKind::Config, "binary success probabilities must lie in (0, 1)");
            }
            if (!(institution_sd >= 0)) fail(ErrorKind::Config, "institution_sd must be >= 0");
            break;
        case OutcomeKind::Survival:
            if (!(effect > 0)) fail(ErrorKind::Config, "survival mean ratio must be positive");
            if (institution_df < 0) fail(ErrorKind::Config, "institution_df must be >= 0");
            if (!(censoring_target >= 0 && censoring_target < 1)) {
                fail(ErrorKind::Config, "censoring_target must lie in [0, 1)");
            }
            if (censoring_tau && !(*censoring_tau > 0)) {
                fail(ErrorKind::Config, "censoring_tau must be positive");
            }
            break;
    }
}

std::vector<int> assign_institutions(int n_total, int num_institutions, RandomStream& rng)
{
    if (num_institutions < 1 || num_institutions > n_total) {
        fail(ErrorKind::InvalidArgument, "need 1 <= K <= n");
    }
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n_total));
    const int base = n_total / num_institutions;
    const int extra = n_total % num_institutions;
    for (int k = 0; k < num_institutions; ++k) {
        labels.insert(labels.end(), static_cast<std::size_t>(base + (k < extra ? 1 : 0)), k);
    }
    for (std::size_t i = labels.size() - 1; i > 0; --i) {
        std::swap(labels[i], labels[static_cast<std::size_t>(rng.below(i + 1))]);
    }
    return labels;
}

double block_effect(int block, int num_blocks) noexcept
{
    static constexpr double kEffects[] = {-1.0, -0.5, 0.5, 1.0};
    const int q = static_cast<int>(4L * block / num_blocks);
    return kEffects[std::min(q, 3)];
}

double lognormal_shift(double delta)
{
    const double ratio = 1.0 + delta / std::sqrt(std::exp(1.0));
    if (!(ratio > 0)) fail(ErrorKind::InvalidArgument, "lognormal shift undefined");
    return std::log(ratio);
}

namespace {

TrialData allocate(const Scenario& s, RandomStream& rng)
{
    s.check();
    const auto labels = assign_institutions(s.n_total, s.num_institutions, rng);
    const TrialDesign design{s.block_size, s.n_total / s.block_size, s.num_institutions};
    return randomize_trial(design, labels, rng);
}

}  // namespace

TrialData gen_continuous(const Scenario& s, RandomStream& rng)
{
    auto data = allocate(s, rng);
    std::vector<double> b(static_cast<std::size_t>(s.num_institutions));
    for (auto& v : b) v = rng.normal(0.0, s.institution_sd);
    const double mu = lognormal_shift(s.effect);
    for (auto& p : data.patients) {
        const double shift = p.arm == Arm::A ? mu : 0.0;
        double y = std::exp(rng.normal() + shift) + b[static_cast<std::size_t>(p.institution)];
        if (s.block_effects) y += block_effect(p.block, data.design.num_blocks);
        p.outcome = Outcome::continuous(y);
    }
    return data;
}

TrialData gen_binary(const Scenario& s, RandomStream& rng)
{
    auto data = allocate(s, rng);
    std::vector<double> b(static_cast<std::size_t>(s.num_institutions));
    for (auto& v : b) v = rng.normal(0.0, s.institution_sd);
    const auto logit = [](double p) { return std::log(p / (1 - p)); };
    const double base = logit(s.base_rate);
    const double beta = logit(s.effect) - base;
    for (auto& p : data.patients) {
        const double eta = base + (p.arm == Arm::A ? beta : 0.0) + b[static_cast<std::size_t>(p.institution)];
        p.outcome = Outcome::binary(rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1 : 0);
    }
    return data;
}

namespace {

double institution_multiplier(const Scenario& s, RandomStream& rng)
{
    if (s.institution_df == 0) return 1.0;
    const double c = rng.chi_square(s.institution_df);
    return s.scale_institution_effect ? c / s.institution_df : c;
}

}  // namespace

TrialData gen_survival(const Scenario& s, RandomStream& rng)
{
    if (!s.censoring_tau) {
        fail(ErrorKind::Config, "survival scenario has no censoring bound; calibrate first");
    }
    auto data = allocate(s, rng);
    std::vector<double> c(static_cast<std::size_t>(s.num_institutions));
    for (auto& v : c) v = institution_multiplier(s, rng);
    const double tau = *s.censoring_tau;
    for (auto& p : data.patients) {
        const double m = (p.arm == Arm::A ? s.effect : 1.0) * c[static_cast<std::size_t>(p.institution)];
        const double t = std::max(rng.exponential(m), std::numeric_limits<double>::min());
        const double cens = tau * rng.uniform();
        p.outcome = t <= cens ? Outcome::survival(t, true) : Outcome::survival(cens, false);
    }
    return data;
}

TrialData generate_trial(const Scenario& s, RandomStream& rng)
{
    switch (s.outcome) {
        case OutcomeKind::Continuous: return gen_continuous(s, rng);
        case OutcomeKind::Binary: return gen_binary(s, rng);
        case OutcomeKind::Survival: return gen_survival(s, rng);
    }
    fail(ErrorKind::InvalidArgument, "unknown outcome kind");
}

double expected_censoring(const Scenario& s, double tau)
{
    constexpr int kDraws = 200000;
    RandomStream rng(0x6d63722d63656e73ULL, stream_id(s.institution_df, s.scale_institution_effect));
    const auto censored = [tau](double m) {
        const double r = tau / m;
        return r < 1e-8 ? 1.0 - r / 2 : (1.0 - std::exp(-r)) / r;
    };
    double total = 0;
    for (int i = 0; i < kDraws; ++i) {
        const double c = institution_multiplier(s, rng);
        total += 0.5 * (censored(s.effect * c) + censored(c));
    }
    return total / kDraws;
}

namespace {

double bisect_censoring(const Scenario& s)
{
    double lo = std::log(1e-8);
    double hi = std::log(1e8);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = expected_censoring(s, std::exp(mid));
        if (std::fabs(f - s.censoring_target) < 1e-4) return std::exp(mid);
        // Censoring falls as tau grows.
        (f > s.censoring_target ? lo : hi) = mid;
    }
    fail(ErrorKind::Numeric, "censoring calibration did not converge");
}

}  // namespace

double calibrate_censoring(const Scenario& s)
{
    if (s.censoring_target <= 0) return std::numeric_limits<double>::max();
    using Key = std::tuple<int, bool, double, double>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{s.institution_df, s.scale_institution_effect, s.effect, s.censoring_target};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double tau = bisect_censoring(s);
    std::lock_guard lock(mutex);
    cache.emplace(key, tau);
    return tau;
}

Scenario prepared(Scenario s)
{
    s.check();
    if (s.outcome == OutcomeKind::Survival && !s.censoring_tau) {
        s.censoring_tau = calibrate_censoring(s);
    }
    return s;
}

RandomStream replication_stream(const Scenario& s, std::uint64_t replication)
{
    return RandomStream(s.seed, stream_id(s.id, replication));
}

}  // namespace mcrand
