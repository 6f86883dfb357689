// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/rerandomization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcrand/error.hpp"
#include "mcrand/parallel.hpp"
#include "mcrand/stats.hpp"

namespace mcrand {

MortalitySummary mortality_ratio(const TrialData& data)
{
    MortalitySummary m;
    for (const auto& p : data.patients) {
        if (p.outcome.kind != OutcomeKind::Survival) {
            fail(ErrorKind::InvalidData, "mortality ratio needs survival outcomes");
        }
        const int d = p.outcome.event ? 1 : 0;
        if (p.arm == Arm::A) {
            ++m.n_1;
            m.deaths_1 += d;
            m.followup_1 += p.outcome.value;
        } else if (p.arm == Arm::B) {
            ++m.n_2;
            m.deaths_2 += d;
            m.followup_2 += p.outcome.value;
        } else {
            fail(ErrorKind::InvalidData, "mortality ratio needs every arm assigned");
        }
    }
    if (!(m.followup_1 > 0) || !(m.followup_2 > 0)) {
        fail(ErrorKind::InvalidData, "both arms need positive follow-up time");
    }
    if (m.deaths_2 == 0) {
        fail(ErrorKind::InvalidData, "mortality ratio undefined: no deaths in arm B");
    }
    m.m_1 = m.deaths_1 / m.followup_1;
    m.m_2 = m.deaths_2 / m.followup_2;
    m.ratio = m.m_1 / m.m_2;
    return m;
}

std::vector<Observation> pooled_order(const TrialData& data)
{
    std::vector<Observation> obs;
    obs.reserve(data.patients.size());
    for (const auto& p : data.patients) obs.push_back({p.outcome.value, p.outcome.event});
    std::stable_sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.event && !b.event;
    });
    return obs;
}

std::optional<double> rerandomize_once(std::span<const Observation> ordered, int n1, int n2,
                                       double ratio, RandomStream& rng)
{
    if (n1 < 0 || n2 < 0 || static_cast<std::size_t>(n1 + n2) != ordered.size()) {
        fail(ErrorKind::InvalidArgument, "risk-set sizes must add up to the observations");
    }
    double at1 = n1;
    double at2 = n2;
    int d1 = 0;
    int d2 = 0;
    double f1 = 0;
    double f2 = 0;
    for (const auto& o : ordered) {
        const double w1 = o.event ? ratio * at1 : at1;
        const double prob = at2 == 0 ? 1.0 : at1 == 0 ? 0.0 : w1 / (w1 + at2);
        if (rng.uniform() < prob) {
            at1 -= 1;
            f1 += o.time;
            d1 += o.event;
        } else {
            at2 -= 1;
            f2 += o.time;
            d2 += o.event;
        }
    }
    if (d2 == 0 || !(f1 > 0)) return std::nullopt;
    return (d1 / f1) / (d2 / f2);
}

std::pair<double, double> percentile_interval(std::span<const double> sorted, double level)
{
    if (!(level > 0 && level < 1)) fail(ErrorKind::InvalidArgument, "level must lie in (0, 1)");
    if (sorted.empty()) fail(ErrorKind::Numeric, "no usable rerandomizations");
    const double tail = (1 - level) / 2;
    return {quantile_sorted(sorted, tail), quantile_sorted(sorted, 1 - tail)};
}

ConfidenceInterval confidence_interval(const TrialData& data, int reps, double level,
                                       std::uint64_t seed, int workers, std::uint64_t stream)
{
    if (reps < 100) fail(ErrorKind::InvalidArgument, "at least 100 rerandomizations are needed");
    ConfidenceInterval ci;
    ci.level = level;
    ci.requested = reps;
    ci.observed = mortality_ratio(data);
    const auto ordered = pooled_order(data);

    std::vector<std::optional<double>> draws(static_cast<std::size_t>(reps));
    parallel_for(draws.size(), workers, [&](std::size_t r) {
        RandomStream rng(seed, stream_id(stream, r));
        draws[r] = rerandomize_once(ordered, ci.observed.n_1, ci.observed.n_2, ci.observed.ratio, rng);
    });
    for (const auto& d : draws) {
        if (d) {
            ci.realizations.push_back(*d);
        } else {
            ++ci.discarded;
        }
    }
    std::sort(ci.realizations.begin(), ci.realizations.end());
    std::tie(ci.lower, ci.upper) = percentile_interval(ci.realizations, level);
    if (ci.discarded > 0.05 * reps) {
        ci.warnings.push_back(std::to_string(ci.discarded) + " of " + std::to_string(reps)
                              + " rerandomizations had no arm-B deaths and were discarded");
    }
    return ci;
}

TrialData coverage_trial(const CoverageScenario& s, int trial)
{
    RandomStream rng(s.seed, stream_id(0x636f76ULL, static_cast<std::uint64_t>(trial)));
    TrialData data;
    data.design = {2 * s.n_per_arm, 1, 1};
    for (int i = 0; i < 2 * s.n_per_arm; ++i) {
        const bool arm1 = i < s.n_per_arm;
        const double t = rng.exponential(1.0 / (arm1 ? s.hazard_1 : s.hazard_2));
        const double c = s.censoring_max * rng.uniform();
        const Outcome o = t <= c ? Outcome::survival(t, true) : Outcome::survival(c, false);
        data.patients.push_back({0, i, 0, arm1 ? Arm::A : Arm::B, o});
    }
    return data;
}

CoverageResult ci_coverage(const CoverageScenario& s, int workers)
{
    if (s.trials < 1 || s.n_per_arm < 1) fail(ErrorKind::Config, "coverage study needs trials and patients");
    CoverageResult out;
    out.true_ratio = s.hazard_1 / s.hazard_2;
    out.trials = s.trials;
    // 0 = skipped, 1 = missed, 2 = covered
    std::vector<int> status(static_cast<std::size_t>(s.trials), 0);
    parallel_for(status.size(), workers, [&](std::size_t k) {
        const auto data = coverage_trial(s, static_cast<int>(k));
        try {
            const auto ci = confidence_interval(data, s.reps, s.level, s.seed, 1,
                                                stream_id(0x6369ULL, k));
            status[k] = ci.lower <= out.true_ratio && out.true_ratio <= ci.upper ? 2 : 1;
        } catch (const Error&) {
            status[k] = 0;
        }
    });
    int used = 0;
    for (int st : status) {
        if (st == 0) {
            ++out.skipped;
        } else {
            ++used;
            out.covered += st == 2;
        }
    }
    out.coverage = used ? static_cast<double>(out.covered) / used : 0;
    out.se = used ? std::sqrt(out.coverage * (1 - out.coverage) / used) : 0;
    return out;
}

}  // namespace mcrand
