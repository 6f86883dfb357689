// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/exact.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "mcrand/error.hpp"
#include "mcrand/moments.hpp"

namespace mcrand {

BigInt binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

InstitutionLayout InstitutionLayout::from(const CountTable& t)
{
    return {t.block_size, t.num_blocks, t.num_institutions, t.block_institution};
}

InstitutionLayout InstitutionLayout::from(const TrialData& data)
{
    const auto& d = data.design;
    d.check();
    if (data.patients.size() != static_cast<std::size_t>(d.num_patients())) {
        fail(ErrorKind::InvalidData, "expected " + std::to_string(d.num_patients())
                                         + " patients, found "
                                         + std::to_string(data.patients.size()));
    }
    InstitutionLayout l{d.block_size, d.num_blocks, d.num_institutions, {}};
    l.counts.assign(static_cast<std::size_t>(d.num_blocks * d.num_institutions), 0);
    for (const auto& p : data.patients) {
        if (p.institution < 0 || p.institution >= d.num_institutions) {
            fail(ErrorKind::InvalidData, "institution index out of range");
        }
        ++l.counts[static_cast<std::size_t>(p.block * d.num_institutions + p.institution)];
    }
    return l;
}

namespace {

// One admissible per-block allocation: how many arm-A patients each present
// institution receives, with its multiplicity prod_k C(N_jk, a_k).
struct Allocation {
    std::vector<std::pair<int, int>> take;  // (institution, count)
    BigInt weight;
};

std::vector<Allocation> block_allocations(const InstitutionLayout& l, int j)
{
    std::vector<std::pair<int, int>> present;
    for (int k = 0; k < l.num_institutions; ++k) {
        if (l.at(j, k) > 0) present.emplace_back(k, l.at(j, k));
    }
    std::vector<Allocation> out;
    Allocation cur;
    cur.weight = 1;
    const int half = l.block_size / 2;
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
        if (idx == present.size()) {
            if (left == 0) out.push_back(cur);
            return;
        }
        const auto [k, n] = present[idx];
        for (int a = 0; a <= std::min(n, left); ++a) {
            const BigInt saved = cur.weight;
            cur.weight *= binomial(n, a);
            cur.take.emplace_back(k, a);
            rec(idx + 1, left - a);
            cur.take.pop_back();
            cur.weight = saved;
        }
    };
    rec(0, half);
    return out;
}

void check_layout(const InstitutionLayout& l)
{
    TrialDesign{l.block_size, l.num_blocks, l.num_institutions}.check();
    if (l.counts.size() != static_cast<std::size_t>(l.num_blocks * l.num_institutions)) {
        fail(ErrorKind::InvalidArgument, "count table has the wrong shape");
    }
    for (int j = 0; j < l.num_blocks; ++j) {
        int s = 0;
        for (int k = 0; k < l.num_institutions; ++k) s += l.at(j, k);
        if (s != l.block_size) {
            fail(ErrorKind::InvalidData, "block " + std::to_string(j + 1) + " has "
                                             + std::to_string(s) + " patients; expected "
                                             + std::to_string(l.block_size));
        }
    }
}

// Dynamic program over blocks keyed by running institution totals. With a
// target, states that overshoot it or can no longer reach it are dropped.
std::map<std::vector<int>, BigInt> totals_dp(const InstitutionLayout& l,
                                             const std::vector<int>* target)
{
    const int K = l.num_institutions;
    std::vector<int> remaining(static_cast<std::size_t>(K), 0);
    for (int j = 0; j < l.num_blocks; ++j) {
        for (int k = 0; k < K; ++k) remaining[static_cast<std::size_t>(k)] += l.at(j, k);
    }
    std::map<std::vector<int>, BigInt> states;
    states[std::vector<int>(static_cast<std::size_t>(K), 0)] = 1;
    for (int j = 0; j < l.num_blocks; ++j) {
        for (int k = 0; k < K; ++k) remaining[static_cast<std::size_t>(k)] -= l.at(j, k);
        const auto allocs = block_allocations(l, j);
        std::map<std::vector<int>, BigInt> next;
        for (const auto& [state, count] : states) {
            for (const auto& a : allocs) {
                auto s = state;
                for (const auto& [k, c] : a.take) s[static_cast<std::size_t>(k)] += c;
                if (target) {
                    bool ok = true;
                    for (int k = 0; k < K && ok; ++k) {
                        const auto kk = static_cast<std::size_t>(k);
                        ok = s[kk] <= (*target)[kk] && s[kk] + remaining[kk] >= (*target)[kk];
                    }
                    if (!ok) continue;
                }
                next[s] += count * a.weight;
            }
        }
        states = std::move(next);
    }
    return states;
}

}  // namespace

BigInt sample_space_size(const InstitutionLayout& layout)
{
    check_layout(layout);
    BigInt total = 1;
    for (int j = 0; j < layout.num_blocks; ++j) {
        BigInt w = 0;
        for (const auto& a : block_allocations(layout, j)) w += a.weight;
        total *= w;
    }
    return total;
}

BigInt conditional_space_size(const InstitutionLayout& layout, std::span<const int> n_a)
{
    check_layout(layout);
    if (n_a.size() != static_cast<std::size_t>(layout.num_institutions)) {
        fail(ErrorKind::InvalidArgument, "conditioning vector has the wrong length");
    }
    long sum = 0;
    for (int v : n_a) sum += v;
    if (2 * sum != static_cast<long>(layout.block_size) * layout.num_blocks) {
        fail(ErrorKind::InvalidData, "inconsistent conditioning: institution totals in arm A sum to "
                                         + std::to_string(sum) + ", expected "
                                         + std::to_string(layout.block_size * layout.num_blocks / 2));
    }
    const std::vector<int> target(n_a.begin(), n_a.end());
    const auto states = totals_dp(layout, &target);
    const auto it = states.find(target);
    return it == states.end() ? BigInt(0) : it->second;
}

std::map<std::vector<int>, BigInt> conditional_space_sizes(const InstitutionLayout& layout)
{
    check_layout(layout);
    return totals_dp(layout, nullptr);
}

std::vector<std::uint64_t> balanced_subsets(int block_size)
{
    if (block_size < 2 || block_size % 2 != 0 || block_size > 62) {
        fail(ErrorKind::InvalidDesign, "enumeration needs an even block size in 2..62");
    }
    std::vector<std::uint64_t> out;
    std::vector<int> idx(static_cast<std::size_t>(block_size / 2));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    const int r = block_size / 2;
    while (true) {
        std::uint64_t mask = 0;
        for (int i : idx) mask |= std::uint64_t{1} << i;
        out.push_back(mask);
        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == block_size - r + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int m = i + 1; m < r; ++m) {
            idx[static_cast<std::size_t>(m)] = idx[static_cast<std::size_t>(m - 1)] + 1;
        }
    }
    return out;
}

namespace {

struct Option {
    double s;
    std::vector<int> n;  // arm-A count per institution
};

struct Enumerator {
    int K;
    std::vector<std::vector<Option>> blocks;
    std::vector<std::vector<int>> remaining;  // patients per institution after block j
    const std::vector<int>* target = nullptr;

    Enumerator(const TrialData& data, const ScoreVector& scores, const BigInt& cap)
        : K(data.design.num_institutions)
    {
        const auto& d = data.design;
        d.check();
        if (scores.values.size() != static_cast<std::size_t>(d.num_patients())
            || data.patients.size() != scores.values.size()) {
            fail(ErrorKind::InvalidArgument, "scores do not match the trial layout");
        }
        const BigInt per_block = binomial(d.block_size, d.block_size / 2);
        BigInt size = 1;
        for (int j = 0; j < d.num_blocks; ++j) size *= per_block;
        if (size > cap) {
            fail(ErrorKind::Capacity, "enumeration needs " + size.str()
                                          + " assignments, above the cap of " + cap.str());
        }
        const auto subsets = balanced_subsets(d.block_size);
        remaining.assign(static_cast<std::size_t>(d.num_blocks),
                         std::vector<int>(static_cast<std::size_t>(K), 0));
        for (int j = d.num_blocks - 1; j >= 0; --j) {
            if (j + 1 < d.num_blocks) remaining[static_cast<std::size_t>(j)] = remaining[static_cast<std::size_t>(j + 1)];
            if (j + 1 < d.num_blocks) {
                for (const auto& p : data.block(j + 1)) {
                    ++remaining[static_cast<std::size_t>(j)][static_cast<std::size_t>(p.institution)];
                }
            }
        }
        blocks.resize(static_cast<std::size_t>(d.num_blocks));
        for (int j = 0; j < d.num_blocks; ++j) {
            const auto recs = data.block(j);
            const auto y = scores.block(j);
            for (auto mask : subsets) {
                Option o{0.0, std::vector<int>(static_cast<std::size_t>(K), 0)};
                for (std::size_t i = 0; i < recs.size(); ++i) {
                    if (mask >> i & 1U) {
                        o.s += y[i];
                        ++o.n[static_cast<std::size_t>(recs[i].institution)];
                    }
                }
                blocks[static_cast<std::size_t>(j)].push_back(std::move(o));
            }
        }
    }

    // Visits each admissible assignment as (S_A, n_A).
    template <class F>
    void run(F&& visit) const
    {
        std::vector<int> n(static_cast<std::size_t>(K), 0);
        recurse(0, 0.0, n, visit);
    }

    template <class F>
    void recurse(std::size_t j, double s, std::vector<int>& n, F& visit) const
    {
        if (j == blocks.size()) {
            visit(s, n);
            return;
        }
        for (const auto& o : blocks[j]) {
            for (int k = 0; k < K; ++k) n[static_cast<std::size_t>(k)] += o.n[static_cast<std::size_t>(k)];
            bool ok = true;
            if (target) {
                for (int k = 0; k < K && ok; ++k) {
                    const auto kk = static_cast<std::size_t>(k);
                    ok = n[kk] <= (*target)[kk] && n[kk] + remaining[j][kk] >= (*target)[kk];
                }
            }
            if (ok) recurse(j + 1, s + o.s, n, visit);
            for (int k = 0; k < K; ++k) n[static_cast<std::size_t>(k)] -= o.n[static_cast<std::size_t>(k)];
        }
    }
};

double round_key(double s)
{
    return std::round(s * 1e9) / 1e9;
}

bool fully_assigned(const TrialData& data)
{
    for (const auto& p : data.patients) {
        if (p.arm == Arm::Unassigned) return false;
    }
    return true;
}

}  // namespace

EnumerationResult exact_distribution(const TrialData& data, const ScoreVector& scores,
                                     const EnumerationOptions& options)
{
    Enumerator en(data, scores, options.cap);
    const auto layout = InstitutionLayout::from(data);

    EnumerationResult r;
    r.total_points = sample_space_size(layout);
    r.conditional = options.condition_on.has_value();
    if (r.conditional) {
        const auto& c = *options.condition_on;
        r.conditional_points = conditional_space_size(layout, c);
        if (r.conditional_points == 0) {
            fail(ErrorKind::InvalidData, "inconsistent conditioning: no balanced assignment has "
                                         "these institution totals");
        }
        en.target = &c;
    }

    // Shift by the unconditional mean to keep the sums well conditioned.
    const double shift = joint_moments(data, scores).mean_S;
    std::uint64_t count = 0;
    long double sum = 0;
    long double sumsq = 0;
    std::map<double, std::uint64_t> freq;
    en.run([&](double s, const std::vector<int>&) {
        ++count;
        const long double d = s - shift;
        sum += d;
        sumsq += d * d;
        if (options.keep_distribution) ++freq[round_key(s)];
    });
    if (!r.conditional) r.conditional_points = count;
    if (BigInt(count) != r.conditional_points) {
        fail(ErrorKind::Numeric, "enumeration visited " + std::to_string(count)
                                     + " assignments; counting formula gives "
                                     + r.conditional_points.str());
    }
    const long double m = sum / count;
    r.exact_mean = static_cast<double>(shift + m);
    r.exact_var = static_cast<double>(std::max(0.0L, sumsq / count - m * m));
    for (const auto& [key, c] : freq) {
        r.distribution[key] = static_cast<double>(c) / static_cast<double>(count);
    }

    if (fully_assigned(data)) {
        const double obs = arm_a_total(data, scores);
        r.observed = obs;
        const double dev = std::fabs(obs - r.exact_mean);
        const double tol = 1e-9 * (1.0 + std::fabs(obs) + dev);
        std::uint64_t extreme = 0;
        std::uint64_t upper = 0;
        en.run([&](double s, const std::vector<int>&) {
            if (std::fabs(s - r.exact_mean) >= dev - tol) ++extreme;
            if (s >= obs - tol) ++upper;
        });
        r.p_two_sided = static_cast<double>(extreme) / static_cast<double>(count);
        r.p_upper = static_cast<double>(upper) / static_cast<double>(count);
    }
    return r;
}

ExactJointMoments exact_joint_moments(const TrialData& data, const ScoreVector& scores,
                                      const BigInt& cap)
{
    Enumerator en(data, scores, cap);
    const int K = data.design.num_institutions;
    ExactJointMoments r;
    long double sum_s = 0;
    std::vector<long double> sum_n(static_cast<std::size_t>(K), 0);
    en.run([&](double s, const std::vector<int>& n) {
        ++r.points;
        sum_s += s;
        for (int k = 0; k < K; ++k) sum_n[static_cast<std::size_t>(k)] += n[static_cast<std::size_t>(k)];
    });
    const auto pts = static_cast<long double>(r.points);
    r.mean_S = static_cast<double>(sum_s / pts);
    r.mean_n = Eigen::VectorXd(K);
    for (int k = 0; k < K; ++k) r.mean_n(k) = static_cast<double>(sum_n[static_cast<std::size_t>(k)] / pts);

    // Second pass on centred values.
    long double ss = 0;
    std::vector<long double> sn(static_cast<std::size_t>(K), 0);
    std::vector<long double> nn(static_cast<std::size_t>(K * K), 0);
    en.run([&](double s, const std::vector<int>& n) {
        const long double ds = s - r.mean_S;
        ss += ds * ds;
        for (int a = 0; a < K; ++a) {
            const long double da = n[static_cast<std::size_t>(a)] - r.mean_n(a);
            sn[static_cast<std::size_t>(a)] += ds * da;
            for (int b = 0; b < K; ++b) {
                nn[static_cast<std::size_t>(a * K + b)] += da * (n[static_cast<std::size_t>(b)] - r.mean_n(b));
            }
        }
    });
    r.var_S = static_cast<double>(ss / pts);
    r.cov_Sn = Eigen::VectorXd(K);
    r.var_n = Eigen::MatrixXd(K, K);
    for (int a = 0; a < K; ++a) {
        r.cov_Sn(a) = static_cast<double>(sn[static_cast<std::size_t>(a)] / pts);
        for (int b = 0; b < K; ++b) r.var_n(a, b) = static_cast<double>(nn[static_cast<std::size_t>(a * K + b)] / pts);
    }
    return r;
}

}  // namespace mcrand
