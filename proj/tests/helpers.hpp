// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-side builders and a brute-force enumeration oracle. The oracle walks
// every balanced assignment directly (2^N masks per block) and shares no
// code with the library's enumeration.
#pragma once

#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mcrand/trial.hpp"

namespace testing {

using mcrand::Arm;
using mcrand::Outcome;
using mcrand::TrialData;

inline TrialData make_trial(int block_size, int num_institutions, const std::vector<int>& institutions,
                            const std::string& arms, const std::vector<Outcome>& outcomes)
{
    TrialData d;
    d.design = {block_size, static_cast<int>(institutions.size()) / block_size, num_institutions};
    for (std::size_t i = 0; i < institutions.size(); ++i) {
        mcrand::PatientRecord r;
        r.block = static_cast<int>(i) / block_size;
        r.position = static_cast<int>(i) % block_size;
        r.institution = institutions[i];
        r.arm = i < arms.size() ? (arms[i] == 'A' ? Arm::A : Arm::B) : Arm::Unassigned;
        r.outcome = outcomes[i];
        d.patients.push_back(r);
    }
    return d;
}

inline std::vector<Outcome> continuous(const std::vector<double>& ys)
{
    std::vector<Outcome> out;
    for (double y : ys) out.push_back(Outcome::continuous(y));
    return out;
}

struct OracleMoments {
    double points = 0;
    double mean_S = 0;
    double var_S = 0;
    std::vector<double> mean_n;
    std::vector<std::vector<double>> var_n;
    std::vector<double> cov_Sn;
};

struct OraclePoint {
    double s_a;
    std::vector<int> n_a;
};

//! Visits every balanced assignment of every block.
inline void for_each_assignment(int n, int k, const std::vector<int>& institutions,
                                const std::vector<double>& scores,
                                const std::function<void(const OraclePoint&)>& visit)
{
    const int p = static_cast<int>(institutions.size()) / n;
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << n); ++m) {
        if (std::popcount(m) == n / 2) masks.push_back(m);
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(p), 0);
    while (true) {
        OraclePoint pt{0.0, std::vector<int>(static_cast<std::size_t>(k), 0)};
        for (int j = 0; j < p; ++j) {
            const unsigned m = masks[pick[static_cast<std::size_t>(j)]];
            for (int i = 0; i < n; ++i) {
                if (m & (1u << i)) {
                    const auto idx = static_cast<std::size_t>(j * n + i);
                    pt.s_a += scores[idx];
                    ++pt.n_a[static_cast<std::size_t>(institutions[idx])];
                }
            }
        }
        visit(pt);
        int j = 0;
        while (j < p && ++pick[static_cast<std::size_t>(j)] == masks.size()) {
            pick[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == p) break;
    }
}

inline OracleMoments oracle_moments(int n, int k, const std::vector<int>& institutions,
                                    const std::vector<double>& scores)
{
    std::vector<OraclePoint> pts;
    for_each_assignment(n, k, institutions, scores, [&](const OraclePoint& pt) { pts.push_back(pt); });
    OracleMoments m;
    const auto ku = static_cast<std::size_t>(k);
    m.points = static_cast<double>(pts.size());
    m.mean_n.assign(ku, 0);
    m.var_n.assign(ku, std::vector<double>(ku, 0));
    m.cov_Sn.assign(ku, 0);
    for (const auto& pt : pts) {
        m.mean_S += pt.s_a;
        for (std::size_t a = 0; a < ku; ++a) m.mean_n[a] += pt.n_a[a];
    }
    m.mean_S /= m.points;
    for (auto& v : m.mean_n) v /= m.points;
    for (const auto& pt : pts) {
        const double ds = pt.s_a - m.mean_S;
        m.var_S += ds * ds;
        for (std::size_t a = 0; a < ku; ++a) {
            const double da = pt.n_a[a] - m.mean_n[a];
            m.cov_Sn[a] += ds * da;
            for (std::size_t b = 0; b < ku; ++b) m.var_n[a][b] += da * (pt.n_a[b] - m.mean_n[b]);
        }
    }
    m.var_S /= m.points;
    for (auto& v : m.cov_Sn) v /= m.points;
    for (auto& row : m.var_n) {
        for (auto& v : row) v /= m.points;
    }
    return m;
}

struct OracleConditional {
    double points = 0;
    double mean = 0;
    double var = 0;
    double p_two_sided = 0;
};

//! Exact conditional law of S_A given institution totals n_a.
inline OracleConditional oracle_conditional(int n, int k, const std::vector<int>& institutions,
                                            const std::vector<double>& scores,
                                            const std::vector<int>& n_a, double observed)
{
    std::vector<double> vals;
    for_each_assignment(n, k, institutions, scores, [&](const OraclePoint& pt) {
        if (pt.n_a == n_a) vals.push_back(pt.s_a);
    });
    OracleConditional c;
    c.points = static_cast<double>(vals.size());
    for (double v : vals) c.mean += v;
    c.mean /= c.points;
    for (double v : vals) c.var += (v - c.mean) * (v - c.mean);
    c.var /= c.points;
    const double dev = std::fabs(observed - c.mean);
    const double tol = 1e-9 * (1 + std::fabs(observed) + dev);
    double hits = 0;
    for (double v : vals) {
        if (std::fabs(v - c.mean) >= dev - tol) hits += 1;
    }
    c.p_two_sided = hits / c.points;
    return c;
}

inline double rel_err(double a, double b)
{
    return std::fabs(a - b) / std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace testing
