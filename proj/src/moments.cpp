// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mcrand/error.hpp"
#include "mcrand/stats.hpp"

namespace mcrand {

const char* to_string(InferenceMode mode) noexcept
{
    return mode == InferenceMode::Conditional ? "conditional" : "unconditional";
}

InferenceMode parse_inference_mode(std::string_view name)
{
    if (name == "conditional") return InferenceMode::Conditional;
    if (name == "unconditional") return InferenceMode::Unconditional;
    fail(ErrorKind::InvalidArgument, "unknown inference mode '" + std::string(name) + "'");
}

TestResult finish_test(InferenceMode mode, double statistic, double mean, double variance,
                       double reference_variance, double effect_d)
{
    TestResult r;
    r.mode = mode;
    r.statistic = statistic;
    r.mean = mean;
    r.variance = variance;
    r.effect_d = effect_d;

    const double reference = std::max(reference_variance, 0.0);
    if (variance <= 1e-12 * reference || variance <= 0) {
        const double tol = 1e-8 * (1.0 + std::fabs(mean) + std::sqrt(reference));
        if (std::fabs(statistic - mean) > tol) {
            fail(ErrorKind::Numeric,
                 "zero randomization variance but the statistic differs from its mean");
        }
        r.variance = 0;
        r.degenerate = true;
        r.z = 0;
        r.p_one_sided = 1;
        r.p_two_sided = 1;
        return r;
    }
    r.z = (statistic - mean) / std::sqrt(variance);
    r.p_one_sided = normal_sf(r.z);
    r.p_two_sided = two_sided_p(r.z);
    return r;
}

DeltaMoments delta_moments(int block_size)
{
    if (block_size < 2 || block_size % 2 != 0) {
        fail(ErrorKind::InvalidDesign,
             "block size must be a positive even integer, got " + std::to_string(block_size));
    }
    return {0.5, 0.25, -1.0 / (4.0 * (block_size - 1))};
}

namespace {

// N / (4 (N - 1)): the common factor of every within-block second moment.
double moment_factor(std::size_t n)
{
    const auto nn = static_cast<double>(n);
    return nn / (4.0 * (nn - 1.0));
}

double block_mean(std::span<const double> y)
{
    double s = 0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

}  // namespace

ScoreMoments block_score_moments(std::span<const double> y)
{
    if (y.size() < 2) {
        fail(ErrorKind::InvalidDesign, "a block needs at least two patients");
    }
    const double ybar = block_mean(y);
    double ss = 0;
    for (double v : y) ss += (v - ybar) * (v - ybar);
    return {0.5 * static_cast<double>(y.size()) * ybar, moment_factor(y.size()) * ss};
}

BlockMoments block_joint_moments(std::span<const double> y, std::span<const int> institutions,
                                 int num_institutions)
{
    if (y.size() != institutions.size()) {
        fail(ErrorKind::InvalidArgument, "scores and institution labels differ in length");
    }
    if (num_institutions < 1) {
        fail(ErrorKind::InvalidArgument, "need at least one institution");
    }
    const auto sm = block_score_moments(y);
    const auto n = static_cast<double>(y.size());
    const double c = moment_factor(y.size());
    const double ybar = block_mean(y);

    BlockMoments b;
    b.mean_S = sm.mean_S;
    b.var_S = sm.var_S;
    b.total_y = n * ybar;
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_institutions);
    b.cov_Sn = Eigen::VectorXd::Zero(num_institutions);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int k = institutions[i];
        if (k < 0 || k >= num_institutions) {
            fail(ErrorKind::InvalidData, "institution index " + std::to_string(k + 1)
                                             + " outside 1.." + std::to_string(num_institutions));
        }
        counts(k) += 1;
        b.cov_Sn(k) += c * (y[i] - ybar);
    }
    b.mean_n = 0.5 * counts;
    b.var_n = c * (Eigen::MatrixXd(counts.asDiagonal()) - counts * counts.transpose() / n);
    return b;
}

JointMoments::JointMoments(int k)
    : num_institutions(k),
      mean_n(Eigen::VectorXd::Zero(k)),
      var_n(Eigen::MatrixXd::Zero(k, k)),
      cov_Sn(Eigen::VectorXd::Zero(k)),
      institution_totals(Eigen::VectorXd::Zero(k))
{
}

void JointMoments::add(const BlockMoments& b)
{
    if (b.cov_Sn.size() != num_institutions) {
        fail(ErrorKind::InvalidArgument,
             "block moments have " + std::to_string(b.cov_Sn.size())
                 + " institutions; aggregate has " + std::to_string(num_institutions));
    }
    ++num_blocks;
    mean_S += b.mean_S;
    var_S += b.var_S;
    total_S += b.total_y;
    mean_n += b.mean_n;
    var_n += b.var_n;
    cov_Sn += b.cov_Sn;
    institution_totals += 2.0 * b.mean_n;
}

void JointMoments::add_block(std::span<const double> y, std::span<const int> institutions)
{
    if (y.size() != institutions.size() || y.size() < 2) {
        fail(ErrorKind::InvalidArgument, "malformed block");
    }
    const std::size_t n = y.size();
    const double c = moment_factor(n);
    const double ybar = block_mean(y);

    // Distinct institutions in the block with their patient counts.
    std::vector<std::pair<int, int>> present;
    present.reserve(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int k = institutions[i];
        if (k < 0 || k >= num_institutions) {
            fail(ErrorKind::InvalidData, "institution index " + std::to_string(k + 1)
                                             + " outside 1.." + std::to_string(num_institutions));
        }
        const double r = y[i] - ybar;
        ss += r * r;
        cov_Sn(k) += c * r;
        auto it = std::find_if(present.begin(), present.end(),
                               [k](const auto& e) { return e.first == k; });
        if (it == present.end()) {
            present.emplace_back(k, 1);
        } else {
            ++it->second;
        }
    }
    const auto nn = static_cast<double>(n);
    for (const auto& [ka, na] : present) {
        mean_n(ka) += 0.5 * na;
        institution_totals(ka) += na;
        var_n(ka, ka) += c * na;
        for (const auto& [kb, nb] : present) {
            var_n(ka, kb) -= c * na * nb / nn;
        }
    }
    ++num_blocks;
    mean_S += 0.5 * nn * ybar;
    var_S += c * ss;
    total_S += nn * ybar;
}

JointMoments aggregate(std::span<const BlockMoments> blocks)
{
    if (blocks.empty()) {
        fail(ErrorKind::InvalidArgument, "aggregate needs at least one block");
    }
    JointMoments jm(static_cast<int>(blocks.front().cov_Sn.size()));
    for (const auto& b : blocks) {
        jm.add(b);
    }
    jm.blocks.assign(blocks.begin(), blocks.end());
    return jm;
}

JointMoments joint_moments(const TrialData& data, const ScoreVector& scores)
{
    const auto& d = data.design;
    d.check();
    if (scores.values.size() != data.patients.size() || scores.block_size != d.block_size
        || data.patients.size() != static_cast<std::size_t>(d.num_patients())) {
        fail(ErrorKind::InvalidArgument, "scores do not match the trial layout");
    }
    JointMoments jm(d.num_institutions);
    std::vector<int> labels(static_cast<std::size_t>(d.block_size));
    for (int j = 0; j < d.num_blocks; ++j) {
        const auto recs = data.block(j);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            labels[i] = recs[i].institution;
        }
        jm.add_block(scores.block(j), labels);
    }
    return jm;
}

double arm_a_total(const TrialData& data, const ScoreVector& scores)
{
    double s = 0;
    for (std::size_t i = 0; i < data.patients.size(); ++i) {
        if (data.patients[i].arm == Arm::A) {
            s += scores.values[i];
        }
    }
    return s;
}

double effect_estimate(double s_a, double total_s, int block_size, int num_blocks)
{
    return 2.0 / (static_cast<double>(block_size) * num_blocks) * (2.0 * s_a - total_s);
}

TestResult unconditional_test(const TrialData& data, const ScoreVector& scores)
{
    tabulate_counts(data);  // balance and completeness
    const auto jm = joint_moments(data, scores);
    const double s_a = arm_a_total(data, scores);
    auto r = finish_test(InferenceMode::Unconditional, s_a, jm.mean_S, jm.var_S, jm.var_S,
                         effect_estimate(s_a, jm.total_S, data.design.block_size,
                                         data.design.num_blocks));
    r.unconditional_mean = jm.mean_S;
    r.unconditional_variance = jm.var_S;
    return r;
}

}  // namespace mcrand
