// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/conditional.hpp"

#include <cmath>
#include <string>

#include "mcrand/error.hpp"
#include "mcrand/linalg.hpp"

namespace mcrand {

ConditionalMoments conditional_moments(const JointMoments& moments,
                                       std::span<const double> observed_n_a,
                                       const ConditioningOptions& options)
{
    const int k = moments.num_institutions;
    if (static_cast<int>(observed_n_a.size()) != k) {
        fail(ErrorKind::InvalidArgument, "expected " + std::to_string(k)
                                             + " institution counts, got "
                                             + std::to_string(observed_n_a.size()));
    }
    double sum_a = 0;
    double sum_total = 0;
    for (int i = 0; i < k; ++i) {
        const double n_a = observed_n_a[static_cast<std::size_t>(i)];
        const double total = moments.institution_totals(i);
        if (n_a < 0 || n_a > total) {
            fail(ErrorKind::InvalidData, "inconsistent conditioning: institution "
                                             + std::to_string(i + 1) + " has n_A = "
                                             + std::to_string(n_a) + " outside 0.."
                                             + std::to_string(total));
        }
        sum_a += n_a;
        sum_total += total;
    }
    if (std::fabs(2.0 * sum_a - sum_total) > 1e-9 * (1.0 + sum_total)) {
        fail(ErrorKind::InvalidData,
             "inconsistent conditioning: arm-A counts do not sum to half the patients");
    }

    ConditionalMoments out;
    out.uncond_mean = moments.mean_S;
    out.uncond_var = moments.var_S;
    out.deviation = Eigen::Map<const Eigen::VectorXd>(observed_n_a.data(), k) - moments.mean_n;

    const auto pinv = pseudo_inverse(moments.var_n, options.pinv_tolerance);
    out.rank_var_n = pinv.rank;

    // The deviation must lie in the column space of Var(n_A); otherwise the
    // observed counts are impossible under the design.
    const Eigen::VectorXd projected = moments.var_n * (pinv.matrix * out.deviation);
    const double residual = (out.deviation - projected).norm();
    if (residual > options.column_space_tolerance * std::max(1.0, out.deviation.norm())) {
        fail(ErrorKind::InvalidData,
             "inconsistent conditioning: institution counts are not attainable under the "
             "permuted-block design");
    }

    const Eigen::VectorXd weights = pinv.matrix * moments.cov_Sn;
    out.cond_mean = moments.mean_S + weights.dot(out.deviation);
    double var = moments.var_S - weights.dot(moments.cov_Sn);
    if (var < 0) {
        if (var < -options.negative_variance_tolerance * moments.var_S) {
            fail(ErrorKind::Numeric, "conditional variance is negative ("
                                         + std::to_string(var) + ")");
        }
        var = 0;
    }
    out.cond_var = var;
    return out;
}

TestResult conditional_test(const TrialData& data, const ScoreVector& scores,
                            const ConditioningOptions& options)
{
    const auto counts = tabulate_counts(data);
    const auto jm = joint_moments(data, scores);
    std::vector<double> n_a(counts.institution_a.begin(), counts.institution_a.end());
    const auto cm = conditional_moments(jm, n_a, options);
    const double s_a = arm_a_total(data, scores);
    auto r = finish_test(InferenceMode::Conditional, s_a, cm.cond_mean, cm.cond_var, cm.uncond_var,
                         effect_estimate(s_a, jm.total_S, data.design.block_size,
                                         data.design.num_blocks));
    r.unconditional_mean = cm.uncond_mean;
    r.unconditional_variance = cm.uncond_var;
    r.rank_var_n = cm.rank_var_n;
    return r;
}

TestResult conditional_test(const TrialData& data, ScoreKind kind,
                            const ConditioningOptions& options)
{
    return conditional_test(data, compute_scores(data, kind), options);
}

TestResult randomization_test(const TrialData& data, const ScoreVector& scores,
                              InferenceMode mode, const ConditioningOptions& options)
{
    return mode == InferenceMode::Conditional ? conditional_test(data, scores, options)
                                              : unconditional_test(data, scores);
}

}  // namespace mcrand
