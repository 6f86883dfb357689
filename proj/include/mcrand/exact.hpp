// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "mcrand/scores.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int k);

//! Per-block patient counts N_jk (row-major P x K) with block size N.
struct InstitutionLayout {
    int block_size = 0;
    int num_blocks = 0;
    int num_institutions = 0;
    std::vector<int> counts;

    int at(int j, int k) const
    {
        return counts[static_cast<std::size_t>(j * num_institutions + k)];
    }

    static InstitutionLayout from(const CountTable& t);
    static InstitutionLayout from(const TrialData& data);
};

//! Number of balanced assignments: sum over per-block count vectors with
//! sum_k n_kA^j = N/2 of prod_j prod_k C(N_jk, n_kA^j).
BigInt sample_space_size(const InstitutionLayout& layout);

//! Number of balanced assignments whose institution totals equal `n_a`.
//! Throws Error(InvalidData) if the totals cannot sum to NP/2.
BigInt conditional_space_size(const InstitutionLayout& layout, std::span<const int> n_a);

//! Conditional space size for every attainable vector of institution
//! totals. The values sum to sample_space_size().
std::map<std::vector<int>, BigInt> conditional_space_sizes(const InstitutionLayout& layout);

//! All N/2-subsets of {0..N-1} in lexicographic order, as bit masks.
std::vector<std::uint64_t> balanced_subsets(int block_size);

struct EnumerationOptions {
    //! Restrict to assignments with these institution totals. When empty
    //! the distribution is unconditional.
    std::optional<std::vector<int>> condition_on;
    BigInt cap = 10'000'000;
    bool keep_distribution = true;
};

struct EnumerationResult {
    BigInt total_points;
    BigInt conditional_points;  //!< equals total_points when unconditional
    bool conditional = false;
    //! S_A value (rounded to 1e-9) -> probability.
    std::map<double, double> distribution;
    double exact_mean = 0;
    double exact_var = 0;
    //! Present when every patient in the data has an arm.
    std::optional<double> observed;
    //! P(|S - mean| >= |S_obs - mean|) under the (conditional) law.
    std::optional<double> p_two_sided;
    //! P(S >= S_obs).
    std::optional<double> p_upper;
};

/*!
 * Exhaustive randomization distribution of S_A over all balanced block
 * assignments, optionally restricted to fixed institution totals. Refuses
 * with Error(Capacity) when prod_j C(N, N/2) exceeds the cap.
 */
EnumerationResult exact_distribution(const TrialData& data, const ScoreVector& scores,
                                     const EnumerationOptions& options = {});

//! Exact first and second moments of (S_A, n_A) by enumeration.
struct ExactJointMoments {
    std::uint64_t points = 0;
    double mean_S = 0;
    double var_S = 0;
    Eigen::VectorXd mean_n;
    Eigen::MatrixXd var_n;
    Eigen::VectorXd cov_Sn;
};

ExactJointMoments exact_joint_moments(const TrialData& data, const ScoreVector& scores,
                                      const BigInt& cap = 10'000'000);

}  // namespace mcrand
