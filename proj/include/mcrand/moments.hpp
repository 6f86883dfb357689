// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcrand/scores.hpp"
#include "mcrand/test_result.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

//! Moments of the assignment indicator delta_ij within a balanced block.
struct DeltaMoments {
    double mean = 0;
    double variance = 0;
    double covariance = 0;  //!< between two distinct patients of a block
};

DeltaMoments delta_moments(int block_size);

struct ScoreMoments {
    double mean_S = 0;
    double var_S = 0;
};

//! Randomization mean and variance of S_A^j for one block of scores.
ScoreMoments block_score_moments(std::span<const double> y);

//! Joint randomization moments of (S_A^j, n_A^j) for one block.
struct BlockMoments {
    double mean_S = 0;
    double var_S = 0;
    double total_y = 0;
    Eigen::VectorXd mean_n;  //!< N_j / 2
    Eigen::MatrixXd var_n;   //!< K x K, rows sum to zero
    Eigen::VectorXd cov_Sn;  //!< K entries summing to zero
};

//! `institutions` holds zero-based indices in [0, K).
BlockMoments block_joint_moments(std::span<const double> y, std::span<const int> institutions,
                                 int num_institutions);

//! Moments of (S_A, n_A) summed over independent blocks.
struct JointMoments {
    int num_institutions = 0;
    int num_blocks = 0;
    double mean_S = 0;
    double var_S = 0;
    double total_S = 0;  //!< S, the grand score total
    Eigen::VectorXd mean_n;
    Eigen::MatrixXd var_n;
    Eigen::VectorXd cov_Sn;
    Eigen::VectorXd institution_totals;  //!< N_.k
    //! Per-block terms; filled by aggregate() only.
    std::vector<BlockMoments> blocks;

    explicit JointMoments(int k = 0);

    void add(const BlockMoments& b);

    //! Accumulates one block directly from scores and labels, touching only
    //! the institutions present in the block.
    void add_block(std::span<const double> y, std::span<const int> institutions);
};

JointMoments aggregate(std::span<const BlockMoments> blocks);

//! Aggregated moments for a whole trial (fast path).
JointMoments joint_moments(const TrialData& data, const ScoreVector& scores);

//! S_A for the trial's actual assignment.
double arm_a_total(const TrialData& data, const ScoreVector& scores);

double effect_estimate(double s_a, double total_s, int block_size, int num_blocks);

//! Unconditional (permuted-block) randomization test. Requires a balanced,
//! complete trial.
TestResult unconditional_test(const TrialData& data, const ScoreVector& scores);

}  // namespace mcrand
