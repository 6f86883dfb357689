// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mcrand/conditional.hpp"
#include "mcrand/scores.hpp"
#include "mcrand/test_result.hpp"
#include "mcrand/trial.hpp"

namespace mcrand {

//! Final O'Brien-Fleming constant for L = 4 looks at one-sided 0.025.
inline constexpr double kObfFinal4 = 2.024;

//! c_final * sqrt(L / l). Throws Error(InvalidArgument) unless 1 <= l <= L.
double obf_boundary(int look, int num_looks, double c_final = kObfFinal4);

enum class LookDecision { Reject, Continue, AcceptAtFinal };

const char* to_string(LookDecision d) noexcept;
LookDecision parse_look_decision(std::string_view name);

struct GstPlan {
    int num_looks = 4;
    int max_blocks = 0;
    std::vector<int> look_blocks;  //!< cumulative blocks P_1 < ... < P_L = P_max
    std::vector<double> boundaries;
    double alpha = 0.025;
    int sided = 1;
    //! +1 rejects for large S_A (A better), -1 for small. One-sided only.
    int direction = 1;
    double c_final = kObfFinal4;

    //! Throws Error(Config) when the schedule or boundaries are malformed.
    void check() const;

    double information(int look) const;
};

/*!
 * O'Brien-Fleming plan with looks at floor(l * P_max / L) blocks unless
 * `look_blocks` is given. `c_final` may be omitted only for L = 4 at
 * one-sided 0.025 (two-sided 0.05), where it defaults to 2.024.
 */
GstPlan obrien_fleming_plan(int num_looks, int max_blocks, double alpha, int sided,
                            std::optional<double> c_final = std::nullopt,
                            std::vector<int> look_blocks = {});

struct GstLook {
    int look = 0;    //!< 1-based
    int blocks = 0;  //!< P_l
    double information = 0;
    double statistic = 0;  //!< T(t_l)
    double boundary = 0;
    LookDecision decision = LookDecision::Continue;
    TestResult result;
};

struct GstOptions {
    InferenceMode mode = InferenceMode::Conditional;
    ConditioningOptions conditioning;
};

//! Test on exactly P_l complete blocks, conditioning on the institution
//! counts accumulated through block P_l.
GstLook interim_test(const TrialData& cumulative, const ScoreVector& scores,
                     const GstPlan& plan, int look, const GstOptions& options = {});

struct GstRun {
    std::vector<GstLook> looks;
    std::optional<int> stopped_at;  //!< look index of the first rejection
    bool finished = false;          //!< rejected, or the final look was reached

    bool rejected() const { return stopped_at.has_value(); }
};

/*!
 * Evaluates every look whose blocks are available, stopping at the first
 * rejection. Scores are computed block by block on the available data, so
 * prefixes see the same scores a full run would.
 */
GstRun monitor_sequential(const TrialData& data, ScoreKind kind, const GstPlan& plan,
                          const GstOptions& options = {});
GstRun monitor_sequential(const TrialData& data, const ScoreVector& scores, const GstPlan& plan,
                          const GstOptions& options = {});

//! As monitor_sequential, but a stream shorter than P_max that has not
//! rejected raises Error(InvalidData).
GstRun run_sequential(const TrialData& data, ScoreKind kind, const GstPlan& plan,
                      const GstOptions& options = {});
GstRun run_sequential(const TrialData& data, const ScoreVector& scores, const GstPlan& plan,
                      const GstOptions& options = {});

}  // namespace mcrand
