#pragma once

#include "mdpaccel/bellman.hpp"
#include "mdpaccel/schedule.hpp"
#include "mdpaccel/types.hpp"

#include <cstdint>
#include <optional>

namespace mdpaccel {

enum class SolveStatus { Converged, MaxIters, Diverged };

const char* to_string(SolveStatus status);

/// Halting policy shared by every solver: target accuracy epsilon (converted
/// to a successive-difference threshold), an iteration cap, and the blow-up
/// factor for the divergence detector.
struct StopRule {
    double epsilon = 1.0;
    int max_iters = 100000;
    double divergence_factor = 1e8;

    /// Throws std::invalid_argument unless epsilon > 0 and max_iters >= 1.
    void validate() const;
};

/// Optional extras for a solver run. The oracle pointer turns on the
/// error-to-oracle trace (oracle solves are cubic and not always wanted);
/// record_iterates keeps every iterate and every greedy action set, which the
/// certificate machinery needs.
struct SolveOptions {
    bool record_iterates = false;
    const Vector* oracle = nullptr;
};

/// Outcome of a solver run.
///
/// Iterations count operator applications, including the internally computed
/// warm start v1 = F(v0) of the two-step schemes. diff_trace[s-1] holds
/// ||v_s - v_{s-1}||_inf; error_trace[s] holds ||v_s - oracle||_inf (present
/// only when an oracle was supplied, indexed from v_0). guaranteed is false
/// when the step sizes sit outside the proven convergence range.
struct SolveReport {
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    Vector final_v;
    std::optional<Policy> greedy_policy;  // optimal-control solvers only
    std::int64_t wall_time_ns = 0;
    bool guaranteed = true;
    std::vector<double> diff_trace;
    std::vector<double> error_trace;
    std::vector<Vector> iterates;                 // when record_iterates
    std::vector<std::vector<int>> greedy_trace;   // when record_iterates, optimal target
};

/// Classical value iteration v_{s+1} = T(v_s).
SolveReport run_vi(const Mdp& mdp, const Vector& v0, const StopRule& stop,
                   const SolveOptions& opts = {});

/// Value computation for a fixed policy, v_{s+1} = T_pi(v_s).
SolveReport run_vc(const Mdp& mdp, const Policy& policy, const Vector& v0,
                   const StopRule& stop, const SolveOptions& opts = {});

/// Relaxed value iteration v_{s+1} = v_s - alpha_s (v_s - T(v_s)).
/// Constant schedules outside (0, 2/(1+lambda)) run anyway but the report is
/// flagged guaranteed = false.
SolveReport run_rvi(const Mdp& mdp, const Vector& v0, const StepSchedule& schedule,
                    const StopRule& stop, const SolveOptions& opts = {});

/// Gauss-Seidel value iteration: one ascending in-place sweep per iteration,
/// so the backup for state i already sees updated values at states j < i.
SolveReport run_gs_vi(const Mdp& mdp, const Vector& v0, const StopRule& stop,
                      const SolveOptions& opts = {});

/// Accelerated fixed-point iteration
///   h_s = v_s + gamma (v_s - v_{s-1}),  v_{s+1} = h_s - alpha (h_s - F(h_s)),
/// where F is T (no policy) or T_pi (policy supplied). v1 defaults to F(v0).
SolveReport run_accelerated(const Mdp& mdp, const std::optional<Policy>& policy,
                            const Vector& v0, std::optional<Vector> v1,
                            const AccelCoeffs& coeffs, const StopRule& stop,
                            const SolveOptions& opts = {});

/// Momentum (heavy-ball) fixed-point iteration
///   v_{s+1} = v_s - alpha (v_s - F(v_s)) + beta (v_s - v_{s-1}).
SolveReport run_momentum(const Mdp& mdp, const std::optional<Policy>& policy,
                         const Vector& v0, std::optional<Vector> v1,
                         const MomentumCoeffs& coeffs, const StopRule& stop,
                         const SolveOptions& opts = {});

/// Least-squares geometric rate of an error trace: drops the leading 25%
/// (transients are real, and provably so on the hard chain), fits log(error)
/// against the iteration index, returns exp(slope).
/// Throws std::invalid_argument on fewer than 20 points or any non-positive
/// entry.
double estimate_rate(const std::vector<double>& errors);

}  // namespace mdpaccel
