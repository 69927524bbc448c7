#pragma once

#include "mdpaccel/solve.hpp"
#include "mdpaccel/types.hpp"

namespace mdpaccel {

/// Per-step record of the linear-time-varying certificate for an A-VI run.
///
/// With u_s = x_s - x* (x_s = (v_s, v_{s-1}), x* = (v*, v*)), each realized
/// step must sit inside the componentwise sandwich
///   B_{pi*} u_s <= u_{s+1} <= B_{pi_s} u_s,
/// and mixing the optimal and greedy policies statewise with coefficients
/// mu_i in [0, 1] must reproduce the step exactly: u_{s+1} = B_{pihat_s} u_s.
struct CertificateStep {
    double sandwich_violation = 0.0;  // max componentwise overshoot
    double mu_min = 1.0;              // range of the mixing coefficients
    double mu_max = 1.0;
    double reconstruction_error = 0.0;  // ||u_{s+1} - B_pihat u_s||_inf, relative
};

struct LtvCertificate {
    std::vector<CertificateStep> steps;
    double tolerance = 1e-8;
    bool ok = false;
    std::string failure;  // empty when ok
};

/// Certifies an A-VI trajectory (tuning alpha = 1/(1+lambda)) against the
/// optimal solution. The run must have been recorded with
/// SolveOptions::record_iterates so iterates and per-step greedy policies are
/// available. Requires at least two iterates.
LtvCertificate ltv_certificate(const Mdp& mdp, const SolveReport& avi_run,
                               const Vector& v_star, const Policy& pi_star);

/// Hard-chain lower-bound check: from v0 = 0, any first-order scheme must
/// keep v_{s,i} = 0 for all i >= s+1 (exact zeros, index 1-based) and stay at
/// least lambda^s / (1 + lambda) away from v* in sup norm, for 1 <= s <= n-1.
struct LowerBoundReport {
    bool ok = false;
    int first_violation_step = -1;
    std::string detail;  // empty when ok
};
LowerBoundReport lower_bound_check(const std::vector<Vector>& iterates,
                                   const Mdp& hard_chain_mdp, const Vector& v_star);

}  // namespace mdpaccel
