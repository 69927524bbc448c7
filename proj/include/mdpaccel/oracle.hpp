#pragma once

#include "mdpaccel/types.hpp"

namespace mdpaccel {

/// Exact value of a fixed policy: solves (I - discount * L_pi) v = r_pi with
/// a dense LU factorization. Guarded to num_states <= 5000 (throws
/// std::invalid_argument beyond that). After solving, the result is checked
/// against the evaluation operator; a residual above 1e-9 * (1 + ||v||_inf)
/// throws std::runtime_error, since it can only mean corrupted inputs.
Vector exact_policy_value(const Mdp& mdp, const Policy& policy);

/// Exact optimal value and an optimal policy via policy iteration with exact
/// evaluation. Ties in the improvement step go to the smallest action index.
/// The iteration count is capped at num_states * num_actions policy changes;
/// exceeding the cap throws std::runtime_error.
struct OptimalSolution {
    Vector value;
    Policy policy;
};
OptimalSolution exact_optimal_value(const Mdp& mdp);

}  // namespace mdpaccel
