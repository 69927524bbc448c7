#pragma once

#include "mdpaccel/types.hpp"

namespace mdpaccel {

/// Result of one Bellman optimality backup: the new value vector and the
/// greedy action chosen in every state (smallest index on ties, so repeated
/// runs are bit-reproducible).
struct BellmanResult {
    Vector value;
    std::vector<int> greedy;
};

/// Bellman optimality operator
///   T(v)_i = max_a { r(i,a) + discount * sum_j P(i,a,j) v_j }.
BellmanResult bellman_apply(const Mdp& mdp, const Vector& v);

/// Policy evaluation operator T_pi(v) = r_pi + discount * L_pi v for a chain
/// already induced from a policy.
Vector policy_apply(const InducedChain& chain, double discount, const Vector& v);

/// Builds the induced chain (L_pi, r_pi) of a policy. Works for both
/// deterministic and randomized policies; the randomized case mixes rows with
/// the action probabilities.
InducedChain induce_chain(const Mdp& mdp, const Policy& policy);

/// Bellman residual ||v - T(v)||_inf.
double residual(const Mdp& mdp, const Vector& v);

/// Residual against a fixed policy, ||v - T_pi(v)||_inf.
double policy_residual(const InducedChain& chain, double discount, const Vector& v);

}  // namespace mdpaccel
