#pragma once

#include "mdpaccel/types.hpp"

namespace fixtures {

/// Three-state, two-action chain with discount 1/2, small enough to iterate
/// by hand. Action 0 is optimal everywhere; both actions of state 2 lead to
/// state 1 with reward 0, so its greedy choice exercises the smallest-index
/// tie-break.
///
///   state 0: action 0 stays (reward 1), action 1 moves to 1 (reward 0.4)
///   state 1: action 0 moves to 0 (reward 0), action 1 moves to 2 (reward 0)
///   state 2: both actions move to 1 (reward 0)
///
/// Optimal values: v* = (2, 1, 1/2), optimal policy (0, 0, 0). From v = 0,
/// value iteration produces (1,0,0), (1.5,0.5,0), (1.75,0.75,0.25); one
/// ascending Gauss-Seidel sweep from v = 0 gives (1, 0.5, 0.25).
inline mdpaccel::Mdp chain3() {
    mdpaccel::Mdp mdp;
    mdp.num_states = 3;
    mdp.num_actions = 2;
    mdp.discount = 0.5;
    mdp.rewards = mdpaccel::Matrix::Zero(3, 2);
    mdp.rewards(0, 0) = 1.0;
    mdp.rewards(0, 1) = 0.4;
    mdp.transitions.resize(6);
    mdp.row(0, 0) = {{0, 1.0}};
    mdp.row(0, 1) = {{1, 1.0}};
    mdp.row(1, 0) = {{0, 1.0}};
    mdp.row(1, 1) = {{2, 1.0}};
    mdp.row(2, 0) = {{1, 1.0}};
    mdp.row(2, 1) = {{1, 1.0}};
    mdpaccel::Vector p0(3);
    p0 << 1.0, 0.0, 0.0;
    mdp.initial_dist = p0;
    mdp.validate();
    return mdp;
}

inline mdpaccel::Vector chain3_vstar() {
    mdpaccel::Vector v(3);
    v << 2.0, 1.0, 0.5;
    return v;
}

}  // namespace fixtures
