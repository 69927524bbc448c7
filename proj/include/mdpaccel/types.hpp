#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mdpaccel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One sparse transition-row entry: probability of landing in `state`.
struct TransitionEntry {
    int state;
    double prob;
};

/// Sparse transition row for a single (state, action) pair.
using TransitionRow = std::vector<TransitionEntry>;

/// Optional record of how an instance was produced, carried through
/// serialization untouched.
struct Provenance {
    std::string family;
    std::string params;
    std::uint64_t seed = 0;
};

/// Finite discounted MDP with dense rewards and per-(state, action) sparse
/// transition rows.
///
/// Rows are stored row-major: the row for action `a` in state `i` lives at
/// index `i * num_actions + a`. Rewards are an n-by-A dense matrix. The
/// discount is strictly inside (0, 1); an undiscounted process has no
/// contraction and nothing downstream would be well defined.
struct Mdp {
    int num_states = 0;
    int num_actions = 0;
    double discount = 0.0;
    Matrix rewards;                        // num_states x num_actions
    std::vector<TransitionRow> transitions; // size num_states * num_actions
    std::optional<Vector> initial_dist;    // optional start distribution p0
    std::optional<Provenance> provenance;

    const TransitionRow& row(int state, int action) const {
        return transitions[static_cast<std::size_t>(state) * num_actions + action];
    }
    TransitionRow& row(int state, int action) {
        return transitions[static_cast<std::size_t>(state) * num_actions + action];
    }

    /// Throws std::invalid_argument describing the first violated invariant:
    /// shape mismatches, discount outside (0,1), transition probabilities
    /// negative or not summing to 1 within 1e-12, out-of-range next states,
    /// or an initial distribution that is not a distribution.
    void validate() const;
};

enum class PolicyKind { Deterministic, Randomized };

/// Stationary policy, either a deterministic action map or a row-stochastic
/// action-probability matrix.
struct Policy {
    PolicyKind kind = PolicyKind::Deterministic;
    std::vector<int> actions;  // deterministic: size n
    Matrix probs;              // randomized: n x A, rows sum to 1

    static Policy deterministic(std::vector<int> actions);
    static Policy randomized(Matrix probs);
    /// Uniform probability over all actions in every state.
    static Policy uniform(int num_states, int num_actions);

    bool is_deterministic() const { return kind == PolicyKind::Deterministic; }
    int num_states() const {
        return is_deterministic() ? static_cast<int>(actions.size())
                                  : static_cast<int>(probs.rows());
    }

    /// Probability of action `a` in state `i`.
    double prob(int i, int a) const {
        if (is_deterministic()) return actions[static_cast<std::size_t>(i)] == a ? 1.0 : 0.0;
        return probs(i, a);
    }

    /// Throws std::invalid_argument if the policy does not fit `mdp`
    /// (wrong state count, action index out of range, rows not stochastic).
    void validate(const Mdp& mdp) const;

    bool operator==(const Policy& other) const;
};

/// Markov chain induced by fixing a policy: dense row-stochastic matrix and
/// the per-state expected reward under that policy.
struct InducedChain {
    Matrix matrix;  // n x n, rows sum to 1
    Vector reward;  // n
};

/// Expected discounted return of value vector `v` under the instance's
/// initial distribution: the dot product p0 . v. Throws std::invalid_argument
/// when the instance carries no initial distribution.
double expected_return(const Mdp& mdp, const Vector& v);

}  // namespace mdpaccel
