#include "mdpaccel/oracle.hpp"

#include "mdpaccel/bellman.hpp"

#include <Eigen/LU>

#include <sstream>
#include <stdexcept>

namespace mdpaccel {

namespace {
constexpr int kMaxDirectSolve = 5000;
}

Vector exact_policy_value(const Mdp& mdp, const Policy& policy) {
    if (mdp.num_states > kMaxDirectSolve) {
        std::ostringstream os;
        os << "exact_policy_value: dense solve guarded to n <= " << kMaxDirectSolve
           << ", got n = " << mdp.num_states;
        throw std::invalid_argument(os.str());
    }
    const InducedChain chain = induce_chain(mdp, policy);
    const int n = mdp.num_states;
    Matrix system = Matrix::Identity(n, n) - mdp.discount * chain.matrix;
    Vector v = Eigen::PartialPivLU<Matrix>(system).solve(chain.reward);

    const double res = policy_residual(chain, mdp.discount, v);
    const double allowed = 1e-9 * (1.0 + v.lpNorm<Eigen::Infinity>());
    if (!(res <= allowed)) {
        std::ostringstream os;
        os << "exact_policy_value: solve residual " << res << " exceeds " << allowed
           << "; inputs are likely corrupted";
        throw std::runtime_error(os.str());
    }
    return v;
}

OptimalSolution exact_optimal_value(const Mdp& mdp) {
    // Policy iteration with exact evaluation (Howard's algorithm). The
    // improvement step only switches actions on a scale-relative margin, so
    // floating-point ties cannot produce a policy cycle.
    Policy policy = Policy::deterministic(
        std::vector<int>(static_cast<std::size_t>(mdp.num_states), 0));
    const long cap = static_cast<long>(mdp.num_states) * mdp.num_actions + 1;
    Vector v;
    for (long round = 0; round < cap; ++round) {
        v = exact_policy_value(mdp, policy);
        bool changed = false;
        std::vector<int> improved = policy.actions;
        for (int i = 0; i < mdp.num_states; ++i) {
            const int cur = policy.actions[static_cast<std::size_t>(i)];
            double q_cur = mdp.rewards(i, cur);
            for (const auto& e : mdp.row(i, cur)) q_cur += mdp.discount * e.prob * v[e.state];
            double best = q_cur;
            int best_a = cur;
            const double margin = 1e-12 * (1.0 + std::abs(q_cur));
            for (int a = 0; a < mdp.num_actions; ++a) {
                if (a == cur) continue;
                double q = mdp.rewards(i, a);
                for (const auto& e : mdp.row(i, a)) q += mdp.discount * e.prob * v[e.state];
                if (q > best + margin) {
                    best = q;
                    best_a = a;
                }
            }
            if (best_a != cur) {
                improved[static_cast<std::size_t>(i)] = best_a;
                changed = true;
            }
        }
        if (!changed) {
            // Report the pure smallest-index greedy policy at the converged
            // value so callers see the same tie-breaking as bellman_apply.
            return {v, Policy::deterministic(bellman_apply(mdp, v).greedy)};
        }
        policy = Policy::deterministic(std::move(improved));
    }
    throw std::runtime_error(
        "exact_optimal_value: policy iteration exceeded its change cap; inputs are likely "
        "corrupted");
}

}  // namespace mdpaccel
