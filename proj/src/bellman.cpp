#include "mdpaccel/bellman.hpp"

#include <limits>
#include <stdexcept>

namespace mdpaccel {

BellmanResult bellman_apply(const Mdp& mdp, const Vector& v) {
    if (v.size() != mdp.num_states)
        throw std::invalid_argument("bellman_apply: value vector length mismatch");
    BellmanResult out;
    out.value.resize(mdp.num_states);
    out.greedy.resize(static_cast<std::size_t>(mdp.num_states));
    for (int i = 0; i < mdp.num_states; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < mdp.num_actions; ++a) {
            double q = mdp.rewards(i, a);
            for (const auto& e : mdp.row(i, a)) q += mdp.discount * e.prob * v[e.state];
            if (q > best) {  // strict: ties keep the smallest action index
                best = q;
                best_a = a;
            }
        }
        out.value[i] = best;
        out.greedy[static_cast<std::size_t>(i)] = best_a;
    }
    return out;
}

Vector policy_apply(const InducedChain& chain, double discount, const Vector& v) {
    if (v.size() != chain.matrix.rows())
        throw std::invalid_argument("policy_apply: value vector length mismatch");
    return chain.reward + discount * (chain.matrix * v);
}

InducedChain induce_chain(const Mdp& mdp, const Policy& policy) {
    policy.validate(mdp);
    InducedChain chain;
    chain.matrix = Matrix::Zero(mdp.num_states, mdp.num_states);
    chain.reward = Vector::Zero(mdp.num_states);
    for (int i = 0; i < mdp.num_states; ++i) {
        for (int a = 0; a < mdp.num_actions; ++a) {
            const double w = policy.prob(i, a);
            if (w == 0.0) continue;
            chain.reward[i] += w * mdp.rewards(i, a);
            for (const auto& e : mdp.row(i, a)) chain.matrix(i, e.state) += w * e.prob;
        }
    }
    return chain;
}

double residual(const Mdp& mdp, const Vector& v) {
    return (v - bellman_apply(mdp, v).value).lpNorm<Eigen::Infinity>();
}

double policy_residual(const InducedChain& chain, double discount, const Vector& v) {
    return (v - policy_apply(chain, discount, v)).lpNorm<Eigen::Infinity>();
}

}  // namespace mdpaccel
