#include "mdpaccel/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

double Rng::next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_double(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::uint64_t Rng::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::next_below: bound must be positive");
    // Rejection sampling: discard the short residue class so every value in
    // [0, bound) is hit by the same number of raw outputs.
    const std::uint64_t residue = (-bound) % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x < residue);
    return x % bound;
}

int GarnetSpec::resolved_branch() const {
    if (branch_count) return *branch_count;
    return std::max(1, static_cast<int>(std::llround(branch * n)));
}

Mdp garnet(const GarnetSpec& spec) {
    if (spec.n < 1 || spec.a < 1)
        throw std::invalid_argument("garnet: n and a must be positive");
    if (!(spec.discount > 0.0 && spec.discount < 1.0))
        throw std::invalid_argument("garnet: discount must lie in (0,1)");
    if (!(spec.reward_max >= 0.0))
        throw std::invalid_argument("garnet: reward_max must be nonnegative");
    const int b = spec.resolved_branch();
    if (b < 1 || b > spec.n) {
        std::ostringstream os;
        os << "garnet: branch resolves to " << b << ", outside [1, " << spec.n << "]";
        throw std::invalid_argument(os.str());
    }

    Rng rng(spec.seed);
    Mdp mdp;
    mdp.num_states = spec.n;
    mdp.num_actions = spec.a;
    mdp.discount = spec.discount;
    mdp.rewards = Matrix::Zero(spec.n, spec.a);
    mdp.transitions.resize(static_cast<std::size_t>(spec.n) * spec.a);

    std::vector<int> pool(static_cast<std::size_t>(spec.n));
    std::vector<double> cuts(static_cast<std::size_t>(b) + 1);
    for (int i = 0; i < spec.n; ++i) {
        for (int a = 0; a < spec.a; ++a) {
            // b distinct successors by a partial Fisher-Yates pass (the
            // algorithm is pinned here; std::shuffle is not portable).
            std::iota(pool.begin(), pool.end(), 0);
            for (int k = 0; k < b; ++k) {
                const auto j = k + static_cast<int>(rng.next_below(
                                       static_cast<std::uint64_t>(spec.n - k)));
                std::swap(pool[static_cast<std::size_t>(k)],
                          pool[static_cast<std::size_t>(j)]);
            }
            std::sort(pool.begin(), pool.begin() + b);

            // Probability masses: gaps between sorted uniform cut points.
            cuts[0] = 0.0;
            for (int k = 1; k < b; ++k) cuts[static_cast<std::size_t>(k)] = rng.next_unit();
            cuts[static_cast<std::size_t>(b)] = 1.0;
            std::sort(cuts.begin() + 1, cuts.begin() + b);

            auto& row = mdp.row(i, a);
            row.resize(static_cast<std::size_t>(b));
            for (int k = 0; k < b; ++k) {
                row[static_cast<std::size_t>(k)] = {
                    pool[static_cast<std::size_t>(k)],
                    cuts[static_cast<std::size_t>(k) + 1] - cuts[static_cast<std::size_t>(k)]};
            }
            mdp.rewards(i, a) = rng.next_double(0.0, spec.reward_max);
        }
    }

    std::ostringstream params;
    params << "n=" << spec.n << ",a=" << spec.a << ",branch=" << b
           << ",reward_max=" << spec.reward_max << ",discount=" << spec.discount;
    mdp.provenance = Provenance{"garnet", params.str(), spec.seed};
    mdp.validate();
    return mdp;
}

Mdp hard_chain(int n, double lambda) {
    if (n < 2) throw std::invalid_argument("hard_chain: need at least two states");
    Mdp mdp;
    mdp.num_states = n;
    mdp.num_actions = 1;
    mdp.discount = lambda;
    mdp.rewards = Matrix::Zero(n, 1);
    mdp.rewards(0, 0) = 1.0;
    mdp.transitions.resize(static_cast<std::size_t>(n));
    mdp.row(0, 0) = {{0, 1.0}};
    for (int i = 1; i < n; ++i) mdp.row(i, 0) = {{i - 1, 1.0}};
    std::ostringstream params;
    params << "n=" << n << ",discount=" << lambda;
    mdp.provenance = Provenance{"hard-chain", params.str(), 0};
    mdp.validate();
    return mdp;
}

Mdp cycle_mdp(int n, double lambda, std::optional<Vector> reward) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument(
            "cycle_mdp: the counterexample construction needs an even cycle with n >= 4 "
            "(its spectrum must contain the +-i pair)");
    Mdp mdp;
    mdp.num_states = n;
    mdp.num_actions = 1;
    mdp.discount = lambda;
    mdp.rewards = Matrix::Zero(n, 1);
    if (reward) {
        if (reward->size() != n)
            throw std::invalid_argument("cycle_mdp: reward vector length mismatch");
        mdp.rewards.col(0) = *reward;
    } else {
        mdp.rewards(0, 0) = 1.0;
    }
    mdp.transitions.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mdp.row(i, 0) = {{(i + 1) % n, 1.0}};
    std::ostringstream params;
    params << "n=" << n << ",discount=" << lambda;
    mdp.provenance = Provenance{"cycle", params.str(), 0};
    mdp.validate();
    return mdp;
}

Mdp reversible_walk(int n, double density, std::uint64_t seed, double lambda) {
    if (n < 2) throw std::invalid_argument("reversible_walk: need at least two states");
    if (!(density >= 0.0 && density <= 1.0))
        throw std::invalid_argument("reversible_walk: density must lie in [0,1]");

    Rng rng(seed);
    Matrix weights;
    constexpr int kMaxAttempts = 100;
    bool connected = false;
    for (int attempt = 0; attempt < kMaxAttempts && !connected; ++attempt) {
        weights = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) weights(i, i) = rng.next_double(0.1, 1.0);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.next_unit() < density) {
                    const double w = rng.next_double(0.1, 1.0);
                    weights(i, j) = w;
                    weights(j, i) = w;
                }
            }
        }
        // Connectivity over the off-diagonal edges (self-loops do not help).
        std::vector<int> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (j != i && weights(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        connected = count == n;
    }
    if (!connected)
        throw std::runtime_error(
            "reversible_walk: could not draw a connected graph; raise the density");

    Mdp mdp;
    mdp.num_states = n;
    mdp.num_actions = 1;
    mdp.discount = lambda;
    mdp.rewards = Matrix::Zero(n, 1);
    mdp.transitions.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double total = weights.row(i).sum();
        auto& row = mdp.row(i, 0);
        for (int j = 0; j < n; ++j) {
            if (weights(i, j) > 0.0) row.push_back({j, weights(i, j) / total});
        }
        mdp.rewards(i, 0) = rng.next_double(0.0, 100.0);
    }
    std::ostringstream params;
    params << "n=" << n << ",density=" << density << ",discount=" << lambda;
    mdp.provenance = Provenance{"reversible-walk", params.str(), seed};
    mdp.validate();
    return mdp;
}

Policy random_policy(const Mdp& mdp, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> actions(static_cast<std::size_t>(mdp.num_states));
    for (auto& a : actions)
        a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(mdp.num_actions)));
    return Policy::deterministic(std::move(actions));
}

}  // namespace mdpaccel
