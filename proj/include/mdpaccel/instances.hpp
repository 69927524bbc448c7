#pragma once

#include "mdpaccel/types.hpp"

#include <cstdint>
#include <random>

namespace mdpaccel {

/// Deterministic 64-bit generator with hand-rolled conversions.
///
/// mt19937_64 output is pinned by the standard, but the standard library's
/// distributions (and std::shuffle) are not; identical streams across
/// platforms are part of the reproducibility contract, so doubles and
/// bounded integers are derived here explicitly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in the open interval (0, 1): 53-bit mantissa plus a
    /// half-ulp offset, so 0 and 1 are both unreachable.
    double next_unit();

    /// Uniform double in [lo, hi).
    double next_double(double lo, double hi);

    /// Uniform integer in [0, bound) by rejection sampling (unbiased).
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// Parameters of the Garnet random family. `branch` is a fraction of n when
/// branch_count is unset; the resolved count is max(1, round(branch * n)).
struct GarnetSpec {
    int n = 50;
    int a = 30;
    double branch = 0.8;
    std::optional<int> branch_count;
    double reward_max = 100.0;
    double discount = 0.95;
    std::uint64_t seed = 0;

    int resolved_branch() const;
};

/// Random Garnet MDP: each (state, action) row has exactly b distinct next
/// states drawn uniformly without replacement (self-transitions allowed),
/// probability masses from b-1 sorted uniform cut points, rewards uniform in
/// [0, reward_max]. Same seed gives a byte-identical instance on every
/// platform.
Mdp garnet(const GarnetSpec& spec);

/// Worst-case chain for first-order schemes: single action, reward 1 in the
/// absorbing first state and 0 elsewhere, state i stepping down to i-1.
/// Optimal value v*_i = lambda^(i-1) / (1 - lambda). Not irreducible.
Mdp hard_chain(int n, double lambda);

/// Directed n-cycle (single action), spectrum = the n-th roots of unity.
/// Non-reversible. n must be even and >= 4: the construction that makes the
/// two-step schemes diverge relies on the +-i eigenvalue pair of an even
/// cycle. Reward defaults to e_1.
Mdp cycle_mdp(int n, double lambda, std::optional<Vector> reward = std::nullopt);

/// Random walk on a random connected undirected graph with symmetric edge
/// weights in (0.1, 1) and self-loops (for aperiodicity). The resulting
/// single-action chain is irreducible and reversible by construction, with
/// stationary distribution proportional to the weighted degrees. Rewards
/// uniform in [0, 100]. Retries fresh edge sets until connected (bounded;
/// throws std::runtime_error when exhausted).
Mdp reversible_walk(int n, double density, std::uint64_t seed, double lambda);

/// Uniformly random deterministic policy, seeded.
Policy random_policy(const Mdp& mdp, std::uint64_t seed);

}  // namespace mdpaccel
