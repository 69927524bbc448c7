#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "mdpaccel/instances.hpp"
#include "mdpaccel/io.hpp"
#include "mdpaccel/spectral.hpp"

using namespace mdpaccel;

TEST_CASE("the raw generator matches the pinned mt19937_64 stream") {
    // 10000th output from the default seed, fixed by the C++ standard.
    Rng rng(5489u);
    std::uint64_t last = 0;
    for (int i = 0; i < 10000; ++i) last = rng.next_u64();
    CHECK(last == 9981545732273789042ULL);
    std::mt19937_64 ref(5489u);
    ref.discard(9999);
    CHECK(last == ref());
}

TEST_CASE("derived draws stay in range and are reproducible") {
    Rng rng(12345);
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.next_unit();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }

    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_unit() == b.next_unit());
        CHECK(a.next_below(13) == b.next_below(13));
    }

    Rng cover(99);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t x = cover.next_below(7);
        CHECK(x < 7);
        seen.insert(x);
    }
    CHECK(seen.size() == 7);
    CHECK_THROWS_AS(cover.next_below(0), std::invalid_argument);

    Rng lohi(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = lohi.next_double(-2.5, 4.0);
        CHECK(x >= -2.5);
        CHECK(x < 4.0);
    }
}

TEST_CASE("garnet rows have the declared branching structure") {
    GarnetSpec spec;
    spec.n = 30;
    spec.a = 5;
    spec.branch = 0.8;
    spec.reward_max = 10.0;
    spec.discount = 0.9;
    spec.seed = 77;
    Mdp mdp = garnet(spec);
    CHECK_NOTHROW(mdp.validate());

    const int b = spec.resolved_branch();
    CHECK(b == 24);
    for (int i = 0; i < spec.n; ++i) {
        for (int a = 0; a < spec.a; ++a) {
            const auto& row = mdp.row(i, a);
            REQUIRE(row.size() == static_cast<std::size_t>(b));
            double total = 0.0;
            std::set<int> states;
            for (const auto& e : row) {
                CHECK(e.prob > 0.0);
                total += e.prob;
                states.insert(e.state);
                CHECK(e.state >= 0);
                CHECK(e.state < spec.n);
            }
            CHECK(states.size() == static_cast<std::size_t>(b));
            CHECK(std::abs(total - 1.0) <= 1e-12);
            CHECK(mdp.rewards(i, a) >= 0.0);
            CHECK(mdp.rewards(i, a) <= spec.reward_max);
        }
    }

    REQUIRE(mdp.provenance.has_value());
    CHECK(mdp.provenance->family == "garnet");
    CHECK(mdp.provenance->seed == 77);
}

TEST_CASE("garnet generation is deterministic in the seed") {
    GarnetSpec spec;
    spec.n = 15;
    spec.a = 4;
    spec.seed = 31;
    CHECK(mdp_to_json(garnet(spec)).dump() == mdp_to_json(garnet(spec)).dump());

    GarnetSpec other = spec;
    other.seed = 32;
    CHECK(mdp_to_json(garnet(spec)).dump() != mdp_to_json(garnet(other)).dump());
}

TEST_CASE("garnet validates its parameters") {
    GarnetSpec spec;
    spec.n = 10;
    spec.a = 2;

    GarnetSpec bad = spec;
    bad.n = 0;
    CHECK_THROWS_AS(garnet(bad), std::invalid_argument);

    bad = spec;
    bad.discount = 1.0;
    CHECK_THROWS_AS(garnet(bad), std::invalid_argument);

    bad = spec;
    bad.reward_max = -1.0;
    CHECK_THROWS_AS(garnet(bad), std::invalid_argument);

    bad = spec;
    bad.branch_count = 0;
    CHECK_THROWS_AS(garnet(bad), std::invalid_argument);

    bad = spec;
    bad.branch_count = 11;
    CHECK_THROWS_AS(garnet(bad), std::invalid_argument);

    GarnetSpec narrow = spec;
    narrow.branch_count = 3;
    Mdp mdp = garnet(narrow);
    for (const auto& row : mdp.transitions) CHECK(row.size() == 3);
}

TEST_CASE("the hard chain is a single downhill walk to the rewarding state") {
    Mdp chain = hard_chain(6, 0.8);
    CHECK(chain.num_actions == 1);
    CHECK(chain.rewards(0, 0) == 1.0);
    for (int i = 1; i < 6; ++i) CHECK(chain.rewards(i, 0) == 0.0);

    REQUIRE(chain.row(0, 0).size() == 1);
    CHECK(chain.row(0, 0)[0].state == 0);
    for (int i = 1; i < 6; ++i) {
        REQUIRE(chain.row(i, 0).size() == 1);
        CHECK(chain.row(i, 0)[0].state == i - 1);
        CHECK(chain.row(i, 0)[0].prob == 1.0);
    }
    REQUIRE(chain.provenance.has_value());
    CHECK(chain.provenance->family == "hard-chain");

    CHECK_THROWS_AS(hard_chain(1, 0.8), std::invalid_argument);
}

TEST_CASE("the cycle steps forward one state per transition") {
    Mdp cyc = cycle_mdp(6, 0.7);
    CHECK(cyc.num_actions == 1);
    CHECK(cyc.rewards(0, 0) == 1.0);
    for (int i = 1; i < 6; ++i) CHECK(cyc.rewards(i, 0) == 0.0);
    for (int i = 0; i < 6; ++i) {
        REQUIRE(cyc.row(i, 0).size() == 1);
        CHECK(cyc.row(i, 0)[0].state == (i + 1) % 6);
        CHECK(cyc.row(i, 0)[0].prob == 1.0);
    }

    Vector custom(4);
    custom << 0.0, 2.0, 0.0, -1.0;
    Mdp weighted = cycle_mdp(4, 0.5, custom);
    CHECK(weighted.rewards(1, 0) == 2.0);
    CHECK(weighted.rewards(3, 0) == -1.0);

    Vector wrong(3);
    wrong << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(cycle_mdp(4, 0.5, wrong), std::invalid_argument);
    CHECK_THROWS_WITH_AS(cycle_mdp(5, 0.5), doctest::Contains("even"),
                         std::invalid_argument);
    CHECK_THROWS_AS(cycle_mdp(2, 0.5), std::invalid_argument);
}

TEST_CASE("random walks are irreducible, aperiodic, and reversible") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Mdp walk = reversible_walk(10, 0.3, seed, 0.9);
        CHECK(walk.num_actions == 1);
        CHECK_NOTHROW(walk.validate());

        Matrix L = Matrix::Zero(10, 10);
        for (int i = 0; i < 10; ++i)
            for (const auto& e : walk.row(i, 0)) L(i, e.state) = e.prob;

        // Self-loops guarantee aperiodicity.
        for (int i = 0; i < 10; ++i) CHECK(L(i, i) > 0.0);
        CHECK_FALSE(find_unreachable_state(L).has_value());

        Vector nu = stationary_distribution(L);
        CHECK(check_reversible(L, nu, 1e-10));

        for (int i = 0; i < 10; ++i) {
            CHECK(walk.rewards(i, 0) >= 0.0);
            CHECK(walk.rewards(i, 0) <= 100.0);
        }
    }

    CHECK_THROWS_AS(reversible_walk(1, 0.5, 0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(reversible_walk(5, -0.1, 0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(reversible_walk(3, 0.0, 0, 0.9), std::runtime_error);
}

TEST_CASE("random policies are seeded and valid") {
    GarnetSpec spec;
    spec.n = 20;
    spec.a = 6;
    spec.seed = 8;
    Mdp mdp = garnet(spec);

    Policy p1 = random_policy(mdp, 42);
    Policy p2 = random_policy(mdp, 42);
    Policy p3 = random_policy(mdp, 43);
    CHECK(p1 == p2);
    CHECK_FALSE(p1 == p3);
    CHECK_NOTHROW(p1.validate(mdp));
    CHECK_NOTHROW(p3.validate(mdp));
}
