#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdpaccel/instances.hpp"
#include "mdpaccel/io.hpp"
#include "mdpaccel/oracle.hpp"
#include "mdpaccel/solve.hpp"

#include "fixtures.hpp"

using namespace mdpaccel;

namespace {

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "mdpaccel_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("instances round-trip through JSON bit for bit") {
    GarnetSpec spec;
    spec.n = 12;
    spec.a = 3;
    spec.discount = 0.93;
    spec.seed = 5;
    Mdp mdp = garnet(spec);
    Vector p0 = Vector::Constant(12, 1.0 / 12.0);
    p0[0] += 1.0 - p0.sum();
    mdp.initial_dist = p0;

    nlohmann::json j = mdp_to_json(mdp);
    Mdp back = mdp_from_json(j);

    CHECK(back.num_states == mdp.num_states);
    CHECK(back.num_actions == mdp.num_actions);
    CHECK(back.discount == mdp.discount);
    CHECK(back.rewards == mdp.rewards);
    REQUIRE(back.transitions.size() == mdp.transitions.size());
    for (std::size_t r = 0; r < mdp.transitions.size(); ++r) {
        REQUIRE(back.transitions[r].size() == mdp.transitions[r].size());
        for (std::size_t k = 0; k < mdp.transitions[r].size(); ++k) {
            CHECK(back.transitions[r][k].state == mdp.transitions[r][k].state);
            CHECK(back.transitions[r][k].prob == mdp.transitions[r][k].prob);
        }
    }
    REQUIRE(back.initial_dist.has_value());
    CHECK(*back.initial_dist == *mdp.initial_dist);
    REQUIRE(back.provenance.has_value());
    CHECK(back.provenance->family == mdp.provenance->family);
    CHECK(back.provenance->params == mdp.provenance->params);
    CHECK(back.provenance->seed == mdp.provenance->seed);

    CHECK(mdp_to_json(back).dump() == j.dump());
}

TEST_CASE("unknown or malformed JSON fields are rejected") {
    nlohmann::json j = mdp_to_json(fixtures::chain3());

    nlohmann::json extra = j;
    extra["surprise"] = 1;
    CHECK_THROWS_WITH_AS(mdp_from_json(extra), doctest::Contains("unknown key"),
                         std::invalid_argument);

    nlohmann::json bad_prov = j;
    bad_prov["provenance"] = {{"family", "x"}, {"bogus", 1}};
    CHECK_THROWS_AS(mdp_from_json(bad_prov), std::invalid_argument);

    nlohmann::json bad_discount = j;
    bad_discount["discount"] = 1.2;
    CHECK_THROWS_AS(mdp_from_json(bad_discount), std::invalid_argument);

    nlohmann::json short_rewards = j;
    short_rewards["rewards"] = {1.0, 2.0};
    CHECK_THROWS_AS(mdp_from_json(short_rewards), std::invalid_argument);

    nlohmann::json bad_entry = j;
    bad_entry["transitions"][0] = {{0, 0.5, 0.5}};
    CHECK_THROWS_AS(mdp_from_json(bad_entry), std::invalid_argument);
}

TEST_CASE("instances survive a save and load through the filesystem") {
    auto dir = scratch_dir();
    auto path = (dir / "roundtrip.json").string();

    Mdp mdp = fixtures::chain3();
    save_mdp(mdp, path);
    Mdp back = load_mdp(path);
    CHECK(mdp_to_json(back).dump() == mdp_to_json(mdp).dump());

    CHECK_THROWS_AS(load_mdp((dir / "missing.json").string()), std::runtime_error);

    auto garbage = (dir / "garbage.json").string();
    std::ofstream(garbage) << "{ this is not json";
    CHECK_THROWS_WITH_AS(load_mdp(garbage), doctest::Contains("not valid JSON"),
                         std::runtime_error);

    std::filesystem::remove_all(dir);
}

TEST_CASE("trace CSVs carry one row per update starting at iteration one") {
    Mdp mdp = fixtures::chain3();
    Vector vstar = fixtures::chain3_vstar();
    StopRule stop{1e-6, 100, 1e8};

    SolveOptions with_oracle;
    with_oracle.oracle = &vstar;
    SolveReport rep = run_vi(mdp, Vector::Zero(3), stop, with_oracle);

    std::string csv = trace_to_csv(rep);
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == rep.diff_trace.size() + 1);
    CHECK(lines[0] == "iteration,diff_norm,error_to_oracle");
    CHECK(lines[1] == "1,1,1");
    CHECK(lines[2] == "2,0.5,0.5");
    CHECK(lines[3] == "3,0.25,0.25");

    SolveReport plain = run_vi(mdp, Vector::Zero(3), stop);
    std::vector<std::string> bare = split_lines(trace_to_csv(plain));
    CHECK(bare[1] == "1,1,");
    for (std::size_t i = 1; i < bare.size(); ++i) CHECK(bare[i].back() == ',');
}

TEST_CASE("run reports serialize their metadata") {
    Mdp mdp = fixtures::chain3();
    SolveReport rep = run_vi(mdp, Vector::Zero(3), StopRule{1e-6, 100, 1e8});

    nlohmann::json j = report_to_json(rep, "vi", "-", mdp.discount, 1e-6);
    CHECK(j.at("status").get<std::string>() == "Converged");
    CHECK(j.at("iterations").get<int>() == rep.iterations);
    CHECK(j.at("wall_time_ns").get<std::int64_t>() == rep.wall_time_ns);
    CHECK(j.at("solver").get<std::string>() == "vi");
    CHECK(j.at("schedule").get<std::string>() == "-");
    CHECK(j.at("lambda").get<double>() == mdp.discount);
    CHECK(j.at("epsilon").get<double>() == 1e-6);
    CHECK(j.at("guaranteed").get<bool>());
}

TEST_CASE("spectrum reports list eigenvalue moduli in descending order") {
    Mdp walk = reversible_walk(6, 0.4, 9, 0.9);
    InducedChain chain = induce_chain(walk, Policy::deterministic({0, 0, 0, 0, 0, 0}));
    IterationMatrix im = accel_iteration_matrix(chain, walk.discount);
    REQUIRE(im.spectrum_full);

    nlohmann::json j = spectrum_to_json(im, true);
    CHECK(j.at("variant").get<std::string>() == "accelerated");
    CHECK(j.at("lambda").get<double>() == 0.9);
    CHECK(j.at("kappa").get<double>() == im.kappa);
    CHECK(j.at("predicted_radius").get<double>() == im.radius);
    CHECK(j.at("reversible").get<bool>());

    auto moduli = j.at("eigen_moduli").get<std::vector<double>>();
    REQUIRE(moduli.size() == im.eigenvalues.size());
    for (std::size_t i = 0; i + 1 < moduli.size(); ++i) CHECK(moduli[i] >= moduli[i + 1]);
    CHECK(moduli.front() == im.radius);
}
