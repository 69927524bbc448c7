#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdpaccel/bench.hpp"
#include "mdpaccel/io.hpp"

#include "fixtures.hpp"

using namespace mdpaccel;

namespace {

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "mdpaccel_bench_test";
    std::filesystem::create_directories(dir);
    return dir;
}

InstanceSpec tiny_garnet() {
    InstanceSpec spec;
    spec.family = "garnet";
    spec.n = 8;
    spec.a = 3;
    spec.branch = 0.8;
    spec.reward_max = 10.0;
    spec.seed = 4;
    spec.lambda = 0.9;
    return spec;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("instance specs dispatch to the right family") {
    CHECK(tiny_garnet().realize().provenance->family == "garnet");

    InstanceSpec chain;
    chain.family = "hard-chain";
    chain.n = 5;
    chain.lambda = 0.8;
    CHECK(chain.realize().num_actions == 1);
    CHECK(chain.realize().num_states == 5);

    InstanceSpec cyc;
    cyc.family = "cycle";
    cyc.n = 4;
    cyc.lambda = 0.5;
    CHECK(cyc.realize().provenance->family == "cycle");

    InstanceSpec walk;
    walk.family = "reversible-walk";
    walk.n = 6;
    walk.density = 0.4;
    walk.seed = 2;
    walk.lambda = 0.9;
    CHECK(walk.realize().provenance->family == "reversible-walk");

    InstanceSpec unknown;
    unknown.family = "maze";
    CHECK_THROWS_WITH_AS(unknown.realize(), doctest::Contains("unknown instance family"),
                         std::invalid_argument);

    auto dir = scratch_dir();
    auto path = (dir / "chain3.json").string();
    save_mdp(fixtures::chain3(), path);
    InstanceSpec from_file;
    from_file.file = path;
    from_file.family = "garnet";  // ignored: the file takes precedence
    Mdp loaded = from_file.realize();
    CHECK(mdp_to_json(loaded).dump() == mdp_to_json(fixtures::chain3()).dump());
}

TEST_CASE("experiment configs reject malformed inputs up front") {
    ExperimentConfig good;
    good.instance = tiny_garnet();
    good.solvers = {"vi", "r-vi:1.05", "a-vi:aggressive"};
    good.lambdas = {0.9};
    CHECK_NOTHROW(good.validate());

    ExperimentConfig bad = good;
    bad.solvers = {"warp-drive"};
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("unknown solver"),
                         std::invalid_argument);

    bad = good;
    bad.solvers = {"r-vi:fast"};
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("bad relaxation factor"),
                         std::invalid_argument);

    bad = good;
    bad.solvers = {"vi:aggressive"};
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("unsupported solver option"),
                         std::invalid_argument);

    bad = good;
    bad.solvers.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.lambdas = {1.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.samples = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.jobs = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sweeps enumerate seed-major, then solver, then lambda") {
    ExperimentConfig cfg;
    cfg.instance = tiny_garnet();
    cfg.solvers = {"vi", "r-vi:1.05", "a-vi", "a-vi:aggressive", "m-vi", "gs-vi"};
    cfg.lambdas = {0.7, 0.8};
    cfg.epsilon = 0.5;
    cfg.samples = 2;
    cfg.seed_base = 100;
    cfg.jobs = 1;

    std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 24);

    const std::vector<std::string> schedules = {"-",          "alpha=1.05", "nesterov",
                                                "aggressive", "heavy-ball", "-"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t lam = i % 2;
        const std::size_t solver = (i / 2) % 6;
        const std::size_t sample = i / 12;
        CHECK(rows[i].solver == cfg.solvers[solver]);
        CHECK(rows[i].schedule == schedules[solver]);
        CHECK(rows[i].seed == 100 + sample);
        CHECK(rows[i].lambda == cfg.lambdas[lam]);
        CHECK(rows[i].family == "garnet");
        CHECK(rows[i].n == 8);
        CHECK(rows[i].a == 3);
        CHECK(rows[i].epsilon == 0.5);
        CHECK(rows[i].status == "Converged");
        CHECK(rows[i].iterations >= 1);
        CHECK(rows[i].final_residual > 0.0);
    }
}

TEST_CASE("parallel sweeps produce the same rows as serial ones") {
    ExperimentConfig cfg;
    cfg.instance = tiny_garnet();
    cfg.solvers = {"vi", "vc", "a-vc"};
    cfg.lambdas = {0.9};
    cfg.epsilon = 0.5;
    cfg.samples = 2;
    cfg.seed_base = 7;
    cfg.jobs = 1;
    std::vector<SweepRow> serial = run_sweep(cfg);

    cfg.jobs = 3;
    std::vector<SweepRow> parallel = run_sweep(cfg);

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].solver == parallel[i].solver);
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].status == parallel[i].status);
        CHECK(serial[i].iterations == parallel[i].iterations);
        CHECK(serial[i].final_residual == parallel[i].final_residual);
    }
}

TEST_CASE("sweep rows serialize to the documented CSV") {
    SweepRow row;
    row.family = "garnet";
    row.n = 8;
    row.a = 3;
    row.seed = 100;
    row.solver = "r-vi:1.05";
    row.schedule = "alpha=1.05";
    row.lambda = 0.5;
    row.epsilon = 0.25;
    row.status = "Converged";
    row.iterations = 12;
    row.wall_time_ms = 1.5;
    row.final_residual = 0.125;

    std::vector<std::string> lines = split_lines(sweep_rows_to_csv({row}));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "family,n,a,seed,solver,schedule,lambda,epsilon,status,iterations,wall_time_ms,"
          "final_residual");
    CHECK(lines[1] == "garnet,8,3,100,r-vi:1.05,alpha=1.05,0.5,0.25,Converged,12,1.5,0.125");
}

TEST_CASE("generate writes a loadable instance and reports bad usage") {
    auto dir = scratch_dir();
    std::ostringstream err;

    GenerateArgs args;
    args.instance = tiny_garnet();
    args.out = (dir / "generated.json").string();
    CHECK(cmd_generate(args, err) == 0);
    CHECK(load_mdp(args.out).num_states == 8);

    GenerateArgs no_out;
    no_out.instance = tiny_garnet();
    std::ostringstream err2;
    CHECK(cmd_generate(no_out, err2) == 1);
    CHECK(err2.str().find("error:") == 0);
}

TEST_CASE("solve emits a report and exits by final status") {
    auto dir = scratch_dir();

    SolveArgs args;
    args.instance = tiny_garnet();
    args.solver = "vi";
    args.epsilon = 0.5;
    std::ostringstream out, err;
    CHECK(cmd_solve(args, out, err) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j.at("status").get<std::string>() == "Converged");
    CHECK(j.at("solver").get<std::string>() == "vi");

    SolveArgs filed = args;
    filed.with_oracle = true;
    filed.report_path = (dir / "report.json").string();
    filed.trace_path = (dir / "trace.csv").string();
    std::ostringstream out2, err2;
    CHECK(cmd_solve(filed, out2, err2) == 0);
    CHECK(out2.str().find("vi: Converged after") == 0);
    nlohmann::json rj = nlohmann::json::parse(slurp(filed.report_path));
    CHECK(rj.at("schedule").get<std::string>() == "-");
    std::vector<std::string> trace = split_lines(slurp(filed.trace_path));
    REQUIRE(trace.size() >= 2);
    CHECK(trace[0] == "iteration,diff_norm,error_to_oracle");
    CHECK(trace[1].back() != ',');

    SolveArgs divergent;
    divergent.instance.family = "cycle";
    divergent.instance.n = 4;
    divergent.instance.lambda = 0.95;
    divergent.solver = "m-vi";
    divergent.epsilon = 1e-9;
    std::ostringstream out3, err3;
    CHECK(cmd_solve(divergent, out3, err3) == 2);

    SolveArgs capped = args;
    capped.epsilon = 1e-12;
    capped.max_iters = 3;
    std::ostringstream out4, err4;
    CHECK(cmd_solve(capped, out4, err4) == 3);

    SolveArgs unknown = args;
    unknown.solver = "sorcery";
    std::ostringstream out5, err5;
    CHECK(cmd_solve(unknown, out5, err5) == 1);
    CHECK(err5.str().find("unknown solver") != std::string::npos);

    SolveArgs bad_policy = args;
    bad_policy.solver = "vc";
    bad_policy.policy = "only";
    std::ostringstream out6, err6;
    CHECK(cmd_solve(bad_policy, out6, err6) == 1);
    CHECK(err6.str().find("single-action") != std::string::npos);
}

TEST_CASE("spectrum reports are printed or written and validate the variant") {
    SpectrumArgs args;
    args.instance.family = "reversible-walk";
    args.instance.n = 6;
    args.instance.density = 0.4;
    args.instance.seed = 2;
    args.instance.lambda = 0.9;
    args.variant = "momentum";
    args.policy = "only";

    std::ostringstream out, err;
    CHECK(cmd_spectrum(args, out, err) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j.at("variant").get<std::string>() == "momentum");
    CHECK(j.at("reversible").get<bool>());
    CHECK(j.at("eigen_moduli").size() == 12);

    SpectrumArgs bad = args;
    bad.variant = "warp";
    std::ostringstream out2, err2;
    CHECK(cmd_spectrum(bad, out2, err2) == 1);
    CHECK(err2.str().find("unknown variant") != std::string::npos);
}

TEST_CASE("plotdata merges traces and appends a geometric reference") {
    auto dir = scratch_dir();

    SolveArgs base;
    base.instance = tiny_garnet();
    base.solver = "vi";
    base.epsilon = 0.5;
    base.with_oracle = true;
    base.report_path = (dir / "r1.json").string();
    base.trace_path = (dir / "vi_run.csv").string();
    std::ostringstream o1, e1;
    REQUIRE(cmd_solve(base, o1, e1) == 0);

    SolveArgs second = base;
    second.solver = "a-vi";
    second.report_path = (dir / "r2.json").string();
    second.trace_path = (dir / "avi_run.csv").string();
    std::ostringstream o2, e2;
    REQUIRE(cmd_solve(second, o2, e2) == 0);

    PlotdataArgs plot;
    plot.traces = {base.trace_path, second.trace_path};
    plot.reference_lambda = 0.9;
    plot.reference_iters = 5;
    plot.out = (dir / "merged.csv").string();
    std::ostringstream err;
    REQUIRE(cmd_plotdata(plot, err) == 0);

    std::vector<std::string> lines = split_lines(slurp(plot.out));
    REQUIRE(lines.size() >= 8);
    CHECK(lines[0] == "solver,iteration,log10_error");
    CHECK(lines[1].rfind("vi_run,1,", 0) == 0);
    CHECK(std::isfinite(std::stod(lines[1].substr(lines[1].rfind(',') + 1))));
    int reference_rows = 0;
    bool avi_seen = false;
    std::string last_reference;
    for (const auto& line : lines) {
        if (line.rfind("reference,", 0) == 0) {
            ++reference_rows;
            last_reference = line;
        }
        if (line.rfind("avi_run,", 0) == 0) avi_seen = true;
    }
    CHECK(reference_rows == 5);
    CHECK(avi_seen);
    REQUIRE(last_reference.rfind("reference,5,", 0) == 0);
    const double tail = std::stod(last_reference.substr(last_reference.rfind(',') + 1));
    CHECK(tail == doctest::Approx(5.0 * std::log10(0.9)).epsilon(1e-15));

    PlotdataArgs not_a_trace;
    not_a_trace.traces = {base.report_path};
    not_a_trace.out = (dir / "bad.csv").string();
    std::ostringstream err2;
    CHECK(cmd_plotdata(not_a_trace, err2) == 1);
    CHECK(err2.str().find("bad header") != std::string::npos);

    PlotdataArgs mismatched;
    mismatched.traces = {base.trace_path};
    mismatched.labels = {"a", "b"};
    mismatched.out = (dir / "bad2.csv").string();
    std::ostringstream err3;
    CHECK(cmd_plotdata(mismatched, err3) == 1);

    SolveArgs no_oracle = base;
    no_oracle.with_oracle = false;
    no_oracle.report_path = (dir / "r3.json").string();
    no_oracle.trace_path = (dir / "bare.csv").string();
    std::ostringstream o3, e3;
    REQUIRE(cmd_solve(no_oracle, o3, e3) == 0);
    PlotdataArgs bare;
    bare.traces = {no_oracle.trace_path};
    bare.out = (dir / "bad3.csv").string();
    std::ostringstream err4;
    CHECK(cmd_plotdata(bare, err4) == 1);
    CHECK(err4.str().find("lacks oracle errors") != std::string::npos);
}

TEST_CASE("config files parse strictly") {
    auto dir = scratch_dir();
    auto path = (dir / "config.json").string();
    std::ofstream(path) << R"({
      "instance": {"family": "garnet", "n": 8, "a": 3, "branch": 0.8, "seed": 4},
      "solvers": ["vi", "r-vi:1.05"],
      "lambdas": [0.9, 0.95],
      "epsilon": 0.5,
      "samples": 2,
      "seed_base": 42,
      "jobs": 2,
      "out": "rows.csv"
    })";

    ExperimentConfig cfg = config_from_json_file(path);
    CHECK(cfg.instance.family == "garnet");
    CHECK(cfg.instance.n == 8);
    CHECK(cfg.solvers == std::vector<std::string>{"vi", "r-vi:1.05"});
    CHECK(cfg.lambdas == std::vector<double>{0.9, 0.95});
    CHECK(cfg.epsilon == 0.5);
    CHECK(cfg.samples == 2);
    CHECK(cfg.seed_base == 42);
    CHECK(cfg.jobs == 2);
    CHECK(cfg.out == "rows.csv");
    CHECK_NOTHROW(cfg.validate());

    auto bad_key = (dir / "bad_key.json").string();
    std::ofstream(bad_key) << R"({"solvers": ["vi"], "lambdas": [0.9], "turbo": true})";
    CHECK_THROWS_WITH_AS(config_from_json_file(bad_key), doctest::Contains("unknown key"),
                         std::invalid_argument);

    auto bad_inner = (dir / "bad_inner.json").string();
    std::ofstream(bad_inner) << R"({"instance": {"familly": "garnet"}})";
    CHECK_THROWS_AS(config_from_json_file(bad_inner), std::invalid_argument);

    CHECK_THROWS_AS(config_from_json_file((dir / "missing.json").string()),
                    std::runtime_error);
}

TEST_CASE("the sweep driver writes its CSV and propagates config errors") {
    auto dir = scratch_dir();

    ExperimentConfig cfg;
    cfg.instance = tiny_garnet();
    cfg.solvers = {"vi", "vc"};
    cfg.lambdas = {0.9};
    cfg.epsilon = 0.5;
    cfg.samples = 1;
    cfg.seed_base = 3;
    cfg.out = (dir / "rows.csv").string();

    std::ostringstream err;
    CHECK(cmd_sweep(cfg, err) == 0);
    std::vector<std::string> lines = split_lines(slurp(cfg.out));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("family,", 0) == 0);

    ExperimentConfig no_out = cfg;
    no_out.out.clear();
    std::ostringstream err2;
    CHECK(cmd_sweep(no_out, err2) == 1);
}

TEST_CASE("the validate driver rejects unknown suites") {
    std::ostringstream out, err;
    CHECK(cmd_validate({"nonsense"}, out, err) == 1);
    CHECK(err.str().find("error:") == 0);
}

TEST_CASE("the validate driver emits one JSON verdict per check") {
    std::ostringstream out, err;
    REQUIRE(cmd_validate({"divergence"}, out, err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out.str());
    REQUIRE(doc.contains("checks"));
    REQUIRE(doc.at("checks").is_array());
    CHECK(doc.at("total").get<int>() == static_cast<int>(doc.at("checks").size()));
    CHECK(doc.at("failed").get<int>() == 0);
    for (const auto& verdict : doc.at("checks")) {
        const int criterion = verdict.at("criterion").get<int>();
        CHECK((criterion == 6 || criterion == 7));
        CHECK(verdict.at("pass").get<bool>());
        CHECK(verdict.at("check").is_string());
        CHECK(verdict.at("detail").is_string());
        CHECK(verdict.at("title").is_string());
    }
}
