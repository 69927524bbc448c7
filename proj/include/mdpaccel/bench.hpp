#pragma once

#include "mdpaccel/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mdpaccel {

/// Instance source shared by the subcommands: either a file path or a
/// generator family with parameters.
struct InstanceSpec {
    std::string file;    // takes precedence when nonempty
    std::string family;  // garnet | hard-chain | cycle | reversible-walk
    int n = 50;
    int a = 30;
    double branch = 0.8;
    double reward_max = 100.0;
    double density = 0.2;
    std::uint64_t seed = 0;
    double lambda = 0.95;

    /// Builds or loads the instance. Throws std::invalid_argument on unknown
    /// family or unreadable file.
    Mdp realize() const;
};

struct GenerateArgs {
    InstanceSpec instance;
    std::string out;  // output JSON path
};

struct SolveArgs {
    InstanceSpec instance;
    std::string solver = "vi";  // vi|vc|gs-vi|r-vi|a-vi|a-vc|m-vi|m-vc
    double alpha = 1.0;         // r-vi relaxation
    bool aggressive = false;    // a-*: alpha=1 tuning instead of the default
    std::optional<double> dim_c, dim_p;  // r-vi diminishing schedule
    std::string policy = "random";       // only|uniform|random (policy-target solvers)
    std::uint64_t policy_seed = 1;
    double epsilon = 1.0;
    int max_iters = 100000;
    bool with_oracle = false;   // adds the error-to-oracle trace column
    std::string report_path;    // report JSON (optional)
    std::string trace_path;     // trace CSV (optional)
};

/// Experimental protocol: Cartesian product of samples x solvers x lambdas
/// over one instance family, one summary row per run.
struct ExperimentConfig {
    InstanceSpec instance;               // family template (seed ignored)
    std::vector<std::string> solvers;    // e.g. "vi", "r-vi:1.1", "a-vc"
    std::vector<double> lambdas;
    double epsilon = 1.0;
    int max_iters = 100000;
    int samples = 10;
    std::uint64_t seed_base = 1;
    int jobs = 1;
    std::string out;  // summary CSV path

    /// Throws std::invalid_argument on empty solver/lambda lists, epsilon <= 0
    /// or samples < 1.
    void validate() const;
};

/// Parses a config JSON file (same field names as the struct); flags given on
/// the command line are applied by the caller after parsing.
ExperimentConfig config_from_json_file(const std::string& path);

struct PlotdataArgs {
    std::vector<std::string> traces;       // trace CSVs with oracle columns
    std::vector<std::string> labels;       // one per trace; defaults to filename stem
    std::optional<double> reference_lambda;  // adds rows solver=lambda^s
    int reference_iters = 100;
    std::string out;
};

struct SpectrumArgs {
    InstanceSpec instance;
    std::string variant = "accelerated";  // accelerated | momentum
    std::string policy = "random";
    std::uint64_t policy_seed = 1;
    std::string out;  // spectrum JSON path (stdout when empty)
};

/// Subcommand drivers. Exit codes: 0 success/Converged, 1 bad configuration,
/// 2 Diverged, 3 MaxIters.
int cmd_generate(const GenerateArgs& args, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, std::ostream& err);
int cmd_validate(const std::vector<std::string>& suites, std::ostream& out,
                 std::ostream& err);
int cmd_plotdata(const PlotdataArgs& args, std::ostream& err);
int cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& err);

/// One summary row of a sweep, exposed for tests; the CSV serialization of
/// `rows` is what cmd_sweep writes.
struct SweepRow {
    std::string family;
    int n = 0, a = 0;
    std::uint64_t seed = 0;
    std::string solver;
    std::string schedule;
    double lambda = 0.0;
    double epsilon = 1.0;
    std::string status;
    int iterations = 0;
    double wall_time_ms = 0.0;
    double final_residual = 0.0;
};
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);

}  // namespace mdpaccel
