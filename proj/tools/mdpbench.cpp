#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "mdpaccel/bench.hpp"

namespace {

void add_instance_flags(CLI::App* cmd, mdpaccel::InstanceSpec& spec) {
    cmd->add_option("--instance", spec.file, "instance JSON file (overrides --family)");
    cmd->add_option("--family", spec.family,
                    "generator family: garnet|hard-chain|cycle|reversible-walk");
    cmd->add_option("--n", spec.n, "number of states");
    cmd->add_option("--a", spec.a, "number of actions (garnet)");
    cmd->add_option("--branch", spec.branch, "garnet branching fraction in (0, 1]");
    cmd->add_option("--reward-max", spec.reward_max, "reward scale");
    cmd->add_option("--density", spec.density, "edge density (reversible-walk)");
    cmd->add_option("--seed", spec.seed, "generator seed");
    cmd->add_option("--lambda", spec.lambda, "discount factor in (0, 1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabular MDP solvers, iteration-matrix spectra, and benchmark sweeps"};
    app.require_subcommand(1);

    mdpaccel::GenerateArgs gen;
    CLI::App* cgen = app.add_subcommand("generate", "write a generated instance to JSON");
    add_instance_flags(cgen, gen.instance);
    cgen->add_option("--out", gen.out, "output JSON path")->required();

    mdpaccel::SolveArgs sol;
    CLI::App* csol = app.add_subcommand("solve", "run one solver on one instance");
    add_instance_flags(csol, sol.instance);
    csol->add_option("--solver", sol.solver, "vi|vc|gs-vi|r-vi|a-vi|a-vc|m-vi|m-vc");
    csol->add_option("--alpha", sol.alpha, "relaxation factor (r-vi)");
    csol->add_flag("--aggressive", sol.aggressive, "alpha=1 step sizes for a-vi/a-vc");
    csol->add_option("--dim-c", sol.dim_c, "diminishing r-vi schedule scale, alpha_s=c/(s+1)^p");
    csol->add_option("--dim-p", sol.dim_p, "diminishing r-vi schedule power");
    csol->add_option("--policy", sol.policy, "policy-target policy: only|uniform|random");
    csol->add_option("--policy-seed", sol.policy_seed, "seed for --policy random");
    csol->add_option("--epsilon", sol.epsilon, "target accuracy of the stopping rule");
    csol->add_option("--max-iters", sol.max_iters, "iteration cap");
    csol->add_flag("--with-oracle", sol.with_oracle,
                   "solve the linear system exactly and record the error trace");
    csol->add_option("--report", sol.report_path, "write the run report JSON here");
    csol->add_option("--trace", sol.trace_path, "write the per-iteration CSV here");

    std::string config_path;
    int jobs = 1;
    int samples = 1;
    int max_iters = 1;
    double epsilon = 1.0;
    std::uint64_t seed_base = 1;
    std::string sweep_out;
    CLI::App* cswp = app.add_subcommand("sweep", "run an experiment grid, one CSV row per run");
    cswp->add_option("--config", config_path, "experiment config JSON")->required();
    CLI::Option* o_jobs = cswp->add_option("--jobs", jobs, "worker threads");
    CLI::Option* o_samples = cswp->add_option("--samples", samples, "instances per cell");
    CLI::Option* o_eps = cswp->add_option("--epsilon", epsilon, "target accuracy");
    CLI::Option* o_seed = cswp->add_option("--seed-base", seed_base, "first instance seed");
    CLI::Option* o_max = cswp->add_option("--max-iters", max_iters, "iteration cap");
    CLI::Option* o_out = cswp->add_option("--out", sweep_out, "summary CSV path");

    std::vector<std::string> suites;
    CLI::App* cval = app.add_subcommand("validate", "run end-to-end validation suites");
    cval->add_option("suites", suites,
                     "rates|scaling|relaxation|divergence|lower-bound|spectral|certificates|"
                     "oracle|reproducibility|all (default: all)");

    mdpaccel::PlotdataArgs plot;
    CLI::App* cplot = app.add_subcommand("plotdata", "merge trace CSVs into one long-format CSV");
    cplot->add_option("--trace", plot.traces, "trace CSV from `solve --trace`")->required();
    cplot->add_option("--label", plot.labels, "series label, one per trace");
    cplot->add_option("--reference-lambda", plot.reference_lambda,
                      "append a geometric reference series with this ratio");
    cplot->add_option("--reference-iters", plot.reference_iters, "reference series length");
    cplot->add_option("--out", plot.out, "output CSV path")->required();

    mdpaccel::SpectrumArgs spec;
    CLI::App* cspec = app.add_subcommand("spectrum",
                                         "iteration-matrix radius and spectrum report");
    add_instance_flags(cspec, spec.instance);
    cspec->add_option("--variant", spec.variant, "accelerated|momentum");
    cspec->add_option("--policy", spec.policy, "only|uniform|random");
    cspec->add_option("--policy-seed", spec.policy_seed, "seed for --policy random");
    cspec->add_option("--out", spec.out, "spectrum JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cgen->parsed()) return mdpaccel::cmd_generate(gen, std::cerr);
    if (csol->parsed()) return mdpaccel::cmd_solve(sol, std::cout, std::cerr);
    if (cswp->parsed()) {
        mdpaccel::ExperimentConfig cfg;
        try {
            cfg = mdpaccel::config_from_json_file(config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        if (o_jobs->count() > 0) cfg.jobs = jobs;
        if (o_samples->count() > 0) cfg.samples = samples;
        if (o_eps->count() > 0) cfg.epsilon = epsilon;
        if (o_seed->count() > 0) cfg.seed_base = seed_base;
        if (o_max->count() > 0) cfg.max_iters = max_iters;
        if (o_out->count() > 0) cfg.out = sweep_out;
        return mdpaccel::cmd_sweep(cfg, std::cerr);
    }
    if (cval->parsed()) return mdpaccel::cmd_validate(suites, std::cout, std::cerr);
    if (cplot->parsed()) return mdpaccel::cmd_plotdata(plot, std::cerr);
    if (cspec->parsed()) return mdpaccel::cmd_spectrum(spec, std::cout, std::cerr);
    return 1;
}
