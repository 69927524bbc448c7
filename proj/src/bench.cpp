#include "mdpaccel/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mdpaccel/bellman.hpp"
#include "mdpaccel/instances.hpp"
#include "mdpaccel/io.hpp"
#include "mdpaccel/iteration_matrix.hpp"
#include "mdpaccel/oracle.hpp"
#include "mdpaccel/schedule.hpp"
#include "mdpaccel/solve.hpp"
#include "mdpaccel/spectral.hpp"
#include "mdpaccel/validate.hpp"

namespace mdpaccel {
namespace {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

Policy make_policy(const Mdp& mdp, const std::string& kind, std::uint64_t seed) {
    if (kind == "random") return random_policy(mdp, seed);
    if (kind == "uniform") return Policy::uniform(mdp.num_states, mdp.num_actions);
    if (kind == "only") {
        if (mdp.num_actions != 1)
            throw std::invalid_argument("policy 'only' needs a single-action instance");
        return Policy::deterministic(std::vector<int>(static_cast<std::size_t>(mdp.num_states), 0));
    }
    throw std::invalid_argument("unknown policy kind: " + kind + " (only|uniform|random)");
}

/// Normalized solver selection shared by `solve` and `sweep`. Sweep tokens
/// are `base[:option]` where r-vi takes a relaxation factor (`r-vi:1.1`) and
/// the accelerated solvers accept `:aggressive`.
struct ParsedSolver {
    std::string base;
    double alpha = 1.0;
    bool aggressive = false;
    std::optional<double> dim_c, dim_p;

    bool policy_target() const { return base == "vc" || base == "a-vc" || base == "m-vc"; }
};

bool known_base(const std::string& base) {
    static const char* names[] = {"vi", "vc", "gs-vi", "r-vi", "a-vi", "a-vc", "m-vi", "m-vc"};
    for (const char* n : names)
        if (base == n) return true;
    return false;
}

ParsedSolver parse_solver_token(const std::string& token) {
    ParsedSolver ps;
    std::string::size_type colon = token.find(':');
    ps.base = token.substr(0, colon);
    if (!known_base(ps.base)) throw std::invalid_argument("unknown solver: " + token);
    if (colon == std::string::npos) return ps;
    std::string option = token.substr(colon + 1);
    if (ps.base == "r-vi") {
        try {
            std::size_t used = 0;
            ps.alpha = std::stod(option, &used);
            if (used != option.size()) throw std::invalid_argument(option);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad relaxation factor in solver token: " + token);
        }
        return ps;
    }
    if ((ps.base == "a-vi" || ps.base == "a-vc") && option == "aggressive") {
        ps.aggressive = true;
        return ps;
    }
    throw std::invalid_argument("unsupported solver option: " + token);
}

struct RunOutput {
    SolveReport report;
    std::string schedule;
};

RunOutput execute_solver(const Mdp& mdp, const ParsedSolver& ps, const Policy* policy,
                         const StopRule& stop, const SolveOptions& opts) {
    const double lambda = mdp.discount;
    const Vector v0 = Vector::Zero(mdp.num_states);
    RunOutput out;
    if (ps.policy_target() && policy == nullptr)
        throw std::invalid_argument(ps.base + " needs a policy");
    if (ps.base == "vi") {
        out.report = run_vi(mdp, v0, stop, opts);
        out.schedule = "-";
    } else if (ps.base == "gs-vi") {
        out.report = run_gs_vi(mdp, v0, stop, opts);
        out.schedule = "-";
    } else if (ps.base == "vc") {
        out.report = run_vc(mdp, *policy, v0, stop, opts);
        out.schedule = "-";
    } else if (ps.base == "r-vi") {
        StepSchedule sch = ps.dim_c ? StepSchedule::diminishing(*ps.dim_c, ps.dim_p.value_or(1.0))
                                    : StepSchedule::constant(ps.alpha);
        out.report = run_rvi(mdp, v0, sch, stop, opts);
        out.schedule = sch.label();
    } else if (ps.base == "a-vi" || ps.base == "a-vc") {
        AccelCoeffs coeffs =
            ps.aggressive ? aggressive_step_sizes(lambda) : nesterov_step_sizes(lambda);
        std::optional<Policy> pol;
        if (ps.base == "a-vc") pol = *policy;
        out.report = run_accelerated(mdp, pol, v0, std::nullopt, coeffs, stop, opts);
        out.schedule = ps.aggressive ? "aggressive" : "nesterov";
    } else if (ps.base == "m-vi" || ps.base == "m-vc") {
        std::optional<Policy> pol;
        if (ps.base == "m-vc") pol = *policy;
        out.report = run_momentum(mdp, pol, v0, std::nullopt, momentum_step_sizes(lambda), stop,
                                  opts);
        out.schedule = "heavy-ball";
    } else {
        throw std::invalid_argument("unknown solver: " + ps.base);
    }
    return out;
}

int status_exit_code(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return 0;
        case SolveStatus::Diverged: return 2;
        case SolveStatus::MaxIters: return 3;
    }
    return 1;
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) known = true;
        if (!known) throw std::invalid_argument("unknown key in " + where + ": " + item.key());
    }
}

}  // namespace

Mdp InstanceSpec::realize() const {
    if (!file.empty()) return load_mdp(file);
    if (family == "garnet") {
        GarnetSpec spec;
        spec.n = n;
        spec.a = a;
        spec.branch = branch;
        spec.reward_max = reward_max;
        spec.discount = lambda;
        spec.seed = seed;
        return garnet(spec);
    }
    if (family == "hard-chain") return hard_chain(n, lambda);
    if (family == "cycle") return cycle_mdp(n, lambda);
    if (family == "reversible-walk") return reversible_walk(n, density, seed, lambda);
    throw std::invalid_argument(
        "unknown instance family: " + family +
        " (garnet|hard-chain|cycle|reversible-walk, or pass an instance file)");
}

void ExperimentConfig::validate() const {
    if (solvers.empty()) throw std::invalid_argument("config needs at least one solver");
    if (lambdas.empty()) throw std::invalid_argument("config needs at least one lambda");
    for (double l : lambdas)
        if (!(l > 0.0 && l < 1.0))
            throw std::invalid_argument("lambda must lie in (0, 1): " + format_double(l));
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    for (const auto& token : solvers) parse_solver_token(token);
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("bad config JSON in " + path + ": " + e.what());
    }
    reject_unknown_keys(j,
                        {"instance", "solvers", "lambdas", "epsilon", "max_iters", "samples",
                         "seed_base", "jobs", "out"},
                        "config");
    ExperimentConfig cfg;
    if (j.contains("instance")) {
        const nlohmann::json& ij = j.at("instance");
        reject_unknown_keys(
            ij, {"file", "family", "n", "a", "branch", "reward_max", "density", "seed"},
            "config instance");
        if (ij.contains("file")) cfg.instance.file = ij.at("file").get<std::string>();
        if (ij.contains("family")) cfg.instance.family = ij.at("family").get<std::string>();
        if (ij.contains("n")) cfg.instance.n = ij.at("n").get<int>();
        if (ij.contains("a")) cfg.instance.a = ij.at("a").get<int>();
        if (ij.contains("branch")) cfg.instance.branch = ij.at("branch").get<double>();
        if (ij.contains("reward_max")) cfg.instance.reward_max = ij.at("reward_max").get<double>();
        if (ij.contains("density")) cfg.instance.density = ij.at("density").get<double>();
        if (ij.contains("seed")) cfg.instance.seed = ij.at("seed").get<std::uint64_t>();
    }
    if (j.contains("solvers")) cfg.solvers = j.at("solvers").get<std::vector<std::string>>();
    if (j.contains("lambdas")) cfg.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("seed_base")) cfg.seed_base = j.at("seed_base").get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    return cfg;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    config.validate();
    std::vector<ParsedSolver> parsed;
    parsed.reserve(config.solvers.size());
    for (const auto& token : config.solvers) parsed.push_back(parse_solver_token(token));

    struct Job {
        double lambda;
        int sample;
        std::size_t solver;
    };
    // Rows come out ordered by (seed, solver, lambda) so repeated runs of the
    // same config diff cleanly and downstream grouping never needs a sort.
    std::vector<Job> todo;
    for (int sample = 0; sample < config.samples; ++sample)
        for (std::size_t s = 0; s < parsed.size(); ++s)
            for (double lambda : config.lambdas) todo.push_back({lambda, sample, s});

    std::vector<SweepRow> rows(todo.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_guard;

    auto worker = [&]() {
        for (;;) {
            std::size_t idx = cursor.fetch_add(1);
            if (idx >= todo.size()) return;
            try {
                const Job& job = todo[idx];
                const ParsedSolver& ps = parsed[job.solver];
                InstanceSpec spec = config.instance;
                spec.lambda = job.lambda;
                spec.seed = config.seed_base + static_cast<std::uint64_t>(job.sample);
                Mdp mdp = spec.realize();
                if (!spec.file.empty()) {
                    mdp.discount = job.lambda;
                    mdp.validate();
                }
                Policy pol;
                if (ps.policy_target()) pol = random_policy(mdp, spec.seed + 1);
                StopRule stop;
                stop.epsilon = config.epsilon;
                stop.max_iters = config.max_iters;
                RunOutput ro = execute_solver(mdp, ps, ps.policy_target() ? &pol : nullptr, stop,
                                              SolveOptions{});
                SweepRow row;
                row.family = spec.file.empty() ? spec.family : "file";
                row.n = mdp.num_states;
                row.a = mdp.num_actions;
                row.seed = spec.seed;
                row.solver = config.solvers[job.solver];
                row.schedule = ro.schedule;
                row.lambda = job.lambda;
                row.epsilon = config.epsilon;
                row.status = to_string(ro.report.status);
                row.iterations = ro.report.iterations;
                row.wall_time_ms = static_cast<double>(ro.report.wall_time_ns) / 1e6;
                row.final_residual =
                    ro.report.diff_trace.empty() ? 0.0 : ro.report.diff_trace.back();
                rows[idx] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_guard);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    unsigned count = static_cast<unsigned>(
        std::min<std::size_t>(static_cast<std::size_t>(config.jobs), todo.size()));
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "family,n,a,seed,solver,schedule,lambda,epsilon,status,iterations,wall_time_ms,"
           "final_residual\n";
    for (const auto& r : rows) {
        out << r.family << ',' << r.n << ',' << r.a << ',' << r.seed << ',' << r.solver << ','
            << r.schedule << ',' << format_double(r.lambda) << ',' << format_double(r.epsilon)
            << ',' << r.status << ',' << r.iterations << ',' << format_double(r.wall_time_ms)
            << ',' << format_double(r.final_residual) << '\n';
    }
    return out.str();
}

int cmd_generate(const GenerateArgs& args, std::ostream& err) {
    try {
        if (args.out.empty()) throw std::invalid_argument("generate needs an output path");
        Mdp mdp = args.instance.realize();
        save_mdp(mdp, args.out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    try {
        Mdp mdp = args.instance.realize();
        ParsedSolver ps;
        ps.base = args.solver;
        if (!known_base(ps.base)) throw std::invalid_argument("unknown solver: " + args.solver);
        ps.alpha = args.alpha;
        ps.aggressive = args.aggressive;
        ps.dim_c = args.dim_c;
        ps.dim_p = args.dim_p;

        Policy pol;
        if (ps.policy_target()) pol = make_policy(mdp, args.policy, args.policy_seed);

        Vector oracle;
        SolveOptions opts;
        if (args.with_oracle) {
            oracle = ps.policy_target() ? exact_policy_value(mdp, pol)
                                        : exact_optimal_value(mdp).value;
            opts.oracle = &oracle;
        }
        StopRule stop;
        stop.epsilon = args.epsilon;
        stop.max_iters = args.max_iters;
        stop.validate();

        RunOutput ro = execute_solver(mdp, ps, ps.policy_target() ? &pol : nullptr, stop, opts);
        nlohmann::json rj = report_to_json(ro.report, args.solver, ro.schedule, mdp.discount,
                                           args.epsilon);
        if (!args.trace_path.empty()) write_file(args.trace_path, trace_to_csv(ro.report));
        if (!args.report_path.empty()) {
            write_file(args.report_path, rj.dump(2) + "\n");
            out << args.solver << ": " << to_string(ro.report.status) << " after "
                << ro.report.iterations << " iterations ("
                << static_cast<double>(ro.report.wall_time_ns) / 1e6 << " ms)\n";
        } else {
            out << rj.dump(2) << "\n";
        }
        return status_exit_code(ro.report.status);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& err) {
    try {
        if (config.out.empty()) throw std::invalid_argument("sweep needs an output CSV path");
        std::vector<SweepRow> rows = run_sweep(config);
        write_file(config.out, sweep_rows_to_csv(rows));
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_validate(const std::vector<std::string>& suites, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> names = suites.empty() ? std::vector<std::string>{"all"} : suites;
        nlohmann::json verdicts = nlohmann::json::array();
        int total = 0;
        int failed = 0;
        for (const auto& name : names) {
            std::vector<CriterionResult> results = run_suite(name);
            for (const auto& cr : results) {
                for (const auto& check : cr.checks) {
                    ++total;
                    if (!check.pass) ++failed;
                    verdicts.push_back({{"criterion", cr.number},
                                        {"title", cr.title},
                                        {"check", check.name},
                                        {"pass", check.pass},
                                        {"detail", check.detail}});
                }
            }
        }
        nlohmann::json doc{{"checks", std::move(verdicts)}, {"total", total}, {"failed", failed}};
        out << doc.dump(2) << "\n";
        return failed == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_plotdata(const PlotdataArgs& args, std::ostream& err) {
    try {
        if (args.out.empty()) throw std::invalid_argument("plotdata needs an output path");
        if (args.traces.empty()) throw std::invalid_argument("plotdata needs at least one trace");
        if (!args.labels.empty() && args.labels.size() != args.traces.size())
            throw std::invalid_argument("labels must match traces one to one");

        std::ostringstream out;
        out << "solver,iteration,log10_error\n";
        for (std::size_t t = 0; t < args.traces.size(); ++t) {
            const std::string& path = args.traces[t];
            std::string label = t < args.labels.size()
                                    ? args.labels[t]
                                    : std::filesystem::path(path).stem().string();
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot open trace: " + path);
            std::string line;
            if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0)
                throw std::runtime_error("not a trace CSV (bad header): " + path);
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                // Trace rows are iteration,diff_norm,error_to_oracle; the last
                // field is empty when the run had no oracle attached.
                const std::size_t c1 = line.find(',');
                const std::size_t c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
                const std::string error_field =
                    c2 == std::string::npos ? std::string() : line.substr(c2 + 1);
                if (error_field.empty())
                    throw std::runtime_error(
                        "trace lacks oracle errors (rerun solve --with-oracle): " + path);
                const double error_value = std::stod(error_field);
                out << label << ',' << line.substr(0, c1) << ','
                    << format_double(std::log10(error_value)) << '\n';
            }
        }
        if (args.reference_lambda) {
            double lambda = *args.reference_lambda;
            if (!(lambda > 0.0 && lambda < 1.0))
                throw std::invalid_argument("reference lambda must lie in (0, 1)");
            if (args.reference_iters < 1)
                throw std::invalid_argument("reference iteration count must be at least 1");
            const double slope = std::log10(lambda);
            for (int s = 1; s <= args.reference_iters; ++s)
                out << "reference," << s << ',' << format_double(slope * s) << '\n';
        }
        write_file(args.out, out.str());
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& err) {
    try {
        Mdp mdp = args.instance.realize();
        Policy pol = make_policy(mdp, args.policy, args.policy_seed);
        InducedChain chain = induce_chain(mdp, pol);

        IterationMatrix im;
        if (args.variant == "accelerated")
            im = accel_iteration_matrix(chain, mdp.discount);
        else if (args.variant == "momentum")
            im = momentum_iteration_matrix(chain, mdp.discount);
        else
            throw std::invalid_argument("unknown variant: " + args.variant +
                                        " (accelerated|momentum)");

        ChainSpectrum cs = chain_spectrum(chain.matrix);
        nlohmann::json j = spectrum_to_json(im, cs.reversible);
        if (args.out.empty())
            out << j.dump(2) << "\n";
        else
            write_file(args.out, j.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mdpaccel
