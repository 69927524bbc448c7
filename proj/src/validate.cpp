#include "mdpaccel/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdpaccel/bellman.hpp"
#include "mdpaccel/bench.hpp"
#include "mdpaccel/instances.hpp"
#include "mdpaccel/iteration_matrix.hpp"
#include "mdpaccel/ltv.hpp"
#include "mdpaccel/oracle.hpp"
#include "mdpaccel/schedule.hpp"
#include "mdpaccel/solve.hpp"
#include "mdpaccel/spectral.hpp"

namespace mdpaccel {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

CheckResult mk(std::string name, bool pass, std::string detail) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = pass;
    c.detail = std::move(detail);
    return c;
}

Policy only_policy(const Mdp& mdp) {
    return Policy::deterministic(std::vector<int>(static_cast<std::size_t>(mdp.num_states), 0));
}

/// Least-squares geometric rate over the tail of an error trace. The head
/// carries transients (and, for the accelerated variants, the polynomial
/// factor of a defective dominant eigenvalue), so a fixed leading fraction
/// is dropped before fitting.
double tail_rate(const std::vector<double>& errors, double drop = 0.3) {
    auto start = static_cast<std::ptrdiff_t>(static_cast<double>(errors.size()) * drop);
    std::vector<double> tail(errors.begin() + start, errors.end());
    while (!tail.empty() && tail.back() <= 0.0) tail.pop_back();
    return estimate_rate(tail);
}

SolveReport run_policy_solver(const std::string& solver, const Mdp& mdp, const Policy& pi,
                              double epsilon, const Vector& oracle) {
    SolveOptions opts;
    opts.oracle = &oracle;
    StopRule stop;
    stop.epsilon = epsilon;
    stop.max_iters = 50000;
    Vector v0 = Vector::Zero(mdp.num_states);
    if (solver == "vc") return run_vc(mdp, pi, v0, stop, opts);
    if (solver == "a-vc")
        return run_accelerated(mdp, pi, v0, std::nullopt, nesterov_step_sizes(mdp.discount), stop,
                               opts);
    if (solver == "m-vc")
        return run_momentum(mdp, pi, v0, std::nullopt, momentum_step_sizes(mdp.discount), stop,
                            opts);
    throw std::invalid_argument("unknown policy solver: " + solver);
}

/// Stopping accuracy for the rate fixtures, chosen per solver and discount so
/// each error trace is long enough for a stable fit but stays well above the
/// floating-point floor.
double rate_epsilon(const std::string& solver, double lambda) {
    if (solver == "a-vc") return lambda < 0.95 ? 1e-8 : 1e-7;
    if (solver == "m-vc") return lambda < 0.95 ? 1e-9 : 1e-8;
    return lambda < 0.95 ? 1e-8 : 1e-6;
}

struct MeasuredRate {
    bool converged = false;
    double fit = std::numeric_limits<double>::quiet_NaN();
    std::size_t iterations = 0;
};

/// Runs one policy-evaluation solver on the pinned 50-state reversible walk
/// and fits the empirical contraction rate of its error trace.
MeasuredRate measure_policy_rate(const std::string& solver, double lambda) {
    Mdp mdp = reversible_walk(50, 0.2, 7, lambda);
    Policy pi = only_policy(mdp);
    Vector vpi = exact_policy_value(mdp, pi);
    SolveReport rep = run_policy_solver(solver, mdp, pi, rate_epsilon(solver, lambda), vpi);
    MeasuredRate m;
    m.converged = rep.status == SolveStatus::Converged;
    m.iterations = rep.iterations;
    if (m.converged) m.fit = tail_rate(rep.error_trace);
    return m;
}

void add_rate_check(CriterionResult& cr, const std::string& solver, double lambda,
                    const MeasuredRate& m, double predicted, double tol) {
    std::ostringstream os;
    os << "measured " << fmt(m.fit) << " predicted " << fmt(predicted) << " tolerance " << tol
       << " (" << m.iterations << " iterations)";
    bool pass = m.converged && std::abs(m.fit - predicted) <= tol;
    if (!m.converged) os << " [run did not converge]";
    cr.checks.push_back(mk(solver + " rate at lambda=" + fmt(lambda), pass, os.str()));
}

CriterionResult criterion_avc_rate() {
    CriterionResult cr;
    cr.number = 1;
    cr.title = "accelerated policy evaluation attains its predicted rate";
    for (double lambda : {0.9, 0.99}) {
        MeasuredRate m = measure_policy_rate("a-vc", lambda);
        add_rate_check(cr, "a-vc", lambda, m, accel_rate(lambda), 0.02);
    }
    return cr;
}

CriterionResult criterion_mvc_rate() {
    CriterionResult cr;
    cr.number = 2;
    cr.title = "momentum policy evaluation attains its predicted rate and beats acceleration";
    for (double lambda : {0.9, 0.99}) {
        MeasuredRate mom = measure_policy_rate("m-vc", lambda);
        MeasuredRate acc = measure_policy_rate("a-vc", lambda);
        add_rate_check(cr, "m-vc", lambda, mom, momentum_rate(lambda), 0.02);
        bool faster = mom.converged && acc.converged && mom.fit < acc.fit;
        cr.checks.push_back(mk("m-vc faster than a-vc at lambda=" + fmt(lambda), faster,
                               "momentum " + fmt(mom.fit) + " vs accelerated " + fmt(acc.fit)));
    }
    return cr;
}

CriterionResult criterion_vc_rate() {
    CriterionResult cr;
    cr.number = 3;
    cr.title = "classical policy evaluation contracts at the discount factor";
    for (double lambda : {0.9, 0.99}) {
        MeasuredRate m = measure_policy_rate("vc", lambda);
        add_rate_check(cr, "vc", lambda, m, lambda, 0.02);
    }
    return cr;
}

CriterionResult criterion_scaling() {
    CriterionResult cr;
    cr.number = 4;
    cr.title = "the acceleration advantage grows with the discount factor";
    const int samples = 10;
    std::vector<double> ratios;
    bool all_converged = true;
    std::string trouble;
    for (double lambda : {0.99, 0.999}) {
        double it_vc = 0.0;
        double it_avc = 0.0;
        for (int k = 0; k < samples; ++k) {
            GarnetSpec spec;
            spec.n = 150;
            spec.a = 100;
            spec.branch = 0.8;
            spec.reward_max = 100.0;
            spec.discount = lambda;
            spec.seed = 2000 + static_cast<std::uint64_t>(k);
            Mdp mdp = garnet(spec);
            Policy pi = random_policy(mdp, spec.seed + 1);
            StopRule stop;
            stop.epsilon = 1.0;
            stop.max_iters = 200000;
            Vector v0 = Vector::Zero(mdp.num_states);
            SolveReport rvc = run_vc(mdp, pi, v0, stop);
            SolveReport rac = run_accelerated(mdp, pi, v0, std::nullopt,
                                              nesterov_step_sizes(lambda), stop);
            if (rvc.status != SolveStatus::Converged || rac.status != SolveStatus::Converged) {
                all_converged = false;
                trouble = "seed " + std::to_string(spec.seed) + " lambda " + fmt(lambda);
            }
            it_vc += static_cast<double>(rvc.iterations);
            it_avc += static_cast<double>(rac.iterations);
        }
        ratios.push_back(it_vc / it_avc);
    }
    cr.checks.push_back(mk("all scaling runs converged", all_converged,
                           all_converged ? "20 paired runs" : "failure at " + trouble));
    double growth = ratios[1] / ratios[0];
    cr.checks.push_back(
        mk("iteration-ratio growth", growth >= 2.0,
           "vc/a-vc ratio " + fmt(ratios[1]) + " at lambda=0.999 vs " + fmt(ratios[0]) +
               " at lambda=0.99, growth factor " + fmt(growth) + " (need >= 2)"));
    return cr;
}

CriterionResult criterion_relaxation() {
    CriterionResult cr;
    cr.number = 5;
    cr.title = "relaxed value iteration obeys its per-step contraction bound";
    for (double lambda : {0.8, 0.9}) {
        Mdp mdp = reversible_walk(50, 0.2, 7, lambda);
        Vector vstar = exact_policy_value(mdp, only_policy(mdp));
        double floor = 1e-12 * (1.0 + vstar.lpNorm<Eigen::Infinity>());
        for (double alpha : {0.9, 1.0, 1.1}) {
            StepSchedule sch = StepSchedule::constant(alpha);
            SolveOptions opts;
            opts.oracle = &vstar;
            opts.record_iterates = alpha == 1.0;
            StopRule stop;
            stop.epsilon = 1e-2;
            stop.max_iters = 20000;
            Vector v0 = Vector::Zero(mdp.num_states);
            SolveReport rep = run_rvi(mdp, v0, sch, stop, opts);
            std::string tag = " lambda=" + fmt(lambda) + " alpha=" + fmt(alpha);

            double bound = relaxed_rate_bound(lambda, alpha);
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s + 1 < rep.error_trace.size(); ++s) {
                double e0 = rep.error_trace[s];
                double e1 = rep.error_trace[s + 1];
                if (e0 <= floor || e1 <= floor) continue;
                worst = std::max(worst, e1 / e0 - bound);
            }
            cr.checks.push_back(mk("per-step ratio bound" + tag, worst <= 1e-9,
                                   "worst ratio excess over bound " + fmt(bound) + " is " +
                                       fmt(worst) + " (need <= 1e-9)"));

            bool want_guaranteed = alpha > 0.0 && alpha < relaxation_guarantee_limit(lambda);
            cr.checks.push_back(mk("guarantee flag" + tag, rep.guaranteed == want_guaranteed,
                                   std::string("flag ") + (rep.guaranteed ? "true" : "false") +
                                       " expected " + (want_guaranteed ? "true" : "false")));

            cr.checks.push_back(mk("convergence" + tag, rep.status == SolveStatus::Converged,
                                   std::string(to_string(rep.status)) + " after " +
                                       std::to_string(rep.iterations) + " iterations"));

            if (alpha == 1.0) {
                SolveOptions vopts;
                vopts.oracle = &vstar;
                vopts.record_iterates = true;
                SolveReport vi = run_vi(mdp, v0, stop, vopts);
                bool same = vi.iterates.size() == rep.iterates.size();
                double dev = 0.0;
                if (same) {
                    for (std::size_t s = 0; s < vi.iterates.size(); ++s)
                        dev = std::max(dev,
                                       (vi.iterates[s] - rep.iterates[s])
                                           .lpNorm<Eigen::Infinity>());
                    same = dev == 0.0;
                }
                cr.checks.push_back(
                    mk("alpha=1 reproduces vi bitwise lambda=" + fmt(lambda), same,
                       same ? std::to_string(vi.iterates.size()) + " identical iterates"
                            : "iterate mismatch, max deviation " + fmt(dev)));
            }
        }
    }
    return cr;
}

/// Closed-form spectral radius factor of the four-state cycle for the
/// accelerated update: the extreme chain eigenvalues are the imaginary pair,
/// where the quadratic roots reach |1 + i(1 + sqrt 2)| / 2 times the step
/// parameter, and that constant is sqrt(4 + 2 sqrt 2) / 2.
double cycle_accel_radius(double lambda) {
    return accel_rate(lambda) * 0.5 * std::sqrt(4.0 + 2.0 * std::sqrt(2.0));
}

/// Same for the momentum update: at the imaginary pair the dominant root has
/// modulus (1 + sqrt 2) times the real-spectrum rate.
double cycle_momentum_radius(double lambda) {
    return (1.0 + std::sqrt(2.0)) * momentum_rate(lambda);
}

CriterionResult criterion_divergence() {
    CriterionResult cr;
    cr.number = 6;
    cr.title = "both accelerated variants diverge on the four-state cycle at discount 0.95";
    const double lambda = 0.95;
    Mdp mdp = cycle_mdp(4, lambda);
    Policy pi = only_policy(mdp);
    InducedChain chain = induce_chain(mdp, pi);

    IterationMatrix ia = accel_iteration_matrix(chain, lambda);
    IterationMatrix im = momentum_iteration_matrix(chain, lambda);
    double want_a = cycle_accel_radius(lambda);
    double want_m = cycle_momentum_radius(lambda);

    cr.checks.push_back(mk("full spectrum available", ia.spectrum_full && im.spectrum_full,
                           "cycle chains expose their analytic spectrum"));
    cr.checks.push_back(mk("accelerated radius matches closed form",
                           std::abs(ia.radius - want_a) <= 1e-9,
                           "radius " + fmt(ia.radius) + " expected " + fmt(want_a)));
    cr.checks.push_back(mk("accelerated radius exceeds one", ia.radius > 1.0,
                           "radius " + fmt(ia.radius)));
    cr.checks.push_back(mk("momentum radius matches closed form",
                           std::abs(im.radius - want_m) <= 1e-9,
                           "radius " + fmt(im.radius) + " expected " + fmt(want_m)));
    cr.checks.push_back(mk("momentum radius exceeds one", im.radius > 1.0,
                           "radius " + fmt(im.radius)));

    StopRule stop;
    stop.epsilon = 1e-6;
    stop.max_iters = 5000;
    Vector v0 = Vector::Zero(mdp.num_states);
    SolveReport ra = run_accelerated(mdp, pi, v0, std::nullopt, nesterov_step_sizes(lambda), stop);
    SolveReport rm = run_momentum(mdp, pi, v0, std::nullopt, momentum_step_sizes(lambda), stop);
    SolveReport rc = run_vc(mdp, pi, v0, stop);
    cr.checks.push_back(mk("a-vc diverges", ra.status == SolveStatus::Diverged,
                           std::string(to_string(ra.status)) + " after " + std::to_string(ra.iterations) +
                               " iterations"));
    cr.checks.push_back(mk("m-vc diverges", rm.status == SolveStatus::Diverged,
                           std::string(to_string(rm.status)) + " after " + std::to_string(rm.iterations) +
                               " iterations"));
    cr.checks.push_back(mk("vc converges", rc.status == SolveStatus::Converged,
                           std::string(to_string(rc.status)) + " after " + std::to_string(rc.iterations) +
                               " iterations"));
    return cr;
}

CriterionResult criterion_safe_cycle() {
    CriterionResult cr;
    cr.number = 7;
    cr.title = "the four-state cycle at discount 0.5 stays below the stability threshold";
    const double lambda = 0.5;
    Mdp mdp = cycle_mdp(4, lambda);
    Policy pi = only_policy(mdp);
    InducedChain chain = induce_chain(mdp, pi);

    IterationMatrix ia = accel_iteration_matrix(chain, lambda);
    double want = cycle_accel_radius(lambda);
    cr.checks.push_back(mk("accelerated radius matches closed form",
                           std::abs(ia.radius - want) <= 1e-9,
                           "radius " + fmt(ia.radius) + " expected " + fmt(want)));
    cr.checks.push_back(mk("accelerated radius below one", ia.radius < 1.0,
                           "radius " + fmt(ia.radius)));

    Vector vpi = exact_policy_value(mdp, pi);
    SolveOptions opts;
    opts.oracle = &vpi;
    StopRule stop;
    stop.epsilon = 1e-6;
    stop.max_iters = 5000;
    Vector v0 = Vector::Zero(mdp.num_states);
    SolveReport ra = run_accelerated(mdp, pi, v0, std::nullopt, nesterov_step_sizes(lambda), stop,
                                     opts);
    bool conv = ra.status == SolveStatus::Converged;
    double final_err = conv && !ra.error_trace.empty() ? ra.error_trace.back()
                                                       : std::numeric_limits<double>::infinity();
    cr.checks.push_back(mk("a-vc converges", conv,
                           std::string(to_string(ra.status)) + " after " + std::to_string(ra.iterations) +
                               " iterations"));
    cr.checks.push_back(mk("final error within tolerance", final_err <= 1e-6,
                           "final error " + fmt(final_err)));
    return cr;
}

CriterionResult criterion_lower_bound() {
    CriterionResult cr;
    cr.number = 8;
    cr.title = "no one-step method beats the hard-chain lower bound";
    const int n = 100;
    const double lambda = 0.95;
    Mdp mdp = hard_chain(n, lambda);
    Vector vstar(n);
    for (int i = 0; i < n; ++i) vstar[i] = std::pow(lambda, i) / (1.0 - lambda);

    StopRule stop;
    stop.epsilon = 1e-9;
    stop.max_iters = n - 1;
    stop.divergence_factor = 1e30;
    SolveOptions opts;
    opts.record_iterates = true;
    Vector v0 = Vector::Zero(n);

    struct Run {
        std::string name;
        SolveReport rep;
    };
    std::vector<Run> runs;
    runs.push_back({"vi", run_vi(mdp, v0, stop, opts)});
    runs.push_back({"r-vi alpha=0.9", run_rvi(mdp, v0, StepSchedule::constant(0.9), stop, opts)});
    runs.push_back({"a-vi", run_accelerated(mdp, std::nullopt, v0, std::nullopt,
                                            nesterov_step_sizes(lambda), stop, opts)});
    runs.push_back({"m-vi", run_momentum(mdp, std::nullopt, v0, std::nullopt,
                                         momentum_step_sizes(lambda), stop, opts)});
    for (const auto& r : runs) {
        bool length_ok = r.rep.iterates.size() == static_cast<std::size_t>(n);
        LowerBoundReport lb = lower_bound_check(r.rep.iterates, mdp, vstar);
        std::string detail;
        if (!length_ok)
            detail = "expected " + std::to_string(n) + " iterates, got " +
                     std::to_string(r.rep.iterates.size());
        else if (!lb.ok)
            detail = lb.detail;
        else
            detail = "zero pattern and gap bound hold through step " + std::to_string(n - 1);
        cr.checks.push_back(mk("lower bound for " + r.name, length_ok && lb.ok, detail));
    }
    return cr;
}

CriterionResult criterion_spectral() {
    CriterionResult cr;
    cr.number = 9;
    cr.title = "iteration-matrix spectra match the quadratic root predictions";
    const double lambdas[4] = {0.8, 0.9, 0.95, 0.99};
    bool all_full = true;
    std::string not_full_at = "none";
    double worst_radius[2] = {0.0, 0.0};
    double worst_root[2] = {0.0, 0.0};
    std::string worst_radius_at[2] = {"none", "none"};
    std::string worst_root_at[2] = {"none", "none"};

    for (int k = 1; k <= 20; ++k) {
        int n = 4 + (k % 17);
        double lambda = lambdas[k % 4];
        Mdp mdp = reversible_walk(n, 0.5, static_cast<std::uint64_t>(100 + k), lambda);
        InducedChain chain = induce_chain(mdp, only_policy(mdp));
        std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(100 + k) +
                          " lambda=" + fmt(lambda);
        for (int vi = 0; vi < 2; ++vi) {
            IterationMatrix im = vi == 0 ? accel_iteration_matrix(chain, lambda)
                                         : momentum_iteration_matrix(chain, lambda);
            if (!im.spectrum_full) {
                all_full = false;
                not_full_at = tag;
                continue;
            }
            double direct = dominant_modulus(im.matrix);
            double dr = std::abs(im.radius - direct) / std::max(1.0, direct);
            if (dr > worst_radius[vi]) {
                worst_radius[vi] = dr;
                worst_radius_at[vi] = tag;
            }
            for (const auto& w : im.eigenvalues) {
                CharPolyValue cp = char_poly_at(im.matrix, w);
                double rr = cp.abs_det / std::max(cp.scale, 1e-300);
                if (rr > worst_root[vi]) {
                    worst_root[vi] = rr;
                    worst_root_at[vi] = tag;
                }
            }
        }
    }
    cr.checks.push_back(mk("full spectra on all reversible fixtures", all_full,
                           all_full ? "20 fixtures" : "missing full spectrum at " + not_full_at));
    cr.checks.push_back(mk("accelerated radius agreement", worst_radius[0] <= 1e-4,
                           "worst relative gap " + fmt(worst_radius[0]) + " at " +
                               worst_radius_at[0]));
    cr.checks.push_back(mk("momentum radius agreement", worst_radius[1] <= 1e-4,
                           "worst relative gap " + fmt(worst_radius[1]) + " at " +
                               worst_radius_at[1]));
    cr.checks.push_back(mk("accelerated roots annihilate the characteristic polynomial",
                           worst_root[0] <= 1e-6,
                           "worst scaled determinant " + fmt(worst_root[0]) + " at " +
                               worst_root_at[0]));
    cr.checks.push_back(mk("momentum roots annihilate the characteristic polynomial",
                           worst_root[1] <= 1e-6,
                           "worst scaled determinant " + fmt(worst_root[1]) + " at " +
                               worst_root_at[1]));
    return cr;
}

CriterionResult criterion_certificates() {
    CriterionResult cr;
    cr.number = 10;
    cr.title = "time-varying certificates validate accelerated optimal-control runs";
    int failed = 0;
    std::string first_failure;
    std::size_t steps_total = 0;
    double worst_violation = -std::numeric_limits<double>::infinity();
    double worst_reconstruction = 0.0;
    double mu_lo = std::numeric_limits<double>::infinity();
    double mu_hi = -std::numeric_limits<double>::infinity();

    for (int k = 0; k < 10; ++k) {
        GarnetSpec spec;
        spec.n = 10;
        spec.a = 3;
        spec.branch = 0.8;
        spec.reward_max = 100.0;
        spec.discount = 0.9;
        spec.seed = 4000 + static_cast<std::uint64_t>(k);
        Mdp mdp = garnet(spec);
        OptimalSolution opt = exact_optimal_value(mdp);

        StopRule stop;
        stop.epsilon = 1e-12;
        stop.max_iters = 100;
        SolveOptions opts;
        opts.record_iterates = true;
        Vector v0 = Vector::Zero(mdp.num_states);
        SolveReport rep = run_accelerated(mdp, std::nullopt, v0, std::nullopt,
                                          nesterov_step_sizes(spec.discount), stop, opts);
        LtvCertificate cert = ltv_certificate(mdp, rep, opt.value, opt.policy);
        if (!cert.ok) {
            ++failed;
            if (first_failure.empty())
                first_failure = "seed " + std::to_string(spec.seed) + ": " + cert.failure;
        }
        steps_total += cert.steps.size();
        for (const auto& st : cert.steps) {
            worst_violation = std::max(worst_violation, st.sandwich_violation);
            worst_reconstruction = std::max(worst_reconstruction, st.reconstruction_error);
            mu_lo = std::min(mu_lo, st.mu_min);
            mu_hi = std::max(mu_hi, st.mu_max);
        }
    }
    cr.checks.push_back(mk("certificates valid on ten garnet runs", failed == 0,
                           failed == 0 ? std::to_string(steps_total) + " certified steps"
                                       : first_failure));
    cr.checks.push_back(mk("sandwich violations within tolerance", worst_violation <= 1e-8,
                           "worst violation " + fmt(worst_violation)));
    cr.checks.push_back(mk("mixing coefficients within the unit interval",
                           mu_lo >= -1e-6 && mu_hi <= 1.0 + 1e-6,
                           "mu range [" + fmt(mu_lo) + ", " + fmt(mu_hi) + "]"));
    cr.checks.push_back(mk("policy mixtures reconstruct the step matrices",
                           worst_reconstruction <= 1e-8,
                           "worst reconstruction error " + fmt(worst_reconstruction)));
    return cr;
}

CriterionResult criterion_oracles() {
    CriterionResult cr;
    cr.number = 11;
    cr.title = "converged runs agree with the exact linear-solve oracles";
    const double eps = 1e-3;
    const char* optimal_solvers[] = {"vi", "gs-vi", "r-vi alpha=1.05", "a-vi", "m-vi"};
    const char* policy_solvers[] = {"vc", "a-vc", "m-vc"};
    const int seeds = 3;

    struct Agg {
        bool converged = true;
        double worst_value = 0.0;
        double worst_greedy = 0.0;
    };
    Agg opt_agg[5];
    Agg pol_agg[3];

    for (int k = 0; k < seeds; ++k) {
        GarnetSpec spec;
        spec.n = 30;
        spec.a = 10;
        spec.branch = 0.8;
        spec.reward_max = 100.0;
        spec.discount = 0.9;
        spec.seed = 3000 + static_cast<std::uint64_t>(k);
        Mdp mdp = garnet(spec);
        OptimalSolution opt = exact_optimal_value(mdp);
        Vector v0 = Vector::Zero(mdp.num_states);
        StopRule stop;
        stop.epsilon = eps;
        stop.max_iters = 100000;

        for (int s = 0; s < 5; ++s) {
            SolveReport rep;
            switch (s) {
                case 0: rep = run_vi(mdp, v0, stop); break;
                case 1: rep = run_gs_vi(mdp, v0, stop); break;
                case 2: rep = run_rvi(mdp, v0, StepSchedule::constant(1.05), stop); break;
                case 3:
                    rep = run_accelerated(mdp, std::nullopt, v0, std::nullopt,
                                          nesterov_step_sizes(spec.discount), stop);
                    break;
                default:
                    rep = run_momentum(mdp, std::nullopt, v0, std::nullopt,
                                       momentum_step_sizes(spec.discount), stop);
                    break;
            }
            if (rep.status != SolveStatus::Converged) {
                opt_agg[s].converged = false;
                continue;
            }
            double dv = (rep.final_v - opt.value).lpNorm<Eigen::Infinity>();
            Policy greedy = Policy::deterministic(bellman_apply(mdp, rep.final_v).greedy);
            double dg =
                (exact_policy_value(mdp, greedy) - opt.value).lpNorm<Eigen::Infinity>();
            opt_agg[s].worst_value = std::max(opt_agg[s].worst_value, dv);
            opt_agg[s].worst_greedy = std::max(opt_agg[s].worst_greedy, dg);
        }

        Policy pol = random_policy(mdp, 7000 + static_cast<std::uint64_t>(k));
        Vector vpi = exact_policy_value(mdp, pol);
        for (int s = 0; s < 3; ++s) {
            SolveReport rep;
            switch (s) {
                case 0: rep = run_vc(mdp, pol, v0, stop); break;
                case 1:
                    rep = run_accelerated(mdp, pol, v0, std::nullopt,
                                          nesterov_step_sizes(spec.discount), stop);
                    break;
                default:
                    rep = run_momentum(mdp, pol, v0, std::nullopt,
                                       momentum_step_sizes(spec.discount), stop);
                    break;
            }
            if (rep.status != SolveStatus::Converged) {
                pol_agg[s].converged = false;
                continue;
            }
            double dv = (rep.final_v - vpi).lpNorm<Eigen::Infinity>();
            pol_agg[s].worst_value = std::max(pol_agg[s].worst_value, dv);
        }
    }

    for (int s = 0; s < 5; ++s) {
        const Agg& a = opt_agg[s];
        bool pass = a.converged && a.worst_value <= eps && a.worst_greedy <= eps;
        cr.checks.push_back(
            mk(std::string(optimal_solvers[s]) + " matches the optimal oracle", pass,
               a.converged ? "worst value gap " + fmt(a.worst_value) + ", worst greedy-policy gap " +
                                 fmt(a.worst_greedy) + " (tolerance " + fmt(eps) + ")"
                           : "a run failed to converge"));
    }
    for (int s = 0; s < 3; ++s) {
        const Agg& a = pol_agg[s];
        bool pass = a.converged && a.worst_value <= eps;
        cr.checks.push_back(
            mk(std::string(policy_solvers[s]) + " matches the policy oracle", pass,
               a.converged ? "worst value gap " + fmt(a.worst_value) + " (tolerance " + fmt(eps) +
                                 ")"
                           : "a run failed to converge"));
    }
    return cr;
}

bool same_rows_ignoring_time(const std::vector<SweepRow>& a, const std::vector<SweepRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const SweepRow& x = a[i];
        const SweepRow& y = b[i];
        if (x.family != y.family || x.n != y.n || x.a != y.a || x.seed != y.seed ||
            x.solver != y.solver || x.schedule != y.schedule || x.lambda != y.lambda ||
            x.epsilon != y.epsilon || x.status != y.status || x.iterations != y.iterations ||
            x.final_residual != y.final_residual)
            return false;
    }
    return true;
}

CriterionResult criterion_reproducibility() {
    CriterionResult cr;
    cr.number = 12;
    cr.title = "benchmark sweeps are bit-for-bit reproducible";
    ExperimentConfig cfg;
    cfg.instance.family = "garnet";
    cfg.instance.n = 20;
    cfg.instance.a = 5;
    cfg.instance.branch = 0.8;
    cfg.instance.reward_max = 100.0;
    cfg.solvers = {"vi", "gs-vi", "r-vi:1.05", "vc", "a-vc", "m-vc", "a-vi"};
    cfg.lambdas = {0.9, 0.95};
    cfg.epsilon = 0.1;
    cfg.max_iters = 100000;
    cfg.samples = 2;
    cfg.seed_base = 42;

    std::vector<SweepRow> first = run_sweep(cfg);
    std::vector<SweepRow> second = run_sweep(cfg);
    cfg.jobs = 2;
    std::vector<SweepRow> parallel = run_sweep(cfg);

    std::size_t expected = cfg.solvers.size() * cfg.lambdas.size() *
                           static_cast<std::size_t>(cfg.samples);
    cr.checks.push_back(mk("sweep produces one row per run", first.size() == expected,
                           std::to_string(first.size()) + " rows, expected " +
                               std::to_string(expected)));
    cr.checks.push_back(mk("repeated sweep is identical outside wall time",
                           same_rows_ignoring_time(first, second),
                           "two sequential sweeps compared field by field"));
    cr.checks.push_back(mk("parallel sweep is identical outside wall time",
                           same_rows_ignoring_time(first, parallel),
                           "jobs=2 sweep compared against the sequential baseline"));
    return cr;
}

}  // namespace

std::vector<CriterionResult> acceptance_criteria() {
    std::vector<CriterionResult> out;
    out.push_back(criterion_avc_rate());
    out.push_back(criterion_mvc_rate());
    out.push_back(criterion_vc_rate());
    out.push_back(criterion_scaling());
    out.push_back(criterion_relaxation());
    out.push_back(criterion_divergence());
    out.push_back(criterion_safe_cycle());
    out.push_back(criterion_lower_bound());
    out.push_back(criterion_spectral());
    out.push_back(criterion_certificates());
    out.push_back(criterion_oracles());
    out.push_back(criterion_reproducibility());
    return out;
}

std::vector<std::string> suite_names() {
    return {"rates",    "scaling",      "relaxation", "divergence",      "lower-bound",
            "spectral", "certificates", "oracle",     "reproducibility", "all"};
}

std::vector<CriterionResult> run_suite(const std::string& name) {
    if (name == "rates") return {criterion_avc_rate(), criterion_mvc_rate(), criterion_vc_rate()};
    if (name == "scaling") return {criterion_scaling()};
    if (name == "relaxation") return {criterion_relaxation()};
    if (name == "divergence") return {criterion_divergence(), criterion_safe_cycle()};
    if (name == "lower-bound") return {criterion_lower_bound()};
    if (name == "spectral") return {criterion_spectral()};
    if (name == "certificates") return {criterion_certificates()};
    if (name == "oracle") return {criterion_oracles()};
    if (name == "reproducibility") return {criterion_reproducibility()};
    if (name == "all") return acceptance_criteria();
    throw std::invalid_argument("unknown validation suite: " + name);
}

}  // namespace mdpaccel
