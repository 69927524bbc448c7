#include "mdpaccel/ltv.hpp"

#include "mdpaccel/iteration_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

LtvCertificate ltv_certificate(const Mdp& mdp, const SolveReport& avi_run,
                               const Vector& v_star, const Policy& pi_star) {
    if (avi_run.iterates.size() < 3)
        throw std::invalid_argument(
            "ltv_certificate: run must be recorded with record_iterates and hold at least "
            "three iterates");
    if (avi_run.greedy_trace.size() + 1 != avi_run.iterates.size())
        throw std::invalid_argument(
            "ltv_certificate: greedy trace is not aligned with the iterates; the run must "
            "come from an optimal-target accelerated solve");

    const int n = mdp.num_states;
    const double lambda = mdp.discount;
    LtvCertificate cert;
    cert.ok = true;

    const Matrix b_star = assemble_iteration_matrix(induce_chain(mdp, pi_star), lambda,
                                                    AccelVariant::Accelerated);
    auto stack_u = [&](std::size_t s) {
        Vector u(2 * n);
        u.head(n) = avi_run.iterates[s] - v_star;
        u.tail(n) = avi_run.iterates[s - 1] - v_star;
        return u;
    };

    // Step s maps u_s = x_s - x* to u_{s+1}; the greedy policy recorded at
    // index s is the one whose backup produced iterate s+1.
    const std::size_t last = avi_run.iterates.size() - 1;
    for (std::size_t s = 1; s < last; ++s) {
        const Policy pi_s = Policy::deterministic(avi_run.greedy_trace[s]);
        const Matrix b_s = assemble_iteration_matrix(induce_chain(mdp, pi_s), lambda,
                                                     AccelVariant::Accelerated);
        const Vector u = stack_u(s);
        const Vector u_next = stack_u(s + 1);
        const Vector lower = b_star * u;
        const Vector upper = b_s * u;
        const double scale = 1.0 + u.lpNorm<Eigen::Infinity>();

        CertificateStep step;
        for (int i = 0; i < 2 * n; ++i) {
            step.sandwich_violation = std::max(
                {step.sandwich_violation, lower[i] - u_next[i], u_next[i] - upper[i]});
        }
        if (step.sandwich_violation > cert.tolerance * scale) {
            cert.ok = false;
            std::ostringstream os;
            os << "sandwich violated at step " << s << " by " << step.sandwich_violation;
            cert.failure = os.str();
        }

        // Mixing coefficients from the top block: each row of B depends on
        // the policy only through that state's action row, so the realized
        // step is the statewise convex combination with
        //   mu_i = (upper_i - u_next_i) / (upper_i - lower_i).
        Matrix mixed(n, mdp.num_actions);
        step.mu_min = 1.0;
        step.mu_max = 0.0;
        for (int i = 0; i < n; ++i) {
            const double denom = upper[i] - lower[i];
            double mu = 1.0;
            if (std::abs(denom) > cert.tolerance * scale) {
                mu = (upper[i] - u_next[i]) / denom;
                if (mu < -1e-6 || mu > 1.0 + 1e-6) {
                    cert.ok = false;
                    std::ostringstream os;
                    os << "mixing coefficient " << mu << " outside [0,1] at step " << s
                       << ", state " << i;
                    cert.failure = os.str();
                }
                mu = std::clamp(mu, 0.0, 1.0);
            }
            step.mu_min = std::min(step.mu_min, mu);
            step.mu_max = std::max(step.mu_max, mu);
            for (int a = 0; a < mdp.num_actions; ++a)
                mixed(i, a) = mu * pi_star.prob(i, a) + (1.0 - mu) * pi_s.prob(i, a);
        }
        const Matrix b_mixed = assemble_iteration_matrix(
            induce_chain(mdp, Policy::randomized(mixed)), lambda, AccelVariant::Accelerated);
        step.reconstruction_error = (u_next - b_mixed * u).lpNorm<Eigen::Infinity>() / scale;
        if (step.reconstruction_error > cert.tolerance) {
            cert.ok = false;
            std::ostringstream os;
            os << "reconstruction error " << step.reconstruction_error << " at step " << s;
            cert.failure = os.str();
        }
        cert.steps.push_back(step);
    }
    return cert;
}

LowerBoundReport lower_bound_check(const std::vector<Vector>& iterates,
                                   const Mdp& hard_chain_mdp, const Vector& v_star) {
    if (hard_chain_mdp.num_actions != 1)
        throw std::invalid_argument("lower_bound_check: instance is not the hard chain");
    if (iterates.empty() || iterates[0].lpNorm<Eigen::Infinity>() != 0.0)
        throw std::invalid_argument("lower_bound_check: the bound assumes v0 = 0");

    const int n = hard_chain_mdp.num_states;
    const double lambda = hard_chain_mdp.discount;
    LowerBoundReport report;
    report.ok = true;

    const std::size_t steps =
        std::min(iterates.size() - 1, static_cast<std::size_t>(n - 1));
    for (std::size_t s = 1; s <= steps; ++s) {
        // Zero pattern: information from the rewarding state has traveled at
        // most s links, so states s+1..n (1-based) are still exactly zero.
        for (int i = static_cast<int>(s); i < n; ++i) {
            if (iterates[s][i] != 0.0) {
                report.ok = false;
                report.first_violation_step = static_cast<int>(s);
                std::ostringstream os;
                os << "iterate " << s << " has nonzero entry " << iterates[s][i]
                   << " at state " << i + 1;
                report.detail = os.str();
                return report;
            }
        }
        const double gap = (iterates[s] - v_star).lpNorm<Eigen::Infinity>();
        const double bound = std::pow(lambda, static_cast<double>(s)) / (1.0 + lambda);
        if (gap < bound) {
            report.ok = false;
            report.first_violation_step = static_cast<int>(s);
            std::ostringstream os;
            os << "iterate " << s << " is " << gap << " from the fixed point, below the "
               << "lower bound " << bound;
            report.detail = os.str();
            return report;
        }
    }
    return report;
}

}  // namespace mdpaccel
