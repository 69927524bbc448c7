#include "mdpaccel/solve.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mdpaccel {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIters: return "MaxIters";
        case SolveStatus::Diverged: return "Diverged";
    }
    return "?";
}

void StopRule::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("StopRule: epsilon must be positive");
    if (max_iters < 1) throw std::invalid_argument("StopRule: max_iters must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

/// Per-run bookkeeping: traces, stopping, divergence detection, timing. The
/// drivers feed every new iterate through observe(), which reports back
/// whether the run is over.
class RunMonitor {
public:
    RunMonitor(const Mdp& mdp, const StopRule& stop, const SolveOptions& opts)
        : stop_(stop), opts_(opts), threshold_(stopping_threshold(mdp.discount, stop.epsilon)),
          t0_(std::chrono::steady_clock::now()) {
        stop.validate();
    }

    void init(const Vector& v0) {
        if (!v0.allFinite())
            throw std::invalid_argument("solver: initial vector has non-finite entries");
        if (opts_.oracle) report_.error_trace.push_back(sup_norm(v0 - *opts_.oracle));
        if (opts_.record_iterates) report_.iterates.push_back(v0);
    }

    bool observe(const Vector& v_new, const Vector& v_prev, const std::vector<int>* greedy) {
        const double diff = sup_norm(v_new - v_prev);
        report_.diff_trace.push_back(diff);
        if (opts_.oracle) report_.error_trace.push_back(sup_norm(v_new - *opts_.oracle));
        if (opts_.record_iterates) {
            report_.iterates.push_back(v_new);
            if (greedy) report_.greedy_trace.push_back(*greedy);
        }
        if (greedy) last_greedy_ = *greedy;
        ++report_.iterations;

        if (!v_new.allFinite()) {
            report_.status = SolveStatus::Diverged;
            return true;
        }
        if (first_positive_diff_ < 0.0 && diff > 0.0) first_positive_diff_ = diff;
        if (first_positive_diff_ > 0.0 && diff > stop_.divergence_factor * first_positive_diff_) {
            report_.status = SolveStatus::Diverged;
            return true;
        }
        if (diff <= threshold_) {
            report_.status = SolveStatus::Converged;
            return true;
        }
        if (report_.iterations >= stop_.max_iters) {
            report_.status = SolveStatus::MaxIters;
            return true;
        }
        return false;
    }

    SolveReport finish(Vector final_v, bool optimal_target, bool guaranteed) {
        report_.final_v = std::move(final_v);
        report_.guaranteed = guaranteed;
        if (optimal_target && !last_greedy_.empty())
            report_.greedy_policy = Policy::deterministic(last_greedy_);
        report_.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                   std::chrono::steady_clock::now() - t0_)
                                   .count();
        return std::move(report_);
    }

private:
    const StopRule& stop_;
    const SolveOptions& opts_;
    double threshold_;
    std::chrono::steady_clock::time_point t0_;
    SolveReport report_;
    std::vector<int> last_greedy_;
    double first_positive_diff_ = -1.0;
};

/// Damped update v - alpha (v - Tv). alpha = 1 short-circuits to Tv itself,
/// keeping the R-VI(1) = VI identity exact instead of accumulating one
/// rounding per step; the two-step schemes reuse this helper so their
/// gamma = 0 / beta = 0 reductions are exact too.
Vector relaxed_update(const Vector& v, const Vector& tv, double alpha) {
    if (alpha == 1.0) return tv;
    return v - alpha * (v - tv);
}

/// Operator abstraction the drivers are written against: any contraction
/// F(v) works, with an optional greedy-action capture for optimal targets.
struct BellmanOperator {
    const Mdp& mdp;
    Vector apply(const Vector& v, std::vector<int>* greedy) const {
        BellmanResult r = bellman_apply(mdp, v);
        if (greedy) *greedy = std::move(r.greedy);
        return std::move(r.value);
    }
    static constexpr bool optimal_target = true;
};

struct PolicyOperator {
    InducedChain chain;
    double discount;
    Vector apply(const Vector& v, std::vector<int>*) const {
        return policy_apply(chain, discount, v);
    }
    static constexpr bool optimal_target = false;
};

template <class Op>
SolveReport one_step_drive(const Mdp& mdp, const Op& op, const Vector& v0,
                           const StepSchedule& schedule, const StopRule& stop,
                           const SolveOptions& opts, bool guaranteed) {
    RunMonitor monitor(mdp, stop, opts);
    monitor.init(v0);
    Vector v = v0;
    std::vector<int> greedy;
    for (int s = 0;; ++s) {
        const Vector tv = op.apply(v, Op::optimal_target ? &greedy : nullptr);
        Vector next = relaxed_update(v, tv, schedule.at(s));
        const bool halt =
            monitor.observe(next, v, Op::optimal_target ? &greedy : nullptr);
        v = std::move(next);
        if (halt) break;
    }
    return monitor.finish(std::move(v), Op::optimal_target, guaranteed);
}

template <class Op>
SolveReport two_step_drive(const Mdp& mdp, const Op& op, const Vector& v0,
                           std::optional<Vector> v1, bool is_momentum,
                           double alpha, double second, const StopRule& stop,
                           const SolveOptions& opts, bool guaranteed) {
    RunMonitor monitor(mdp, stop, opts);
    monitor.init(v0);
    std::vector<int> greedy;
    Vector prev = v0;
    Vector v;
    if (v1) {
        if (v1->size() != v0.size())
            throw std::invalid_argument("solver: v1 length does not match v0");
        v = std::move(*v1);
        if (monitor.observe(v, prev, nullptr))
            return monitor.finish(std::move(v), Op::optimal_target, guaranteed);
    } else {
        v = op.apply(v0, Op::optimal_target ? &greedy : nullptr);
        if (monitor.observe(v, prev, Op::optimal_target ? &greedy : nullptr))
            return monitor.finish(std::move(v), Op::optimal_target, guaranteed);
    }
    while (true) {
        Vector next;
        if (is_momentum) {
            const Vector tv = op.apply(v, Op::optimal_target ? &greedy : nullptr);
            next = relaxed_update(v, tv, alpha);
            if (second != 0.0) next += second * (v - prev);
        } else {
            const Vector h = (second == 0.0) ? v : Vector(v + second * (v - prev));
            const Vector th = op.apply(h, Op::optimal_target ? &greedy : nullptr);
            next = relaxed_update(h, th, alpha);
        }
        const bool halt =
            monitor.observe(next, v, Op::optimal_target ? &greedy : nullptr);
        prev = std::move(v);
        v = std::move(next);
        if (halt) break;
    }
    return monitor.finish(std::move(v), Op::optimal_target, guaranteed);
}

}  // namespace

SolveReport run_vi(const Mdp& mdp, const Vector& v0, const StopRule& stop,
                   const SolveOptions& opts) {
    return one_step_drive(mdp, BellmanOperator{mdp}, v0, StepSchedule::constant(1.0), stop,
                          opts, true);
}

SolveReport run_vc(const Mdp& mdp, const Policy& policy, const Vector& v0,
                   const StopRule& stop, const SolveOptions& opts) {
    PolicyOperator op{induce_chain(mdp, policy), mdp.discount};
    return one_step_drive(mdp, op, v0, StepSchedule::constant(1.0), stop, opts, true);
}

SolveReport run_rvi(const Mdp& mdp, const Vector& v0, const StepSchedule& schedule,
                    const StopRule& stop, const SolveOptions& opts) {
    bool guaranteed = true;
    if (schedule.kind == StepSchedule::Kind::Constant)
        guaranteed = schedule.alpha > 0.0 &&
                     schedule.alpha < relaxation_guarantee_limit(mdp.discount);
    return one_step_drive(mdp, BellmanOperator{mdp}, v0, schedule, stop, opts, guaranteed);
}

SolveReport run_gs_vi(const Mdp& mdp, const Vector& v0, const StopRule& stop,
                      const SolveOptions& opts) {
    RunMonitor monitor(mdp, stop, opts);
    monitor.init(v0);
    Vector v = v0;
    std::vector<int> greedy(static_cast<std::size_t>(mdp.num_states), 0);
    while (true) {
        const Vector before = v;
        // Ascending in-place sweep: the backup for state i reads fresh
        // values at j < i and previous-sweep values at j >= i.
        for (int i = 0; i < mdp.num_states; ++i) {
            double best = -kInf;
            int best_a = 0;
            for (int a = 0; a < mdp.num_actions; ++a) {
                double q = mdp.rewards(i, a);
                for (const auto& e : mdp.row(i, a)) q += mdp.discount * e.prob * v[e.state];
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            v[i] = best;
            greedy[static_cast<std::size_t>(i)] = best_a;
        }
        if (monitor.observe(v, before, &greedy)) break;
    }
    return monitor.finish(std::move(v), true, true);
}

SolveReport run_accelerated(const Mdp& mdp, const std::optional<Policy>& policy,
                            const Vector& v0, std::optional<Vector> v1,
                            const AccelCoeffs& coeffs, const StopRule& stop,
                            const SolveOptions& opts) {
    // Convergence is only proven for the policy target on reversible chains;
    // the optimal target runs unflagged because divergence there is a
    // legitimate, detected outcome rather than a misuse.
    if (policy) {
        PolicyOperator op{induce_chain(mdp, *policy), mdp.discount};
        return two_step_drive(mdp, op, v0, std::move(v1), false, coeffs.alpha, coeffs.gamma,
                              stop, opts, true);
    }
    return two_step_drive(mdp, BellmanOperator{mdp}, v0, std::move(v1), false, coeffs.alpha,
                          coeffs.gamma, stop, opts, true);
}

SolveReport run_momentum(const Mdp& mdp, const std::optional<Policy>& policy,
                         const Vector& v0, std::optional<Vector> v1,
                         const MomentumCoeffs& coeffs, const StopRule& stop,
                         const SolveOptions& opts) {
    if (policy) {
        PolicyOperator op{induce_chain(mdp, *policy), mdp.discount};
        return two_step_drive(mdp, op, v0, std::move(v1), true, coeffs.alpha, coeffs.beta,
                              stop, opts, true);
    }
    return two_step_drive(mdp, BellmanOperator{mdp}, v0, std::move(v1), true, coeffs.alpha,
                          coeffs.beta, stop, opts, true);
}

}  // namespace mdpaccel
