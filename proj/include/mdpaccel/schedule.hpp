#pragma once

#include <string>

namespace mdpaccel {

/// Relaxation schedule for damped value iteration: either a constant alpha or
/// the diminishing family alpha_s = c / (s + 1)^p with c > 0 and p in (0, 1],
/// which satisfies sum alpha_s = inf and alpha_s -> 0.
struct StepSchedule {
    enum class Kind { Constant, Diminishing };
    Kind kind = Kind::Constant;
    double alpha = 1.0;  // Constant
    double c = 1.0;      // Diminishing: alpha_s = c / (s+1)^p
    double p = 1.0;

    static StepSchedule constant(double alpha);
    /// Throws std::invalid_argument unless c > 0 and p in (0, 1].
    static StepSchedule diminishing(double c, double p);

    /// Step size for update index s (0-based).
    double at(int s) const;

    /// Human-readable label used in reports and sweep CSVs,
    /// e.g. "alpha=1.05" or "diminishing(c=1,p=0.7)".
    std::string label() const;
};

/// Largest constant relaxation with a convergence guarantee is alpha <
/// 2 / (1 + discount); the guaranteed contraction factor is
/// discount * alpha + |1 - alpha|.
double relaxation_guarantee_limit(double discount);
double relaxed_rate_bound(double discount, double alpha);

/// Nesterov-tuned pair for the accelerated scheme:
///   alpha = 1 / (1 + discount),  gamma = (1 - sqrt(1 - discount^2)) / discount.
struct AccelCoeffs {
    double alpha;
    double gamma;
};
AccelCoeffs nesterov_step_sizes(double discount);

/// Aggressive variant used for the hard-instance runs: alpha = 1 and
/// gamma = (1 - sqrt(1 - discount))^2 / discount.
AccelCoeffs aggressive_step_sizes(double discount);

/// Heavy-ball pair for the momentum scheme:
///   alpha = 2 / (1 + sqrt(1 - discount^2)),
///   beta  = (1 - sqrt(1 - discount^2)) / (1 + sqrt(1 - discount^2)).
/// These satisfy alpha = 1 + beta exactly.
struct MomentumCoeffs {
    double alpha;
    double beta;
};
MomentumCoeffs momentum_step_sizes(double discount);

/// Condition-number analogue kappa = (1 + discount) / (1 - discount).
double condition_number(double discount);

/// Predicted geometric rate of the tuned two-step schemes,
/// 1 - sqrt(1/kappa) for the accelerated scheme and
/// discount / (1 + sqrt(1 - discount^2)) for momentum.
double accel_rate(double discount);
double momentum_rate(double discount);

/// Stopping threshold that makes the greedy policy epsilon-optimal:
/// stop when successive iterates differ by at most
/// epsilon * (1 - discount) / (2 * discount) in the sup norm.
double stopping_threshold(double discount, double epsilon);

}  // namespace mdpaccel
