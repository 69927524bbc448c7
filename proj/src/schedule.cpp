#include "mdpaccel/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

namespace {

void require_discount(double discount, const char* who) {
    if (!(discount > 0.0 && discount < 1.0)) {
        std::ostringstream os;
        os << who << ": discount must lie in (0,1), got " << discount;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

StepSchedule StepSchedule::constant(double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("StepSchedule: constant alpha must be positive");
    StepSchedule s;
    s.kind = Kind::Constant;
    s.alpha = alpha;
    return s;
}

StepSchedule StepSchedule::diminishing(double c, double p) {
    if (!(c > 0.0) || !(p > 0.0 && p <= 1.0))
        throw std::invalid_argument(
            "StepSchedule: diminishing schedule needs c > 0 and p in (0,1]");
    StepSchedule s;
    s.kind = Kind::Diminishing;
    s.c = c;
    s.p = p;
    return s;
}

double StepSchedule::at(int s) const {
    if (kind == Kind::Constant) return alpha;
    return c / std::pow(static_cast<double>(s) + 1.0, p);
}

std::string StepSchedule::label() const {
    std::ostringstream os;
    if (kind == Kind::Constant) {
        os << "alpha=" << alpha;
    } else {
        os << "diminishing(c=" << c << ",p=" << p << ")";
    }
    return os.str();
}

double relaxation_guarantee_limit(double discount) {
    require_discount(discount, "relaxation_guarantee_limit");
    return 2.0 / (1.0 + discount);
}

double relaxed_rate_bound(double discount, double alpha) {
    require_discount(discount, "relaxed_rate_bound");
    return discount * alpha + std::abs(1.0 - alpha);
}

AccelCoeffs nesterov_step_sizes(double discount) {
    require_discount(discount, "nesterov_step_sizes");
    const double alpha = 1.0 / (1.0 + discount);
    const double gamma = (1.0 - std::sqrt(1.0 - discount * discount)) / discount;
    return {alpha, gamma};
}

AccelCoeffs aggressive_step_sizes(double discount) {
    require_discount(discount, "aggressive_step_sizes");
    const double root = 1.0 - std::sqrt(1.0 - discount);
    return {1.0, root * root / discount};
}

MomentumCoeffs momentum_step_sizes(double discount) {
    require_discount(discount, "momentum_step_sizes");
    const double s = std::sqrt(1.0 - discount * discount);
    return {2.0 / (1.0 + s), (1.0 - s) / (1.0 + s)};
}

double condition_number(double discount) {
    require_discount(discount, "condition_number");
    return (1.0 + discount) / (1.0 - discount);
}

double accel_rate(double discount) {
    require_discount(discount, "accel_rate");
    return 1.0 - std::sqrt((1.0 - discount) / (1.0 + discount));
}

double momentum_rate(double discount) {
    require_discount(discount, "momentum_rate");
    return discount / (1.0 + std::sqrt(1.0 - discount * discount));
}

double stopping_threshold(double discount, double epsilon) {
    require_discount(discount, "stopping_threshold");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("stopping_threshold: epsilon must be positive");
    return epsilon * (1.0 - discount) / (2.0 * discount);
}

}  // namespace mdpaccel
