#include "mdpaccel/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mdpaccel {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

void check_distribution(const Vector& p, const std::string& label) {
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0)) {
            std::ostringstream os;
            os << label << ": negative mass " << p[i] << " at index " << i;
            fail(os.str());
        }
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << label << ": mass sums to " << sum << ", expected 1";
        fail(os.str());
    }
}

}  // namespace

void Mdp::validate() const {
    if (num_states < 1) fail("Mdp: num_states must be >= 1");
    if (num_actions < 1) fail("Mdp: num_actions must be >= 1");
    if (!(discount > 0.0 && discount < 1.0)) {
        std::ostringstream os;
        os << "Mdp: discount must lie in (0,1), got " << discount;
        fail(os.str());
    }
    if (rewards.rows() != num_states || rewards.cols() != num_actions)
        fail("Mdp: rewards matrix shape does not match (num_states, num_actions)");
    if (!rewards.allFinite()) fail("Mdp: rewards contain non-finite entries");
    const auto expected_rows =
        static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions);
    if (transitions.size() != expected_rows)
        fail("Mdp: transition row count does not match num_states * num_actions");

    for (int i = 0; i < num_states; ++i) {
        for (int a = 0; a < num_actions; ++a) {
            const auto& entries = row(i, a);
            if (entries.empty()) {
                std::ostringstream os;
                os << "Mdp: empty transition row for state " << i << ", action " << a;
                fail(os.str());
            }
            double sum = 0.0;
            for (const auto& e : entries) {
                if (e.state < 0 || e.state >= num_states) {
                    std::ostringstream os;
                    os << "Mdp: next state " << e.state << " out of range in row (" << i
                       << "," << a << ")";
                    fail(os.str());
                }
                if (!(e.prob >= 0.0)) {
                    std::ostringstream os;
                    os << "Mdp: negative probability " << e.prob << " in row (" << i << ","
                       << a << ")";
                    fail(os.str());
                }
                sum += e.prob;
            }
            if (std::abs(sum - 1.0) > 1e-12) {
                std::ostringstream os;
                os << "Mdp: probabilities in row (" << i << "," << a << ") sum to " << sum;
                fail(os.str());
            }
        }
    }

    if (initial_dist) {
        if (initial_dist->size() != num_states)
            fail("Mdp: initial_dist length does not match num_states");
        check_distribution(*initial_dist, "Mdp: initial_dist");
    }
}

Policy Policy::deterministic(std::vector<int> actions) {
    Policy p;
    p.kind = PolicyKind::Deterministic;
    p.actions = std::move(actions);
    return p;
}

Policy Policy::randomized(Matrix probs) {
    Policy p;
    p.kind = PolicyKind::Randomized;
    p.probs = std::move(probs);
    return p;
}

Policy Policy::uniform(int num_states, int num_actions) {
    return randomized(Matrix::Constant(num_states, num_actions, 1.0 / num_actions));
}

void Policy::validate(const Mdp& mdp) const {
    if (is_deterministic()) {
        if (static_cast<int>(actions.size()) != mdp.num_states)
            fail("Policy: action map length does not match num_states");
        for (int i = 0; i < mdp.num_states; ++i) {
            if (actions[static_cast<std::size_t>(i)] < 0 ||
                actions[static_cast<std::size_t>(i)] >= mdp.num_actions) {
                std::ostringstream os;
                os << "Policy: action " << actions[static_cast<std::size_t>(i)]
                   << " out of range in state " << i;
                fail(os.str());
            }
        }
        return;
    }
    if (probs.rows() != mdp.num_states || probs.cols() != mdp.num_actions)
        fail("Policy: probability matrix shape does not match the MDP");
    for (int i = 0; i < mdp.num_states; ++i)
        check_distribution(probs.row(i).transpose(), "Policy: state " + std::to_string(i));
}

bool Policy::operator==(const Policy& other) const {
    if (kind != other.kind) return false;
    if (is_deterministic()) return actions == other.actions;
    return probs.rows() == other.probs.rows() && probs.cols() == other.probs.cols() &&
           probs == other.probs;
}

double expected_return(const Mdp& mdp, const Vector& v) {
    if (!mdp.initial_dist)
        throw std::invalid_argument("expected_return: instance has no initial distribution");
    if (v.size() != mdp.num_states)
        throw std::invalid_argument("expected_return: value vector length mismatch");
    return mdp.initial_dist->dot(v);
}

}  // namespace mdpaccel
