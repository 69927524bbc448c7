#include "mdpaccel/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mdpaccel {

const char* to_string(SpectrumMethod method) {
    switch (method) {
        case SpectrumMethod::Symmetrized: return "symmetrized";
        case SpectrumMethod::AnalyticCycle: return "analytic_cycle";
        case SpectrumMethod::General: return "general";
    }
    return "?";
}

namespace {

std::vector<int> reachable_from(const Matrix& L, bool reverse) {
    const int n = static_cast<int>(L.rows());
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            const double w = reverse ? L(j, i) : L(i, j);
            if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = 1;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

bool is_canonical_cycle(const Matrix& L) {
    const int n = static_cast<int>(L.rows());
    if (n < 3) return false;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double want = (j == (i + 1) % n) ? 1.0 : 0.0;
            if (std::abs(L(i, j) - want) > 1e-15) return false;
        }
    }
    return true;
}

}  // namespace

std::optional<int> find_unreachable_state(const Matrix& L) {
    const auto forward = reachable_from(L, false);
    for (std::size_t i = 0; i < forward.size(); ++i)
        if (!forward[i]) return static_cast<int>(i);
    const auto backward = reachable_from(L, true);
    for (std::size_t i = 0; i < backward.size(); ++i)
        if (!backward[i]) return static_cast<int>(i);
    return std::nullopt;
}

Vector stationary_distribution(const Matrix& L) {
    const int n = static_cast<int>(L.rows());
    if (n < 1 || L.cols() != n)
        throw std::invalid_argument("stationary_distribution: matrix must be square");
    if (auto bad = find_unreachable_state(L)) {
        std::ostringstream os;
        os << "stationary_distribution: chain is reducible; state " << *bad
           << " is not strongly connected to state 0";
        throw std::invalid_argument(os.str());
    }

    // Power iteration on L^T. Aperiodic chains settle quickly; periodic ones
    // never will, so after the cap we fall through to a direct solve of the
    // balance equations.
    Vector nu = Vector::Constant(n, 1.0 / n);
    constexpr int kPowerCap = 20000;
    for (int it = 0; it < kPowerCap; ++it) {
        Vector next = L.transpose() * nu;
        next /= next.sum();
        const double move = (next - nu).lpNorm<Eigen::Infinity>();
        nu = std::move(next);
        if (move <= 1e-14) break;
    }
    auto balanced = [&](const Vector& candidate) {
        return (candidate.transpose() * L - candidate.transpose()).norm() <= 1e-10 &&
               candidate.minCoeff() >= 0.0;
    };
    if (balanced(nu)) return nu;

    Matrix system = L.transpose() - Matrix::Identity(n, n);
    system.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs[n - 1] = 1.0;
    nu = Eigen::PartialPivLU<Matrix>(system).solve(rhs);
    for (int i = 0; i < n; ++i) {
        if (nu[i] < 0.0 && nu[i] > -1e-12) nu[i] = 0.0;
    }
    nu /= nu.sum();
    if (!balanced(nu))
        throw std::runtime_error(
            "stationary_distribution: direct solve failed the balance check");
    return nu;
}

bool check_reversible(const Matrix& L, const Vector& nu, double tol) {
    const int n = static_cast<int>(L.rows());
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            worst = std::max(worst, std::abs(nu[i] * L(i, j) - nu[j] * L(j, i)));
    return worst <= tol;
}

ChainSpectrum chain_spectrum(const Matrix& L, std::optional<Vector> nu, bool require_full) {
    const int n = static_cast<int>(L.rows());
    ChainSpectrum out;

    if (is_canonical_cycle(L)) {
        out.method = SpectrumMethod::AnalyticCycle;
        out.reversible = false;
        out.stationary = Vector::Constant(n, 1.0 / n);
        out.eigenvalues.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / n;
            out.eigenvalues.emplace_back(std::cos(angle), std::sin(angle));
        }
        out.dominant_modulus = 1.0;
        return out;
    }

    bool have_nu = false;
    if (nu) {
        out.stationary = std::move(*nu);
        have_nu = true;
    } else {
        try {
            out.stationary = stationary_distribution(L);
            have_nu = true;
        } catch (const std::invalid_argument&) {
            // Reducible chain: no unique stationary distribution; the general
            // path below still applies.
        }
    }

    if (have_nu && out.stationary.minCoeff() > 0.0 &&
        check_reversible(L, out.stationary, 1e-10)) {
        out.method = SpectrumMethod::Symmetrized;
        out.reversible = true;
        // Similarity D^{1/2} L D^{-1/2} is symmetric under detailed balance;
        // symmetrize away the rounding and use the symmetric eigensolver.
        Vector sqrt_nu = out.stationary.cwiseSqrt();
        Matrix S = sqrt_nu.asDiagonal() * L * sqrt_nu.cwiseInverse().asDiagonal();
        S = 0.5 * (S + S.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(S);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("chain_spectrum: symmetric eigensolver failed");
        out.eigenvalues.reserve(static_cast<std::size_t>(n));
        double dominant = 0.0;
        for (int i = 0; i < n; ++i) {
            out.eigenvalues.emplace_back(solver.eigenvalues()[i], 0.0);
            dominant = std::max(dominant, std::abs(solver.eigenvalues()[i]));
        }
        out.dominant_modulus = dominant;
        return out;
    }

    if (require_full)
        throw std::runtime_error("unsupported: general nonsymmetric full spectrum");
    out.method = SpectrumMethod::General;
    out.reversible = false;
    if (!have_nu) out.stationary = Vector();
    out.dominant_modulus = dominant_modulus(L);
    return out;
}

double dominant_modulus(const Matrix& B) {
    const int n = static_cast<int>(B.rows());
    if (n == 0) return 0.0;
    if (B.cols() != n)
        throw std::invalid_argument("dominant_modulus: matrix must be square");
    if (!B.allFinite())
        throw std::invalid_argument("dominant_modulus: matrix has non-finite entries");

    // Gelfand's formula by normalized repeated squaring:
    //   t_m = log ||B^(2^m)||_inf / 2^m  ->  log rho(B).
    // Each squaring doubles the power for one matmul, so defective or
    // tied-modulus dominant eigenvalues (where vector power iteration crawls
    // or oscillates) cost nothing extra.
    Matrix C = B;
    double accumulated = 0.0;
    double t = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= 64; ++m) {
        const double s = C.cwiseAbs().rowwise().sum().maxCoeff();
        if (s == 0.0) return 0.0;  // nilpotent: some power vanished exactly
        t = accumulated + std::ldexp(std::log(s), -m);
        if (std::abs(t - prev) <= 1e-13 * std::max(1.0, std::abs(t))) break;
        prev = t;
        accumulated = t;
        C /= s;
        C = Matrix(C * C);
    }
    return std::exp(t);
}

}  // namespace mdpaccel
