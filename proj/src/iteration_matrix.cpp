#include "mdpaccel/iteration_matrix.hpp"

#include "mdpaccel/schedule.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

const char* to_string(AccelVariant variant) {
    switch (variant) {
        case AccelVariant::Accelerated: return "accelerated";
        case AccelVariant::Momentum: return "momentum";
    }
    return "?";
}

namespace {
constexpr int kMaxAssembly = 2000;

void check_assembly_size(Eigen::Index n) {
    if (n > kMaxAssembly) {
        std::ostringstream os;
        os << "iteration matrix assembly guarded to n <= " << kMaxAssembly << ", got n = "
           << n;
        throw std::invalid_argument(os.str());
    }
}
}  // namespace

Matrix assemble_iteration_matrix(const InducedChain& chain, double lambda,
                                 AccelVariant variant) {
    const Eigen::Index n = chain.matrix.rows();
    check_assembly_size(n);
    Matrix B = Matrix::Zero(2 * n, 2 * n);
    if (variant == AccelVariant::Accelerated) {
        const double theta = accel_rate(lambda);
        const Matrix block = Matrix::Identity(n, n) + chain.matrix;
        B.topLeftCorner(n, n) = theta * block;
        B.topRightCorner(n, n) = -(theta * theta / 2.0) * block;
    } else {
        const MomentumCoeffs mc = momentum_step_sizes(lambda);
        B.topLeftCorner(n, n) = lambda * (mc.beta + 1.0) * chain.matrix;
        B.topRightCorner(n, n) = -mc.beta * Matrix::Identity(n, n);
    }
    B.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    return B;
}

Vector iteration_offset(const InducedChain& chain, double lambda, AccelVariant variant) {
    const Eigen::Index n = chain.matrix.rows();
    const double alpha = variant == AccelVariant::Accelerated
                             ? nesterov_step_sizes(lambda).alpha
                             : momentum_step_sizes(lambda).alpha;
    Vector b = Vector::Zero(2 * n);
    b.head(n) = alpha * chain.reward;
    return b;
}

std::pair<std::complex<double>, std::complex<double>>
accel_omega_roots(std::complex<double> mu, double lambda) {
    if (std::abs(mu) > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "accel_omega_roots: |mu| = " << std::abs(mu) << " exceeds 1";
        throw std::invalid_argument(os.str());
    }
    const double theta = accel_rate(lambda);
    const std::complex<double> shifted = mu + 1.0;
    const std::complex<double> disc = std::sqrt(mu * mu - 1.0);
    return {theta / 2.0 * (shifted + disc), theta / 2.0 * (shifted - disc)};
}

std::pair<std::complex<double>, std::complex<double>>
momentum_omega_roots(double mu, double lambda) {
    if (std::abs(mu) > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "momentum_omega_roots: mu = " << mu << " outside [-1, 1]";
        throw std::invalid_argument(os.str());
    }
    mu = std::clamp(mu, -1.0, 1.0);
    // Roots (lambda / (1 + sqrt(1 - lambda^2))) * (mu +- i sqrt(1 - mu^2)):
    // the modulus is independent of mu, which is the whole point of the
    // momentum tuning on a real spectrum.
    const double modulus = momentum_rate(lambda);
    const double imag = std::sqrt(1.0 - mu * mu);
    return {std::complex<double>(modulus * mu, modulus * imag),
            std::complex<double>(modulus * mu, -modulus * imag)};
}

std::pair<std::complex<double>, std::complex<double>>
momentum_omega_roots_complex(std::complex<double> mu, double lambda) {
    if (std::abs(mu) > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "momentum_omega_roots_complex: |mu| = " << std::abs(mu) << " exceeds 1";
        throw std::invalid_argument(os.str());
    }
    const MomentumCoeffs mc = momentum_step_sizes(lambda);
    const std::complex<double> linear = lambda * mc.alpha * mu;
    const std::complex<double> disc = std::sqrt(linear * linear - 4.0 * mc.beta);
    return {(linear + disc) / 2.0, (linear - disc) / 2.0};
}

PredictedRadius predicted_radius(const ChainSpectrum& spectrum, double lambda,
                                 AccelVariant variant) {
    auto roots_for = [&](std::complex<double> mu) {
        if (variant == AccelVariant::Accelerated) return accel_omega_roots(mu, lambda);
        if (std::abs(mu.imag()) <= 1e-12) return momentum_omega_roots(mu.real(), lambda);
        return momentum_omega_roots_complex(mu, lambda);
    };
    if (!spectrum.full()) {
        // Only the Perron eigenvalue mu = 1 is known; the radius over the
        // full spectrum can exceed what it contributes.
        const auto [plus, minus] = roots_for(1.0);
        return {std::max(std::abs(plus), std::abs(minus)), true};
    }
    double radius = 0.0;
    for (const auto& mu : spectrum.eigenvalues) {
        const auto [plus, minus] = roots_for(mu);
        radius = std::max({radius, std::abs(plus), std::abs(minus)});
    }
    return {radius, false};
}

namespace {

IterationMatrix make_iteration_matrix(const InducedChain& chain, double lambda,
                                      AccelVariant variant) {
    IterationMatrix im;
    im.matrix = assemble_iteration_matrix(chain, lambda, variant);
    im.offset = iteration_offset(chain, lambda, variant);
    im.variant = variant;
    im.lambda = lambda;
    im.kappa = condition_number(lambda);
    const ChainSpectrum spectrum = chain_spectrum(chain.matrix);
    if (spectrum.full()) {
        im.spectrum_full = true;
        im.eigenvalues.reserve(2 * spectrum.eigenvalues.size());
        double radius = 0.0;
        for (const auto& mu : spectrum.eigenvalues) {
            auto [plus, minus] =
                variant == AccelVariant::Accelerated
                    ? accel_omega_roots(mu, lambda)
                    : (std::abs(mu.imag()) <= 1e-12
                           ? momentum_omega_roots(mu.real(), lambda)
                           : momentum_omega_roots_complex(mu, lambda));
            im.eigenvalues.push_back(plus);
            im.eigenvalues.push_back(minus);
            radius = std::max({radius, std::abs(plus), std::abs(minus)});
        }
        im.radius = radius;
    } else {
        im.spectrum_full = false;
        im.radius = dominant_modulus(im.matrix);
    }
    return im;
}

}  // namespace

IterationMatrix accel_iteration_matrix(const InducedChain& chain, double lambda) {
    return make_iteration_matrix(chain, lambda, AccelVariant::Accelerated);
}

IterationMatrix momentum_iteration_matrix(const InducedChain& chain, double lambda) {
    return make_iteration_matrix(chain, lambda, AccelVariant::Momentum);
}

CharPolyValue char_poly_at(const Matrix& B, std::complex<double> omega) {
    const Eigen::Index n = B.rows();
    Eigen::MatrixXcd shifted = B.cast<std::complex<double>>();
    shifted.diagonal().array() -= omega;
    const std::complex<double> det =
        Eigen::PartialPivLU<Eigen::MatrixXcd>(shifted).determinant();
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale *= shifted.row(i).norm();
    return {std::abs(det), scale};
}

}  // namespace mdpaccel
