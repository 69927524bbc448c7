#pragma once

#include "mdpaccel/spectral.hpp"
#include "mdpaccel/types.hpp"

#include <complex>

namespace mdpaccel {

enum class AccelVariant { Accelerated, Momentum };

const char* to_string(AccelVariant variant);

/// Linearized two-step recursion x_{s+1} = B_pi x_s + b_pi, x_s = (v_s, v_{s-1}),
/// for a fixed policy under the tuned accelerated or momentum scheme.
///
/// Blocks, with theta = 1 - sqrt(1/kappa):
///   accelerated: [[ theta (I + L_pi), -(theta^2/2)(I + L_pi) ], [ I, 0 ]]
///   momentum:    [[ lambda (1 + beta) L_pi, -beta I ],          [ I, 0 ]]
/// The affine offset is (alpha r_pi, 0) in both cases; x = (v^pi, v^pi) is
/// the unique fixed point.
///
/// eigenvalues and radius come from omega-roots of the chain spectrum when a
/// full spectrum is available; otherwise eigenvalues stays empty and radius
/// is a direct dominant-modulus estimate of the assembled matrix.
struct IterationMatrix {
    Matrix matrix;   // 2n x 2n
    Vector offset;   // 2n, (alpha r_pi, 0)
    AccelVariant variant = AccelVariant::Accelerated;
    double lambda = 0.0;
    double kappa = 1.0;
    double radius = 0.0;
    std::vector<std::complex<double>> eigenvalues;
    bool spectrum_full = false;
};

/// Assembles only the 2n x 2n matrix (no spectral work). Guarded to
/// n <= 2000; larger chains throw std::invalid_argument.
Matrix assemble_iteration_matrix(const InducedChain& chain, double lambda,
                                 AccelVariant variant);

/// Affine offset (alpha r_pi, 0) of the linearized recursion.
Vector iteration_offset(const InducedChain& chain, double lambda, AccelVariant variant);

IterationMatrix accel_iteration_matrix(const InducedChain& chain, double lambda);
IterationMatrix momentum_iteration_matrix(const InducedChain& chain, double lambda);

/// The two roots of the accelerated scheme's per-mode quadratic
///   omega^2 - (mu + 1) theta omega + (1/2)(mu + 1) theta^2 = 0.
/// Vieta: sum = (mu+1) theta, product = (1/2)(mu+1) theta^2.
/// Requires |mu| <= 1 + 1e-10.
std::pair<std::complex<double>, std::complex<double>>
accel_omega_roots(std::complex<double> mu, double lambda);

/// The two roots of the momentum quadratic omega^2 - lambda alpha mu omega +
/// beta = 0 for real mu in [-1, 1] (the reversible case); both have modulus
/// exactly lambda / (1 + sqrt(1 - lambda^2)). |mu| > 1 is rejected.
std::pair<std::complex<double>, std::complex<double>>
momentum_omega_roots(double mu, double lambda);

/// Same quadratic over complex mu (needed off the reversible path, where the
/// constant-modulus property no longer holds).
std::pair<std::complex<double>, std::complex<double>>
momentum_omega_roots_complex(std::complex<double> mu, double lambda);

/// Predicted spectral radius of B_pi: max over mu in Sp(L_pi) of the
/// omega-root moduli. When the spectrum is dominant-modulus-only (general
/// path), the result is only a lower bound and says so.
struct PredictedRadius {
    double value = 0.0;
    bool lower_bound_only = false;
};
PredictedRadius predicted_radius(const ChainSpectrum& spectrum, double lambda,
                                 AccelVariant variant);

/// |det(B - omega I)| together with the Hadamard scale (product of row
/// 2-norms), for checking that predicted omega-roots are eigenvalues of the
/// assembled matrix.
struct CharPolyValue {
    double abs_det;
    double scale;
};
CharPolyValue char_poly_at(const Matrix& B, std::complex<double> omega);

}  // namespace mdpaccel
