#pragma once

#include "mdpaccel/types.hpp"

#include <complex>
#include <optional>

namespace mdpaccel {

/// Returns the index of a state unreachable from state 0, or one that cannot
/// reach state 0, following positive entries of L; nullopt when the chain is
/// irreducible (strongly connected).
std::optional<int> find_unreachable_state(const Matrix& L);

/// Stationary distribution of an irreducible row-stochastic matrix. Power
/// iteration on L^T first; periodic chains (where the power sequence cycles
/// instead of settling) fall back to a direct solve of the balance equations
/// with the normalization row substituted in. Throws std::invalid_argument
/// naming the unreachable state when the chain is reducible.
Vector stationary_distribution(const Matrix& L);

/// Detailed balance test: max_{i,j} |nu_i L_ij - nu_j L_ji| <= tol.
bool check_reversible(const Matrix& L, const Vector& nu, double tol = 1e-10);

enum class SpectrumMethod { Symmetrized, AnalyticCycle, General };

const char* to_string(SpectrumMethod method);

/// Spectrum of an induced chain.
///
/// Reversible chains reduce to a symmetric eigenproblem on D^{1/2} L D^{-1/2}
/// and yield the full (real) spectrum; the directed n-cycle has the n-th
/// roots of unity analytically; anything else gets a dominant-modulus
/// estimate only, flagged method = General with an empty eigenvalue list.
struct ChainSpectrum {
    std::vector<std::complex<double>> eigenvalues;  // empty on the general path
    Vector stationary;
    bool reversible = false;
    SpectrumMethod method = SpectrumMethod::General;
    double dominant_modulus = 1.0;

    bool full() const { return method != SpectrumMethod::General; }
};

/// Computes the spectrum, choosing the richest supported path automatically.
/// Passing require_full = true makes the general fallback an error
/// ("unsupported: general nonsymmetric full spectrum") instead of a
/// dominant-only result. A precomputed stationary distribution can be
/// supplied to skip recomputation.
ChainSpectrum chain_spectrum(const Matrix& L,
                             std::optional<Vector> nu = std::nullopt,
                             bool require_full = false);

/// Spectral radius of an arbitrary square matrix by normalized repeated
/// squaring (Gelfand's formula ||B^(2^m)||^(1/2^m)). Robust where vector
/// power iteration stalls: defective dominant eigenvalues and tied moduli.
double dominant_modulus(const Matrix& B);

}  // namespace mdpaccel
