#pragma once

// =============================================================================
// Exact analytics for the elementary circuit: spectrum, gradients, critical
// points, noise operators and pure-dephasing rates.
// =============================================================================
// The elementary Hamiltonian is H = -E_Q cos(2 pi n) - E_J cos(phi). Both
// noise operators commute with H, so dephasing never changes (k, phi) and
// all rates below are exact closed forms.
// =============================================================================

#include <array>
#include <cmath>

#include "dualmon/circuit.hpp"

namespace dualmon {

/// White-noise amplitudes for external charge and flux fluctuations.
struct NoiseSpec {
    double eps_n = 0.0;
    double eps_phi = 0.0;
};

inline void validate(const NoiseSpec& n) {
    if (!(n.eps_n >= 0.0) || !(n.eps_phi >= 0.0))
        throw std::invalid_argument("noise: amplitudes must be non-negative");
}

enum class CriticalKind { minimum, saddle, maximum };

struct CriticalPoint {
    ZakPoint point;
    CriticalKind kind;
};

enum class NoiseChannel { charge, flux };

/// Eigenenergy E(k, phi) = -E_Q cos(2 pi k) - E_J cos(phi).
[[nodiscard]] inline double energy(const CircuitParams& p, const ZakPoint& zp) {
    return -p.E_Q * std::cos(2.0 * pi * zp.k) - p.E_J * std::cos(zp.phi);
}

/// Gradient (dE/dk, dE/dphi); vanishes exactly at the four critical points.
[[nodiscard]] inline std::array<double, 2> gradient(const CircuitParams& p, const ZakPoint& zp) {
    return {2.0 * pi * p.E_Q * sin_two_pi(zp.k), p.E_J * sin_angle(zp.phi)};
}

/// The four critical eigenstates: ground state, two saddles, maximum.
/// Locations are parameter-independent.
[[nodiscard]] inline std::array<CriticalPoint, 4> critical_points() {
    return {{{{0.0, 0.0}, CriticalKind::minimum},
             {{0.0, pi}, CriticalKind::saddle},
             {{0.5, 0.0}, CriticalKind::saddle},
             {{0.5, pi}, CriticalKind::maximum}}};
}

/// Eigenenergy under fixed external biases:
/// -E_Q cos(2 pi (k + n_x)) - E_J cos(phi + phi_x).
[[nodiscard]] inline double biased_energy(const CircuitParams& p, const ZakPoint& zp,
                                          const BiasPoint& b) {
    return -p.E_Q * std::cos(2.0 * pi * (zp.k + b.n_x)) - p.E_J * std::cos(zp.phi + b.phi_x);
}

/// Dephasing kernel gamma(y, y') = (sin y - sin y')^2.
[[nodiscard]] inline double gamma_kernel(double y, double yp) {
    const double d = std::sin(y) - std::sin(yp);
    return d * d;
}

namespace detail {
// Kernel variants with half-turn-exact sines so the rate vanishes exactly
// (not merely to 1e-32) on critical-point pairs.
inline double gamma_kernel_charge(double k, double kp) {
    const double d = sin_two_pi(k) - sin_two_pi(kp);
    return d * d;
}
inline double gamma_kernel_flux(double phi, double phip) {
    const double d = sin_angle(phi) - sin_angle(phip);
    return d * d;
}
}  // namespace detail

/// Pure dephasing rate of a superposition of |k,phi> and |k',phi'> under
/// uncorrelated white charge and flux noise (hbar = 1, units E_ref^2 eps^2):
/// Gamma = (2 pi eps_n E_Q)^2 gamma(2 pi k, 2 pi k')
///       + (2 pi eps_phi E_J)^2 gamma(phi, phi').
[[nodiscard]] inline double dephasing_rate(const CircuitParams& p, const NoiseSpec& noise,
                                           const ZakPoint& a, const ZakPoint& b) {
    const double cn = 2.0 * pi * noise.eps_n * p.E_Q;
    const double cp = 2.0 * pi * noise.eps_phi * p.E_J;
    return cn * cn * detail::gamma_kernel_charge(a.k, b.k) +
           cp * cp * detail::gamma_kernel_flux(a.phi, b.phi);
}

/// Eigenvalue of the linear-order noise operator on |k,phi>.
/// The Zak states diagonalise both A_n = 2 pi E_Q sin(2 pi n) and
/// A_phi = E_J sin(phi); the critical states are null vectors of both.
[[nodiscard]] inline double noise_operator_action(const CircuitParams& p, NoiseChannel which,
                                                  const ZakPoint& zp) {
    switch (which) {
        case NoiseChannel::charge: return 2.0 * pi * p.E_Q * sin_two_pi(zp.k);
        case NoiseChannel::flux: return p.E_J * sin_angle(zp.phi);
    }
    throw std::invalid_argument("noise_operator_action: unknown channel");
}

}  // namespace dualmon
