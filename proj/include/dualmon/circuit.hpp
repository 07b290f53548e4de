#pragma once

// =============================================================================
// Circuit parameters, unit conventions and Brillouin-zone geometry.
// =============================================================================
// All energies are stored in units of a caller-chosen reference energy E_ref,
// with hbar = 1 internally, so frequencies and energies share one scale.
// Quantum numbers live on the double Brillouin zone: the quasi-charge
// k in (-1/2, 1/2] and the quasi-flux angle phi in (-pi, pi].
// =============================================================================

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dualmon {

inline constexpr double pi = std::numbers::pi;

// -----------------------------------------------------------------------------
// Half-turn-exact trigonometry
// -----------------------------------------------------------------------------

/// sin(pi*x), exactly zero for integer x and exactly +-1 at half-integers.
/// Plain std::sin(pi*x) leaves O(1e-16) residue at x = 1, which would break
/// the exact dephasing-suppression identities at the critical points.
inline double sin_pi(double x) {
    const double m = std::round(x);
    const double r = x - m;
    const double s = std::sin(pi * r);
    return (std::fmod(std::abs(m), 2.0) == 1.0) ? -s : s;
}

/// sin(2*pi*k) with exact zeros at k in {0, +-1/2, integers}.
inline double sin_two_pi(double k) { return sin_pi(2.0 * k); }

/// sin(phi) evaluated so that phi = +-pi (the canonical boundary) maps to
/// an exact zero; elsewhere agrees with std::sin to rounding.
inline double sin_angle(double phi) { return sin_pi(phi / pi); }

// -----------------------------------------------------------------------------
// Domain types
// -----------------------------------------------------------------------------

/// The four circuit energies in units of E_ref.
/// E_Q, E_J describe the QPS wire and the Josephson junction; E_C, E_L the
/// parasitic capacitance and self-inductance of the realistic circuit.
struct CircuitParams {
    double E_Q = 1.0;
    double E_J = 1.0;
    double E_C = 0.0;
    double E_L = 0.0;

    /// True when the perturbative treatment is trustworthy. Gates warnings
    /// only, never computation.
    [[nodiscard]] bool regime_ok() const {
        return std::min(E_C, E_L) >= 10.0 * std::max(E_Q, E_J);
    }
};

/// A point (k, phi) in the double Brillouin zone labelling a simultaneous
/// eigenstate of the two commuting translation operators.
struct ZakPoint {
    double k = 0.0;    // quasi-charge, canonical range (-1/2, 1/2]
    double phi = 0.0;  // quasi-flux angle, canonical range (-pi, pi]
};

/// External charge and flux biases. Unrestricted reals; wrapping happens
/// at use sites.
struct BiasPoint {
    double n_x = 0.0;
    double phi_x = 0.0;
};

inline void validate_elementary(const CircuitParams& p) {
    if (!(p.E_Q >= 0.0) || !(p.E_J >= 0.0) || !std::isfinite(p.E_Q) || !std::isfinite(p.E_J))
        throw std::invalid_argument("circuit: E_Q and E_J must be finite and non-negative");
}

inline void validate_realistic(const CircuitParams& p) {
    validate_elementary(p);
    if (!(p.E_C > 0.0) || !(p.E_L > 0.0) || !std::isfinite(p.E_C) || !std::isfinite(p.E_L))
        throw std::invalid_argument("circuit: E_C and E_L must be finite and positive");
}

// -----------------------------------------------------------------------------
// Derived scales
// -----------------------------------------------------------------------------

/// Dimensionless oscillator impedance z = sqrt(E_C / E_L).
[[nodiscard]] inline double impedance(const CircuitParams& p) {
    validate_realistic(p);
    return std::sqrt(p.E_C / p.E_L);
}

/// Oscillator gap hbar*Omega = 2*sqrt(E_C * E_L).
[[nodiscard]] inline double oscillator_gap(const CircuitParams& p) {
    validate_realistic(p);
    return 2.0 * std::sqrt(p.E_C * p.E_L);
}

/// Junction energies dressed by zero-point motion of the oscillator mode.
struct RenormalizedEnergies {
    double E_Q_ren = 0.0;
    double E_J_ren = 0.0;
};

/// Renormalized QPS/JJ energies within oscillator manifold `band`.
/// Band 0: E'_Q = exp(-pi^2/z) E_Q, E'_J = exp(-z/4) E_J.
/// Band 1: E''_Q = (1 - 2 pi^2/z) E'_Q, E''_J = (1 - z/2) E'_J.
/// Closed forms for bands >= 2 are not available; they are rejected.
[[nodiscard]] inline RenormalizedEnergies renormalized_energies(const CircuitParams& p, int band) {
    const double z = impedance(p);
    const double eq0 = std::exp(-pi * pi / z) * p.E_Q;
    const double ej0 = std::exp(-z / 4.0) * p.E_J;
    if (band == 0) return {eq0, ej0};
    if (band == 1) return {(1.0 - 2.0 * pi * pi / z) * eq0, (1.0 - z / 2.0) * ej0};
    throw std::invalid_argument("renormalized_energies: unsupported band (only 0 and 1 have closed forms)");
}

// -----------------------------------------------------------------------------
// Brillouin-zone wrapping
// -----------------------------------------------------------------------------

namespace detail {
/// Map x into the half-open interval (-L/2, L/2]; ties at the lower
/// boundary map to the upper one.
inline double wrap_half_open(double x, double L) {
    double r = x - L * std::ceil(x / L - 0.5);
    if (r <= -0.5 * L) r += L;
    if (r > 0.5 * L) r -= L;
    return r;
}
}  // namespace detail

/// Canonical representative of (k, phi) on the double Brillouin zone.
/// Idempotent; wrap(k + m, phi + 2 pi n) = wrap(k, phi) for integers m, n.
[[nodiscard]] inline ZakPoint wrap(double raw_k, double raw_phi) {
    if (!std::isfinite(raw_k) || !std::isfinite(raw_phi))
        throw std::invalid_argument("wrap: inputs must be finite");
    return {detail::wrap_half_open(raw_k, 1.0), detail::wrap_half_open(raw_phi, 2.0 * pi)};
}

[[nodiscard]] inline ZakPoint wrap(const ZakPoint& p) { return wrap(p.k, p.phi); }

}  // namespace dualmon
