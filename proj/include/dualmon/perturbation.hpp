#pragma once

// =============================================================================
// First-order perturbation theory for the weakly nonlinear oscillator mode
// and the projected noise operators in the ground-state manifold.
// =============================================================================

#include <complex>

#include "dualmon/circuit.hpp"
#include "dualmon/elementary.hpp"

namespace dualmon {

/// First-order band energy within the oscillator ground manifold, offset
/// relative to hbar*Omega/2:
///   E^(1)(k, phi) = -E'_Q cos(2 pi k) - E'_J cos(phi).
[[nodiscard]] inline double first_order_energy(const CircuitParams& params, const ZakPoint& p) {
    const auto ren = renormalized_energies(params, 0);
    return -ren.E_Q_ren * std::cos(2.0 * pi * p.k) - ren.E_J_ren * std::cos(p.phi);
}

/// Matrix element [[V(k, phi)]]_{10} between the lowest two oscillator states:
///   e^{-z/4} sqrt(z/2) E_J sin(phi) - i pi e^{-pi^2/z} sqrt(2/z) E_Q sin(2 pi k).
[[nodiscard]] inline std::complex<double> v_matrix_element_10(const CircuitParams& params,
                                                              const ZakPoint& p) {
    const double z = impedance(params);
    const double re = std::exp(-z / 4.0) * std::sqrt(z / 2.0) * params.E_J * sin_angle(p.phi);
    const double im = -pi * std::exp(-pi * pi / z) * std::sqrt(2.0 / z) * params.E_Q * sin_two_pi(p.k);
    return {re, im};
}

/// Ground-manifold projection of the charge/flux noise operators:
/// charge -> 2 pi E'_Q sin(2 pi k), flux -> E'_J sin(phi). Same form as the
/// elementary operators with renormalized energies, so critical states stay
/// null vectors.
[[nodiscard]] inline double projected_noise(const CircuitParams& params, NoiseChannel which,
                                            const ZakPoint& p) {
    const auto ren = renormalized_energies(params, 0);
    switch (which) {
        case NoiseChannel::charge: return 2.0 * pi * ren.E_Q_ren * sin_two_pi(p.k);
        case NoiseChannel::flux: return ren.E_J_ren * sin_angle(p.phi);
    }
    throw std::invalid_argument("projected_noise: unknown channel");
}

/// Pure dephasing rate in the realistic circuit's ground manifold: the
/// elementary rate with E_Q -> E'_Q and E_J -> E'_J.
[[nodiscard]] inline double realistic_dephasing_rate(const CircuitParams& params,
                                                     const NoiseSpec& noise, const ZakPoint& a,
                                                     const ZakPoint& b) {
    const auto ren = renormalized_energies(params, 0);
    CircuitParams dressed = params;
    dressed.E_Q = ren.E_Q_ren;
    dressed.E_J = ren.E_J_ren;
    return dephasing_rate(dressed, noise, a, b);
}

}  // namespace dualmon
