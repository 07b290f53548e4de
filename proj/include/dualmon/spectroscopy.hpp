#pragma once

// =============================================================================
// Waveguide coupling constants, the interband transition map, driven
// transmission traces, bias-scan equivalence and spectroscopic localization.
// =============================================================================
// Conventions (hbar = 1):
//  * The detuning axis is referenced to the transition at (k = 0, phi = pi).
//  * The two-level reduction treats gamma as the observed linewidth: the
//    charge-operator matrix element is absorbed into gamma and the output
//    operator normalization eta is 1.
//  * Transmission T = |<b>/alpha|^2 with <b> = sqrt(gamma) <sigma-> + alpha.
// =============================================================================

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <utility>
#include <vector>

#include "dualmon/circuit.hpp"
#include "dualmon/fock.hpp"
#include "dualmon/open_system.hpp"

namespace dualmon {

// -----------------------------------------------------------------------------
// Waveguide parameters and coupling constants
// -----------------------------------------------------------------------------

/// Drive and coupling description for transmission spectroscopy.
struct WaveguideParams {
    double coupling_ratio = 0.0;  // C_c / C
    double impedance = 0.0;       // waveguide impedance factor (reduced units)
    double gamma = 0.0;           // linewidth rate at the drive frequency
    double alpha = 0.0;           // coherent drive amplitude, sqrt-rate units
    double omega_drive = 0.0;     // carrier drive frequency
};

inline void validate(const WaveguideParams& wg) {
    if (!(wg.gamma >= 0.0)) throw std::invalid_argument("waveguide: gamma must be non-negative");
    if (!(wg.alpha >= 0.0)) throw std::invalid_argument("waveguide: alpha must be non-negative");
}

/// Frequency-dependent coupling of the charge operator to the waveguide
/// continuum, in reduced units where the constant prefactor of the spectral
/// density is folded into nu: nu = (C_c/C)^2 Z_wg, J(omega) = nu omega,
/// g(omega) = sqrt(J(omega)).
struct CouplingConstants {
    double g = 0.0;
    double nu = 0.0;
    double J = 0.0;
};

[[nodiscard]] inline CouplingConstants coupling_constants(double coupling_ratio, double impedance,
                                                          double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("coupling_constants: need omega > 0");
    CouplingConstants out;
    out.nu = coupling_ratio * coupling_ratio * impedance;
    out.J = out.nu * omega;
    out.g = std::sqrt(out.J);
    return out;
}

// -----------------------------------------------------------------------------
// Interband transition frequencies
// -----------------------------------------------------------------------------

/// First-order interband transition frequency between the lowest manifolds:
/// Omega^(10)(k, phi) = Omega + (2 pi^2 / z) E'_Q cos(2 pi k) + (z/2) E'_J cos(phi).
/// Unique maximum at (0, 0), unique minimum at (1/2, pi); saddle values are
/// degenerate along level curves.
[[nodiscard]] inline double transition_frequency(const CircuitParams& params, const ZakPoint& p) {
    const double z = impedance(params);
    const auto ren = renormalized_energies(params, 0);
    return oscillator_gap(params) + (2.0 * pi * pi / z) * ren.E_Q_ren * std::cos(2.0 * pi * p.k) +
           0.5 * z * ren.E_J_ren * std::cos(p.phi);
}

/// Omega^(10) sampled on a closed plot-style grid [-1/2, 1/2] x [-pi, pi]
/// (both endpoints included; the boundary rows are wrap duplicates).
struct TransitionMap {
    std::vector<double> k_samples;
    std::vector<double> phi_samples;
    Eigen::MatrixXd omega;  // omega(i, j) at (k_i, phi_j)
};

[[nodiscard]] inline TransitionMap transition_map(const CircuitParams& params, int nk, int nphi) {
    if (nk < 3 || nphi < 3) throw std::invalid_argument("transition_map: grid too small");
    TransitionMap map;
    map.k_samples = closed_grid(-0.5, 0.5, nk);
    map.phi_samples = closed_grid(-pi, pi, nphi);
    map.omega.resize(nk, nphi);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nphi; ++j)
            map.omega(i, j) = transition_frequency(
                params, {map.k_samples[static_cast<std::size_t>(i)],
                         map.phi_samples[static_cast<std::size_t>(j)]});
    return map;
}

// -----------------------------------------------------------------------------
// Spectroscopic localization
// -----------------------------------------------------------------------------

/// Grid cells consistent with a measured transition frequency. Components
/// are counted with 4-neighbour adjacency in the plot rectangle (no wrap),
/// mirroring how the level sets appear in a contour panel. An empty region
/// is a valid no-consistent-state result, not an error.
struct LocalizationRegion {
    std::vector<std::pair<int, int>> cells;
    int component_count = 0;
    [[nodiscard]] bool empty() const { return cells.empty(); }
};

[[nodiscard]] inline LocalizationRegion localize_state(const TransitionMap& map, double omega_meas,
                                                       double delta_omega) {
    if (!(delta_omega > 0.0)) throw std::invalid_argument("localize_state: need delta_omega > 0");
    const int nk = static_cast<int>(map.k_samples.size());
    const int nphi = static_cast<int>(map.phi_samples.size());
    Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(nk, nphi);
    LocalizationRegion region;
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nphi; ++j)
            if (std::abs(map.omega(i, j) - omega_meas) <= delta_omega) {
                mask(i, j) = 1;
                region.cells.emplace_back(i, j);
            }
    Eigen::MatrixXi label = Eigen::MatrixXi::Zero(nk, nphi);
    int components = 0;
    for (const auto& [si, sj] : region.cells) {
        if (label(si, sj) != 0) continue;
        ++components;
        std::deque<std::pair<int, int>> queue{{si, sj}};
        label(si, sj) = components;
        while (!queue.empty()) {
            const auto [a, b] = queue.front();
            queue.pop_front();
            constexpr int dk[4] = {1, -1, 0, 0};
            constexpr int dp[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const int x = a + dk[d], y = b + dp[d];
                if (x < 0 || x >= nk || y < 0 || y >= nphi) continue;
                if (mask(x, y) && label(x, y) == 0) {
                    label(x, y) = components;
                    queue.emplace_back(x, y);
                }
            }
        }
    }
    region.component_count = components;
    return region;
}

[[nodiscard]] inline LocalizationRegion localize_state(const CircuitParams& params,
                                                       double omega_meas, double delta_omega,
                                                       int nk = 101, int nphi = 101) {
    return localize_state(transition_map(params, nk, nphi), omega_meas, delta_omega);
}

// -----------------------------------------------------------------------------
// Transmission spectroscopy
// -----------------------------------------------------------------------------

/// Transmission versus drive detuning from the reference transition
/// Omega^(10)(0, pi).
struct TransmissionTrace {
    ZakPoint state;
    std::vector<double> detunings;
    std::vector<double> transmission;
    bool weak_drive = true;       // flagged false when alpha^2 > E_J
    double max_residual = 0.0;    // worst steady-state residual over the trace
};

/// Reference transition for the detuning axis.
[[nodiscard]] inline double reference_transition(const CircuitParams& params) {
    return transition_frequency(params, {0.0, pi});
}

/// Steady-state transmission of the two-level reduction at (k, phi), one
/// point per detuning. The system starts (and stays) in the rotating-frame
/// steady state of the driven-damped two-level model.
[[nodiscard]] inline TransmissionTrace transmission_trace(const CircuitParams& params,
                                                          const WaveguideParams& wg,
                                                          const ZakPoint& p,
                                                          const std::vector<double>& detunings) {
    validate(wg);
    validate_realistic(params);
    if (!(wg.gamma > 0.0) || !(wg.alpha > 0.0))
        throw std::invalid_argument("transmission_trace: need gamma > 0 and alpha > 0");
    TransmissionTrace trace;
    trace.state = p;
    trace.detunings = detunings;
    trace.transmission.resize(detunings.size());
    trace.weak_drive = (wg.alpha * wg.alpha <= params.E_J);
    const double omega_ref = reference_transition(params);
    const double omega_state = transition_frequency(params, p);
    TruncatedOperator sigma_minus = TruncatedOperator::Zero(2, 2);
    sigma_minus(0, 1) = 1.0;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        const double delta_state = detunings[i] + omega_ref - omega_state;
        const auto model = driven_two_level_model(delta_state, wg.gamma, wg.alpha);
        const TruncatedOperator rho = steady_state(model);
        trace.max_residual =
            std::max(trace.max_residual, lindblad_rhs(model, rho).cwiseAbs().maxCoeff());
        const Complex sm = (sigma_minus * rho).trace();
        const Complex b = std::sqrt(wg.gamma) * sm + wg.alpha;
        trace.transmission[i] = std::norm(b / wg.alpha);
    }
    return trace;
}

// -----------------------------------------------------------------------------
// Bias-scan equivalence
// -----------------------------------------------------------------------------

struct BiasShiftResult {
    bool ok = false;
    double max_deviation = 0.0;
};

/// Verify that biasing by (n_x, phi_x) only shifts the origin of the band:
/// the lowest three eigenvalues of H(k, phi; n_x, phi_x) and of
/// H(k + n_x, phi + phi_x; 0, 0) must agree within tol.
[[nodiscard]] inline BiasShiftResult bias_shift_check(const CircuitParams& params, const ZakPoint& p,
                                                      const BiasPoint& b, double tol,
                                                      int truncation = 40) {
    validate_realistic(params);
    const auto ops = build_operators(impedance(params), truncation);
    const auto biased = eigensolve(build_hamiltonian(ops, params, p, b), 3);
    const ZakPoint shifted = wrap(p.k + b.n_x, p.phi + b.phi_x);
    const auto reference = eigensolve(build_hamiltonian(ops, params, shifted), 3);
    BiasShiftResult result;
    result.max_deviation = (biased.values - reference.values).cwiseAbs().maxCoeff();
    result.ok = result.max_deviation < tol;
    return result;
}

}  // namespace dualmon
