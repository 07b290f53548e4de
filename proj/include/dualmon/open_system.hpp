#pragma once

// =============================================================================
// Lindblad evolution and steady-state machinery, plus the circuit-specific
// rate models: waveguide pure dephasing, eigenoperator thermal transitions,
// and the two-level vs ground-manifold dephasing comparison.
// =============================================================================
// Master equation convention (hbar = 1):
//   drho/dt = -i [H, rho] + sum_j rate_j D[A_j] rho,
//   D[A] rho = A rho A^dag - (rho A^dag A + A^dag A rho) / 2.
// Steady states prefer the Liouvillian null-space route; time integration is
// the independent cross-check.
// =============================================================================

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "dualmon/circuit.hpp"
#include "dualmon/elementary.hpp"
#include "dualmon/errors.hpp"
#include "dualmon/fock.hpp"

namespace dualmon {

// -----------------------------------------------------------------------------
// Model
// -----------------------------------------------------------------------------

struct LindbladModel {
    TruncatedOperator hamiltonian;
    struct Collapse {
        TruncatedOperator op;
        double rate = 0.0;
    };
    std::vector<Collapse> collapse;

    [[nodiscard]] Eigen::Index dim() const { return hamiltonian.rows(); }
};

inline void validate(const LindbladModel& model) {
    if (model.hamiltonian.rows() < 1 || model.hamiltonian.rows() != model.hamiltonian.cols())
        throw std::invalid_argument("lindblad: Hamiltonian must be square and non-empty");
    if (!is_hermitian(model.hamiltonian, 1e-12 * std::max(1.0, model.hamiltonian.cwiseAbs().maxCoeff())))
        throw std::invalid_argument("lindblad: Hamiltonian must be Hermitian");
    for (const auto& c : model.collapse) {
        if (c.op.rows() != model.dim() || c.op.cols() != model.dim())
            throw std::invalid_argument("lindblad: collapse operator dimension mismatch");
        if (!(c.rate >= 0.0)) throw std::invalid_argument("lindblad: rates must be non-negative");
    }
}

/// Check the density-matrix carrier invariants: Hermitian, unit trace,
/// eigenvalues bounded below by -1e-10.
inline void validate_density(const TruncatedOperator& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density: must be square");
    if (!is_hermitian(rho, 1e-10)) throw std::invalid_argument("density: must be Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("density: trace must be 1");
    Eigen::SelfAdjointEigenSolver<TruncatedOperator> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("density: negative eigenvalue");
}

/// Right-hand side -i[H, rho] + sum rate D[A] rho. Trace-free by construction.
[[nodiscard]] inline TruncatedOperator lindblad_rhs(const LindbladModel& model,
                                                    const TruncatedOperator& rho) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw std::invalid_argument("lindblad_rhs: density matrix dimension mismatch");
    const Complex minus_i(0.0, -1.0);
    TruncatedOperator out = minus_i * (model.hamiltonian * rho - rho * model.hamiltonian);
    for (const auto& c : model.collapse) {
        if (c.rate == 0.0) continue;
        const TruncatedOperator ada = c.op.adjoint() * c.op;
        out += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (ada * rho + rho * ada));
    }
    return out;
}

// -----------------------------------------------------------------------------
// Time integration (adaptive explicit stepping with step-halving convergence)
// -----------------------------------------------------------------------------

namespace detail {
inline TruncatedOperator rk4_run(const LindbladModel& model, TruncatedOperator rho, double t,
                                 int steps) {
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const TruncatedOperator k1 = lindblad_rhs(model, rho);
        const TruncatedOperator k2 = lindblad_rhs(model, rho + 0.5 * dt * k1);
        const TruncatedOperator k3 = lindblad_rhs(model, rho + 0.5 * dt * k2);
        const TruncatedOperator k4 = lindblad_rhs(model, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return 0.5 * (rho + rho.adjoint().eval());
}
}  // namespace detail

/// Propagate rho0 to time t with classic RK4, halving the step until two
/// successive resolutions agree to `tol` in max norm.
[[nodiscard]] inline TruncatedOperator evolve(const LindbladModel& model,
                                              const TruncatedOperator& rho0, double t,
                                              double tol = 1e-10) {
    validate(model);
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve: bad time");
    if (t == 0.0) return rho0;
    double stiffness = model.hamiltonian.cwiseAbs().maxCoeff();
    for (const auto& c : model.collapse) {
        const double a = c.op.cwiseAbs().maxCoeff();
        stiffness += c.rate * a * a;
    }
    int steps = static_cast<int>(std::clamp(4.0 * t * stiffness, 256.0, 1048576.0));
    TruncatedOperator coarse = detail::rk4_run(model, rho0, t, steps);
    for (int iter = 0; iter < 12; ++iter) {
        steps *= 2;
        TruncatedOperator fine = detail::rk4_run(model, rho0, t, steps);
        const double diff = (fine - coarse).cwiseAbs().maxCoeff();
        if (diff < tol) return fine;
        coarse = std::move(fine);
    }
    throw convergence_error("evolve: step-halving did not converge");
}

// -----------------------------------------------------------------------------
// Steady state via the Liouvillian null space
// -----------------------------------------------------------------------------

/// Column-stacked Liouvillian superoperator matrix (vec(A rho B) = (B^T (x) A) vec(rho)).
[[nodiscard]] inline Eigen::MatrixXcd liouvillian_matrix(const LindbladModel& model) {
    const Eigen::Index d = model.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    const Complex minus_i(0.0, -1.0);
    Eigen::MatrixXcd L = minus_i * (kron(id, model.hamiltonian) -
                                    kron(model.hamiltonian.transpose(), id));
    for (const auto& c : model.collapse) {
        if (c.rate == 0.0) continue;
        const Eigen::MatrixXcd ada = c.op.adjoint() * c.op;
        L += c.rate * (kron(c.op.conjugate(), c.op) -
                       0.5 * (kron(id, ada) + kron(ada.transpose(), id)));
    }
    return L;
}

/// Unique stationary density matrix of the model. Requires the Liouvillian
/// null space to be one-dimensional; a degenerate null space raises
/// convergence_error. The result is certified: |rhs(rho_ss)| small, trace 1,
/// Hermitian, positive semidefinite to -1e-10.
[[nodiscard]] inline TruncatedOperator steady_state(const LindbladModel& model) {
    validate(model);
    const Eigen::Index d = model.dim();
    const Eigen::MatrixXcd L = liouvillian_matrix(model);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    const double smax = sing(0);
    const double s_null = sing(d * d - 1);
    const double s_next = sing(d * d - 2);
    if (s_null > 1e-10 * std::max(smax, 1.0))
        throw convergence_error("steady_state: Liouvillian has no null vector");
    if (s_next <= 1e-8 * std::max(smax, 1.0))
        throw convergence_error("steady_state: non-unique steady state (degenerate null space)");

    Eigen::VectorXcd v = svd.matrixV().col(d * d - 1);
    Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-14) throw convergence_error("steady_state: traceless null vector");
    rho /= tr;

    double scale = model.hamiltonian.cwiseAbs().maxCoeff();
    for (const auto& c : model.collapse) scale += c.rate * c.op.cwiseAbs().maxCoeff();
    const double residual = lindblad_rhs(model, rho).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * std::max(scale, 1.0))
        throw convergence_error("steady_state: residual check failed");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw convergence_error("steady_state: result not positive semidefinite");
    return rho;
}

// -----------------------------------------------------------------------------
// Superpositions of Zak eigenstates under the elementary dissipators
// -----------------------------------------------------------------------------

/// A two-state superposition mu |k,phi> + mu' |k',phi'>.
struct SuperpositionSpec {
    ZakPoint p;
    ZakPoint p2;
    Complex mu{1.0 / std::numbers::sqrt2, 0.0};
    Complex mu2{1.0 / std::numbers::sqrt2, 0.0};
};

inline void validate(const SuperpositionSpec& s) {
    if (std::abs(std::norm(s.mu) + std::norm(s.mu2) - 1.0) > 1e-12)
        throw std::invalid_argument("superposition: |mu|^2 + |mu'|^2 must be 1");
}

/// Two-level model of the superposition subspace. Both noise operators act
/// diagonally on Zak states, so the restriction to span{|k,phi>, |k',phi'>}
/// is exact: H = diag(E, E'), collapse diag(a, a') with the white-noise rates
/// 2 eps_n^2 and 2 (2 pi eps_phi)^2.
[[nodiscard]] inline LindbladModel superposition_model(const CircuitParams& params,
                                                       const NoiseSpec& noise,
                                                       const SuperpositionSpec& s) {
    validate(s);
    validate(noise);
    LindbladModel model;
    model.hamiltonian = TruncatedOperator::Zero(2, 2);
    model.hamiltonian(0, 0) = energy(params, s.p);
    model.hamiltonian(1, 1) = energy(params, s.p2);
    TruncatedOperator an = TruncatedOperator::Zero(2, 2);
    an(0, 0) = noise_operator_action(params, NoiseChannel::charge, s.p);
    an(1, 1) = noise_operator_action(params, NoiseChannel::charge, s.p2);
    TruncatedOperator ap = TruncatedOperator::Zero(2, 2);
    ap(0, 0) = noise_operator_action(params, NoiseChannel::flux, s.p);
    ap(1, 1) = noise_operator_action(params, NoiseChannel::flux, s.p2);
    model.collapse.push_back({an, 2.0 * noise.eps_n * noise.eps_n});
    model.collapse.push_back({ap, 2.0 * std::pow(2.0 * pi * noise.eps_phi, 2)});
    return model;
}

[[nodiscard]] inline TruncatedOperator superposition_density(const SuperpositionSpec& s) {
    validate(s);
    Eigen::Vector2cd psi(s.mu, s.mu2);
    return psi * psi.adjoint();
}

// -----------------------------------------------------------------------------
// Thermal environment
// -----------------------------------------------------------------------------

/// Ohmic bath with spectral density J(omega) = nu * omega (hbar = 1) at
/// temperature k_B T.
struct ThermalEnvironment {
    double nu = 0.0;
    double k_B_T = 0.0;
};

inline void validate(const ThermalEnvironment& env) {
    if (!(env.nu >= 0.0) || !(env.k_B_T >= 0.0))
        throw std::invalid_argument("thermal: nu and k_B T must be non-negative");
}

/// Bose occupation N(omega) = 1 / (exp(omega / k_B T) - 1); zero at T = 0.
[[nodiscard]] inline double bose_occupation(const ThermalEnvironment& env, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("bose_occupation: need omega > 0");
    if (env.k_B_T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / env.k_B_T);
}

/// J(omega) N(omega) = nu omega / (exp(omega / k_B T) - 1); the thermal
/// excitation weight, exponentially small for omega >> k_B T and tending to
/// nu k_B T as omega -> 0.
[[nodiscard]] inline double thermal_weight(const ThermalEnvironment& env, double omega) {
    validate(env);
    return env.nu * omega * bose_occupation(env, omega);
}

/// Zero-frequency limit of J(omega) (2 N(omega) + 1) for the thermal model.
[[nodiscard]] inline double thermal_j0n0(const ThermalEnvironment& env) {
    validate(env);
    return 2.0 * env.nu * env.k_B_T;
}

/// Pure dephasing rate from waveguide charge fluctuations in the ground
/// manifold: Gamma = (pi^2 E'_Q / E_C) * J0N0 * gamma(2 pi k, 2 pi k').
/// Suppressed exactly for k, k' in {0, 1/2}.
[[nodiscard]] inline double waveguide_pure_dephasing(const CircuitParams& params, double j0n0,
                                                     double k, double kp) {
    const auto ren = renormalized_energies(params, 0);
    return pi * pi * ren.E_Q_ren / params.E_C * j0n0 * detail::gamma_kernel_charge(k, kp);
}

[[nodiscard]] inline double waveguide_pure_dephasing(const CircuitParams& params,
                                                     const ThermalEnvironment& env, double k,
                                                     double kp) {
    return waveguide_pure_dephasing(params, thermal_j0n0(env), k, kp);
}

// -----------------------------------------------------------------------------
// Eigenoperator thermal rates
// -----------------------------------------------------------------------------

/// One interband coupling channel of the charge operator at fixed (k, phi):
/// transition n -> m (m < n downward), its frequency, the thermal Lindblad
/// rates, and the squared matrix element |<Psi_m| n_1 |Psi_n>|^2.
struct TransitionRate {
    int m = 0;
    int n = 0;
    double frequency = 0.0;    // Omega^(n,m) > 0
    double down_rate = 0.0;    // pi J(Omega) (N(Omega) + 1)
    double up_rate = 0.0;      // pi J(Omega) N(Omega)
    double melem_sq = 0.0;
};

/// Thermal transition table between the lowest `bands` manifolds at fixed
/// (k, phi). The quantum numbers (k, phi) are conserved: the coupling only
/// moves population between manifolds, so superpositions within the ground
/// manifold dephase through upward rates alone.
[[nodiscard]] inline std::vector<TransitionRate> eigenoperator_rates(const CircuitParams& params,
                                                                     const ThermalEnvironment& env,
                                                                     const ZakPoint& p, int bands,
                                                                     int truncation = 40) {
    validate(env);
    validate_realistic(params);
    if (bands < 2) throw std::invalid_argument("eigenoperator_rates: need at least 2 bands");
    if (truncation < 4 * bands)
        throw std::invalid_argument("eigenoperator_rates: truncation too small for requested bands");
    const auto ops = build_operators(impedance(params), truncation);
    const auto sys = eigensolve(build_hamiltonian(ops, params, p), bands);
    std::vector<TransitionRate> out;
    for (int m = 0; m < bands; ++m) {
        for (int n = m + 1; n < bands; ++n) {
            TransitionRate tr;
            tr.m = m;
            tr.n = n;
            tr.frequency = sys.values(n) - sys.values(m);
            const Complex element =
                (sys.vectors.col(m).adjoint() * ops.number_op * sys.vectors.col(n))(0, 0);
            tr.melem_sq = std::norm(element);
            const double occupation = bose_occupation(env, tr.frequency);
            const double j = env.nu * tr.frequency;
            tr.down_rate = pi * j * (occupation + 1.0);
            tr.up_rate = pi * j * occupation;
            out.push_back(tr);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Two-level vs ground-manifold dephasing
// -----------------------------------------------------------------------------

/// Coherence decay rate of an ordinary two-level system under relaxation
/// gamma_- and excitation gamma_+: (gamma_+ + gamma_-) / 2.
[[nodiscard]] inline double two_level_dephasing(double gamma_minus, double gamma_plus) {
    if (!(gamma_minus >= 0.0) || !(gamma_plus >= 0.0))
        throw std::invalid_argument("two_level_dephasing: rates must be non-negative");
    return 0.5 * (gamma_plus + gamma_minus);
}

/// Coherence decay rate between the two ground states of the four-level
/// comparison model: (gamma_+^(1) + gamma_+^(2)) / 2, independent of every
/// relaxation rate.
[[nodiscard]] inline double ground_manifold_dephasing(double gamma_plus_1, double gamma_plus_2) {
    if (!(gamma_plus_1 >= 0.0) || !(gamma_plus_2 >= 0.0))
        throw std::invalid_argument("ground_manifold_dephasing: rates must be non-negative");
    return 0.5 * (gamma_plus_1 + gamma_plus_2);
}

/// Two-level thermal model: H = omega/2 (|e><e| - |g><g|), collapse sigma-
/// at gamma_- and sigma+ at gamma_+. Basis order (g, e).
[[nodiscard]] inline LindbladModel two_level_thermal_model(double omega, double gamma_minus,
                                                           double gamma_plus) {
    LindbladModel model;
    model.hamiltonian = TruncatedOperator::Zero(2, 2);
    model.hamiltonian(0, 0) = -0.5 * omega;
    model.hamiltonian(1, 1) = 0.5 * omega;
    TruncatedOperator sm = TruncatedOperator::Zero(2, 2);
    sm(0, 1) = 1.0;
    model.collapse.push_back({sm, gamma_minus});
    model.collapse.push_back({sm.adjoint(), gamma_plus});
    return model;
}

/// Four-level comparison model with manifolds {g1, g2} and {e1, e2} and
/// bath-induced transitions g_j <-> e_j only. Basis order (g1, g2, e1, e2).
[[nodiscard]] inline LindbladModel four_level_model(double omega1, double omega2,
                                                    double gamma_minus_1, double gamma_minus_2,
                                                    double gamma_plus_1, double gamma_plus_2) {
    LindbladModel model;
    model.hamiltonian = TruncatedOperator::Zero(4, 4);
    model.hamiltonian(0, 0) = -0.5 * omega1;
    model.hamiltonian(1, 1) = -0.5 * omega2;
    model.hamiltonian(2, 2) = 0.5 * omega1;
    model.hamiltonian(3, 3) = 0.5 * omega2;
    auto lower = [](int g, int e) {
        TruncatedOperator op = TruncatedOperator::Zero(4, 4);
        op(g, e) = 1.0;
        return op;
    };
    model.collapse.push_back({lower(0, 2), gamma_minus_1});
    model.collapse.push_back({lower(1, 3), gamma_minus_2});
    model.collapse.push_back({lower(0, 2).adjoint().eval(), gamma_plus_1});
    model.collapse.push_back({lower(1, 3).adjoint().eval(), gamma_plus_2});
    return model;
}

/// Driven two-level system in the frame rotating at the drive frequency:
/// H = -delta |e><e| - i/2 sqrt(gamma) alpha (sigma+ - sigma-), collapse
/// sqrt(gamma) sigma-. Basis order (g, e).
[[nodiscard]] inline LindbladModel driven_two_level_model(double delta, double gamma,
                                                          double alpha) {
    LindbladModel model;
    model.hamiltonian = TruncatedOperator::Zero(2, 2);
    model.hamiltonian(1, 1) = -delta;
    const double drive = 0.5 * std::sqrt(gamma) * alpha;
    model.hamiltonian(1, 0) = Complex(0.0, -drive);  // -i/2 sqrt(g) a sigma+
    model.hamiltonian(0, 1) = Complex(0.0, drive);
    TruncatedOperator sm = TruncatedOperator::Zero(2, 2);
    sm(0, 1) = 1.0;
    model.collapse.push_back({sm, gamma});
    return model;
}

}  // namespace dualmon
