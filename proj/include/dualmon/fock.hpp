#pragma once

// =============================================================================
// Non-perturbative diagonalization of the mode-1 Hamiltonian in a truncated
// oscillator number basis, an independent charge-line discretization used as
// a cross-check oracle, and the Zak-basis oscillator ground state.
// =============================================================================
// The primary representation uses analytic displacement-operator matrix
// elements (associated Laguerre closed forms, evaluated by a scaled
// overflow-free recurrence), so the exponentially small renormalization
// factors exp(-pi^2/z) and exp(-z/4) carry no discretization error.
//
// Truncation artifacts concentrate near the top of the basis. Each
// exponential operator knows its per-column leakage out of the retained
// space, and checks against exact identities (unitarity, commutation) are
// restricted to the leakage-clean interior block.
// =============================================================================

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "dualmon/circuit.hpp"
#include "dualmon/errors.hpp"
#include "dualmon/parallel.hpp"

namespace dualmon {

using Complex = std::complex<double>;
// Dense complex matrix over the lowest N oscillator number states; carrier
// for Hamiltonians, noise operators and density matrices.
using TruncatedOperator = Eigen::MatrixXcd;

/// Max-norm Hermiticity check, |M - M^dagger|_inf < tol.
[[nodiscard]] inline bool is_hermitian(const TruncatedOperator& m, double tol = 1e-12) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

// -----------------------------------------------------------------------------
// Displacement matrix elements
// -----------------------------------------------------------------------------

namespace detail {

/// <n+d | D(beta) | n> along one lower diagonal, for n = 0..count-1.
/// The recurrence runs on the normalized elements themselves (all bounded
/// by 1), with the factorial prefactor folded in through log space, so it
/// cannot overflow for any basis size.
inline std::vector<Complex> displacement_diagonal(int d, Complex beta, int count) {
    const double x = std::norm(beta);
    std::vector<Complex> u(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0) return u;
    Complex u0;
    if (d == 0) {
        u0 = std::exp(-x / 2.0);
    } else if (std::abs(beta) == 0.0) {
        u0 = 0.0;
    } else {
        const double logmag = d * std::log(std::abs(beta)) - x / 2.0 - 0.5 * std::lgamma(d + 1.0);
        u0 = std::polar(std::exp(logmag), d * std::arg(beta));
    }
    Complex prev = 0.0, cur = u0;
    for (int n = 0; n < count; ++n) {
        u[static_cast<std::size_t>(n)] = cur;
        const double a = 2.0 * n + 1.0 + d - x;
        const double b = std::sqrt(static_cast<double>(n) * (n + d));
        const double c = std::sqrt(static_cast<double>(n + 1) * (n + 1 + d));
        Complex next = (a * cur - b * prev) / c;
        prev = cur;
        cur = next;
    }
    return u;
}

}  // namespace detail

/// Matrix element <m | exp(beta a^dag - beta* a) | n> of the displacement
/// operator. For m >= n this is sqrt(n!/m!) beta^(m-n) e^(-|beta|^2/2)
/// L_n^(m-n)(|beta|^2); for m < n the conjugate-transpose symmetry
/// <m|D(beta)|n> = <n|D(-beta)|m>* applies.
[[nodiscard]] inline Complex displacement_element(int m, int n, Complex beta) {
    if (m < 0 || n < 0) throw std::invalid_argument("displacement_element: negative index");
    if (m >= n) {
        auto diag = detail::displacement_diagonal(m - n, beta, n + 1);
        return diag.back();
    }
    return std::conj(displacement_element(n, m, -beta));
}

/// Full N x N truncation of D(beta) from the analytic matrix elements.
[[nodiscard]] inline TruncatedOperator displacement_matrix(Complex beta, int dim) {
    if (dim < 1) throw std::invalid_argument("displacement_matrix: dim must be positive");
    TruncatedOperator out(dim, dim);
    for (int d = 0; d < dim; ++d) {
        const auto lower = detail::displacement_diagonal(d, beta, dim - d);
        const auto upper = detail::displacement_diagonal(d, -beta, dim - d);
        for (int n = 0; n + d < dim; ++n) {
            out(n + d, n) = lower[static_cast<std::size_t>(n)];
            if (d > 0) out(n, n + d) = std::conj(upper[static_cast<std::size_t>(n)]);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Mode-1 operator set
// -----------------------------------------------------------------------------

/// Displacement argument giving exp(i phi_1) = D(i sqrt(z/2)).
[[nodiscard]] inline Complex beta_phase(double z) { return Complex(0.0, std::sqrt(z / 2.0)); }
/// Displacement argument giving exp(i 2 pi n_1) = D(-2 pi / sqrt(2 z)).
[[nodiscard]] inline Complex beta_number(double z) { return Complex(-2.0 * pi / std::sqrt(2.0 * z), 0.0); }

/// Truncated mode-1 operators in the oscillator number basis:
/// n_1 = i (a^dag - a)/sqrt(2z), phi_1 = sqrt(z/2) (a + a^dag), their exact
/// second moments, and the two unitary exponentials.
struct FockOperators {
    int dim = 0;
    double z = 0.0;
    TruncatedOperator number_op;       // n_1
    TruncatedOperator phase_op;        // phi_1
    TruncatedOperator number_sq;       // n_1^2, analytic (pentadiagonal)
    TruncatedOperator phase_sq;        // phi_1^2, analytic
    TruncatedOperator exp_i_phase;     // exp(i phi_1)
    TruncatedOperator exp_i2pi_number; // exp(i 2 pi n_1)
    Eigen::VectorXd leak_phase;        // per-column norm leakage of exp(i phi_1)
    Eigen::VectorXd leak_number;       // per-column norm leakage of exp(i 2 pi n_1)

    /// Largest leading block in which both exponentials are clean: every
    /// retained column leaks less than `eps` of its norm past the truncation.
    [[nodiscard]] int interior_dim(double eps = 1e-8) const {
        int i = 0;
        while (i < dim && leak_phase(i) <= eps && leak_number(i) <= eps) ++i;
        return i;
    }
};

[[nodiscard]] inline FockOperators build_operators(double z, int dim) {
    if (dim < 8) throw std::invalid_argument("build_operators: need dim >= 8");
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("build_operators: need z > 0");
    FockOperators ops;
    ops.dim = dim;
    ops.z = z;
    const double s2z = std::sqrt(2.0 * z);
    const double sz2 = std::sqrt(z / 2.0);
    ops.number_op = TruncatedOperator::Zero(dim, dim);
    ops.phase_op = TruncatedOperator::Zero(dim, dim);
    ops.number_sq = TruncatedOperator::Zero(dim, dim);
    ops.phase_sq = TruncatedOperator::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        const double r = std::sqrt(n + 1.0);
        ops.number_op(n + 1, n) = Complex(0.0, r / s2z);   // i a^dag / sqrt(2z)
        ops.number_op(n, n + 1) = Complex(0.0, -r / s2z);  // -i a / sqrt(2z)
        ops.phase_op(n + 1, n) = sz2 * r;
        ops.phase_op(n, n + 1) = sz2 * r;
    }
    // n_1^2 = (2 a^dag a + 1 - a^dag^2 - a^2) / (2z), phi_1^2 = z/2 (... + ...).
    for (int n = 0; n < dim; ++n) {
        ops.number_sq(n, n) = (2.0 * n + 1.0) / (2.0 * z);
        ops.phase_sq(n, n) = 0.5 * z * (2.0 * n + 1.0);
    }
    for (int n = 0; n + 2 < dim; ++n) {
        const double r = std::sqrt((n + 1.0) * (n + 2.0));
        ops.number_sq(n + 2, n) = -r / (2.0 * z);
        ops.number_sq(n, n + 2) = -r / (2.0 * z);
        ops.phase_sq(n + 2, n) = 0.5 * z * r;
        ops.phase_sq(n, n + 2) = 0.5 * z * r;
    }
    ops.exp_i_phase = displacement_matrix(beta_phase(z), dim);
    ops.exp_i2pi_number = displacement_matrix(beta_number(z), dim);
    auto leakage = [dim](const TruncatedOperator& u) {
        Eigen::VectorXd leak(dim);
        for (int j = 0; j < dim; ++j)
            leak(j) = std::max(0.0, 1.0 - u.col(j).squaredNorm());
        return leak;
    };
    ops.leak_phase = leakage(ops.exp_i_phase);
    ops.leak_number = leakage(ops.exp_i2pi_number);
    return ops;
}

// -----------------------------------------------------------------------------
// Mode-1 Hamiltonian
// -----------------------------------------------------------------------------

/// Inputs for one mode-1 diagonalization.
struct ModeOneSpec {
    CircuitParams params;
    ZakPoint p;
    BiasPoint bias;
    int truncation = 40;
};

inline void validate(const ModeOneSpec& spec) {
    validate_realistic(spec.params);
    if (spec.truncation < 8) throw std::invalid_argument("ModeOneSpec: truncation must be >= 8");
}

/// H_1(k, phi; n_x, phi_x) =
///   E_C (n_1 + n_x)^2 + E_L (phi_1 - phi_x)^2
///   - E_Q/2 (e^{-i 2 pi k} exp(i 2 pi n_1) + h.c.)
///   - E_J/2 (e^{i phi}    exp(i phi_1)     + h.c.)
/// assembled from a prebuilt operator set (reusable across a (k, phi) grid).
[[nodiscard]] inline TruncatedOperator build_hamiltonian(const FockOperators& ops,
                                                         const CircuitParams& params,
                                                         const ZakPoint& p,
                                                         const BiasPoint& bias = {}) {
    const Complex qk = std::polar(1.0, -2.0 * pi * p.k);
    const Complex jp = std::polar(1.0, p.phi);
    TruncatedOperator h = params.E_C * (ops.number_sq + 2.0 * bias.n_x * ops.number_op) +
                          params.E_L * (ops.phase_sq - 2.0 * bias.phi_x * ops.phase_op);
    h.diagonal().array() += params.E_C * bias.n_x * bias.n_x + params.E_L * bias.phi_x * bias.phi_x;
    const TruncatedOperator tq = qk * ops.exp_i2pi_number;
    const TruncatedOperator tj = jp * ops.exp_i_phase;
    h -= 0.5 * params.E_Q * (tq + tq.adjoint());
    h -= 0.5 * params.E_J * (tj + tj.adjoint());
    return h;
}

[[nodiscard]] inline TruncatedOperator build_hamiltonian(const ModeOneSpec& spec) {
    validate(spec);
    const auto ops = build_operators(impedance(spec.params), spec.truncation);
    return build_hamiltonian(ops, spec.params, spec.p, spec.bias);
}

// -----------------------------------------------------------------------------
// Dense Hermitian eigensolver
// -----------------------------------------------------------------------------

struct EigenSystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors; // orthonormal columns, matching order
};

/// Lowest `count` eigenpairs of a Hermitian operator. Residuals are
/// certified against |H v - lambda v| < 1e-9 |H|.
[[nodiscard]] inline EigenSystem eigensolve(const TruncatedOperator& h, int count) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensolve: matrix must be square");
    if (count < 1 || count > h.rows()) throw std::invalid_argument("eigensolve: bad count");
    if (!is_hermitian(h)) throw std::invalid_argument("eigensolve: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<TruncatedOperator> solver(h);
    if (solver.info() != Eigen::Success) throw convergence_error("eigensolve: solver failed");
    const double scale = std::max(std::abs(solver.eigenvalues()(0)),
                                  std::abs(solver.eigenvalues()(h.rows() - 1)));
    EigenSystem out;
    out.values = solver.eigenvalues().head(count);
    out.vectors = solver.eigenvectors().leftCols(count);
    for (int i = 0; i < count; ++i) {
        const double res = (h * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
        if (res > 1e-9 * std::max(scale, 1e-300))
            throw convergence_error("eigensolve: residual check failed");
    }
    return out;
}

// -----------------------------------------------------------------------------
// Band grids
// -----------------------------------------------------------------------------

/// Uniform samples of the half-open interval (lo, hi]: lo + (i+1) h.
/// Contains hi; contains the midpoint when n is even.
[[nodiscard]] inline std::vector<double> half_open_grid(double lo, double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + (i + 1) * h;
    return x;
}

/// Closed-interval samples [lo, hi] with both endpoints, for plot-style maps.
[[nodiscard]] inline std::vector<double> closed_grid(double lo, double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return x;
}

/// Sampled eigenenergies E_{m; k, phi} over a rectangular (k, phi) grid.
struct BandGrid {
    int band = 0;
    bool validated = true;  // bands 0 and 1 are validated; higher bands are not
    int truncation = 0;
    std::vector<double> k_samples;    // sorted, in (-1/2, 1/2]
    std::vector<double> phi_samples;  // sorted, in (-pi, pi]
    Eigen::MatrixXd values;           // values(i, j) = E at (k_i, phi_j)
    std::vector<std::pair<int, int>> failed_cells;
    double convergence_drift = 0.0;   // eigenvalue drift between N and N+8
    bool converged = false;
};

/// Diagonalize band m over an nk x nphi grid at truncation N. Per-cell solver
/// failures are recorded and leave NaN entries; the sweep always completes.
/// Convergence is re-verified at probe cells (drift between N and N+8).
[[nodiscard]] inline BandGrid band_grid(const CircuitParams& params, int m, int nk, int nphi,
                                        int truncation, unsigned threads = 1) {
    validate_realistic(params);
    if (m < 0) throw std::invalid_argument("band_grid: band index must be non-negative");
    if (nk < 2 || nphi < 2) throw std::invalid_argument("band_grid: grid must be at least 2x2");
    if (truncation < 8 + m) throw std::invalid_argument("band_grid: truncation too small for band");
    const double z = impedance(params);
    const auto ops = build_operators(z, truncation);

    BandGrid grid;
    grid.band = m;
    grid.validated = (m <= 1);
    grid.truncation = truncation;
    grid.k_samples = half_open_grid(-0.5, 0.5, nk);
    grid.phi_samples = half_open_grid(-pi, pi, nphi);
    grid.values.setConstant(nk, nphi, std::numeric_limits<double>::quiet_NaN());

    std::vector<std::vector<std::pair<int, int>>> failures(static_cast<std::size_t>(nk));
    parallel_for(static_cast<std::size_t>(nk), threads, [&](std::size_t i) {
        for (int j = 0; j < nphi; ++j) {
            const ZakPoint p{grid.k_samples[i], grid.phi_samples[static_cast<std::size_t>(j)]};
            try {
                const auto h = build_hamiltonian(ops, params, p);
                grid.values(static_cast<int>(i), j) = eigensolve(h, m + 1).values(m);
            } catch (const std::exception&) {
                failures[i].emplace_back(static_cast<int>(i), j);
            }
        }
    });
    for (auto& f : failures)
        grid.failed_cells.insert(grid.failed_cells.end(), f.begin(), f.end());

    // Truncation probe: drift of the band value between N and N+8.
    const auto ops8 = build_operators(z, truncation + 8);
    const double hbar_omega = oscillator_gap(params);
    double drift = 0.0;
    for (const ZakPoint probe : {ZakPoint{0.25, 0.5 * pi}, ZakPoint{0.5, pi}, ZakPoint{0.1, -2.0}}) {
        const double e0 = eigensolve(build_hamiltonian(ops, params, probe), m + 1).values(m);
        const double e1 = eigensolve(build_hamiltonian(ops8, params, probe), m + 1).values(m);
        drift = std::max(drift, std::abs(e1 - e0));
    }
    grid.convergence_drift = drift;
    grid.converged = drift < 1e-8 * hbar_omega;
    return grid;
}

// -----------------------------------------------------------------------------
// Charge-line oracle
// -----------------------------------------------------------------------------
// Independent discretization of the mode-1 eigenproblem. The Zak-basis
// differential operator on the (l, theta) torus carries a twisted boundary
// condition psi(l, -pi) = e^{2 pi l i} psi(l, pi); expanding each l-column
// in the twist-adapted plane waves e^{i (j - l) theta} (integer j) and using
// l-periodicity identifies the coefficients along j - l = const, collapsing
// the torus problem exactly onto the real charge line n = j - l:
//
//   [E_C (n + n_x)^2 - E_Q cos(2 pi (n - k))] D(n)
//     + E_L (i d/dn - phi_x)^2 D(n)
//     - E_J/2 [e^{i phi} D(n - 1) + e^{-i phi} D(n + 1)]  =  E D(n).
//
// The line is sampled with spacing 1/nl over |n| <= ntheta/2, so the +-1
// shifts are exact grid translations; the second derivative uses an 8th-order
// stencil. Resolution is certified by re-applying the stencil at 6th order
// to the computed ground state and comparing.
// -----------------------------------------------------------------------------

/// Lowest `count` eigenvalues of the mode-1 problem from the charge-line
/// discretization. Throws convergence_error when the grid cannot certify
/// the default 1e-6 * (hbar Omega) accuracy target.
[[nodiscard]] inline std::vector<double> pde_oracle(const ModeOneSpec& spec, int nl, int ntheta,
                                                    int count = 3) {
    validate(spec);
    if (nl < 16 || ntheta < 16) throw std::invalid_argument("pde_oracle: need nl, ntheta >= 16");
    const double ec = spec.params.E_C, el = spec.params.E_L;
    const double eq = spec.params.E_Q, ej = spec.params.E_J;
    const double h = 1.0 / nl;
    const int npts = nl * ntheta;
    if (count < 1 || count > npts) throw std::invalid_argument("pde_oracle: bad count");

    static constexpr double c2_8[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                       8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
    static constexpr double c2_6[9] = {0.0, 1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18,
                                       3.0 / 2, -3.0 / 20, 1.0 / 90, 0.0};
    static constexpr double c1_8[9] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                       4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(npts, npts);
    std::vector<double> n(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) n[static_cast<std::size_t>(i)] = -0.5 * ntheta + h * i;

    for (int i = 0; i < npts; ++i) {
        const double ni = n[static_cast<std::size_t>(i)];
        H(i, i) = ec * (ni + spec.bias.n_x) * (ni + spec.bias.n_x) -
                  eq * std::cos(2.0 * pi * (ni - spec.p.k)) +
                  el * spec.bias.phi_x * spec.bias.phi_x;
        for (int off = -4; off <= 4; ++off) {
            const int j = i + off;
            if (j < 0 || j >= npts) continue;
            H(i, j) += -el * c2_8[off + 4] / (h * h);
            if (spec.bias.phi_x != 0.0)
                H(i, j) += Complex(0.0, -2.0 * spec.bias.phi_x * el * c1_8[off + 4] / h);
        }
        if (i - nl >= 0) H(i, i - nl) += -0.5 * ej * std::polar(1.0, spec.p.phi);
        if (i + nl < npts) H(i, i + nl) += -0.5 * ej * std::polar(1.0, -spec.p.phi);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success) throw convergence_error("pde_oracle: eigensolver failed");

    // Stencil-order error estimate on the ground state.
    const Eigen::VectorXcd v0 = solver.eigenvectors().col(0);
    Complex eta = 0.0;
    for (int i = 0; i < npts; ++i)
        for (int off = -4; off <= 4; ++off) {
            const int j = i + off;
            if (j < 0 || j >= npts) continue;
            eta += std::conj(v0(i)) * (-el * (c2_8[off + 4] - c2_6[off + 4]) / (h * h)) * v0(j);
        }
    const double tol = 1e-6 * oscillator_gap(spec.params);
    if (std::abs(eta) > tol)
        throw convergence_error("pde_oracle: insufficient grid resolution (error estimate " +
                                std::to_string(std::abs(eta)) + " exceeds " + std::to_string(tol) + ")");

    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

// -----------------------------------------------------------------------------
// Oscillator ground state in the Zak basis
// -----------------------------------------------------------------------------

/// psi_0(k, phi) = (pi z)^(-1/4) exp(-phi^2 / 2z) theta_3(pi k + i pi phi / z,
/// e^(-2 pi^2 / z)); the theta series is truncated once terms drop below 1e-16.
/// z = 2 pi is the balanced point where the state delocalizes equally in both
/// coordinates.
[[nodiscard]] inline Complex ho_zak_wavefunction(double z, const ZakPoint& p) {
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("ho_zak_wavefunction: need z > 0");
    const double q = std::exp(-2.0 * pi * pi / z);
    const Complex u(pi * p.k, pi * p.phi / z);
    Complex sum = 1.0;
    double qj = 1.0;
    for (int j = 1; j <= 512; ++j) {
        qj *= std::pow(q, 2 * j - 1);  // q^(j^2) accumulated incrementally
        const Complex term = 2.0 * qj * std::cos(2.0 * u * static_cast<double>(j));
        sum += term;
        if (std::abs(term) < 1e-16 && j >= 3) break;
    }
    return std::pow(pi * z, -0.25) * std::exp(-p.phi * p.phi / (2.0 * z)) * sum;
}

}  // namespace dualmon
