#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dualmon/circuit.hpp"

using namespace dualmon;
using Catch::Approx;

TEST_CASE("impedance closed form", "[circuit]") {
    CHECK(impedance({1, 1, 200, 10}) == Approx(std::sqrt(20.0)).epsilon(1e-14));
    CHECK(impedance({1, 1, 200, 10}) == Approx(4.4721).margin(5e-5));
    CHECK(impedance({1, 1, 1, 1}) == 1.0);
    CHECK(impedance({1, 1, 4 * pi * pi, 1}) == Approx(2 * pi).epsilon(1e-14));
    CHECK_THROWS_AS(impedance({1, 1, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(impedance({1, 1, -2, 1}), std::invalid_argument);
}

TEST_CASE("oscillator gap closed form", "[circuit]") {
    CHECK(oscillator_gap({1, 1, 200, 10}) == Approx(40 * std::sqrt(5.0)).epsilon(1e-14));
    CHECK(oscillator_gap({1, 1, 0.5, 0.5}) == Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(oscillator_gap({1, 1, 1, 0}), std::invalid_argument);
}

TEST_CASE("gap and impedance are consistent", "[circuit]") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.1, 300.0);
    for (int trial = 0; trial < 50; ++trial) {
        const CircuitParams p{1, 1, u(rng), u(rng)};
        const double z = impedance(p), gap = oscillator_gap(p);
        CHECK(gap * z == Approx(2 * p.E_C).epsilon(1e-13));
        CHECK(gap / z == Approx(2 * p.E_L).epsilon(1e-13));
    }
}

TEST_CASE("renormalized energies at z = sqrt(20)", "[circuit]") {
    const CircuitParams p{1, 1, 200, 10};
    const auto band0 = renormalized_energies(p, 0);
    const auto band1 = renormalized_energies(p, 1);
    const double z = std::sqrt(20.0);
    CHECK(band0.E_Q_ren == Approx(std::exp(-pi * pi / z)).epsilon(1e-14));
    CHECK(band0.E_J_ren == Approx(std::exp(-z / 4)).epsilon(1e-14));
    // rounded reference values
    CHECK(band0.E_Q_ren == Approx(0.110).margin(5e-4));
    CHECK(band0.E_J_ren == Approx(0.327).margin(5e-4));
    CHECK(band1.E_Q_ren == Approx(-0.376).margin(5e-4));
    CHECK(band1.E_J_ren == Approx(-0.404).margin(5e-4));
    CHECK_THROWS_AS(renormalized_energies(p, 2), std::invalid_argument);
    CHECK_THROWS_AS(renormalized_energies(p, -1), std::invalid_argument);
}

TEST_CASE("balanced impedance point has equal scale factors", "[circuit]") {
    const CircuitParams p{3.0, 0.5, 4 * pi * pi, 1.0};  // z = 2 pi
    const auto ren = renormalized_energies(p, 0);
    CHECK(ren.E_Q_ren / p.E_Q == Approx(std::exp(-pi / 2)).epsilon(1e-12));
    CHECK(ren.E_J_ren / p.E_J == Approx(std::exp(-pi / 2)).epsilon(1e-12));
    CHECK(ren.E_Q_ren / p.E_Q == Approx(0.2079).margin(5e-5));
}

TEST_CASE("band-0 scale factors lie in (0,1] and are monotone in z", "[circuit]") {
    double prev_j = 1.0, prev_q = 0.0;
    for (double z = 0.25; z < 60.0; z *= 1.4) {
        const CircuitParams p{1, 1, z, 1 / z};  // impedance z, gap 2
        const auto ren = renormalized_energies(p, 0);
        CHECK(ren.E_Q_ren > 0.0);
        CHECK(ren.E_J_ren > 0.0);
        CHECK(ren.E_Q_ren <= 1.0);
        CHECK(ren.E_J_ren <= 1.0);
        CHECK(ren.E_J_ren < prev_j);  // decreasing in z
        CHECK(ren.E_Q_ren > prev_q);  // increasing in z
        prev_j = ren.E_J_ren;
        prev_q = ren.E_Q_ren;
    }
}

TEST_CASE("regime flag", "[circuit]") {
    CHECK(CircuitParams{1, 1, 200, 10}.regime_ok());
    CHECK_FALSE(CircuitParams{1, 1, 200, 9.9}.regime_ok());
    CHECK_FALSE(CircuitParams{1, 1, 0, 0}.regime_ok());
}

TEST_CASE("wrap canonicalizes into the half-open cell", "[circuit]") {
    const auto a = wrap(0.75, 3 * pi);
    CHECK(a.k == Approx(-0.25).margin(1e-15));
    CHECK(a.phi == Approx(pi).margin(1e-14));

    const auto b = wrap(0.5, pi);  // boundary fixed point
    CHECK(b.k == 0.5);
    CHECK(b.phi == pi);

    const auto c = wrap(-0.5, -pi);  // lower boundary maps to upper
    CHECK(c.k == 0.5);
    CHECK(c.phi == pi);
}

TEST_CASE("wrap is idempotent and periodic", "[circuit]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uk(-4.0, 4.0);
    std::uniform_int_distribution<int> shift(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const double k = uk(rng), phi = uk(rng);
        const auto w1 = wrap(k, phi);
        CHECK(w1.k > -0.5);
        CHECK(w1.k <= 0.5);
        CHECK(w1.phi > -pi);
        CHECK(w1.phi <= pi);
        const auto w2 = wrap(w1.k, w1.phi);
        CHECK(w2.k == w1.k);
        CHECK(w2.phi == w1.phi);
        const auto w3 = wrap(k + shift(rng), phi + 2 * pi * shift(rng));
        CHECK(w3.k == Approx(w1.k).margin(1e-12));
        CHECK(w3.phi == Approx(w1.phi).margin(1e-12));
    }
}

TEST_CASE("wrap rejects non-finite input", "[circuit]") {
    CHECK_THROWS_AS(wrap(std::nan(""), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wrap(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("half-turn-exact sine", "[circuit]") {
    CHECK(sin_two_pi(0.0) == 0.0);
    CHECK(sin_two_pi(0.5) == 0.0);
    CHECK(sin_two_pi(-0.5) == 0.0);
    CHECK(sin_angle(pi) == 0.0);
    CHECK(sin_angle(-pi) == 0.0);
    CHECK(sin_two_pi(0.25) == Approx(1.0).epsilon(1e-15));
    for (double x : {0.11, -0.37, 0.49, 2.3})
        CHECK(sin_angle(x) == Approx(std::sin(x)).margin(1e-14));
}
