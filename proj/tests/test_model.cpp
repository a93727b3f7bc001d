#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomlight/error.hpp"
#include "atomlight/model.hpp"
#include "atomlight/units.hpp"

#include <cmath>
#include <random>

using namespace atomlight;

TEST_CASE("coupling coefficient") {
    const double omega = 2.41494e15;
    const double d = dipole_for_coupling(2.9e5, omega);
    CHECK(std::abs(coupling_coefficient(d, omega) / 2.9e5 - 1.0) < 1e-9);
    // g scales as sqrt(omega)
    CHECK(std::abs(coupling_coefficient(d, 4.0 * omega) / coupling_coefficient(d, omega) - 2.0) < 1e-12);
    CHECK_THROWS_AS(coupling_coefficient(d, 0.0), ValidationError);
}

TEST_CASE("g^2/omega does not depend on omega") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1e14, 1e16);
    const double d = 3e-29;
    const double ref = std::pow(coupling_coefficient(d, 2e15), 2) / 2e15;
    for (int i = 0; i < 100; ++i) {
        const double w = u(rng);
        CHECK(std::abs(std::pow(coupling_coefficient(d, w), 2) / w / ref - 1.0) < 1e-12);
    }
}

TEST_CASE("derived rates") {
    PhysicalParams p;
    const double kick = 2.0 * 8.05537e6;
    CHECK(std::abs(p.recoil_rate() - units::hbar * kick * kick / (2.0 * 1.4e-25)) < 1e-6);
    CHECK(std::abs(p.recoil_rate() - 9.7757e4) < 1.0);
    CHECK(std::abs(p.control_light_shift() - 56250.0) < 1e-9);
    CHECK(std::abs(p.trap_length() - std::sqrt(units::hbar / (1.4e-25 * 5.0))) < 1e-18);
    CHECK(std::abs(p.trap_length() - 1.227e-5) < 1e-8);
}

TEST_CASE("ground state") {
    PhysicalParams p;
    Grid1D g;
    const auto prof = ground_state(p, g);
    CHECK(std::abs(prof.norm() / p.n_atoms - 1.0) < 1e-6);
    // integral of sqrt(N) (pi a^2)^(-1/4) exp(-x^2/2a^2) is sqrt(N) (4 pi a^2)^(1/4)
    const double a = p.trap_length();
    const double expect = std::sqrt(p.n_atoms) * std::pow(4.0 * units::pi * a * a, 0.25);
    CHECK(std::abs(std::abs(prof.integral()) / expect - 1.0) < 1e-9);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lo(-4e-4, -1.5e-4), hi(1.5e-4, 2e-3);
    std::uniform_int_distribution<int> pow2(11, 14);
    for (int i = 0; i < 20; ++i) {
        Grid1D r;
        r.x_min = lo(rng);
        r.x_max = hi(rng);
        r.n_points = std::size_t{1} << pow2(rng);
        CHECK(std::abs(ground_state(p, r).norm() / p.n_atoms - 1.0) < 1e-6);
    }

    Grid1D narrow = g;
    narrow.x_min = -2e-5;
    CHECK_THROWS_AS(ground_state(p, narrow), ValidationError);
}

TEST_CASE("effective Rabi frequency and the quarter period") {
    PhysicalParams p;
    const auto prof = ground_state(p, Grid1D{});
    const double a = p.trap_length();
    p.omega23 = 1.5e8;
    const double closed = p.g13 * p.omega23 / p.delta * std::sqrt(p.n_atoms) * std::pow(4.0 * units::pi * a * a, 0.25);
    CHECK(std::abs(effective_rabi(p, prof) / closed - 1.0) < 1e-9);
    CHECK(std::abs(effective_rabi(p, prof) - 2.87e3) < 10.0);

    PhysicalParams half = p;
    half.omega23 = 0.75e8;
    CHECK(std::abs(effective_rabi(p, prof) - 2.0 * effective_rabi(half, prof)) < 1e-9);

    CondensateProfile scaled = prof;
    for (auto& v : scaled.values) v *= 1.7;
    CHECK(std::abs(effective_rabi(p, scaled) / effective_rabi(p, prof) - 1.7) < 1e-12);

    // sqrt(m w/hbar) hbar |k0 - kp| pi/(2m)
    const double target = std::sqrt(p.m * p.omega_trap / units::hbar) * units::hbar * p.kick() * units::pi / (2.0 * p.m);
    CHECK(std::abs(quarter_period_target(p) - target) < 1e-9);
    CHECK(std::abs(quarter_period_target(p) - 1.553e3) < 1.0);

    const double opt = optimal_rabi23(p, prof);
    PhysicalParams at = p;
    at.omega23 = opt;
    CHECK(std::abs(effective_rabi(at, prof) / quarter_period_target(p) - 1.0) < 1e-9);
    CHECK(opt / 1.6e8 > 0.5);
    CHECK(opt / 1.6e8 < 2.0);
    const double flux = optimal_rabi23(p, prof, QuarterPeriodConvention::FluxMatched);
    CHECK(std::abs(flux / 1.6e8 - 1.0) < 0.05);

    PhysicalParams strong = p;
    strong.g13 *= 10.0;
    CHECK(std::abs(optimal_rabi23(strong, prof) * 10.0 / opt - 1.0) < 1e-9);
}

TEST_CASE("squeezed photon budget") {
    const auto ok = squeezed_flux_feasibility(2.0, 1e6);
    CHECK(std::abs(ok.n_photons - 13.1541) < 1e-3);
    CHECK(ok.feasible);
    CHECK_FALSE(squeezed_flux_feasibility(2.0, 100.0).feasible);
}

TEST_CASE("parameter validation") {
    PhysicalParams p;
    CHECK_NOTHROW(validate(p));
    p.delta = 1e6;
    try {
        validate(p);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("delta") != std::string::npos);
    }
    PhysicalParams q;
    q.kp = 1.0;
    CHECK_THROWS_AS(validate(q), ValidationError);
    PhysicalParams m;
    m.m = -1.0;
    CHECK_THROWS_AS(validate(m), ValidationError);
}
