#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomlight/error.hpp"
#include "atomlight/oracle.hpp"
#include "atomlight/units.hpp"

#include <cmath>
#include <random>

using namespace atomlight;

TEST_CASE("balanced split of r = 2 squeezing") {
    const auto s = beamsplitter_summary({0.5, 2.0, 0.0});
    const double e = std::exp(-4.0);
    CHECK(std::abs(s.vinf_x_plus - 2.0 * e / (1.0 + e)) < 1e-14);
    CHECK(std::abs(s.vinf_x_minus - 2.0 / (1.0 + e)) < 1e-14);
    CHECK(std::abs(s.vinf_x_plus - 0.03596) < 1e-3);
    CHECK(std::abs(s.vinf_x_minus - 1.9643) < 1e-3);
    CHECK(std::abs(s.product_x - 4.0 / (2.0 + std::exp(4.0) + std::exp(-4.0))) < 1e-14);
    CHECK(std::abs(s.v_x_plus - 0.50916) < 1e-5);
    CHECK(std::abs(s.cov_plus + 0.49084) < 1e-5);
    CHECK(s.entangled);
}

TEST_CASE("vacuum limits") {
    for (const BeamSplitterCase bs : {BeamSplitterCase{0.0, 2.0, 0.0}, BeamSplitterCase{0.3, 0.0, 0.0},
                                      BeamSplitterCase{0.0, 1.0, 0.8}}) {
        const auto s = beamsplitter_summary(bs);
        CHECK(std::abs(s.v_x_plus - 1.0) < 1e-14);
        CHECK(std::abs(s.v_x_minus - 1.0) < 1e-14);
        CHECK(std::abs(s.product_x - 1.0) < 1e-14);
    }
}

TEST_CASE("inferred variance at eta = 1/2 against its closed form") {
    // Vinf(X+) = V - Cov^2/V with V = (1 + e^-2r)/2 and Cov = (e^-2r - 1)/2
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double r = dist(rng);
        const double e = std::exp(-2.0 * r);
        const auto s = beamsplitter_summary({0.5, r, 0.0});
        CHECK(std::abs(s.vinf_x_plus - 2.0 * e / (1.0 + e)) < 1e-12);
        CHECK(std::abs(s.vinf_x_minus - 2.0 / (e + 1.0)) < 1e-12);
    }
}

TEST_CASE("oracle states are physical over a grid") {
    for (int i = 0; i <= 49; ++i) {
        for (int j = 0; j <= 49; ++j) {
            const auto s = beamsplitter_summary({i / 49.0, 3.0 * j / 49.0, 0.3});
            CHECK(s.uncertainty_x >= 1.0 - 1e-9);
            CHECK(s.uncertainty_y >= 1.0 - 1e-9);
            CHECK(s.product_x >= 0.0);
        }
    }
}

TEST_CASE("two-mode exchange") {
    CHECK(two_mode_rabi(0.0, 5.0) == 0.0);
    CHECK(two_mode_rabi(1.0, units::pi / 2) == doctest::Approx(1.0));
    CHECK(two_mode_rabi(2.0, units::pi / 8) == doctest::Approx(0.5));
    for (double tau : {units::pi / 4, 0.3, 1.7}) CHECK(std::abs(two_mode_rabi(1.0, tau) - two_mode_rabi_ode(1.0, tau)) < 1e-9);
    CHECK_THROWS_AS(two_mode_rabi(-1.0, 1.0), ValidationError);
}
