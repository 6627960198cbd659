#include "../oracles.hpp"

#include "ucp/errors.hpp"
#include "ucp/king_distribution.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ucp;

namespace {
const double kSeriesLimit = 8.0 / (15.0 * std::sqrt(std::numbers::pi));
}

TEST_CASE("reduced density examples") {
    CHECK(reduced_density(0.0) == 0.0);
    CHECK(reduced_density(0.01) == doctest::Approx(3.01e-6).epsilon(2e-3));
    CHECK(reduced_density(0.01) == doctest::Approx(kSeriesLimit * std::pow(0.01, 2.5)).epsilon(4e-3));
    CHECK(reduced_density(5.0) == doctest::Approx(137.2).epsilon(5e-4));
    CHECK(oracle::king_density(5.0) == doctest::Approx(137.2).epsilon(5e-4));
    CHECK_THROWS_AS(reduced_density(-1e-9), DomainError);
    CHECK(reduced_density_or_zero(-3.0) == 0.0);
}

TEST_CASE("closed form matches velocity-space quadrature on [0, 20]") {
    double worst = 0.0;
    for (int i = 1; i <= 400; ++i) {
        const double eta = 20.0 * std::pow(i / 400.0, 2.0);
        worst = std::max(worst, std::abs(reduced_density(eta) / oracle::king_density(eta) - 1.0));
    }
    for (double eta : {1e-6, 1e-4, 1e-3, 0.05, 1.999, 2.0, 2.001}) {
        worst = std::max(worst, std::abs(reduced_density(eta) / oracle::king_density(eta) - 1.0));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("small-eta series limit") {
    for (double eta : {1e-2, 1e-3, 1e-4}) {
        const double ratio = reduced_density(eta) / std::pow(eta, 2.5);
        // next term is (2/7) eta relative to the leading one
        CHECK(std::abs(ratio / kSeriesLimit - 1.0) < 0.3 * eta);
    }
}

TEST_CASE("reduced density is strictly increasing") {
    double prev = 0.0;
    for (int i = 1; i <= 3000; ++i) {
        const double v = reduced_density(0.01 * i);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("derivative, antiderivative and inverse") {
    for (double eta : {0.003, 0.5, 1.9, 2.1, 2.9, 3.1, 7.0, 15.0}) {
        const double h = 1e-6 * std::max(1.0, eta);
        const double fd = (reduced_density(eta + h) - reduced_density(eta - h)) / (2.0 * h);
        CHECK(reduced_density_derivative(eta) == doctest::Approx(fd).epsilon(1e-6));
        const double integral = oracle::quad([](double x) { return reduced_density(x); }, 0.0, eta);
        CHECK(reduced_density_integral(eta) == doctest::Approx(integral).epsilon(1e-10));
        CHECK(inverse_reduced_density(reduced_density(eta)) == doctest::Approx(eta).epsilon(1e-12));
    }
    CHECK(inverse_reduced_density(0.0) == 0.0);
}

TEST_CASE("velocity moments of the truncated distribution") {
    for (double eta : {1e-3, 0.1, 1.0, 4.0, 10.0, 20.0}) {
        const auto m = reduced_velocity_moments(eta);
        CHECK(m.density == doctest::Approx(reduced_density(eta)).epsilon(1e-8));
        CHECK(m.mean_kinetic_energy < 1.5);
        CHECK(m.mean_kinetic_energy == doctest::Approx(oracle::king_mean_energy(eta)).epsilon(1e-8));
    }
    for (double eta : {25.0, 40.0}) {
        CHECK(reduced_velocity_moments(eta).mean_kinetic_energy == doctest::Approx(1.5).epsilon(0.01));
    }
    // shallow limit: the energy distribution tends to x^{1/2} (eta - x), mean 3 eta / 7
    CHECK(reduced_velocity_moments(1e-4).mean_kinetic_energy == doctest::Approx(3e-4 / 7.0).epsilon(1e-3));
}
