#include "../oracles.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"
#include "ucp/space_charge.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

using namespace ucp;

namespace {
const GaussianIonCloud kCloud(4e5, 250e-6);
}

TEST_CASE("field equals Gauss's law on the quadrature charge") {
    const auto& c = constants();
    for (double x = 0.1; x <= 10.0; x *= 1.25) {
        const double r = x * kCloud.sigma();
        const double lhs = 4.0 * std::numbers::pi * c.vacuum_permittivity * r * r * gaussian_field(kCloud, r);
        const double rhs = c.elementary_charge * oracle::enclosed_ions(kCloud, r);
        CHECK(std::abs(lhs / rhs - 1.0) < 1e-8);
    }
}

TEST_CASE("field limits") {
    CHECK(gaussian_field(kCloud, 0.0) == 0.0);
    const double r = 20.0 * kCloud.sigma();
    const double point = coulomb_field_constant() * kCloud.ion_count() / (r * r);
    CHECK(std::abs(gaussian_field(kCloud, r) / point - 1.0) < 1e-3);
    CHECK_THROWS_AS(gaussian_field(kCloud, -1e-6), DomainError);
    // small radii use the linear expansion and must join the closed form smoothly
    CHECK(reduced_gaussian_field(0.99e-4) == doctest::Approx(reduced_gaussian_field(1.01e-4) * 0.99 / 1.01).epsilon(1e-6));
}

TEST_CASE("field near the maximum of the reference cloud") {
    const double r = 1.36 * kCloud.sigma();
    const double e = gaussian_field(kCloud, r);
    CHECK(e / 100.0 == doctest::Approx(19.7).epsilon(5e-3));
    CHECK(e == doctest::Approx(oracle::field(kCloud, r)).epsilon(1e-10));
}

TEST_CASE("threshold coefficient from an independent maximization") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto peak = oracle::field_peak(kCloud);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double unit = coulomb_field_constant() * kCloud.peak_density() * std::numbers::sqrt2 * kCloud.sigma();
    const double coefficient = peak.value / unit;
    CHECK(coefficient == doctest::Approx(2.38).epsilon(0.01 / 2.38));
    CHECK(peak.location == doctest::Approx(1.36).epsilon(0.02 / 1.36));
    CHECK(seconds < 1.0);
    CHECK(field_maximum().coefficient == doctest::Approx(coefficient).epsilon(1e-9));
    CHECK(field_maximum().location == doctest::Approx(peak.location).epsilon(1e-5));
    CHECK(field_maximum().coefficient >= 2.37);
    CHECK(field_maximum().coefficient <= 2.39);
}

TEST_CASE("threshold field is the supremum of the field") {
    const double eth = threshold_field(kCloud);
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) best = std::max(best, gaussian_field(kCloud, 10.0 * kCloud.sigma() * i / 20000));
    CHECK(best <= eth * (1.0 + 1e-12));
    CHECK(best >= eth * (1.0 - 5e-3));
}

TEST_CASE("threshold worked numbers") {
    const double eth = threshold_field(kCloud);
    CHECK(eth / 100.0 == doctest::Approx(19.7).epsilon(5e-3));
    CHECK(eth * 1.57e-3 == doctest::Approx(3.1).epsilon(0.01));
    CHECK(threshold_field(kCloud.with_ion_count(8e5)) == doctest::Approx(2.0 * eth).epsilon(1e-14));
}

TEST_CASE("threshold inversion") {
    const auto c = invert_threshold(1970.0, 250e-6);
    CHECK(c.ion_count() == doctest::Approx(4e5).epsilon(5e-3));
    const auto back = invert_threshold(threshold_field(kCloud), kCloud.sigma());
    CHECK(std::abs(back.ion_count() / kCloud.ion_count() - 1.0) < 1e-10);
    CHECK(back.sigma() == kCloud.sigma());
    CHECK(invert_threshold(3.0 * 1970.0, 250e-6).ion_count() == doctest::Approx(3.0 * c.ion_count()).epsilon(1e-14));
    CHECK_THROWS_AS(invert_threshold(0.0, 250e-6), DomainError);
    CHECK_THROWS_AS(invert_threshold(1970.0, -1.0), DomainError);
}

TEST_CASE("field profile") {
    const auto p = field_profile(kCloud, 10.0 * kCloud.sigma(), 1001);
    CHECK(p.radii.front() == 0.0);
    CHECK(p.field_magnitude.front() == 0.0);
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < p.radii.size(); ++i) {
        CHECK(p.radii[i] > p.radii[i - 1]);
        if (p.field_magnitude[i] > p.field_magnitude[i - 1] && p.field_magnitude[i] >= p.field_magnitude[i + 1]) {
            ++maxima;
        }
    }
    CHECK(maxima == 1);
    CHECK(p.max_field == doctest::Approx(gaussian_field(kCloud, p.location_of_max)).epsilon(1e-12));
    CHECK_THROWS_AS(field_profile(kCloud, 0.0, 10), DomainError);
}
