#include "ucp/avalanche.hpp"
#include "ucp/constants.hpp"
#include "ucp/errors.hpp"
#include "ucp/ion_cloud.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace ucp;

TEST_CASE("Rydberg binding energies") {
    const auto& c = constants();
    CHECK(RydbergSample(19, 1e4).binding_energy() / c.boltzmann == doctest::Approx(578.0).epsilon(2e-3));
    CHECK(RydbergSample(70, 1e4).binding_energy() / c.boltzmann == doctest::Approx(34.6).epsilon(3e-3));
    CHECK(RydbergSample(30, 1e4).binding_energy() == doctest::Approx(2.877e-21).epsilon(1e-3));
    CHECK(RydbergSample(30, 1e4, 0.0).binding_energy() == doctest::Approx(c.rydberg_energy / 900.0).epsilon(1e-14));
    CHECK_THROWS_AS(RydbergSample(3, 1e4), DomainError);
    CHECK_THROWS_AS(RydbergSample(10, -1.0), DomainError);
    CHECK_THROWS_AS(RydbergSample(10, 1e4, 10.0), DomainError);
}

TEST_CASE("plasma expansion") {
    CHECK(expansion_sigma(250e-6, 50.0, kCesiumMass, 0.0) == 250e-6);
    const double v0 = std::sqrt(constants().boltzmann * 50.0 / kCesiumMass);
    CHECK(v0 == doctest::Approx(55.9).epsilon(1e-3));
    CHECK(expansion_sigma(250e-6, 50.0, kCesiumMass, 20e-6) == doctest::Approx(std::hypot(250e-6, v0 * 20e-6)).epsilon(1e-14));
    CHECK(expansion_sigma(250e-6, 50.0, kCesiumMass, 20e-6) * 1e6 == doctest::Approx(1146.0).epsilon(1e-3));
    CHECK(expansion_sigma(250e-6, 50.0, kCesiumMass, 1.0) == doctest::Approx(v0).epsilon(1e-6));
    CHECK_THROWS_AS(expansion_sigma(250e-6, 50.0, kCesiumMass, -1e-6), DomainError);
    CHECK_THROWS_AS(expansion_sigma(0.0, 50.0, kCesiumMass, 1e-6), DomainError);
}

TEST_CASE("single ionization step") {
    const RydbergSample s(30, 1e4);
    const auto none = ionization_step(s, 1e15, 50.0, 1e-6, 0.0);
    CHECK(none.sample.atom_count() == 1e4);
    CHECK(none.freed_electrons == 0.0);
    const double dt = std::log(2.0) / (1e-9 * 1e15);
    const auto half = ionization_step(s, 1e15, 50.0, dt, 1e-9);
    CHECK(half.sample.atom_count() == doctest::Approx(5e3).epsilon(1e-12));
    CHECK(half.sample.atom_count() + half.freed_electrons == 1e4);
    CHECK_THROWS_AS(ionization_step(s, -1.0, 50.0, dt, 1e-9), DomainError);
    CHECK_THROWS_AS(ionization_step(s, 1e15, 50.0, -dt, 1e-9), DomainError);
}

TEST_CASE("trajectory bookkeeping and monotonicity") {
    const RydbergSample s(30, 1e4);
    const AvalancheParameters p;
    const auto t = run_avalanche(s, p, 10e-6);
    REQUIRE(t.times.size() == 201);
    const double n0 = derive_peak_density(p.ion_count, p.sigma0);
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        if (i > 0) {
            CHECK(t.sigma[i] > t.sigma[i - 1]);
            CHECK(t.peak_ion_density[i] < t.peak_ion_density[i - 1]);
            CHECK(t.surviving_fraction[i] <= t.surviving_fraction[i - 1]);
            CHECK(t.freed_electrons[i] >= t.freed_electrons[i - 1]);
        }
        const double density = n0 * std::pow(p.sigma0 / t.sigma[i], 3);
        CHECK(t.peak_ion_density[i] == doctest::Approx(density).epsilon(1e-12));
        CHECK(t.surviving_fraction[i] * 1e4 + t.freed_electrons[i] == doctest::Approx(1e4).epsilon(1e-12));
    }
    CHECK(t.surviving_fraction.front() == 1.0);

    const auto fine = run_avalanche(s, p, 10e-6, 1000);
    CHECK(fine.surviving_fraction.back() == doctest::Approx(t.surviving_fraction.back()).epsilon(1e-9));
}

TEST_CASE("ionization efficiency trends") {
    const RydbergSample s(30, 1e4);
    const AvalancheParameters p;
    const std::vector<double> energies{0.0, 1.0, 5.0, 10.0};
    const auto short_run = efficiency_vs_density(s, energies, 1e-6, p);
    CHECK(short_run[0].efficiency_percent == 0.0);
    for (std::size_t i = 1; i < short_run.size(); ++i) {
        CHECK(short_run[i].efficiency_percent > short_run[i - 1].efficiency_percent);
    }
    const auto long_run = efficiency_vs_density(s, energies, 10e-6, p);
    for (std::size_t i = 1; i < long_run.size(); ++i) {
        CHECK(long_run[i].efficiency_percent > short_run[i].efficiency_percent);
    }
    CHECK(long_run.back().efficiency_percent >= 99.0);
    CHECK(derive_peak_density(10.0 * p.ions_per_microjoule, p.sigma0) * 1e-6 == doctest::Approx(1.63e9).epsilon(5e-3));

    const auto other = efficiency_vs_density(s.with_atom_count(3.7e6), energies, 10e-6, p);
    for (std::size_t i = 0; i < other.size(); ++i) {
        CHECK(other[i].efficiency_percent == doctest::Approx(long_run[i].efficiency_percent).epsilon(1e-12));
    }

    AvalancheParameters off = p;
    off.rate_coefficient = 0.0;
    for (const auto& e : efficiency_vs_density(s, energies, 10e-6, off)) CHECK(e.efficiency_percent == 0.0);

    AvalancheParameters bad = p;
    bad.electron_fraction = -0.1;
    CHECK_THROWS_AS(efficiency_vs_density(s, energies, 10e-6, bad), DomainError);
}

TEST_CASE("collision regime classifier") {
    const auto hot = classify_regime(RydbergSample(19, 1e4), 50.0);
    CHECK(hot.regime == CollisionRegime::SuperelasticHeating);
    CHECK(hot.ratio > 1.0);
    const auto cold = classify_regime(RydbergSample(70, 1e4), 50.0);
    CHECK(cold.regime == CollisionRegime::IonizingCooling);
    CHECK(cold.ratio < 1.0);
    CHECK(std::string(to_string(hot.regime)) == "Superelastic/Heating");
    CHECK(std::string(to_string(cold.regime)) == "Ionizing/Cooling");
    CHECK_THROWS_AS(classify_regime(RydbergSample(19, 1e4), 50.0, 0.0), DomainError);
    CHECK_THROWS_AS(classify_regime(RydbergSample(19, 1e4), 0.0), DomainError);
}

TEST_CASE("classifier tie goes to Superelastic/Heating") {
    const RydbergSample s(30, 1e4);
    const double k = constants().boltzmann;
    // find T with c k T == E_b exactly in floating point
    double t = s.binding_energy() / (3.0 * k);
    int tries = 0;
    while (3.0 * k * t != s.binding_energy() && tries < 64) {
        t = 3.0 * k * t < s.binding_energy() ? std::nextafter(t, 1e9) : std::nextafter(t, 0.0);
        ++tries;
    }
    REQUIRE(3.0 * k * t == s.binding_energy());
    const auto tie = classify_regime(s, t);
    CHECK(tie.regime == CollisionRegime::SuperelasticHeating);
    CHECK(tie.ratio == 1.0);
    CHECK(classify_regime(s, std::nextafter(t, 1e9)).regime == CollisionRegime::IonizingCooling);
}
