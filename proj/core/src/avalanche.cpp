#include "ucp/avalanche.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"

#include <cmath>
#include <numbers>

namespace ucp {
namespace {


bool positive(double x) { return x > 0.0 && std::isfinite(x); }

// Time integral of the peak ion density from 0 to t:
//   int_0^t N_i / ((2 pi)^{3/2} sigma(t')^3) dt' = N_i t / ((2 pi)^{3/2} sigma0^2 sigma(t))
double density_exposure(double ion_count, double sigma0, double velocity, double t) {
    const double sigma = std::hypot(sigma0, velocity * t);
    return ion_count * t / (kTwoPiPow32 * sigma0 * sigma0 * sigma);
}

}  // namespace

RydbergSample::RydbergSample(int principal_n, double atom_count, double quantum_defect)
    : n_(principal_n), defect_(quantum_defect), atoms_(atom_count) {
    if (principal_n < 7) throw DomainError("principal quantum number must be at least 7");
    if (!std::isfinite(quantum_defect) || !(principal_n - quantum_defect > 0.0)) {
        throw DomainError("n - delta must be positive");
    }
    if (!(atom_count >= 0.0) || !std::isfinite(atom_count)) {
        throw DomainError("Rydberg atom count must be non-negative");
    }
    const double n_eff = principal_n - quantum_defect;
    binding_ = constants().rydberg_energy / (n_eff * n_eff);
}

double expansion_sigma(double sigma0, double electron_temperature, double ion_mass, double t) {
    if (!positive(sigma0) || !positive(electron_temperature) || !positive(ion_mass)) {
        throw DomainError("expansion needs positive sigma0, temperature and ion mass");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("expansion time must be non-negative");
    const double v0 = std::sqrt(constants().boltzmann * electron_temperature / ion_mass);
    return std::hypot(sigma0, v0 * t);
}

IonizationStep ionization_step(const RydbergSample& sample, double electron_density, double electron_temperature,
                               double dt, double rate_coefficient) {
    if (!positive(dt)) throw DomainError("time step must be positive");
    if (!(rate_coefficient >= 0.0) || !std::isfinite(rate_coefficient)) {
        throw DomainError("rate coefficient must be non-negative");
    }
    if (!(electron_density >= 0.0) || !std::isfinite(electron_density)) {
        throw DomainError("electron density must be non-negative");
    }
    if (!positive(electron_temperature)) throw DomainError("electron temperature must be positive");
    const double before = sample.atom_count();
    const double after = before * std::exp(-rate_coefficient * electron_density * dt);
    return {sample.with_atom_count(after), before - after};
}

void AvalancheParameters::validate() const {
    auto non_negative = [](double x) { return x >= 0.0 && std::isfinite(x); };
    if (!non_negative(ion_count)) throw DomainError("ion count must be non-negative");
    if (!positive(sigma0)) throw DomainError("initial sigma must be positive");
    if (!positive(electron_temperature)) throw DomainError("electron temperature must be positive");
    if (!non_negative(electron_fraction) || electron_fraction > 1.0) {
        throw DomainError("electron fraction must lie in [0, 1]");
    }
    if (!non_negative(rate_coefficient)) throw DomainError("rate coefficient must be non-negative");
    if (!non_negative(ion_mass)) throw DomainError("ion mass must be non-negative");
    if (!non_negative(ions_per_microjoule)) throw DomainError("ions per microjoule must be non-negative");
}

AvalancheTrajectory run_avalanche(const RydbergSample& sample, const AvalancheParameters& params, double t_end,
                                  std::size_t steps) {
    params.validate();
    if (!positive(t_end)) throw DomainError("end time must be positive");
    if (steps == 0) throw DomainError("trajectory needs at least one step");
    const double mass = params.ion_mass > 0.0 ? params.ion_mass : kCesiumMass;
    const double velocity = std::sqrt(constants().boltzmann * params.electron_temperature / mass);
    // electron exposure int n_e dt, times the rate coefficient
    auto optical_depth = [&](double t) {
        return params.rate_coefficient * params.electron_fraction *
               density_exposure(params.ion_count, params.sigma0, velocity, t);
    };

    AvalancheTrajectory traj;
    const double initial = sample.atom_count();
    RydbergSample current = sample;
    double freed = 0.0;
    auto record = [&](double t) {
        const double sigma = std::hypot(params.sigma0, velocity * t);
        traj.times.push_back(t);
        traj.sigma.push_back(sigma);
        traj.peak_ion_density.push_back(params.ion_count / (kTwoPiPow32 * sigma * sigma * sigma));
        traj.surviving_fraction.push_back(initial > 0.0 ? current.atom_count() / initial : 1.0);
        traj.freed_electrons.push_back(freed);
    };
    record(0.0);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t1 = t_end * static_cast<double>(i) / static_cast<double>(steps);
        double t = traj.times.back();
        while (t < t1) {
            double h = t1 - t;
            while (optical_depth(t + h) - optical_depth(t) > std::numbers::ln2 && h > 1e-6 * (t1 - t)) h *= 0.5;
            const double depth = optical_depth(t + h) - optical_depth(t);
            // mean density over the substep reproduces the exact exposure
            const double mean_density = params.rate_coefficient > 0.0 ? depth / (params.rate_coefficient * h) : 0.0;
            const auto step = ionization_step(current, mean_density, params.electron_temperature, h,
                                              params.rate_coefficient);
            current = step.sample;
            freed += step.freed_electrons;
            t = (t1 - t - h) > 0.0 ? t + h : t1;
        }
        record(t1);
    }
    return traj;
}

std::vector<EfficiencyPoint> efficiency_vs_density(const RydbergSample& sample,
                                                   std::span<const double> laser_energies_uj, double t_end,
                                                   const AvalancheParameters& params) {
    params.validate();
    if (!positive(t_end)) throw DomainError("end time must be positive");
    std::vector<EfficiencyPoint> out;
    out.reserve(laser_energies_uj.size());
    for (const double energy : laser_energies_uj) {
        if (!(energy >= 0.0) || !std::isfinite(energy)) throw DomainError("laser energy must be non-negative");
        AvalancheParameters p = params;
        p.ion_count = params.ions_per_microjoule * energy;
        double efficiency = 0.0;
        if (p.ion_count > 0.0) {
            const auto traj = run_avalanche(sample, p, t_end, 1);
            efficiency = 100.0 * (1.0 - traj.surviving_fraction.back());
        }
        out.push_back({energy, efficiency});
    }
    return out;
}

RegimeClassification classify_regime(const RydbergSample& sample, double electron_temperature,
                                     double boundary_factor) {
    if (!positive(electron_temperature)) throw DomainError("electron temperature must be positive");
    if (!positive(boundary_factor)) throw DomainError("boundary factor must be positive");
    const double boundary = boundary_factor * constants().boltzmann * electron_temperature;
    const double binding = sample.binding_energy();
    return {binding < boundary ? CollisionRegime::IonizingCooling : CollisionRegime::SuperelasticHeating,
            binding / boundary};
}

const char* to_string(CollisionRegime regime) noexcept {
    return regime == CollisionRegime::IonizingCooling ? "Ionizing/Cooling" : "Superelastic/Heating";
}

}  // namespace ucp
