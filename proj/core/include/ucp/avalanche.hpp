#pragma once

#include <span>
#include <vector>

namespace ucp {

/// Rydberg atoms in one nd-like series. The binding energy Ry / (n - delta)^2 is derived.
class RydbergSample {
public:
    static constexpr double kCesiumDDefect = 2.475;

    /// Throws DomainError for n < 7, n - delta <= 0 or a negative atom count.
    RydbergSample(int principal_n, double atom_count, double quantum_defect = kCesiumDDefect);

    int principal_n() const noexcept { return n_; }
    double quantum_defect() const noexcept { return defect_; }
    double atom_count() const noexcept { return atoms_; }
    double binding_energy() const noexcept { return binding_; }  // J

    RydbergSample with_atom_count(double atoms) const { return {n_, atoms, defect_}; }

private:
    int n_;
    double defect_;
    double atoms_;
    double binding_;
};

/// sigma(t) = sqrt(sigma0^2 + v0^2 t^2) with v0 = sqrt(k T_e / m_ion).
double expansion_sigma(double sigma0, double electron_temperature, double ion_mass, double t);

struct IonizationStep {
    RydbergSample sample;
    double freed_electrons;  // atoms lost in this step
};

/// N_R <- N_R exp(-k n_e dt). freed_electrons is the exact difference of the counts.
/// The temperature dependence lives in the rate coefficient; T_e is only checked.
IonizationStep ionization_step(const RydbergSample& sample, double electron_density, double electron_temperature,
                               double dt, double rate_coefficient);

struct AvalancheParameters {
    double ion_count = 4e5;
    double sigma0 = 250e-6;            // m
    double electron_temperature = 50;  // K
    double electron_fraction = 0.95;   // central n_e / n_i
    double rate_coefficient = 1e-9;    // m^3/s
    double ion_mass = 0.0;             // kg, 0 selects cesium
    double ions_per_microjoule = 4e4;  // plasma laser energy to ion number

    /// Throws DomainError for negative or non-finite entries.
    void validate() const;
};

struct AvalancheTrajectory {
    std::vector<double> times;               // s
    std::vector<double> sigma;               // m
    std::vector<double> peak_ion_density;    // m^-3
    std::vector<double> surviving_fraction;  // N_R(t) / N_R(0)
    std::vector<double> freed_electrons;     // cumulative
};

/// Integrates the Rydberg population in the expanding plasma on a uniform time grid
/// of `steps` intervals. Each step uses the exact time average of the central electron
/// density over the interval, so the result does not depend on the step count beyond
/// roundoff. Extra substeps keep every decay factor above one half.
AvalancheTrajectory run_avalanche(const RydbergSample& sample, const AvalancheParameters& params, double t_end,
                                  std::size_t steps = 200);

struct EfficiencyPoint {
    double laser_energy_uj;
    double efficiency_percent;  // 100 (1 - surviving fraction)
};

/// Ionization efficiency at t_end for each plasma laser energy (N_i = ions_per_microjoule * E).
std::vector<EfficiencyPoint> efficiency_vs_density(const RydbergSample& sample,
                                                   std::span<const double> laser_energies_uj, double t_end,
                                                   const AvalancheParameters& params = {});

enum class CollisionRegime { IonizingCooling, SuperelasticHeating };

struct RegimeClassification {
    CollisionRegime regime;
    double ratio;  // E_b / (c k T_e); the boundary sits at 1
};

/// Ionizing/Cooling when E_b < c k T_e, otherwise Superelastic/Heating (ties included).
RegimeClassification classify_regime(const RydbergSample& sample, double electron_temperature,
                                     double boundary_factor = 3.0);

const char* to_string(CollisionRegime regime) noexcept;

}  // namespace ucp
