#pragma once

#include <numbers>

namespace ucp {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
    double elementary_charge;          // C
    double vacuum_permittivity;        // F/m
    double boltzmann;                  // J/K
    double electron_mass;              // kg
    double coulomb_constant_times_e2;  // J m, e^2 / (4 pi eps0)
    double rydberg_energy;             // J, R_inf h c
    double planck;                     // J s
    double speed_of_light;             // m/s
    double atomic_mass_unit;           // kg
};

inline constexpr PhysicalConstants kCodata2018{
    .elementary_charge = 1.602176634e-19,
    .vacuum_permittivity = 8.8541878128e-12,
    .boltzmann = 1.380649e-23,
    .electron_mass = 9.1093837015e-31,
    .coulomb_constant_times_e2 =
        1.602176634e-19 * 1.602176634e-19 / (4.0 * std::numbers::pi * 8.8541878128e-12),
    .rydberg_energy = 2.1798723611035e-18,
    .planck = 6.62607015e-34,
    .speed_of_light = 299792458.0,
    .atomic_mass_unit = 1.66053906660e-27,
};

inline constexpr const PhysicalConstants& constants() noexcept { return kCodata2018; }

/// e / (4 pi eps0) in V m: field of one elementary charge at 1 m is this over r^2.
inline constexpr double coulomb_field_constant() noexcept {
    return kCodata2018.elementary_charge / (4.0 * std::numbers::pi * kCodata2018.vacuum_permittivity);
}

/// (2 pi)^{3/2}, the Gaussian normalization in three dimensions.
inline constexpr double kTwoPiPow32 = 2.0 * std::numbers::pi * std::numbers::sqrt2 / std::numbers::inv_sqrtpi;

inline constexpr double kCesiumMass = 132.905451961 * kCodata2018.atomic_mass_unit;

}  // namespace ucp
