#pragma once

#include <string>
#include <string_view>

namespace ucp {

enum class Dimension { Length, Time, Field, Temperature, Energy, Density, Voltage };

enum class Unit {
    Metre, Millimetre, Micrometre, Centimetre,
    Second, Microsecond, Nanosecond,
    VoltPerMetre, VoltPerCentimetre,
    Kelvin,
    Joule, ElectronVolt, MilliElectronVolt, Wavenumber,  // cm^-1
    PerCubicMetre, PerCubicCentimetre,
    Volt,
};

struct UnitInfo {
    Unit unit;
    Dimension dimension;
    double to_si;  // multiply a value in this unit by to_si to get SI
    std::string_view tag;
};

const UnitInfo& unit_info(Unit u) noexcept;

/// Accepts the tags printed by unit_info (e.g. "um", "V/cm", "cm-1"); throws ConfigError otherwise.
Unit parse_unit(std::string_view tag);

/// Exact linear conversion between two units of the same dimension.
double convert_units(double value, Unit from, Unit to);
double convert_units(double value, std::string_view from, std::string_view to);

}  // namespace ucp
