#include "ucp/units.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"

#include <array>
#include <string>

namespace ucp {
namespace {

constexpr double kEv = kCodata2018.elementary_charge;
constexpr double kWavenumber = kCodata2018.planck * kCodata2018.speed_of_light * 100.0;

constexpr std::array kUnits{
    UnitInfo{Unit::Metre, Dimension::Length, 1.0, "m"},
    UnitInfo{Unit::Millimetre, Dimension::Length, 1e-3, "mm"},
    UnitInfo{Unit::Micrometre, Dimension::Length, 1e-6, "um"},
    UnitInfo{Unit::Centimetre, Dimension::Length, 1e-2, "cm"},
    UnitInfo{Unit::Second, Dimension::Time, 1.0, "s"},
    UnitInfo{Unit::Microsecond, Dimension::Time, 1e-6, "us"},
    UnitInfo{Unit::Nanosecond, Dimension::Time, 1e-9, "ns"},
    UnitInfo{Unit::VoltPerMetre, Dimension::Field, 1.0, "V/m"},
    UnitInfo{Unit::VoltPerCentimetre, Dimension::Field, 100.0, "V/cm"},
    UnitInfo{Unit::Kelvin, Dimension::Temperature, 1.0, "K"},
    UnitInfo{Unit::Joule, Dimension::Energy, 1.0, "J"},
    UnitInfo{Unit::ElectronVolt, Dimension::Energy, kEv, "eV"},
    UnitInfo{Unit::MilliElectronVolt, Dimension::Energy, 1e-3 * kEv, "meV"},
    UnitInfo{Unit::Wavenumber, Dimension::Energy, kWavenumber, "cm-1"},
    UnitInfo{Unit::PerCubicMetre, Dimension::Density, 1.0, "m-3"},
    UnitInfo{Unit::PerCubicCentimetre, Dimension::Density, 1e6, "cm-3"},
    UnitInfo{Unit::Volt, Dimension::Voltage, 1.0, "V"},
};

}  // namespace

const UnitInfo& unit_info(Unit u) noexcept {
    for (const auto& info : kUnits) {
        if (info.unit == u) return info;
    }
    return kUnits.front();  // unreachable for valid enumerators
}

Unit parse_unit(std::string_view tag) {
    for (const auto& info : kUnits) {
        if (info.tag == tag) return info.unit;
    }
    // a few spellings people actually type
    if (tag == "μm" || tag == "micron") return Unit::Micrometre;
    if (tag == "μs") return Unit::Microsecond;
    if (tag == "cm^-1" || tag == "1/cm") return Unit::Wavenumber;
    if (tag == "cm^-3") return Unit::PerCubicCentimetre;
    if (tag == "m^-3") return Unit::PerCubicMetre;
    throw ConfigError("unknown unit tag '" + std::string(tag) + "'");
}

double convert_units(double value, Unit from, Unit to) {
    const auto& a = unit_info(from);
    const auto& b = unit_info(to);
    if (a.dimension != b.dimension) {
        throw ConfigError("cannot convert " + std::string(a.tag) + " to " + std::string(b.tag));
    }
    if (from == to) return value;
    return value * a.to_si / b.to_si;
}

double convert_units(double value, std::string_view from, std::string_view to) {
    return convert_units(value, parse_unit(from), parse_unit(to));
}

}  // namespace ucp
