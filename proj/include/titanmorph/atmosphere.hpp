#ifndef TITANMORPH_ATMOSPHERE_HPP
#define TITANMORPH_ATMOSPHERE_HPP

#include <numbers>
#include <string>
#include <vector>

#include "titanmorph/errors.hpp"

namespace titanmorph {

/// Sea-level reference values used to derive the Titan constants from the stated ratios.
inline constexpr double kEarthDensity = 1.225;          // kg/m^3
inline constexpr double kEarthViscosity = 1.81e-5;      // Pa s
inline constexpr double kEarthGravity = 9.80665;        // m/s^2
inline constexpr double kEarthSpeedOfSound = 340.29;    // m/s

struct AtmosphereModel {
    double density = 0.0;             // kg/m^3
    double dynamic_viscosity = 0.0;   // Pa s
    double gravity = 0.0;             // m/s^2
    double speed_of_sound = 0.0;      // m/s
    double ambient_temperature = 0.0; // deg C

    /// Names of every violated invariant; empty when valid.
    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(density > 0.0)) out.emplace_back("density must be > 0");
        if (!(dynamic_viscosity > 0.0)) out.emplace_back("dynamic_viscosity must be > 0");
        if (!(gravity > 0.0)) out.emplace_back("gravity must be > 0");
        if (!(speed_of_sound > 0.0)) out.emplace_back("speed_of_sound must be > 0");
        return out;
    }
};

/// Titan surface: 4x Earth density, 1/3 Earth viscosity, g = 1.35, a = 194 m/s, 94 K.
inline AtmosphereModel titan_default() {
    return AtmosphereModel{
        .density = 4.0 * kEarthDensity,
        .dynamic_viscosity = kEarthViscosity / 3.0,
        .gravity = 1.35,
        .speed_of_sound = 194.0,
        .ambient_temperature = -179.0,
    };
}

inline AtmosphereModel earth_sea_level() {
    return AtmosphereModel{
        .density = kEarthDensity,
        .dynamic_viscosity = kEarthViscosity,
        .gravity = kEarthGravity,
        .speed_of_sound = kEarthSpeedOfSound,
        .ambient_temperature = 15.0,
    };
}

inline double reynolds(const AtmosphereModel& atm, double speed, double length) {
    detail::require(length > 0.0, "reynolds: length must be > 0");
    detail::require(speed >= 0.0, "reynolds: speed must be >= 0");
    return atm.density * speed * length / atm.dynamic_viscosity;
}

inline double rpm_to_rad_per_s(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }

inline double tip_mach(const AtmosphereModel& atm, double rpm, double diameter) {
    detail::require(diameter > 0.0, "tip_mach: diameter must be > 0");
    detail::require(rpm >= 0.0, "tip_mach: rpm must be >= 0");
    detail::require(atm.speed_of_sound > 0.0, "tip_mach: speed_of_sound must be > 0");
    return rpm_to_rad_per_s(rpm) * (diameter / 2.0) / atm.speed_of_sound;
}

}  // namespace titanmorph

#endif
