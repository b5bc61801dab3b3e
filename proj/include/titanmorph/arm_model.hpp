#ifndef TITANMORPH_ARM_MODEL_HPP
#define TITANMORPH_ARM_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "titanmorph/errors.hpp"

namespace titanmorph {

inline constexpr double kStiffnessReferenceTemp = 20.0;   // deg C, drift anchor
inline constexpr double kStiffnessColdTemp = -180.0;      // deg C, end of the drift range
inline constexpr double kMinModelTemp = -196.0;
inline constexpr double kMaxModelTemp = 25.0;
inline constexpr double kCrystallizationBand = 10.0;      // deg C, full width
inline constexpr double kDefaultFeasibleMultiplier = 1.5;

/// Bending stiffness in kg cm per (1/cm) as a function of temperature: a linear
/// drift from +20 to -180 C, times a smoothstep jump through crystallization.
struct MaterialModel {
    std::string name;
    double baseline_stiffness = 1.0;
    std::optional<double> crystallization_temp;  // deg C
    double post_crystallization_multiplier = 1.0;
    double linear_drift_fraction = 0.0;  // relative rise over [+20, -180] C
    double infill_fraction = 1.0;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(baseline_stiffness > 0.0)) out.emplace_back(name + ": baseline_stiffness must be > 0");
        if (!(post_crystallization_multiplier >= 1.0)) out.emplace_back(name + ": multiplier must be >= 1");
        if (!(linear_drift_fraction >= 0.0)) out.emplace_back(name + ": drift_fraction must be >= 0");
        if (!(infill_fraction > 0.0 && infill_fraction <= 1.0)) out.emplace_back(name + ": infill must be in (0, 1]");
        return out;
    }
};

// Baseline stiffness values are placeholders; the measured curves are not tabulated.
inline std::vector<MaterialModel> builtin_materials(double crystallization_multiplier = 10.0) {
    return {
        {"TPU@10", 0.8, -120.0, crystallization_multiplier, 0.10, 0.10},
        {"TPU@20", 1.2, -120.0, crystallization_multiplier, 0.10, 0.20},
        {"PTFE@15", 2.0, std::nullopt, 1.0, 0.15, 0.15},
        {"PTFE@30", 2.6, std::nullopt, 1.0, 0.15, 0.30},
        {"silicone", 0.5, -96.0, crystallization_multiplier, 0.10, 1.0},
    };
}

/// Pneumatic pressurization modeled as a scalar on the baseline.
inline MaterialModel with_pressure_scale(MaterialModel m, double scale) {
    detail::require(scale > 0.0, "pressure scale must be > 0");
    m.baseline_stiffness *= scale;
    return m;
}

/// kgf cm^2 to N m^2.
inline double kgcm_per_invcm_to_si(double value) { return value * 9.80665 * 1e-4; }

namespace detail {

inline double smoothstep(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

}  // namespace detail

inline double stiffness_at(const MaterialModel& mat, double temp) {
    if (!(temp >= kMinModelTemp && temp <= kMaxModelTemp)) {
        throw DomainError("stiffness_at: temperature " + std::to_string(temp) + " C outside [-196, 25]");
    }
    const double drift = 1.0 + mat.linear_drift_fraction * (kStiffnessReferenceTemp - temp) /
                                   (kStiffnessReferenceTemp - kStiffnessColdTemp);
    double k = mat.baseline_stiffness * drift;
    if (mat.crystallization_temp) {
        // 0 above the band, 1 below it.
        const double s = detail::smoothstep((*mat.crystallization_temp + 0.5 * kCrystallizationBand - temp) /
                                            kCrystallizationBand);
        k *= 1.0 + (mat.post_crystallization_multiplier - 1.0) * s;
    }
    return k;
}

inline double tendon_moment(const MaterialModel& mat, double temp, double curvature) {
    detail::require(curvature >= 0.0, "tendon_moment: curvature must be >= 0");
    return stiffness_at(mat, temp) * curvature;
}

inline bool feasible_at(const MaterialModel& mat, double temp, double max_multiplier = kDefaultFeasibleMultiplier) {
    return stiffness_at(mat, temp) / mat.baseline_stiffness <= max_multiplier;
}

struct ArmGeometry {
    double length = 1.0;       // m
    int segments = 1;
    double body_radius = 1.0;  // m

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(length > 0.0)) out.emplace_back("arm length must be > 0");
        if (segments < 1) out.emplace_back("arm segments must be >= 1");
        if (!(body_radius > 0.0)) out.emplace_back("body_radius must be > 0");
        return out;
    }
};

struct TipPosition {
    double x;  // lateral, m
    double z;  // along the unbent arm axis, m
};

/// Constant-curvature arc from the root, initially along +z, bending toward +x.
inline TipPosition arm_tip_position(const ArmGeometry& geom, double curvature) {
    const double bend = curvature * geom.length;
    detail::require(std::abs(bend) < 2.0 * std::numbers::pi, "arm_tip_position: |curvature| * length must be < 2 pi");
    if (std::abs(bend) < 1e-6) {
        // Series about zero bend keeps the straight-arm limit exact.
        const double l = geom.length;
        const double b2 = bend * bend;
        return {l * bend * (0.5 - b2 / 24.0), l * (1.0 - b2 / 6.0)};
    }
    return {(1.0 - std::cos(bend)) / curvature, std::sin(bend) / curvature};
}

struct FoldResult {
    double extended_diameter;
    double folded_diameter;
    double reduction_fraction;
};

inline FoldResult folded_diameter(const ArmGeometry& geom, double fold_angle) {
    detail::require(fold_angle >= 0.0 && fold_angle <= 0.5 * std::numbers::pi,
                    "folded_diameter: fold_angle must be in [0, pi/2]");
    const double extended = 2.0 * (geom.body_radius + geom.length);
    const double folded = 2.0 * (geom.body_radius + geom.length * std::cos(fold_angle));
    return {extended, folded, 1.0 - folded / extended};
}

}  // namespace titanmorph

#endif
