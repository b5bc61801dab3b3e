#ifndef TITANMORPH_FLIGHT_POWER_HPP
#define TITANMORPH_FLIGHT_POWER_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "titanmorph/atmosphere.hpp"
#include "titanmorph/errors.hpp"

namespace titanmorph {

struct VehicleParams {
    double mass = 420.0;                  // kg
    double frontal_area = 1.0;            // m^2
    double body_drag_coeff = 1.32;
    double rotor_disk_area_total = 0.228; // m^2
    double blade_drag_coeff = 0.02;
    double solidity = 0.25;
    int rotor_count = 6;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(mass > 0.0)) out.emplace_back("mass must be > 0");
        if (!(frontal_area > 0.0)) out.emplace_back("frontal_area must be > 0");
        if (!(body_drag_coeff > 0.0 && body_drag_coeff < 5.0)) out.emplace_back("body_drag_coeff must be in (0, 5)");
        if (!(rotor_disk_area_total > 0.0)) out.emplace_back("rotor_disk_area_total must be > 0");
        if (!(blade_drag_coeff > 0.0)) out.emplace_back("blade_drag_coeff must be > 0");
        if (!(solidity > 0.0 && solidity < 1.0)) out.emplace_back("solidity must be in (0, 1)");
        if (rotor_count < 1) out.emplace_back("rotor_count must be >= 1");
        return out;
    }
};

/// Total disk area of `count` open rotors of the given diameter.
inline double disk_area(int count, double diameter) {
    return static_cast<double>(count) * std::numbers::pi * 0.25 * diameter * diameter;
}

/// Hover induced-power formula. `as_printed` keeps density in the numerator,
/// which is dimensionally inconsistent and exceeds `corrected` by a factor rho.
enum class InducedMode { corrected, as_printed };

struct PowerBreakdown {
    double speed = 0.0;
    double body_drag_power = 0.0;
    double induced_power = 0.0;
    double profile_power = 0.0;
    double total_power = 0.0;
};

struct CruiseSolution {
    double optimal_speed = 0.0;
    double power_at_optimum = 0.0;
    PowerBreakdown breakdown;
    bool interior = false;  // both search endpoints have strictly higher power
};

inline double body_drag_power(const AtmosphereModel& atm, const VehicleParams& vp, double v) {
    detail::require(v >= 0.0, "body_drag_power: speed must be >= 0");
    return 0.5 * atm.density * v * v * v * vp.frontal_area * vp.body_drag_coeff;
}

inline double induced_power_hover(const AtmosphereModel& atm, const VehicleParams& vp,
                                  InducedMode mode = InducedMode::corrected) {
    const double weight = vp.mass * atm.gravity;
    const double w3 = weight * weight * weight;
    if (mode == InducedMode::as_printed) return std::sqrt(w3 * atm.density / 2.0 / vp.rotor_disk_area_total);
    return std::sqrt(w3 / (2.0 * atm.density * vp.rotor_disk_area_total));
}

/// sqrt(m g / (rho A)), the velocity scale inside the forward-flight induced term.
inline double induced_velocity_scale(const AtmosphereModel& atm, const VehicleParams& vp) {
    return std::sqrt(vp.mass * atm.gravity / (atm.density * vp.rotor_disk_area_total));
}

inline double induced_power(const AtmosphereModel& atm, const VehicleParams& vp, double v,
                            InducedMode mode = InducedMode::corrected) {
    detail::require(v >= 0.0, "induced_power: speed must be >= 0");
    const double q = v / (2.0 * std::numbers::sqrt2 * induced_velocity_scale(atm, vp));
    return induced_power_hover(atm, vp, mode) / std::sqrt(1.0 + q * q);
}

inline double profile_power(const AtmosphereModel& atm, const VehicleParams& vp, double v) {
    detail::require(v >= 0.0, "profile_power: speed must be >= 0");
    return atm.density * v * v * v * vp.rotor_disk_area_total * vp.blade_drag_coeff * (vp.solidity / 8.0);
}

inline PowerBreakdown total_power(const AtmosphereModel& atm, const VehicleParams& vp, double v,
                                  InducedMode mode = InducedMode::corrected) {
    PowerBreakdown b;
    b.speed = v;
    b.body_drag_power = body_drag_power(atm, vp, v);
    b.induced_power = induced_power(atm, vp, v, mode);
    b.profile_power = profile_power(atm, vp, v);
    b.total_power = b.body_drag_power + b.induced_power + b.profile_power;
    return b;
}

/// Analytic dP_total/dv.
inline double total_power_slope(const AtmosphereModel& atm, const VehicleParams& vp, double v,
                                InducedMode mode = InducedMode::corrected) {
    const double rho = atm.density;
    const double cubic = 0.5 * rho * vp.frontal_area * vp.body_drag_coeff +
                         rho * vp.rotor_disk_area_total * vp.blade_drag_coeff * (vp.solidity / 8.0);
    const double s = 2.0 * std::numbers::sqrt2 * induced_velocity_scale(atm, vp);
    const double q = v / s;
    const double induced_slope = -induced_power_hover(atm, vp, mode) * (q / s) * std::pow(1.0 + q * q, -1.5);
    return 3.0 * cubic * v * v + induced_slope;
}

/// Golden-section search for a minimum of `f` on [lo, hi]; stops when the bracket is narrower than tol.
template <std::invocable<double> F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
    detail::require(hi > lo, "golden section: empty interval");
    detail::require(tol > 0.0, "golden section: tol must be > 0");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline constexpr double kDefaultMinSearchSpeed = 0.1;  // m/s
inline constexpr double kDefaultMaxSearchSpeed = 60.0; // m/s
inline constexpr double kDefaultSpeedTolerance = 1e-3; // m/s

inline CruiseSolution optimal_speed(const AtmosphereModel& atm, const VehicleParams& vp,
                                    InducedMode mode = InducedMode::corrected,
                                    double v_max = kDefaultMaxSearchSpeed, double tol = kDefaultSpeedTolerance,
                                    double v_min = kDefaultMinSearchSpeed) {
    detail::require(v_max > 0.0, "optimal_speed: v_max must be > 0");
    detail::require(tol > 0.0, "optimal_speed: tol must be > 0");
    const double lo = std::min(v_min, 0.5 * v_max);
    auto power = [&](double v) { return total_power(atm, vp, v, mode).total_power; };
    const double v_opt = golden_section_minimize(power, lo, v_max, tol);

    CruiseSolution sol;
    sol.optimal_speed = v_opt;
    sol.breakdown = total_power(atm, vp, v_opt, mode);
    sol.power_at_optimum = sol.breakdown.total_power;
    sol.interior = power(lo) > sol.power_at_optimum && power(v_max) > sol.power_at_optimum;
    return sol;
}

/// Range in km flying at the optimum until `battery_kwh` is spent.
inline double range_km(const CruiseSolution& sol, double battery_kwh) {
    detail::require(battery_kwh > 0.0, "range: battery_kwh must be > 0");
    detail::require(sol.power_at_optimum > 0.0, "range: cruise power must be > 0");
    const double hours = battery_kwh * 1000.0 / sol.power_at_optimum;
    return hours * 3600.0 * sol.optimal_speed / 1000.0;
}

inline std::vector<PowerBreakdown> power_sweep(const AtmosphereModel& atm, const VehicleParams& vp, double v_min,
                                               double v_max, double step,
                                               InducedMode mode = InducedMode::corrected) {
    detail::require(step > 0.0, "power sweep: step must be > 0");
    detail::require(v_min >= 0.0 && v_max >= v_min, "power sweep: need 0 <= v_min <= v_max");
    std::vector<PowerBreakdown> out;
    const auto n = static_cast<long>(std::floor((v_max - v_min) / step + 1e-9));
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k) out.push_back(total_power(atm, vp, v_min + static_cast<double>(k) * step, mode));
    return out;
}

// ---------------------------------------------------------------------------
// Calibration against published cruise optima.
//
// Body-drag and profile power are both cubic in speed, so frontal area and the
// blade term only enter through one combined coefficient. The identifiable pair
// per scenario is (frontal area, disk area) with the blade factor C_Db*sigma/8
// held fixed and shared.

struct CruiseTarget {
    double speed;            // m/s at the minimum of P_total
    double power;            // W at that speed
    double body_drag_coeff;  // C_D for the scenario
};

struct ScenarioCalibration {
    double frontal_area = 0.0;
    double disk_area = 0.0;
    std::array<double, 2> residuals{};  // v* P'(v*)/P*, P(v*)/P* - 1
    int iterations = 0;
};

struct CalibrationResult {
    ScenarioCalibration rigid;
    ScenarioCalibration deformable;
    double blade_term = 0.0;  // C_Db * sigma / 8, shared
};

inline constexpr double kCalibrationTolerance = 1e-10;

namespace detail {

inline VehicleParams with_areas(VehicleParams vp, double body_drag_coeff, double frontal_area, double disk_area) {
    vp.body_drag_coeff = body_drag_coeff;
    vp.frontal_area = frontal_area;
    vp.rotor_disk_area_total = disk_area;
    return vp;
}

inline std::array<double, 2> calibration_residuals(const AtmosphereModel& atm, const VehicleParams& base,
                                                   const CruiseTarget& t, InducedMode mode, double log_s,
                                                   double log_a) {
    const auto vp = with_areas(base, t.body_drag_coeff, std::exp(log_s), std::exp(log_a));
    return {t.speed * total_power_slope(atm, vp, t.speed, mode) / t.power,
            total_power(atm, vp, t.speed, mode).total_power / t.power - 1.0};
}

inline double norm2(const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); }

}  // namespace detail

/// Damped Newton in (log S, log A) for one scenario. `base` supplies mass,
/// blade coefficient, solidity and the starting disk area.
inline ScenarioCalibration calibrate_scenario(const AtmosphereModel& atm, const VehicleParams& base,
                                              const CruiseTarget& target, InducedMode mode = InducedMode::corrected,
                                              int max_iterations = 200) {
    detail::require(target.speed > 0.0 && target.power > 0.0, "calibration: targets must be positive");
    detail::require(target.body_drag_coeff > 0.0, "calibration: drag coefficient must be positive");

    double log_a = std::log(base.rotor_disk_area_total);
    // Start from the frontal area that zeroes the slope at the starting disk area, when positive.
    double log_s = 0.0;
    {
        const auto probe = detail::with_areas(base, target.body_drag_coeff, 1.0, base.rotor_disk_area_total);
        const double slope_no_body = total_power_slope(atm, probe, target.speed, mode) -
                                     1.5 * atm.density * target.body_drag_coeff * target.speed * target.speed;
        const double s0 = -slope_no_body / (1.5 * atm.density * target.body_drag_coeff * target.speed * target.speed);
        if (s0 > 0.0) log_s = std::log(s0);
    }

    auto r = detail::calibration_residuals(atm, base, target, mode, log_s, log_a);
    int it = 0;
    for (; it < max_iterations && detail::norm2(r) > kCalibrationTolerance; ++it) {
        constexpr double h = 1e-6;
        const auto rs_p = detail::calibration_residuals(atm, base, target, mode, log_s + h, log_a);
        const auto rs_m = detail::calibration_residuals(atm, base, target, mode, log_s - h, log_a);
        const auto ra_p = detail::calibration_residuals(atm, base, target, mode, log_s, log_a + h);
        const auto ra_m = detail::calibration_residuals(atm, base, target, mode, log_s, log_a - h);
        const double j00 = (rs_p[0] - rs_m[0]) / (2 * h), j01 = (ra_p[0] - ra_m[0]) / (2 * h);
        const double j10 = (rs_p[1] - rs_m[1]) / (2 * h), j11 = (ra_p[1] - ra_m[1]) / (2 * h);
        const double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || det == 0.0) break;
        double ds = -(j11 * r[0] - j01 * r[1]) / det;
        double da = -(-j10 * r[0] + j00 * r[1]) / det;
        // Cap the step in log space, then backtrack until the residual norm decreases.
        const double cap = 2.0 / std::max(2.0, std::max(std::abs(ds), std::abs(da)));
        ds *= cap;
        da *= cap;
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const auto trial = detail::calibration_residuals(atm, base, target, mode, log_s + lambda * ds,
                                                             log_a + lambda * da);
            if (std::isfinite(trial[0]) && std::isfinite(trial[1]) && detail::norm2(trial) < detail::norm2(r)) {
                log_s += lambda * ds;
                log_a += lambda * da;
                r = trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    if (!(detail::norm2(r) <= kCalibrationTolerance)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "calibration failed for target (v=%g m/s, P=%g W, C_D=%g): residuals %.3g, %.3g after %d "
                      "iterations",
                      target.speed, target.power, target.body_drag_coeff, r[0], r[1], it);
        throw CalibrationError(buf, {r[0], r[1]});
    }
    return ScenarioCalibration{std::exp(log_s), std::exp(log_a), r, it};
}

inline CalibrationResult calibrate_parameters(const AtmosphereModel& atm, const VehicleParams& base,
                                              const CruiseTarget& rigid, const CruiseTarget& deformable,
                                              InducedMode mode = InducedMode::corrected) {
    CalibrationResult out;
    out.rigid = calibrate_scenario(atm, base, rigid, mode);
    out.deformable = calibrate_scenario(atm, base, deformable, mode);
    out.blade_term = base.blade_drag_coeff * base.solidity / 8.0;
    return out;
}

/// `base` with the scenario's calibrated areas and drag coefficient applied.
inline VehicleParams calibrated_vehicle(const VehicleParams& base, const ScenarioCalibration& cal,
                                        double body_drag_coeff) {
    return detail::with_areas(base, body_drag_coeff, cal.frontal_area, cal.disk_area);
}

/// Published cruise comparison: rigid arms vs fully-actuated deformable arms.
struct PublishedCruise {
    double speed;
    double power;
    double body_drag_coeff;
    double range_km;
};
inline constexpr PublishedCruise kPublishedRigid{10.8, 2300.0, 1.32, 55.0};
inline constexpr PublishedCruise kPublishedDeformable{13.9, 1670.0, 0.93, 74.0};

inline CruiseTarget as_target(const PublishedCruise& p) { return {p.speed, p.power, p.body_drag_coeff}; }

}  // namespace titanmorph

#endif
