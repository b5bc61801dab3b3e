#ifndef TITANMORPH_MISSION_BUDGET_HPP
#define TITANMORPH_MISSION_BUDGET_HPP

#include <algorithm>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "titanmorph/errors.hpp"

namespace titanmorph {

inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kTitanNightHours = 192.0;
inline constexpr double kSpaceBatterySpecificEnergy = 100.0;  // Wh/kg

struct PowerSource {
    double continuous_output = 75.0;  // W
};

struct Battery {
    double capacity = 0.0;         // kWh
    double specific_energy = 0.0;  // Wh/kg
    double mass = 0.0;             // kg
    double state_of_charge = 0.0;  // kWh

    static Battery from_mass(double mass_kg, double specific_energy_wh_per_kg) {
        detail::require(mass_kg >= 0.0 && specific_energy_wh_per_kg > 0.0, "battery: invalid mass/specific energy");
        const double cap = mass_kg * specific_energy_wh_per_kg / 1000.0;
        return Battery{cap, specific_energy_wh_per_kg, mass_kg, cap};
    }

    static Battery from_capacity(double capacity_kwh, double specific_energy_wh_per_kg) {
        detail::require(capacity_kwh >= 0.0 && specific_energy_wh_per_kg > 0.0,
                        "battery: invalid capacity/specific energy");
        return Battery{capacity_kwh, specific_energy_wh_per_kg, capacity_kwh * 1000.0 / specific_energy_wh_per_kg,
                       capacity_kwh};
    }
};

/// 25 kg at 100 Wh/kg = 2.5 kWh.
inline Battery small_battery_preset() { return Battery::from_mass(25.0, kSpaceBatterySpecificEnergy); }

/// Largest battery the source can fill over one night.
inline Battery max_battery_from_night(const PowerSource& source, double night_hours, double specific_energy) {
    detail::require(source.continuous_output > 0.0, "battery sizing: source output must be > 0");
    detail::require(night_hours >= 0.0, "battery sizing: night_hours must be >= 0");
    detail::require(specific_energy > 0.0, "battery sizing: specific_energy must be > 0");
    return Battery::from_capacity(source.continuous_output * night_hours / 1000.0, specific_energy);
}

/// 14.4 kWh preset (75 W over a 192 h night).
inline Battery max_battery_preset() {
    return max_battery_from_night(PowerSource{75.0}, kTitanNightHours, kSpaceBatterySpecificEnergy);
}

struct Activity {
    std::string name;
    double power = 0.0;         // W
    double annual_hours = 0.0;  // h/year, ignored when continuous
    bool continuous = false;

    double hours_per_year() const { return continuous ? kHoursPerYear : annual_hours; }
};

inline std::vector<Activity> builtin_activities() {
    return {
        {"Atmospheric Flight", 1600.0, 60.0, false},
        {"Communications", 350.0, 300.0, false},
        {"Sample Acquisition", 1200.0, 12.0, false},
        {"Chemical Analysis", 800.0, 25.0, false},
        {"Other Experiments", 200.0, 100.0, false},
        {"Residual Consumption", 30.0, 0.0, true},
    };
}

struct ActivityEnergy {
    std::string name;
    double kwh_per_year;
};

struct AnnualEnergy {
    std::vector<ActivityEnergy> items;
    double total_kwh = 0.0;
};

inline AnnualEnergy annual_energy(std::span<const Activity> activities) {
    AnnualEnergy out;
    for (const auto& a : activities) {
        detail::require(a.power >= 0.0 && a.annual_hours >= 0.0, "annual energy: negative power or hours in '" +
                                                                      a.name + "'");
        out.items.push_back({a.name, a.power * a.hours_per_year() / 1000.0});
    }
    // Summing in sorted order makes the total independent of input order.
    std::vector<double> e;
    for (const auto& i : out.items) e.push_back(i.kwh_per_year);
    std::sort(e.begin(), e.end());
    for (double x : e) out.total_kwh += x;
    return out;
}

inline double annual_source_energy(const PowerSource& source) {
    return source.continuous_output * kHoursPerYear / 1000.0;
}

struct PlanEntry {
    double start = 0.0;     // h
    double duration = 0.0;  // h
    std::string activity;
    double power = 0.0;     // W
};

struct MissionPlan {
    std::vector<PlanEntry> entries;
    double horizon = 0.0;        // h
    double residual_load = 0.0;  // W, applied over the whole horizon
};

/// Sorted by start time; throws InputError on overlaps, negative times, or entries past the horizon.
inline MissionPlan normalize(MissionPlan plan) {
    detail::require(plan.horizon > 0.0, "mission plan: horizon must be > 0");
    if (plan.residual_load < 0.0) throw InputError("mission plan: residual load must be >= 0");
    std::stable_sort(plan.entries.begin(), plan.entries.end(),
                     [](const PlanEntry& a, const PlanEntry& b) { return a.start < b.start; });
    char buf[200];
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        if (e.start < 0.0 || e.duration < 0.0 || e.power < 0.0) {
            std::snprintf(buf, sizeof buf, "mission plan: entry '%s' at %g h has negative start, duration or power",
                          e.activity.c_str(), e.start);
            throw InputError(buf);
        }
        if (e.start + e.duration > plan.horizon) {
            std::snprintf(buf, sizeof buf, "mission plan: entry '%s' ends at %g h, past the %g h horizon",
                          e.activity.c_str(), e.start + e.duration, plan.horizon);
            throw InputError(buf);
        }
        if (i > 0) {
            const auto& prev = plan.entries[i - 1];
            if (prev.start + prev.duration > e.start) {
                std::snprintf(buf, sizeof buf, "mission plan: entry '%s' at %g h overlaps '%s' ending at %g h",
                              e.activity.c_str(), e.start, prev.activity.c_str(), prev.start + prev.duration);
                throw InputError(buf);
            }
        }
    }
    return plan;
}

/// Horizon defaults to the end of the last entry.
inline MissionPlan make_plan(std::vector<PlanEntry> entries, double residual_load = 0.0,
                             std::optional<double> horizon = std::nullopt) {
    double end = 0.0;
    for (const auto& e : entries) end = std::max(end, e.start + e.duration);
    return normalize(MissionPlan{std::move(entries), horizon.value_or(end), residual_load});
}

struct TrajectoryPoint {
    double time = 0.0;  // h
    double soc = 0.0;   // kWh
    double load = 0.0;  // W at that instant (right-continuous)
    bool feasible = true;
};

struct EnergyAudit {
    double generated = 0.0;   // kWh from the source
    double delivered = 0.0;   // kWh consumed by loads
    double discarded = 0.0;   // kWh rejected with the battery full
    double losses = 0.0;      // kWh lost to charging inefficiency
    double soc_change = 0.0;  // kWh
};

struct SimulationResult {
    std::vector<TrajectoryPoint> trajectory;
    bool feasible = true;
    std::optional<double> violation_time;  // h, first time SoC reaches below zero
    double final_soc = 0.0;
    EnergyAudit audit;
};

/// Exact energy balance over piecewise-constant loads. `step` sets the reporting
/// grid only. Charging stores `charge_efficiency` of any surplus.
inline SimulationResult simulate(const MissionPlan& raw_plan, const PowerSource& source, const Battery& battery,
                                 double step, double charge_efficiency = 1.0) {
    detail::require(step > 0.0, "simulate: step must be > 0");
    detail::require(charge_efficiency > 0.0 && charge_efficiency <= 1.0,
                    "simulate: charge_efficiency must be in (0, 1]");
    detail::require(battery.capacity >= 0.0 && battery.state_of_charge >= 0.0 &&
                        battery.state_of_charge <= battery.capacity,
                    "simulate: battery state of charge outside [0, capacity]");
    const MissionPlan plan = normalize(raw_plan);

    // Segment boundaries where the load changes.
    struct Segment {
        double t0, t1, load;
    };
    std::vector<Segment> segments;
    double t = 0.0;
    for (const auto& e : plan.entries) {
        if (e.start > t) segments.push_back({t, e.start, plan.residual_load});
        if (e.duration > 0.0) segments.push_back({e.start, e.start + e.duration, plan.residual_load + e.power});
        t = e.start + e.duration;
    }
    if (t < plan.horizon) segments.push_back({t, plan.horizon, plan.residual_load});

    auto load_at = [&](double time) {
        for (const auto& s : segments)
            if (time >= s.t0 && time < s.t1) return s.load;
        return segments.empty() ? plan.residual_load : segments.back().load;
    };

    SimulationResult res;
    double soc = battery.state_of_charge;
    const double soc0 = soc;
    const double src_kw = source.continuous_output / 1000.0;

    // State at absolute time `until`, advancing from the segment cursor.
    std::size_t seg = 0;
    double clock = 0.0;
    auto advance = [&](double until) -> bool {
        while (clock < until && seg < segments.size()) {
            const auto& s = segments[seg];
            const double t_end = std::min(until, s.t1);
            const double dt = t_end - clock;
            const double load_kw = s.load / 1000.0;
            const double net = src_kw - load_kw;
            res.audit.generated += src_kw * dt;
            if (net >= 0.0) {
                const double stored_if_unbounded = net * dt * charge_efficiency;
                const double room = battery.capacity - soc;
                const double stored = std::min(stored_if_unbounded, room);
                // Surplus that reaches the battery beyond capacity is rejected as heat.
                const double surplus = net * dt;
                const double used_surplus = stored / charge_efficiency;
                res.audit.losses += used_surplus - stored;
                res.audit.discarded += surplus - used_surplus;
                res.audit.delivered += load_kw * dt;
                soc += stored;
            } else {
                const double drain = -net * dt;
                if (drain > soc) {
                    const double t_hit = clock + soc / (-net);
                    res.audit.generated -= src_kw * (t_end - t_hit);
                    res.audit.delivered += load_kw * (t_hit - clock);
                    soc = 0.0;
                    clock = t_hit;
                    res.feasible = false;
                    res.violation_time = t_hit;
                    return false;
                }
                res.audit.delivered += load_kw * dt;
                soc -= drain;
            }
            clock = t_end;
            if (clock >= s.t1) ++seg;
        }
        clock = std::max(clock, until);
        return true;
    };

    const auto n = static_cast<long>(std::floor(plan.horizon / step + 1e-9));
    res.trajectory.push_back({0.0, soc, load_at(0.0), true});
    for (long k = 1; k <= n + 1; ++k) {
        const double when = std::min(static_cast<double>(k) * step, plan.horizon);
        if (when <= res.trajectory.back().time) break;
        if (!advance(when)) {
            res.trajectory.push_back({*res.violation_time, 0.0, load_at(*res.violation_time), false});
            break;
        }
        res.trajectory.push_back({when, soc, load_at(when), true});
    }
    res.final_soc = soc;
    res.audit.soc_change = soc - soc0;
    return res;
}

}  // namespace titanmorph

#endif
