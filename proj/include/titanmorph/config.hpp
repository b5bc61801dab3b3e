#ifndef TITANMORPH_CONFIG_HPP
#define TITANMORPH_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "titanmorph/arm_model.hpp"
#include "titanmorph/atmosphere.hpp"
#include "titanmorph/errors.hpp"
#include "titanmorph/flight_power.hpp"
#include "titanmorph/io.hpp"
#include "titanmorph/mission_budget.hpp"
#include "titanmorph/rotor_sizing.hpp"

namespace titanmorph {

enum class BatteryPreset { small, max, custom };

struct RunConfig {
    AtmosphereModel atmosphere = titan_default();

    struct Rotor {
        std::optional<std::string> table;  // builtin when empty
        double critical_mach = 0.3;
        double select_diameter_step = 0.0;  // 0: select among table knots
        double select_blade_step = 0.0;
        double sweep_diameter_step = 0.01;
        double sweep_blade_step = 1.0;
    } rotor;

    struct Flight {
        VehicleParams vehicle{.mass = 420.0,
                              .frontal_area = 1.0,
                              .body_drag_coeff = kPublishedRigid.body_drag_coeff,
                              .rotor_disk_area_total = disk_area(6, kReferenceRotorPick.diameter),
                              .blade_drag_coeff = 0.02,
                              .solidity = 0.25,
                              .rotor_count = 6};
        InducedMode mode = InducedMode::corrected;
        CruiseTarget rigid = as_target(kPublishedRigid);
        CruiseTarget deformable = as_target(kPublishedDeformable);
        double v_max = kDefaultMaxSearchSpeed;
        double tolerance = kDefaultSpeedTolerance;
        double sweep_min = 0.5;
        double sweep_max = 30.0;
        double sweep_step = 0.1;
    } flight;

    struct Mission {
        BatteryPreset battery = BatteryPreset::small;
        double battery_kwh = 2.5;  // used with the custom preset
        double mmrtg_w = 75.0;
        double night_hours = kTitanNightHours;
        double specific_energy = kSpaceBatterySpecificEnergy;
        std::optional<std::string> activities;
        std::optional<std::string> plan;
        std::optional<double> horizon_h;
        double step_h = 1.0;
        double charge_efficiency = 1.0;
    } mission;

    struct Arm {
        std::optional<std::string> materials;
        double crystallization_multiplier = 10.0;
        double max_multiplier = kDefaultFeasibleMultiplier;
        double verdict_temp_c = kStiffnessColdTemp;
        double sweep_temp_min = kStiffnessColdTemp;
        double sweep_temp_max = kStiffnessReferenceTemp;
        double sweep_temp_step = 1.0;
        ArmGeometry geometry{.length = 0.49, .segments = 8, .body_radius = 1.0};
        double fold_angle_deg = 90.0;
    } arm;

    std::string out_dir = "out";

    /// Capacity used for range and simulation, in kWh.
    double battery_capacity_kwh() const {
        switch (mission.battery) {
            case BatteryPreset::small: return small_battery_preset().capacity;
            case BatteryPreset::max:
                return max_battery_from_night(PowerSource{mission.mmrtg_w}, mission.night_hours,
                                              mission.specific_energy)
                    .capacity;
            case BatteryPreset::custom: return mission.battery_kwh;
        }
        return mission.battery_kwh;
    }
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

namespace config_detail {

using Value = std::variant<double, std::string, bool>;

inline std::string type_name(const Value& v) {
    return std::holds_alternative<double>(v) ? "number" : std::holds_alternative<bool>(v) ? "boolean" : "string";
}

template <typename T>
T get(const Value& v, const std::string& key) {
    if (const auto* p = std::get_if<T>(&v)) return *p;
    throw ConfigError(key + ": wrong type (" + type_name(v) + ")");
}

inline int get_int(const Value& v, const std::string& key) {
    const double d = get<double>(v, key);
    if (d != std::floor(d)) throw ConfigError(key + ": expected an integer");
    return static_cast<int>(d);
}

inline std::optional<std::string> path_or_builtin(const Value& v, const std::string& key) {
    auto s = get<std::string>(v, key);
    if (s == "builtin" || s.empty()) return std::nullopt;
    return s;
}

using Setter = std::function<void(RunConfig&, const Value&, const std::string&)>;

#define TM_NUM(field) [](RunConfig& c, const Value& v, const std::string& k) { c.field = get<double>(v, k); }

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"atmosphere.density", TM_NUM(atmosphere.density)},
        {"atmosphere.dynamic_viscosity", TM_NUM(atmosphere.dynamic_viscosity)},
        {"atmosphere.gravity", TM_NUM(atmosphere.gravity)},
        {"atmosphere.speed_of_sound", TM_NUM(atmosphere.speed_of_sound)},
        {"atmosphere.ambient_temperature_c", TM_NUM(atmosphere.ambient_temperature)},

        {"rotor.table", [](RunConfig& c, const Value& v, const std::string& k) { c.rotor.table = path_or_builtin(v, k); }},
        {"rotor.critical_mach", TM_NUM(rotor.critical_mach)},
        {"rotor.select_diameter_step", TM_NUM(rotor.select_diameter_step)},
        {"rotor.select_blade_step", TM_NUM(rotor.select_blade_step)},
        {"rotor.sweep_diameter_step", TM_NUM(rotor.sweep_diameter_step)},
        {"rotor.sweep_blade_step", TM_NUM(rotor.sweep_blade_step)},

        {"flight.mass_kg", TM_NUM(flight.vehicle.mass)},
        {"flight.rotor_count", [](RunConfig& c, const Value& v, const std::string& k) { c.flight.vehicle.rotor_count = get_int(v, k); }},
        {"flight.disk_area_m2", TM_NUM(flight.vehicle.rotor_disk_area_total)},
        {"flight.frontal_area_m2", TM_NUM(flight.vehicle.frontal_area)},
        {"flight.blade_drag_coeff", TM_NUM(flight.vehicle.blade_drag_coeff)},
        {"flight.solidity", TM_NUM(flight.vehicle.solidity)},
        {"flight.induced_mode",
         [](RunConfig& c, const Value& v, const std::string& k) {
             const auto s = get<std::string>(v, k);
             if (s == "corrected") c.flight.mode = InducedMode::corrected;
             else if (s == "as_printed") c.flight.mode = InducedMode::as_printed;
             else throw ConfigError(k + ": expected \"corrected\" or \"as_printed\"");
         }},
        {"flight.cd_rigid", TM_NUM(flight.rigid.body_drag_coeff)},
        {"flight.cd_deformable", TM_NUM(flight.deformable.body_drag_coeff)},
        {"flight.target_speed_rigid", TM_NUM(flight.rigid.speed)},
        {"flight.target_power_rigid_w", TM_NUM(flight.rigid.power)},
        {"flight.target_speed_deformable", TM_NUM(flight.deformable.speed)},
        {"flight.target_power_deformable_w", TM_NUM(flight.deformable.power)},
        {"flight.v_max", TM_NUM(flight.v_max)},
        {"flight.tolerance", TM_NUM(flight.tolerance)},
        {"flight.sweep_min", TM_NUM(flight.sweep_min)},
        {"flight.sweep_max", TM_NUM(flight.sweep_max)},
        {"flight.sweep_step", TM_NUM(flight.sweep_step)},

        {"mission.battery",
         [](RunConfig& c, const Value& v, const std::string& k) {
             const auto s = get<std::string>(v, k);
             if (s == "small") c.mission.battery = BatteryPreset::small;
             else if (s == "max") c.mission.battery = BatteryPreset::max;
             else if (s == "custom") c.mission.battery = BatteryPreset::custom;
             else throw ConfigError(k + ": expected \"small\", \"max\" or \"custom\"");
         }},
        {"mission.battery_kwh",
         [](RunConfig& c, const Value& v, const std::string& k) {
             c.mission.battery_kwh = get<double>(v, k);
             c.mission.battery = BatteryPreset::custom;
         }},
        {"mission.mmrtg_w", TM_NUM(mission.mmrtg_w)},
        {"mission.night_hours", TM_NUM(mission.night_hours)},
        {"mission.specific_energy_wh_per_kg", TM_NUM(mission.specific_energy)},
        {"mission.activities", [](RunConfig& c, const Value& v, const std::string& k) { c.mission.activities = path_or_builtin(v, k); }},
        {"mission.plan", [](RunConfig& c, const Value& v, const std::string& k) { c.mission.plan = path_or_builtin(v, k); }},
        {"mission.horizon_h", [](RunConfig& c, const Value& v, const std::string& k) { c.mission.horizon_h = get<double>(v, k); }},
        {"mission.step_h", TM_NUM(mission.step_h)},
        {"mission.charge_efficiency", TM_NUM(mission.charge_efficiency)},

        {"arm.materials", [](RunConfig& c, const Value& v, const std::string& k) { c.arm.materials = path_or_builtin(v, k); }},
        {"arm.crystallization_multiplier", TM_NUM(arm.crystallization_multiplier)},
        {"arm.max_multiplier", TM_NUM(arm.max_multiplier)},
        {"arm.verdict_temp_c", TM_NUM(arm.verdict_temp_c)},
        {"arm.sweep_temp_min", TM_NUM(arm.sweep_temp_min)},
        {"arm.sweep_temp_max", TM_NUM(arm.sweep_temp_max)},
        {"arm.sweep_temp_step", TM_NUM(arm.sweep_temp_step)},
        {"arm.length_m", TM_NUM(arm.geometry.length)},
        {"arm.body_radius_m", TM_NUM(arm.geometry.body_radius)},
        {"arm.segments", [](RunConfig& c, const Value& v, const std::string& k) { c.arm.geometry.segments = get_int(v, k); }},
        {"arm.fold_angle_deg", TM_NUM(arm.fold_angle_deg)},

        {"output.dir", [](RunConfig& c, const Value& v, const std::string& k) { c.out_dir = get<std::string>(v, k); }},
    };
    return table;
}

#undef TM_NUM

inline Value parse_value(const std::string& raw, const std::string& where) {
    if (raw.empty()) throw ConfigError(where + ": missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') throw ConfigError(where + ": unterminated string");
        return raw.substr(1, raw.size() - 2);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    if (auto d = io::parse_double(raw)) return *d;
    throw ConfigError(where + ": cannot parse value '" + raw + "'");
}

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

}  // namespace config_detail

/// Applies `section.key=value` to `cfg`. Value is in config syntax, except that a bare
/// word which is not a number or boolean is taken as a string (shells eat the quotes).
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected section.key=value");
    const auto key = io::trim(assignment.substr(0, eq));
    const auto& table = config_detail::setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
    const auto raw = io::trim(assignment.substr(eq + 1));
    config_detail::Value value;
    if (raw.empty() || raw.front() == '"' || raw == "true" || raw == "false" || io::parse_double(raw)) {
        value = config_detail::parse_value(raw, key);
    } else {
        value = raw;
    }
    it->second(cfg, value, key);
}

/// Every invariant violation in `cfg`, including missing referenced files.
inline std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& v : cfg.atmosphere.violations()) out.push_back("atmosphere." + v);
    if (!(cfg.rotor.critical_mach > 0.0 && cfg.rotor.critical_mach < 1.0))
        out.emplace_back("rotor.critical_mach must be in (0, 1)");
    if (cfg.rotor.select_diameter_step < 0.0 || cfg.rotor.select_blade_step < 0.0)
        out.emplace_back("rotor.select_*_step must be >= 0");
    if ((cfg.rotor.select_diameter_step > 0.0) != (cfg.rotor.select_blade_step > 0.0))
        out.emplace_back("rotor.select_diameter_step and rotor.select_blade_step must both be set or both be 0");
    if (!(cfg.rotor.sweep_diameter_step > 0.0)) out.emplace_back("rotor.sweep_diameter_step must be > 0");
    if (!(cfg.rotor.sweep_blade_step > 0.0)) out.emplace_back("rotor.sweep_blade_step must be > 0");

    for (const auto& v : cfg.flight.vehicle.violations()) out.push_back("flight." + v);
    for (const auto* t : {&cfg.flight.rigid, &cfg.flight.deformable}) {
        const std::string which = t == &cfg.flight.rigid ? "rigid" : "deformable";
        if (!(t->speed > 0.0)) out.push_back("flight.target_speed_" + which + " must be > 0");
        if (!(t->power > 0.0)) out.push_back("flight.target_power_" + which + "_w must be > 0");
        if (!(t->body_drag_coeff > 0.0 && t->body_drag_coeff < 5.0)) out.push_back("flight.cd_" + which + " must be in (0, 5)");
    }
    if (!(cfg.flight.v_max > 0.0)) out.emplace_back("flight.v_max must be > 0");
    if (!(cfg.flight.tolerance > 0.0)) out.emplace_back("flight.tolerance must be > 0");
    if (!(cfg.flight.sweep_step > 0.0)) out.emplace_back("flight.sweep_step must be > 0");
    if (!(cfg.flight.sweep_min >= 0.0 && cfg.flight.sweep_max > cfg.flight.sweep_min))
        out.emplace_back("flight.sweep_min/sweep_max must satisfy 0 <= min < max");

    if (!(cfg.mission.battery_kwh > 0.0)) out.emplace_back("mission.battery_kwh must be > 0");
    if (!(cfg.mission.mmrtg_w > 0.0)) out.emplace_back("mission.mmrtg_w must be > 0");
    if (!(cfg.mission.night_hours > 0.0)) out.emplace_back("mission.night_hours must be > 0");
    if (!(cfg.mission.specific_energy > 0.0)) out.emplace_back("mission.specific_energy_wh_per_kg must be > 0");
    if (!(cfg.mission.step_h > 0.0)) out.emplace_back("mission.step_h must be > 0");
    if (cfg.mission.horizon_h && !(*cfg.mission.horizon_h > 0.0)) out.emplace_back("mission.horizon_h must be > 0");
    if (!(cfg.mission.charge_efficiency > 0.0 && cfg.mission.charge_efficiency <= 1.0))
        out.emplace_back("mission.charge_efficiency must be in (0, 1]");

    if (!(cfg.arm.crystallization_multiplier >= 1.0)) out.emplace_back("arm.crystallization_multiplier must be >= 1");
    if (!(cfg.arm.max_multiplier > 0.0)) out.emplace_back("arm.max_multiplier must be > 0");
    if (!(cfg.arm.verdict_temp_c >= kMinModelTemp && cfg.arm.verdict_temp_c <= kMaxModelTemp))
        out.emplace_back("arm.verdict_temp_c must be in [-196, 25]");
    if (!(cfg.arm.sweep_temp_min >= kMinModelTemp && cfg.arm.sweep_temp_max <= kMaxModelTemp &&
          cfg.arm.sweep_temp_min < cfg.arm.sweep_temp_max))
        out.emplace_back("arm.sweep_temp_min/max must satisfy -196 <= min < max <= 25");
    if (!(cfg.arm.sweep_temp_step > 0.0)) out.emplace_back("arm.sweep_temp_step must be > 0");
    for (const auto& v : cfg.arm.geometry.violations()) out.push_back("arm." + v);
    if (!(cfg.arm.fold_angle_deg >= 0.0 && cfg.arm.fold_angle_deg <= 90.0))
        out.emplace_back("arm.fold_angle_deg must be in [0, 90]");

    for (const auto& [key, path] : {std::pair{"rotor.table", cfg.rotor.table},
                                    std::pair{"mission.activities", cfg.mission.activities},
                                    std::pair{"mission.plan", cfg.mission.plan},
                                    std::pair{"arm.materials", cfg.arm.materials}}) {
        if (path && !std::filesystem::exists(*path)) out.push_back(std::string(key) + ": file not found: " + *path);
    }
    return out;
}

inline void require_valid(const RunConfig& cfg) {
    const auto v = validate(cfg);
    if (v.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& s : v) msg += "\n  - " + s;
    throw ConfigError(msg);
}

/// Parses a TOML-style document ([section] headers, key = value). Unknown keys are rejected.
/// Relative file paths are resolved against `base_dir` when given.
inline RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>",
                                   const std::filesystem::path& base_dir = {}) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::set<std::string> seen;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string where = origin + ":" + std::to_string(n);
        const auto s = io::trim(config_detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where + ": malformed section header");
            section = io::trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const auto name = io::trim(s.substr(0, eq));
        const auto key = section.empty() ? name : section + "." + name;
        const auto& table = config_detail::setters();
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError(where + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        auto value = config_detail::parse_value(io::trim(s.substr(eq + 1)), where + ": " + key);
        static const std::set<std::string> path_keys{"rotor.table", "mission.activities", "mission.plan",
                                                     "arm.materials"};
        if (auto* str = std::get_if<std::string>(&value);
            str && !base_dir.empty() && path_keys.contains(key) && *str != "builtin" && !str->empty() &&
            std::filesystem::path(*str).is_relative()) {
            *str = (base_dir / *str).string();
        }
        try {
            it->second(cfg, value, key);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    require_valid(cfg);
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path, std::filesystem::path(path).parent_path());
}

}  // namespace titanmorph

#endif
