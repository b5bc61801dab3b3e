#ifndef TITANMORPH_COMMANDS_HPP
#define TITANMORPH_COMMANDS_HPP

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "titanmorph/arm_model.hpp"
#include "titanmorph/config.hpp"
#include "titanmorph/flight_power.hpp"
#include "titanmorph/io.hpp"
#include "titanmorph/mission_budget.hpp"
#include "titanmorph/rotor_sizing.hpp"

namespace titanmorph::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kInputError = 2 };

enum class Scenario { rigid, deformable, both };

struct CommandOptions {
    Scenario scenario = Scenario::both;
    bool no_timestamp = false;
};

/// Inputs resolved from a RunConfig: tables loaded, calibration solved.
class Context {
public:
    explicit Context(RunConfig cfg) : cfg_(std::move(cfg)) { require_valid(cfg_); }

    const RunConfig& config() const { return cfg_; }

    const std::vector<RotorDesignPoint>& rotor_table() {
        if (!rotor_table_) rotor_table_ = cfg_.rotor.table ? io::read_rotor_table(*cfg_.rotor.table) : builtin_table();
        return *rotor_table_;
    }

    const RotorSurfaceFit& rotor_fit() {
        if (!fit_) fit_ = fit_surfaces(rotor_table());
        return *fit_;
    }

    std::vector<RotorCandidate> selection_candidates() {
        if (cfg_.rotor.select_diameter_step > 0.0)
            return grid_candidates(rotor_fit(), cfg_.rotor.select_diameter_step, cfg_.rotor.select_blade_step);
        return knot_candidates(rotor_table());
    }

    const CalibrationResult& calibration() {
        if (!calibration_) {
            calibration_ = calibrate_parameters(cfg_.atmosphere, cfg_.flight.vehicle, cfg_.flight.rigid,
                                                cfg_.flight.deformable, cfg_.flight.mode);
        }
        return *calibration_;
    }

    VehicleParams vehicle(Scenario s) {
        const auto& cal = calibration();
        return s == Scenario::rigid
                   ? calibrated_vehicle(cfg_.flight.vehicle, cal.rigid, cfg_.flight.rigid.body_drag_coeff)
                   : calibrated_vehicle(cfg_.flight.vehicle, cal.deformable, cfg_.flight.deformable.body_drag_coeff);
    }

    CruiseSolution cruise(Scenario s) {
        return optimal_speed(cfg_.atmosphere, vehicle(s), cfg_.flight.mode, cfg_.flight.v_max, cfg_.flight.tolerance);
    }

    std::vector<Activity> activities() const {
        return cfg_.mission.activities ? io::read_activities(*cfg_.mission.activities) : builtin_activities();
    }

    std::vector<MaterialModel> materials() const {
        return cfg_.arm.materials ? io::read_materials(*cfg_.arm.materials)
                                  : builtin_materials(cfg_.arm.crystallization_multiplier);
    }

    std::filesystem::path output_path(const std::string& name) const {
        std::filesystem::create_directories(cfg_.out_dir);
        return std::filesystem::path(cfg_.out_dir) / name;
    }

private:
    RunConfig cfg_;
    std::optional<std::vector<RotorDesignPoint>> rotor_table_;
    std::optional<RotorSurfaceFit> fit_;
    std::optional<CalibrationResult> calibration_;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot write");
    out << content;
}

inline std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
    return buf;
}

inline const char* scenario_name(Scenario s) { return s == Scenario::rigid ? "rigid" : "deformable"; }

inline std::vector<Scenario> expand(Scenario s) {
    if (s == Scenario::both) return {Scenario::rigid, Scenario::deformable};
    return {s};
}

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

inline int rotor_sweep(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto& c = ctx.config();
    const auto candidates = grid_candidates(ctx.rotor_fit(), c.rotor.sweep_diameter_step, c.rotor.sweep_blade_step);
    const auto rows = sweep(ctx.rotor_fit(), c.atmosphere, candidates);
    std::ostringstream csv;
    io::write_rotor_sweep(csv, rows);
    const auto path = ctx.output_path("rotor_sweep.csv");
    detail::write_file(path, csv.str());
    out << "rotor-sweep: " << rows.size() << " rows -> " << path.string() << '\n';
    return kOk;
}

inline std::string rotor_selection_text(Context& ctx) {
    const auto& c = ctx.config();
    const auto candidates = ctx.selection_candidates();
    const auto sel = select_configuration(ctx.rotor_fit(), c.atmosphere, c.rotor.critical_mach, candidates);
    std::ostringstream os;
    os << "rotor selection (minimum shaft power, tip Mach <= " << io::fmt(c.rotor.critical_mach) << ", "
       << candidates.size() << " candidates)\n";
    os << "  diameter_m     " << io::fmt(sel.diameter) << '\n';
    os << "  blades         " << io::fmt(std::round(sel.blades)) << '\n';
    os << "  rpm            " << io::fmt(sel.rpm) << '\n';
    os << "  torque_nm      " << io::fmt(sel.torque) << '\n';
    os << "  tip_mach       " << io::fmt(sel.tip_mach) << '\n';
    os << "  shaft_power_w  " << io::fmt(sel.shaft_power) << '\n';
    const auto& ref = kReferenceRotorPick;
    if (ctx.rotor_fit().contains(ref.diameter, ref.blades)) {
        const auto at_ref = operating_point(ctx.rotor_fit(), c.atmosphere, ref.diameter, ref.blades);
        os << "reference pick " << io::fmt(ref.diameter) << " m / " << ref.blades << " blades: fitted "
           << io::fmt(at_ref.rpm) << " rpm, " << io::fmt(at_ref.torque) << " N m, tip Mach "
           << io::fmt(at_ref.tip_mach) << " (published: ~" << io::fmt(ref.rpm) << " rpm, " << io::fmt(ref.torque)
           << " N m)\n";
    }
    return os.str();
}

inline int rotor_select(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto text = rotor_selection_text(ctx);
    detail::write_file(ctx.output_path("rotor_select.txt"), text);
    out << text;
    return kOk;
}

inline std::string cruise_text(Context& ctx, Scenario which) {
    const auto& c = ctx.config();
    std::ostringstream os;
    os << "scenario     C_D    v_opt_mps  power_kw  range_km  frontal_area_m2  disk_area_m2\n";
    for (auto s : detail::expand(which)) {
        const auto sol = ctx.cruise(s);
        const auto vp = ctx.vehicle(s);
        char buf[200];
        std::snprintf(buf, sizeof buf, "%-12s %-6s %-10s %-9s %-9s %-16s %s\n", detail::scenario_name(s),
                      io::fmt(vp.body_drag_coeff).c_str(), io::fmt(sol.optimal_speed).c_str(),
                      io::fmt(sol.power_at_optimum / 1000.0).c_str(),
                      io::fmt(range_km(sol, c.battery_capacity_kwh())).c_str(), io::fmt(vp.frontal_area).c_str(),
                      io::fmt(vp.rotor_disk_area_total).c_str());
        os << buf;
    }
    os << "battery " << io::fmt(c.battery_capacity_kwh()) << " kWh\n";
    return os.str();
}

inline int cruise(Context& ctx, const CommandOptions& opt, std::ostream& out) {
    const auto text = cruise_text(ctx, opt.scenario);
    detail::write_file(ctx.output_path("cruise.txt"), text);
    out << text;
    return kOk;
}

inline int power_sweep_cmd(Context& ctx, const CommandOptions& opt, std::ostream& out) {
    const auto& c = ctx.config();
    const Scenario s = opt.scenario == Scenario::both ? Scenario::deformable : opt.scenario;
    const auto rows =
        power_sweep(c.atmosphere, ctx.vehicle(s), c.flight.sweep_min, c.flight.sweep_max, c.flight.sweep_step,
                    c.flight.mode);
    std::ostringstream csv;
    io::write_power_sweep(csv, rows);
    const auto path = ctx.output_path("power_sweep.csv");
    detail::write_file(path, csv.str());
    out << "power-sweep (" << detail::scenario_name(s) << "): " << rows.size() << " rows -> " << path.string()
        << '\n';
    return kOk;
}

inline int range_cmd(Context& ctx, const CommandOptions& opt, std::ostream& out) {
    const double e = ctx.config().battery_capacity_kwh();
    std::ostringstream os;
    for (auto s : detail::expand(opt.scenario)) {
        const auto sol = ctx.cruise(s);
        os << "range " << detail::scenario_name(s) << ": " << io::fmt(range_km(sol, e)) << " km at "
           << io::fmt(sol.optimal_speed) << " m/s, " << io::fmt(sol.power_at_optimum) << " W, battery "
           << io::fmt(e) << " kWh\n";
    }
    detail::write_file(ctx.output_path("range.txt"), os.str());
    out << os.str();
    return kOk;
}

inline std::string budget_text(Context& ctx) {
    const auto& c = ctx.config();
    const auto acts = ctx.activities();
    const auto energy = annual_energy(acts);
    std::ostringstream os;
    os << "activity,power_w,hours_per_year,kwh_per_year\n";
    for (std::size_t i = 0; i < acts.size(); ++i) {
        os << acts[i].name << ',' << io::fmt(acts[i].power) << ','
           << (acts[i].continuous ? std::string("CONT") : io::fmt(acts[i].annual_hours)) << ','
           << io::fmt(energy.items[i].kwh_per_year) << '\n';
    }
    const double source = annual_source_energy(PowerSource{c.mission.mmrtg_w});
    os << "total,,," << io::fmt(energy.total_kwh) << '\n';
    os << "mmrtg," << io::fmt(c.mission.mmrtg_w) << ",8760," << io::fmt(source) << '\n';
    return os.str();
}

inline int budget_annual(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto text = budget_text(ctx);
    detail::write_file(ctx.output_path("budget_annual.csv"), text);
    out << text;
    return kOk;
}

inline int budget_simulate(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto& c = ctx.config();
    if (!c.mission.plan) throw InputError("budget-simulate: no plan file (set mission.plan or pass --plan)");
    const auto plan = io::read_plan(*c.mission.plan, ctx.activities(), c.mission.horizon_h);
    const auto battery = Battery::from_capacity(c.battery_capacity_kwh(), c.mission.specific_energy);
    const auto sim = simulate(plan, PowerSource{c.mission.mmrtg_w}, battery, c.mission.step_h,
                              c.mission.charge_efficiency);
    std::ostringstream csv;
    io::write_trajectory(csv, sim);
    const auto path = ctx.output_path("trajectory.csv");
    detail::write_file(path, csv.str());
    if (!sim.feasible) {
        out << "budget-simulate: infeasible, battery depleted at t = " << io::fmt(*sim.violation_time) << " h -> "
            << path.string() << '\n';
        return kInfeasible;
    }
    out << "budget-simulate: feasible, final SoC " << io::fmt(sim.final_soc) << " kWh of "
        << io::fmt(battery.capacity) << " kWh -> " << path.string() << '\n';
    return kOk;
}

inline int material_sweep(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto& c = ctx.config();
    const auto mats = ctx.materials();
    std::ostringstream csv;
    io::write_row(csv, io::kMaterialSweepHeader);
    const auto n = static_cast<long>(std::floor((c.arm.sweep_temp_max - c.arm.sweep_temp_min) / c.arm.sweep_temp_step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double t = c.arm.sweep_temp_min + static_cast<double>(k) * c.arm.sweep_temp_step;
        for (const auto& m : mats) io::write_row(csv, {io::fmt(t), m.name, io::fmt(stiffness_at(m, t))});
    }
    const auto path = ctx.output_path("material_sweep.csv");
    detail::write_file(path, csv.str());
    out << "material-sweep: " << (n + 1) * static_cast<long>(mats.size()) << " rows -> " << path.string() << '\n';
    return kOk;
}

inline std::string fold_text(const RunConfig& c) {
    const auto r = folded_diameter(c.arm.geometry, c.arm.fold_angle_deg * std::numbers::pi / 180.0);
    std::ostringstream os;
    os << "fold angle " << io::fmt(c.arm.fold_angle_deg) << " deg: extended " << io::fmt(r.extended_diameter)
       << " m, folded " << io::fmt(r.folded_diameter) << " m, reduction " << detail::pct(r.reduction_fraction)
       << " (published: up to 33%)\n";
    return os.str();
}

inline int fold(Context& ctx, const CommandOptions&, std::ostream& out) {
    const auto text = fold_text(ctx.config());
    detail::write_file(ctx.output_path("fold.txt"), text);
    out << text;
    return kOk;
}

/// One-page summary of every analysis, annotated with the published figures.
inline std::string report_text(Context& ctx, bool with_timestamp) {
    const auto& c = ctx.config();
    std::ostringstream os;
    os << "titanmorph design summary\n";
    if (with_timestamp) os << "generated " << detail::timestamp_utc() << '\n';

    os << "\n[rotor]\n";
    os << "thrust per rotor: " << io::fmt(required_thrust_per_rotor(c.flight.vehicle.mass, c.atmosphere,
                                                                    c.flight.vehicle.rotor_count))
       << " N (published: 100 N)\n";
    try {
        os << rotor_selection_text(ctx);
    } catch (const InfeasibleError& e) {
        os << e.what() << '\n';
    }

    os << "\n[cruise]\n" << cruise_text(ctx, Scenario::both);
    const auto rigid = ctx.cruise(Scenario::rigid);
    const auto deform = ctx.cruise(Scenario::deformable);
    os << "published: rigid 10.8 m/s, 2.3 kW, 55 km; deformable 13.9 m/s, 1.67 kW, 74 km\n";
    const double ratio = deform.power_at_optimum / rigid.power_at_optimum;
    os << "power saving at optimum: " << detail::pct(1.0 - ratio)
       << (ratio <= 0.75 ? " (published: up to 28%)" : "") << '\n';

    os << "\n[energy]\n";
    const auto acts = ctx.activities();
    const auto energy = annual_energy(acts);
    const PowerSource source{c.mission.mmrtg_w};
    const auto max_batt = max_battery_from_night(source, c.mission.night_hours, c.mission.specific_energy);
    os << "max night battery: " << io::fmt(max_batt.capacity) << " kWh, " << io::fmt(max_batt.mass)
       << " kg (published: 14 kWh)\n";
    os << "annual demand: " << io::fmt(energy.total_kwh) << " kWh vs MMRTG " << io::fmt(annual_source_energy(source))
       << " kWh at " << io::fmt(c.mission.mmrtg_w) << " W -> "
       << (energy.total_kwh <= annual_source_energy(source) ? "covered" : "deficit") << '\n';

    os << "\n[materials at " << io::fmt(c.arm.verdict_temp_c) << " C, limit " << io::fmt(c.arm.max_multiplier)
       << "x baseline]\n";
    for (const auto& m : ctx.materials()) {
        const double r = stiffness_at(m, c.arm.verdict_temp_c) / m.baseline_stiffness;
        os << m.name << ": " << io::fmt(r) << "x -> "
           << (feasible_at(m, c.arm.verdict_temp_c, c.arm.max_multiplier) ? "feasible" : "infeasible") << '\n';
    }

    os << "\n[folding]\n" << fold_text(c);
    return os.str();
}

inline int report(Context& ctx, const CommandOptions& opt, std::ostream& out) {
    const auto text = report_text(ctx, !opt.no_timestamp);
    detail::write_file(ctx.output_path("report.txt"), text);
    out << text;
    return kOk;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"rotor-sweep", "rotor-select",   "cruise",         "power-sweep",
                                                "range",       "budget-annual", "budget-simulate", "material-sweep",
                                                "fold",        "report"};
    return names;
}

/// Runs one subcommand and maps failures onto the 0/1/2 exit-code contract.
inline int run(const std::string& command, const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
               std::ostream& err) {
    try {
        Context ctx(cfg);
        if (command == "rotor-sweep") return rotor_sweep(ctx, opt, out);
        if (command == "rotor-select") return rotor_select(ctx, opt, out);
        if (command == "cruise") return cruise(ctx, opt, out);
        if (command == "power-sweep") return power_sweep_cmd(ctx, opt, out);
        if (command == "range") return range_cmd(ctx, opt, out);
        if (command == "budget-annual") return budget_annual(ctx, opt, out);
        if (command == "budget-simulate") return budget_simulate(ctx, opt, out);
        if (command == "material-sweep") return material_sweep(ctx, opt, out);
        if (command == "fold") return fold(ctx, opt, out);
        if (command == "report") return report(ctx, opt, out);
        err << "unknown command '" << command << "'\n";
        return kInputError;
    } catch (const InfeasibleError& e) {
        err << command << ": " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        err << command << ": " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace titanmorph::cli

#endif
