// Batch front end: `titanmorph <command> [--config file] [--out dir] [options]`.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "titanmorph/commands.hpp"
#include "titanmorph/config.hpp"

namespace tmc = titanmorph;

int main(int argc, char** argv) {
    CLI::App app{"Titan soft-morphing rotorcraft design calculations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    bool no_timestamp = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "TOML-style configuration file")->check(CLI::ExistingFile);
    app.add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp from reports");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", overrides, "Override a config key, e.g. --set flight.mass_kg=400");

    std::string scenario = "both";
    const std::map<std::string, tmc::cli::Scenario> scenarios{{"rigid", tmc::cli::Scenario::rigid},
                                                             {"deformable", tmc::cli::Scenario::deformable},
                                                             {"both", tmc::cli::Scenario::both}};
    std::optional<double> critical_mach;
    std::optional<double> battery_kwh;
    std::optional<double> fold_angle;
    std::optional<double> step_h;
    std::string plan;

    std::map<std::string, CLI::App*> subs;
    for (const auto& name : tmc::cli::command_names()) subs[name] = app.add_subcommand(name);
    subs["rotor-sweep"]->description("Fitted rpm/torque/tip-Mach over the diameter x blades domain (CSV)");
    subs["rotor-select"]->description("Minimum shaft-power rotor under the tip-Mach cap");
    subs["rotor-select"]->add_option("--critical-mach", critical_mach, "Tip Mach cap");
    subs["cruise"]->description("Optimal cruise speed, power and range per scenario");
    subs["power-sweep"]->description("Power breakdown over the speed grid (CSV)");
    subs["range"]->description("Range at the optimal cruise speed");
    subs["range"]->add_option("--battery-kwh", battery_kwh, "Battery capacity");
    subs["budget-annual"]->description("Annual activity energy vs MMRTG output");
    subs["budget-simulate"]->description("State-of-charge timeline for a mission plan (CSV)");
    subs["budget-simulate"]->add_option("--plan", plan, "Plan CSV (start_h,duration_h,activity_name)");
    subs["budget-simulate"]->add_option("--step", step_h, "Reporting step in hours");
    subs["material-sweep"]->description("Arm bending stiffness vs temperature (CSV)");
    subs["fold"]->description("Aeroshell diameter reduction from folding the arms");
    subs["fold"]->add_option("--fold-angle", fold_angle, "Fold angle in degrees");
    subs["report"]->description("Consolidated plain-text summary");
    for (const auto* name : {"cruise", "power-sweep", "range"}) {
        subs[name]->add_option("--scenario", scenario, "rigid, deformable or both")
            ->check(CLI::IsMember({"rigid", "deformable", "both"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : tmc::cli::kInputError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    tmc::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = tmc::parse_config(config_path);
        for (const auto& o : overrides) tmc::apply_override(cfg, o);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (critical_mach) cfg.rotor.critical_mach = *critical_mach;
        if (battery_kwh) {
            cfg.mission.battery = tmc::BatteryPreset::custom;
            cfg.mission.battery_kwh = *battery_kwh;
        }
        if (fold_angle) cfg.arm.fold_angle_deg = *fold_angle;
        if (step_h) cfg.mission.step_h = *step_h;
        if (!plan.empty()) cfg.mission.plan = plan;
        tmc::require_valid(cfg);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return tmc::cli::kInputError;
    }

    tmc::cli::CommandOptions opt;
    opt.scenario = scenarios.at(scenario);
    opt.no_timestamp = no_timestamp;
    return tmc::cli::run(command, cfg, opt, std::cout, std::cerr);
}
