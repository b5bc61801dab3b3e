#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "titanmorph/config.hpp"
#include "titanmorph/io.hpp"

using namespace titanmorph;
namespace fs = std::filesystem;

namespace {

std::string samples_dir() {
    const char* env = std::getenv("TITANMORPH_SAMPLES");
    return env ? env : "../samples";
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const auto dir = fs::temp_directory_path() / "titanmorph_tests";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
    const auto cfg = parse_config_text("");
    EXPECT_DOUBLE_EQ(cfg.atmosphere.density, titan_default().density);
    EXPECT_DOUBLE_EQ(cfg.atmosphere.gravity, 1.35);
    EXPECT_FALSE(cfg.rotor.table.has_value());
    EXPECT_FALSE(cfg.mission.activities.has_value());
    EXPECT_DOUBLE_EQ(cfg.battery_capacity_kwh(), 2.5);
    EXPECT_DOUBLE_EQ(cfg.rotor.critical_mach, 0.3);
    EXPECT_NEAR(cfg.flight.vehicle.rotor_disk_area_total, 0.22807963, 1e-8);
}

TEST(Config, ParsesSectionsAndComments) {
    const auto cfg = parse_config_text(R"(
# comment
[atmosphere]
gravity = 1.4   # inline comment
[flight]
induced_mode = "as_printed"
rotor_count = 4
[mission]
battery = "max"
[output]
dir = "results # not a comment"
)");
    EXPECT_DOUBLE_EQ(cfg.atmosphere.gravity, 1.4);
    EXPECT_EQ(cfg.flight.mode, InducedMode::as_printed);
    EXPECT_EQ(cfg.flight.vehicle.rotor_count, 4);
    EXPECT_NEAR(cfg.battery_capacity_kwh(), 14.4, 1e-12);
    EXPECT_EQ(cfg.out_dir, "results # not a comment");
}

TEST(Config, NegativeGravityNamesKey) {
    try {
        parse_config_text("[atmosphere]\ngravity = -1\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("gravity"), std::string::npos);
    }
}

TEST(Config, AllViolationsReportedTogether) {
    try {
        parse_config_text("[atmosphere]\ngravity = -1\ndensity = 0\n[rotor]\ncritical_mach = 2\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("gravity"), std::string::npos);
        EXPECT_NE(msg.find("density"), std::string::npos);
        EXPECT_NE(msg.find("critical_mach"), std::string::npos);
    }
}

TEST(Config, StrictErrorsCarryLineAndKey) {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_config_text(text, "cfg");
            ADD_FAILURE() << "no error for: " << text;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_error("[atmosphere]\ngravty = 1.3\n", "cfg:2: unknown key 'atmosphere.gravty'");
    expect_error("[atmosphere]\ngravity = 1.3\ngravity = 1.4\n", "duplicate key");
    expect_error("[atmosphere]\ngravity = \"high\"\n", "wrong type");
    expect_error("[atmosphere\n", "malformed section");
    expect_error("gravity\n", "expected key = value");
    expect_error("[flight]\nrotor_count = 2.5\n", "integer");
    expect_error("[mission]\nbattery = \"huge\"\n", "battery");
    expect_error("[rotor]\ntable = \"/nonexistent/table.csv\"\n", "file not found");
}

TEST(Config, BatteryOverrideSelectsCustom) {
    auto cfg = parse_config_text("[mission]\nbattery_kwh = 14\n");
    EXPECT_DOUBLE_EQ(cfg.battery_capacity_kwh(), 14.0);
    apply_override(cfg, "mission.battery=\"small\"");
    EXPECT_DOUBLE_EQ(cfg.battery_capacity_kwh(), 2.5);
    EXPECT_THROW(apply_override(cfg, "mission.nope=1"), ConfigError);
    EXPECT_THROW(apply_override(cfg, "mission.step_h"), ConfigError);
    apply_override(cfg, "mission.battery=max");
    EXPECT_NEAR(cfg.battery_capacity_kwh(), 14.4, 1e-12);
    EXPECT_THROW(apply_override(cfg, "mission.step_h=fast"), ConfigError);
    EXPECT_THROW(apply_override(cfg, "mission.battery=huge"), ConfigError);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
    const auto cfg = parse_config(samples_dir() + "/titan.toml");
    ASSERT_TRUE(cfg.mission.plan.has_value());
    EXPECT_TRUE(fs::exists(*cfg.mission.plan));
    EXPECT_DOUBLE_EQ(*cfg.mission.horizon_h, 384.0);
}

TEST(Io, NumberFormatting) {
    EXPECT_EQ(io::fmt(3255.0), "3255");
    EXPECT_EQ(io::fmt(0.1234567), "0.123457");
    EXPECT_EQ(io::fmt(-0.0), "0");
    EXPECT_EQ(io::fmt(1234567.0), "1.23457e+06");
}

TEST(Io, ParseDouble) {
    EXPECT_EQ(io::parse_double(" 1.5 "), 1.5);
    EXPECT_EQ(io::parse_double("+2"), 2.0);
    EXPECT_FALSE(io::parse_double("1.5x").has_value());
    EXPECT_FALSE(io::parse_double("").has_value());
}

TEST(Io, RotorTableMatchesBuiltin) {
    const auto t = io::read_rotor_table(samples_dir() + "/rotor_table.csv");
    const auto b = builtin_table();
    ASSERT_EQ(t.size(), b.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t[i].blades, b[i].blades);
        EXPECT_EQ(t[i].diameter, b[i].diameter);
        EXPECT_EQ(t[i].torque, b[i].torque);
        EXPECT_EQ(t[i].rpm, b[i].rpm);
    }
}

TEST(Io, RotorTableErrors) {
    EXPECT_THROW(io::read_rotor_table(write_temp("bad_header.csv", "thrust,blades\n1,2\n").string()), InputError);
    EXPECT_THROW(io::read_rotor_table(
                     write_temp("bad_blades.csv", "thrust_n,blades,diameter_m,torque_nm,rpm\n100,6.5,0.1,1,1\n").string()),
                 InputError);
    EXPECT_THROW(io::read_rotor_table(
                     write_temp("bad_num.csv", "thrust_n,blades,diameter_m,torque_nm,rpm\n100,6,abc,1,1\n").string()),
                 InputError);
    EXPECT_THROW(io::read_rotor_table("/nonexistent.csv"), InputError);
}

TEST(Io, ActivitiesAndPlan) {
    const auto acts = io::read_activities(samples_dir() + "/activities.csv");
    ASSERT_EQ(acts.size(), 6u);
    EXPECT_TRUE(acts.back().continuous);
    EXPECT_NEAR(annual_energy(acts).total_kwh, 518.2, 1e-9);

    const auto plan = io::read_plan(samples_dir() + "/plan.csv", acts, 384.0);
    EXPECT_EQ(plan.entries.size(), 5u);
    EXPECT_DOUBLE_EQ(plan.residual_load, 30.0);
    EXPECT_DOUBLE_EQ(plan.entries.front().power, 1600.0);

    const auto unknown = write_temp("plan_unknown.csv", "start_h,duration_h,activity_name\n0,1,Dancing\n");
    EXPECT_THROW(io::read_plan(unknown.string(), acts), InputError);
    const auto cont = write_temp("plan_cont.csv", "start_h,duration_h,activity_name\n0,1,Residual Consumption\n");
    EXPECT_THROW(io::read_plan(cont.string(), acts), InputError);
}

TEST(Io, Materials) {
    const auto mats = io::read_materials(samples_dir() + "/materials.csv");
    ASSERT_EQ(mats.size(), 3u);
    EXPECT_EQ(*mats[0].crystallization_temp, -120.0);
    EXPECT_FALSE(mats[1].crystallization_temp.has_value());
    const auto bad = write_temp("mats_bad.csv",
                                "name,baseline_kgcm_per_invcm,crystallization_c_or_NONE,multiplier,drift_fraction,infill\n"
                                "x,1,NONE,0.5,0,1\n");
    EXPECT_THROW(io::read_materials(bad.string()), InputError);
}
