#ifndef TITANMORPH_IO_HPP
#define TITANMORPH_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "titanmorph/arm_model.hpp"
#include "titanmorph/errors.hpp"
#include "titanmorph/flight_power.hpp"
#include "titanmorph/mission_budget.hpp"
#include "titanmorph/rotor_sizing.hpp"

namespace titanmorph::io {

/// Six significant digits, the fixed numeric format of every CSV column.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

/// Reads a CSV with the exact expected header. Blank lines and '#' comments are skipped.
inline CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open");
    CsvTable t;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto cells = split_csv_line(s);
        if (t.header.empty()) {
            if (cells != expected_header) {
                std::string want;
                for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
                throw InputError(path + ":" + std::to_string(n) + ": expected header '" + want + "'");
            }
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != expected_header.size()) {
            throw InputError(path + ":" + std::to_string(n) + ": expected " + std::to_string(expected_header.size()) +
                             " columns, got " + std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(n);
    }
    if (t.header.empty()) throw InputError(path + ": missing header row");
    return t;
}

namespace detail {

inline double number_cell(const std::string& path, const CsvTable& t, std::size_t row, std::size_t col) {
    const auto v = parse_double(t.rows[row][col]);
    if (!v) {
        throw InputError(path + ":" + std::to_string(t.line_numbers[row]) + ": column '" + t.header[col] +
                         "' is not a number: '" + t.rows[row][col] + "'");
    }
    return *v;
}

}  // namespace detail

inline const std::vector<std::string> kRotorTableHeader{"thrust_n", "blades", "diameter_m", "torque_nm", "rpm"};
inline const std::vector<std::string> kRotorSweepHeader{"diameter_m", "blades",  "rpm",
                                                        "torque_nm",  "tip_mach", "shaft_power_w"};
inline const std::vector<std::string> kPowerSweepHeader{"speed_mps", "p_body_w", "p_induced_w", "p_profile_w",
                                                        "p_total_w"};
inline const std::vector<std::string> kPlanHeader{"start_h", "duration_h", "activity_name"};
inline const std::vector<std::string> kActivitiesHeader{"name", "power_w", "annual_hours_or_CONT"};
inline const std::vector<std::string> kTrajectoryHeader{"time_h", "soc_kwh", "load_w", "verdict"};
inline const std::vector<std::string> kMaterialsHeader{"name",       "baseline_kgcm_per_invcm",
                                                       "crystallization_c_or_NONE", "multiplier",
                                                       "drift_fraction", "infill"};
inline const std::vector<std::string> kMaterialSweepHeader{"temp_c", "material", "stiffness"};

inline std::vector<RotorDesignPoint> read_rotor_table(const std::string& path) {
    const auto t = read_csv(path, kRotorTableHeader);
    std::vector<RotorDesignPoint> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double blades = detail::number_cell(path, t, r, 1);
        if (blades != std::floor(blades)) {
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) + ": blades must be an integer");
        }
        RotorDesignPoint p{detail::number_cell(path, t, r, 0), static_cast<int>(blades),
                           detail::number_cell(path, t, r, 2), detail::number_cell(path, t, r, 3),
                           detail::number_cell(path, t, r, 4)};
        if (auto v = violations(p); !v.empty()) {
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) + ": " + v.front());
        }
        out.push_back(p);
    }
    return out;
}

inline std::vector<Activity> read_activities(const std::string& path) {
    const auto t = read_csv(path, kActivitiesHeader);
    std::vector<Activity> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        Activity a;
        a.name = t.rows[r][0];
        a.power = detail::number_cell(path, t, r, 1);
        if (t.rows[r][2] == "CONT") {
            a.continuous = true;
        } else {
            a.annual_hours = detail::number_cell(path, t, r, 2);
        }
        if (a.name.empty() || a.power < 0.0 || a.annual_hours < 0.0) {
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) + ": invalid activity");
        }
        out.push_back(std::move(a));
    }
    return out;
}

/// Plan entries resolve their power by activity name. Continuous activities
/// become the plan's residual load and cannot be scheduled.
inline MissionPlan read_plan(const std::string& path, const std::vector<Activity>& activities,
                             std::optional<double> horizon = std::nullopt) {
    const auto t = read_csv(path, kPlanHeader);
    std::map<std::string, const Activity*> by_name;
    double residual = 0.0;
    for (const auto& a : activities) {
        by_name[a.name] = &a;
        if (a.continuous) residual += a.power;
    }
    std::vector<PlanEntry> entries;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& name = t.rows[r][2];
        const auto it = by_name.find(name);
        const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        if (it == by_name.end()) throw InputError(where + ": unknown activity '" + name + "'");
        if (it->second->continuous) throw InputError(where + ": continuous activity '" + name + "' cannot be scheduled");
        entries.push_back({detail::number_cell(path, t, r, 0), detail::number_cell(path, t, r, 1), name,
                           it->second->power});
    }
    return make_plan(std::move(entries), residual, horizon);
}

inline std::vector<MaterialModel> read_materials(const std::string& path) {
    const auto t = read_csv(path, kMaterialsHeader);
    std::vector<MaterialModel> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        MaterialModel m;
        m.name = t.rows[r][0];
        m.baseline_stiffness = detail::number_cell(path, t, r, 1);
        if (t.rows[r][2] != "NONE") m.crystallization_temp = detail::number_cell(path, t, r, 2);
        m.post_crystallization_multiplier = detail::number_cell(path, t, r, 3);
        m.linear_drift_fraction = detail::number_cell(path, t, r, 4);
        m.infill_fraction = detail::number_cell(path, t, r, 5);
        if (auto v = m.violations(); !v.empty()) {
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) + ": " + v.front());
        }
        out.push_back(std::move(m));
    }
    return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
}

inline void write_rotor_sweep(std::ostream& os, const std::vector<RotorOperatingPoint>& rows) {
    write_row(os, kRotorSweepHeader);
    for (const auto& r : rows) {
        write_row(os, {fmt(r.diameter), fmt(r.blades), fmt(r.rpm), fmt(r.torque), fmt(r.tip_mach),
                       fmt(r.shaft_power)});
    }
}

inline void write_power_sweep(std::ostream& os, std::vector<PowerBreakdown> rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.speed < b.speed; });
    write_row(os, kPowerSweepHeader);
    for (const auto& r : rows) {
        write_row(os, {fmt(r.speed), fmt(r.body_drag_power), fmt(r.induced_power), fmt(r.profile_power),
                       fmt(r.total_power)});
    }
}

inline void write_trajectory(std::ostream& os, const SimulationResult& sim) {
    write_row(os, kTrajectoryHeader);
    for (const auto& p : sim.trajectory) {
        write_row(os, {fmt(p.time), fmt(p.soc), fmt(p.load), p.feasible ? "ok" : "infeasible"});
    }
}

}  // namespace titanmorph::io

#endif
