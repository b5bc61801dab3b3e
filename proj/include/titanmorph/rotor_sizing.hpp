#ifndef TITANMORPH_ROTOR_SIZING_HPP
#define TITANMORPH_ROTOR_SIZING_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "titanmorph/atmosphere.hpp"
#include "titanmorph/errors.hpp"

namespace titanmorph {

struct RotorDesignPoint {
    double thrust = 0.0;    // N
    int blades = 0;
    double diameter = 0.0;  // m
    double torque = 0.0;    // N m
    double rpm = 0.0;       // rev/min
};

/// Operating point of one candidate rotor. Also the result of a selection.
struct RotorOperatingPoint {
    double diameter = 0.0;
    double blades = 0.0;  // continuous during sweeps
    double rpm = 0.0;
    double torque = 0.0;
    double tip_mach = 0.0;
    double shaft_power = 0.0;  // W
};

using RotorSelection = RotorOperatingPoint;

/// Hand-picked configuration quoted alongside the CFD table: 22 cm, 10 blades,
/// about 3000 rpm and 4.7 N m. Not reproducible from the six published rows.
struct ReferenceRotorPick {
    double diameter = 0.22;
    int blades = 10;
    double rpm = 3000.0;
    double torque = 4.7;
};
inline constexpr ReferenceRotorPick kReferenceRotorPick{};

/// The six published CFD rows (100 N thrust per rotor).
inline std::vector<RotorDesignPoint> builtin_table() {
    return {
        {100.0, 6, 0.15, 3.7, 6080.0},  {100.0, 10, 0.15, 3.9, 4900.0},
        {100.0, 14, 0.15, 4.05, 3950.0}, {100.0, 6, 0.25, 5.6, 3100.0},
        {100.0, 10, 0.25, 5.9, 2550.0},  {100.0, 14, 0.25, 6.3, 1950.0},
    };
}

inline std::vector<std::string> violations(const RotorDesignPoint& p) {
    std::vector<std::string> out;
    if (!(p.thrust > 0.0)) out.emplace_back("thrust must be > 0");
    if (p.blades < 2) out.emplace_back("blades must be >= 2");
    if (!(p.diameter > 0.0)) out.emplace_back("diameter must be > 0");
    if (!(p.torque > 0.0)) out.emplace_back("torque must be > 0");
    if (!(p.rpm > 0.0)) out.emplace_back("rpm must be > 0");
    return out;
}

/// Polynomial response surfaces rpm(d, B) and torque(d, B) over a tensor basis d^i B^j.
class RotorSurfaceFit {
public:
    struct Value {
        double rpm;
        double torque;
    };

    RotorSurfaceFit(std::vector<std::pair<int, int>> exponents, std::vector<double> rpm_coeffs,
                    std::vector<double> torque_coeffs, double d_min, double d_max, double b_min,
                    double b_max)
        : exponents_(std::move(exponents)),
          rpm_coeffs_(std::move(rpm_coeffs)),
          torque_coeffs_(std::move(torque_coeffs)),
          d_min_(d_min), d_max_(d_max), b_min_(b_min), b_max_(b_max) {}

    const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }
    const std::vector<double>& rpm_coeffs() const { return rpm_coeffs_; }
    const std::vector<double>& torque_coeffs() const { return torque_coeffs_; }
    double d_min() const { return d_min_; }
    double d_max() const { return d_max_; }
    double b_min() const { return b_min_; }
    double b_max() const { return b_max_; }

    bool contains(double diameter, double blades) const {
        constexpr double eps = 1e-12;
        return diameter >= d_min_ - eps * std::abs(d_min_) && diameter <= d_max_ + eps * std::abs(d_max_) &&
               blades >= b_min_ - eps * std::abs(b_min_) && blades <= b_max_ + eps * std::abs(b_max_);
    }

    Value evaluate(double diameter, double blades) const {
        if (!contains(diameter, blades)) {
            char buf[192];
            std::snprintf(buf, sizeof buf,
                          "rotor fit: (diameter=%g, blades=%g) outside fitted domain [%g, %g] x [%g, %g]",
                          diameter, blades, d_min_, d_max_, b_min_, b_max_);
            throw DomainError(buf);
        }
        double rpm = 0.0;
        double torque = 0.0;
        for (std::size_t k = 0; k < exponents_.size(); ++k) {
            const double basis = std::pow(diameter, exponents_[k].first) * std::pow(blades, exponents_[k].second);
            rpm += rpm_coeffs_[k] * basis;
            torque += torque_coeffs_[k] * basis;
        }
        return {rpm, torque};
    }

private:
    std::vector<std::pair<int, int>> exponents_;
    std::vector<double> rpm_coeffs_;
    std::vector<double> torque_coeffs_;
    double d_min_, d_max_, b_min_, b_max_;
};

namespace detail {

inline bool same_value(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

inline std::vector<double> distinct_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), same_value), v.end());
    return v;
}

}  // namespace detail

/// Least-squares fit over the full (diameter, blades) grid. Per-variable degree is
/// min(2, distinct levels - 1), so the published 2x3 grid is interpolated exactly
/// with {1, B, B^2, d, dB, dB^2}.
inline RotorSurfaceFit fit_surfaces(std::span<const RotorDesignPoint> points) {
    if (points.empty()) throw InputError("rotor fit: no design points");
    for (const auto& p : points) {
        if (auto v = violations(p); !v.empty()) throw InputError("rotor fit: invalid design point: " + v.front());
    }

    std::vector<double> ds, bs;
    for (const auto& p : points) {
        ds.push_back(p.diameter);
        bs.push_back(static_cast<double>(p.blades));
    }
    ds = detail::distinct_sorted(std::move(ds));
    bs = detail::distinct_sorted(std::move(bs));
    if (ds.size() < 2 || bs.size() < 2) {
        throw InputError("rotor fit: need at least 2 distinct diameters and 2 distinct blade counts");
    }

    for (double d : ds) {
        for (double b : bs) {
            const auto n = std::count_if(points.begin(), points.end(), [&](const RotorDesignPoint& p) {
                return detail::same_value(p.diameter, d) && static_cast<double>(p.blades) == b;
            });
            char buf[128];
            if (n == 0) {
                std::snprintf(buf, sizeof buf, "rotor fit: grid point missing at diameter=%g m, blades=%g", d, b);
                throw InputError(buf);
            }
            if (n > 1) {
                std::snprintf(buf, sizeof buf, "rotor fit: duplicate grid point at diameter=%g m, blades=%g", d, b);
                throw InputError(buf);
            }
        }
    }

    const int deg_d = std::min<int>(2, static_cast<int>(ds.size()) - 1);
    const int deg_b = std::min<int>(2, static_cast<int>(bs.size()) - 1);
    std::vector<std::pair<int, int>> exps;
    for (int i = 0; i <= deg_d; ++i)
        for (int j = 0; j <= deg_b; ++j) exps.emplace_back(i, j);

    const auto rows = static_cast<Eigen::Index>(points.size());
    const auto cols = static_cast<Eigen::Index>(exps.size());
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rpm(rows), torque(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& p = points[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto [i, j] = exps[static_cast<std::size_t>(c)];
            design(r, c) = std::pow(p.diameter, i) * std::pow(static_cast<double>(p.blades), j);
        }
        rpm(r) = p.rpm;
        torque(r) = p.torque;
    }

    const auto qr = design.colPivHouseholderQr();
    const Eigen::VectorXd rpm_c = qr.solve(rpm);
    const Eigen::VectorXd torque_c = qr.solve(torque);

    return RotorSurfaceFit(exps, std::vector<double>(rpm_c.data(), rpm_c.data() + cols),
                           std::vector<double>(torque_c.data(), torque_c.data() + cols), ds.front(), ds.back(),
                           bs.front(), bs.back());
}

inline RotorOperatingPoint operating_point(const RotorSurfaceFit& fit, const AtmosphereModel& atm, double diameter,
                                           double blades) {
    const auto v = fit.evaluate(diameter, blades);
    return RotorOperatingPoint{
        .diameter = diameter,
        .blades = blades,
        .rpm = v.rpm,
        .torque = v.torque,
        .tip_mach = tip_mach(atm, v.rpm, diameter),
        .shaft_power = v.torque * rpm_to_rad_per_s(v.rpm),
    };
}

struct RotorCandidate {
    double diameter;
    double blades;
};

/// Candidates at the (diameter, blades) knots of a design table.
inline std::vector<RotorCandidate> knot_candidates(std::span<const RotorDesignPoint> points) {
    std::vector<RotorCandidate> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.diameter, static_cast<double>(p.blades)});
    return out;
}

/// Regular grid over the fit domain; the upper bounds are always included.
inline std::vector<RotorCandidate> grid_candidates(const RotorSurfaceFit& fit, double diameter_step,
                                                   double blade_step) {
    detail::require(diameter_step > 0.0 && blade_step > 0.0, "rotor grid: steps must be > 0");
    auto levels = [](double lo, double hi, double step) {
        std::vector<double> v;
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long k = 0; k <= n; ++k) v.push_back(lo + static_cast<double>(k) * step);
        if (!detail::same_value(v.back(), hi)) v.push_back(hi);
        v.back() = std::min(v.back(), hi);
        return v;
    };
    std::vector<RotorCandidate> out;
    for (double d : levels(fit.d_min(), fit.d_max(), diameter_step))
        for (double b : levels(fit.b_min(), fit.b_max(), blade_step)) out.push_back({d, b});
    return out;
}

inline std::vector<RotorOperatingPoint> sweep(const RotorSurfaceFit& fit, const AtmosphereModel& atm,
                                              std::span<const RotorCandidate> candidates) {
    std::vector<RotorOperatingPoint> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(operating_point(fit, atm, c.diameter, c.blades));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.diameter, a.blades) < std::tie(b.diameter, b.blades);
    });
    return out;
}

namespace detail {

/// Shaft power rounded to 12 significant digits so fit round-off cannot split ties.
inline double power_key(double watts) {
    if (watts == 0.0 || !std::isfinite(watts)) return watts;
    const double scale = std::pow(10.0, 11 - static_cast<int>(std::floor(std::log10(std::abs(watts)))));
    return std::round(watts * scale) / scale;
}

}  // namespace detail

/// Minimum shaft power among candidates with tip Mach <= critical_mach.
/// Ties (equal to 12 significant digits) go to the smaller diameter, then fewer blades.
inline RotorSelection select_configuration(const RotorSurfaceFit& fit, const AtmosphereModel& atm,
                                           double critical_mach, std::span<const RotorCandidate> candidates) {
    detail::require(critical_mach > 0.0 && critical_mach < 1.0, "rotor select: critical_mach must be in (0, 1)");
    if (candidates.empty()) throw InputError("rotor select: empty candidate set");

    std::optional<RotorSelection> best;
    double min_mach = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const auto op = operating_point(fit, atm, c.diameter, c.blades);
        min_mach = std::min(min_mach, op.tip_mach);
        if (op.tip_mach > critical_mach) continue;
        if (!best || std::tuple(detail::power_key(op.shaft_power), op.diameter, op.blades) <
                         std::tuple(detail::power_key(best->shaft_power), best->diameter, best->blades)) {
            best = op;
        }
    }
    if (!best) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "rotor select: infeasible, no candidate has tip Mach <= %g (minimum found %.6g)",
                      critical_mach, min_mach);
        throw InfeasibleError(buf, min_mach);
    }
    return *best;
}

inline double required_thrust_per_rotor(double mass, const AtmosphereModel& atm, int rotor_count) {
    detail::require(mass > 0.0, "required thrust: mass must be > 0");
    detail::require(rotor_count >= 1, "required thrust: rotor_count must be >= 1");
    return mass * atm.gravity / static_cast<double>(rotor_count);
}

}  // namespace titanmorph

#endif
