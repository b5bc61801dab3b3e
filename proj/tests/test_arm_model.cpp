#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "titanmorph/arm_model.hpp"

using namespace titanmorph;

namespace {

const MaterialModel& find(const std::vector<MaterialModel>& mats, const std::string& name) {
    for (const auto& m : mats)
        if (m.name == name) return m;
    throw std::runtime_error("missing material " + name);
}

}  // namespace

TEST(Materials, Builtins) {
    const auto mats = builtin_materials();
    ASSERT_EQ(mats.size(), 5u);
    EXPECT_EQ(*find(mats, "TPU@10").crystallization_temp, -120.0);
    EXPECT_EQ(*find(mats, "silicone").crystallization_temp, -96.0);
    EXPECT_FALSE(find(mats, "PTFE@15").crystallization_temp.has_value());
    EXPECT_EQ(find(mats, "PTFE@15").linear_drift_fraction, 0.15);
    EXPECT_EQ(find(mats, "PTFE@30").linear_drift_fraction, 0.15);
    for (const auto& m : mats) EXPECT_TRUE(m.violations().empty()) << m.name;
}

TEST(Stiffness, PtfeDrift) {
    const auto& ptfe = find(builtin_materials(), "PTFE@15");
    EXPECT_EQ(stiffness_at(ptfe, 20.0), ptfe.baseline_stiffness);
    EXPECT_NEAR(stiffness_at(ptfe, -180.0) / ptfe.baseline_stiffness, 1.15, 1e-9);
}

TEST(Stiffness, TpuCrystallizes) {
    const auto& tpu = find(builtin_materials(), "TPU@10");
    EXPECT_GE(stiffness_at(tpu, -150.0), tpu.post_crystallization_multiplier * tpu.baseline_stiffness);
    EXPECT_GT(stiffness_at(tpu, -150.0), stiffness_at(tpu, -100.0));
    // Band center is the midpoint of the jump.
    const double drift = 1.0 + 0.10 * (20.0 + 120.0) / 200.0;
    EXPECT_NEAR(stiffness_at(tpu, -120.0), tpu.baseline_stiffness * drift * (1.0 + 9.0 * 0.5), 1e-12);
}

TEST(Stiffness, RangeChecked) {
    const auto& tpu = find(builtin_materials(), "TPU@10");
    EXPECT_THROW(stiffness_at(tpu, -200.0), DomainError);
    EXPECT_THROW(stiffness_at(tpu, 30.0), DomainError);
    EXPECT_NO_THROW(stiffness_at(tpu, -196.0));
    EXPECT_NO_THROW(stiffness_at(tpu, 25.0));
}

TEST(Stiffness, ContinuousAndNonIncreasingInTemperature) {
    for (const auto& m : builtin_materials()) {
        double prev = stiffness_at(m, -196.0);
        for (double t = -196.0 + 0.05; t <= 25.0; t += 0.05) {
            const double k = stiffness_at(m, t);
            EXPECT_LE(k, prev + 1e-12) << m.name << " at " << t;
            // Max smoothstep slope is 1.5 / band, so a 0.05 C move changes k by well under 2%.
            EXPECT_LT(std::abs(k - prev), 0.02 * m.post_crystallization_multiplier * m.baseline_stiffness)
                << m.name << " at " << t;
            prev = k;
        }
    }
}

TEST(TendonMoment, Linear) {
    const auto& ptfe = find(builtin_materials(), "PTFE@15");
    EXPECT_EQ(tendon_moment(ptfe, -50.0, 0.0), 0.0);
    for (int i = 0; i < 50; ++i) {
        const double k = test::uniform(0.01, 5.0), t = test::uniform(-190.0, 20.0);
        EXPECT_DOUBLE_EQ(tendon_moment(ptfe, t, 2.0 * k), 2.0 * tendon_moment(ptfe, t, k));
        EXPECT_NEAR(tendon_moment(ptfe, -180.0, k) / tendon_moment(ptfe, 20.0, k), 1.15, 1e-12);
    }
    EXPECT_THROW(tendon_moment(ptfe, 0.0, -1.0), DomainError);
}

TEST(Feasibility, Verdicts) {
    const auto mats = builtin_materials();
    EXPECT_TRUE(feasible_at(find(mats, "PTFE@15"), -180.0));
    EXPECT_TRUE(feasible_at(find(mats, "PTFE@30"), -180.0));
    EXPECT_FALSE(feasible_at(find(mats, "TPU@10"), -180.0));
    EXPECT_FALSE(feasible_at(find(mats, "silicone"), -180.0));
    EXPECT_TRUE(feasible_at(find(mats, "silicone"), -90.0));
    EXPECT_FALSE(feasible_at(find(mats, "PTFE@15"), -180.0, 1.1));
}

TEST(Materials, PressureScaleAndUnits) {
    const auto scaled = with_pressure_scale(find(builtin_materials(), "PTFE@15"), 2.0);
    EXPECT_DOUBLE_EQ(scaled.baseline_stiffness, 4.0);
    EXPECT_NEAR(kgcm_per_invcm_to_si(1.0), 9.80665e-4, 1e-18);
    EXPECT_THROW(with_pressure_scale(scaled, 0.0), DomainError);
}

TEST(ArmKinematics, ClosedForms) {
    const ArmGeometry g{.length = 0.8, .segments = 4, .body_radius = 0.5};
    const auto straight = arm_tip_position(g, 0.0);
    EXPECT_EQ(straight.x, 0.0);
    EXPECT_EQ(straight.z, 0.8);
    const double kappa = std::numbers::pi / g.length;
    const auto half = arm_tip_position(g, kappa);
    EXPECT_NEAR(half.x, 2.0 / kappa, 1e-12);
    EXPECT_NEAR(half.z, 0.0, 1e-12);
    // Near zero the lateral offset is kappa L^2 / 2 to first order.
    const auto tiny = arm_tip_position(g, 1e-8);
    EXPECT_NEAR(tiny.x, 1e-8 * 0.64 / 2.0, 1e-18);
    EXPECT_NEAR(tiny.z, 0.8, 1e-15);
    const ArmGeometry short_arm{.length = 0.4, .segments = 4, .body_radius = 0.5};
    const auto near_straight = arm_tip_position(short_arm, 1e-8);
    EXPECT_NEAR(near_straight.x, 0.0, 1e-9);
    EXPECT_NEAR(near_straight.z, 0.4, 1e-9);
    EXPECT_THROW(arm_tip_position(g, 2.0 * std::numbers::pi / g.length), DomainError);
}

TEST(ArmKinematics, SeriesBranchMatchesClosedFormAtSwitchover) {
    for (double l : {0.1, 0.5, 1.0, 3.0}) {
        const ArmGeometry g{.length = l, .segments = 1, .body_radius = 1.0};
        const double kappa_in = 0.999e-6 / l, kappa_out = 1.001e-6 / l;
        const auto a = arm_tip_position(g, kappa_in);
        const auto b = arm_tip_position(g, kappa_out);
        EXPECT_NEAR(a.x, b.x, 1e-14 * l + (kappa_out - kappa_in) * l * l);
        EXPECT_NEAR(a.z, b.z, 1e-14 * l);
    }
}

TEST(ArmKinematics, ChordNeverExceedsArcLength) {
    for (int i = 0; i < 1000; ++i) {
        const ArmGeometry g{.length = test::uniform(0.01, 3.0), .segments = 1, .body_radius = 1.0};
        const double kappa = test::uniform(-0.999, 0.999) * 2.0 * std::numbers::pi / g.length;
        const auto tip = arm_tip_position(g, kappa);
        EXPECT_LT(std::hypot(tip.x, tip.z), g.length);
    }
}

TEST(Folding, Geometry) {
    const ArmGeometry g{.length = 0.49, .segments = 1, .body_radius = 1.0};
    EXPECT_EQ(folded_diameter(g, 0.0).reduction_fraction, 0.0);
    const auto full = folded_diameter(g, std::numbers::pi / 2.0);
    EXPECT_NEAR(full.reduction_fraction, 0.49 / 1.49, 1e-12);
    EXPECT_NEAR(full.reduction_fraction, 0.329, 5e-4);
    EXPECT_DOUBLE_EQ(full.extended_diameter, 2.98);
    EXPECT_THROW(folded_diameter(g, 2.0), DomainError);
}

TEST(Folding, MonotoneAndBounded) {
    for (int i = 0; i < 100; ++i) {
        const ArmGeometry g{.length = test::uniform(0.05, 2.0), .segments = 1, .body_radius = test::uniform(0.1, 2.0)};
        const double bound = g.length / (g.body_radius + g.length);
        double prev = -1.0;
        for (double a = 0.0; a <= std::numbers::pi / 2.0; a += 0.01) {
            const double r = folded_diameter(g, a).reduction_fraction;
            EXPECT_GE(r, prev);
            EXPECT_LE(r, bound + 1e-15);
            prev = r;
        }
    }
}
