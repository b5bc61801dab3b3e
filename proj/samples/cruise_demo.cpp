// Calibrates the cruise model to the published rigid/deformable optima and
// prints a Fig. 10 style curve for the deformable vehicle.

#include <cstdio>

#include "titanmorph/titanmorph.hpp"

int main() {
    using namespace titanmorph;
    const auto atm = titan_default();
    VehicleParams base;
    base.rotor_disk_area_total = disk_area(6, 0.22);

    const auto cal = calibrate_parameters(atm, base, as_target(kPublishedRigid), as_target(kPublishedDeformable));
    const auto deform = calibrated_vehicle(base, cal.deformable, kPublishedDeformable.body_drag_coeff);
    const auto sol = optimal_speed(atm, deform);

    std::printf("deformable: S = %.4f m^2, A = %.3f m^2\n", cal.deformable.frontal_area, cal.deformable.disk_area);
    std::printf("optimum %.2f m/s at %.0f W, range %.1f km on 2.5 kWh\n", sol.optimal_speed, sol.power_at_optimum,
                range_km(sol, 2.5));
    for (double v = 2.0; v <= 30.0; v += 2.0) {
        const auto b = total_power(atm, deform, v);
        std::printf("%5.1f m/s  body %7.1f  induced %7.1f  profile %6.1f  total %7.1f W\n", v, b.body_drag_power,
                    b.induced_power, b.profile_power, b.total_power);
    }
}
