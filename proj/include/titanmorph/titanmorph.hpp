#ifndef TITANMORPH_TITANMORPH_HPP
#define TITANMORPH_TITANMORPH_HPP

#include "titanmorph/arm_model.hpp"
#include "titanmorph/atmosphere.hpp"
#include "titanmorph/commands.hpp"
#include "titanmorph/config.hpp"
#include "titanmorph/errors.hpp"
#include "titanmorph/flight_power.hpp"
#include "titanmorph/io.hpp"
#include "titanmorph/mission_budget.hpp"
#include "titanmorph/rotor_sizing.hpp"

#endif
