#pragma once

#include "qamp/amp_core.hpp"
#include "qamp/errors.hpp"
#include "qamp/field_stats.hpp"
#include "qamp/input_field.hpp"
#include "qamp/lindblad_oracle.hpp"
#include "qamp/noise_kernel.hpp"
#include "qamp/parallel.hpp"
#include "qamp/phase_space.hpp"
#include "qamp/quadrature.hpp"
#include "qamp/rk4.hpp"
#include "qamp/serialize.hpp"
#include "qamp/thermal_track.hpp"
