#pragma once

#include "v2i/coefficients.hpp"
#include "v2i/experiments.hpp"
#include "v2i/fading_sim.hpp"
#include "v2i/flow_optimizer.hpp"
#include "v2i/geometry.hpp"
#include "v2i/philox.hpp"
#include "v2i/quadrature.hpp"
#include "v2i/rates.hpp"
#include "v2i/scenario.hpp"
#include "v2i/sinr_distribution.hpp"
#include "v2i/special_functions.hpp"
#include "v2i/validation.hpp"
