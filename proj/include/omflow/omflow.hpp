#pragma once

// =============================================================================
// omflow - thermal noise flow in linearized optomechanical networks
// =============================================================================
// Convenience umbrella: pulls in the whole library.
// =============================================================================

#include "omflow/chain.hpp"
#include "omflow/conditions.hpp"
#include "omflow/config.hpp"
#include "omflow/constants.hpp"
#include "omflow/csv.hpp"
#include "omflow/dynamics.hpp"
#include "omflow/errors.hpp"
#include "omflow/grid.hpp"
#include "omflow/lyapunov.hpp"
#include "omflow/model.hpp"
#include "omflow/presets.hpp"
#include "omflow/quadrature.hpp"
#include "omflow/selectors.hpp"
#include "omflow/spectral.hpp"
#include "omflow/steady.hpp"
#include "omflow/sweep.hpp"
