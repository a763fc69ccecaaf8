#pragma once

#include "octoarm/analysis.hpp"
#include "octoarm/bvp_oracle.hpp"
#include "octoarm/control.hpp"
#include "octoarm/core.hpp"
#include "octoarm/coupling.hpp"
#include "octoarm/diagnostics.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/harness.hpp"
#include "octoarm/neural_cable.hpp"
#include "octoarm/rod_dynamics.hpp"
#include "octoarm/scenario.hpp"
#include "octoarm/sensing.hpp"
#include "octoarm/simulation.hpp"
#include "octoarm/validation.hpp"

namespace octoarm {
inline constexpr const char* kVersion = "0.1.0";
}
