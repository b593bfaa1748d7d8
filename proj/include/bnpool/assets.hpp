#pragma once

#include "bnpool/network.hpp"

namespace bnpool::assets {

// The 8-node chest-clinic benchmark network with its standard tables.
BayesNet asia();

// Asia extended for two patient subpopulations: a "source" variable (states
// sf, cinci) is a parent of the two root nodes. The source CPDs and the
// modified root CPDs are this project's configuration, not canonical values.
BayesNet extended_asia();

// Name of the subpopulation variable in extended_asia().
inline constexpr const char* kSourceVariableName = "source";

// The 37-node intensive-care monitoring benchmark. The structure and state
// spaces are canonical; the parameterization is an approximate stand-in for
// the published tables (several large CPTs are filled by plausible rules).
// Shipped for scale experiments only.
BayesNet alarm();

} // namespace bnpool::assets
