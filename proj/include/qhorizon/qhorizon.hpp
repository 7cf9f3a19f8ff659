#pragma once

// Umbrella header: coherence, entanglement and mutual-information measures
// for a GHZ-type Dirac-field state shared across a Schwarzschild event
// horizon, with parameter-sweep tooling.

#include "qhorizon/horizon.hpp"
#include "qhorizon/linalg.hpp"
#include "qhorizon/measures.hpp"
#include "qhorizon/sweep.hpp"
