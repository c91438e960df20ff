#pragma once

// Umbrella header for the three-level Rydberg ladder simulator.

#include "rydsim/analysis.hpp"
#include "rydsim/config.hpp"
#include "rydsim/constants.hpp"
#include "rydsim/doppler.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/experiments.hpp"
#include "rydsim/integrate.hpp"
#include "rydsim/io.hpp"
#include "rydsim/liouville.hpp"
#include "rydsim/optimize.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/trajectory.hpp"
#include "rydsim/types.hpp"
#include "rydsim/units.hpp"
#include "rydsim/version.hpp"
