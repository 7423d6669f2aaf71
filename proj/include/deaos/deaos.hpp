#pragma once

// Umbrella header: compositional adaptive operator selection hosted in a
// differential evolution engine, with a self-contained benchmark suite,
// literature presets and an offline racing tuner.

#include "deaos/aos.hpp"
#include "deaos/bench.hpp"
#include "deaos/config.hpp"
#include "deaos/core.hpp"
#include "deaos/de.hpp"
#include "deaos/metrics.hpp"
#include "deaos/policy.hpp"
#include "deaos/postprocess.hpp"
#include "deaos/presets.hpp"
#include "deaos/random.hpp"
#include "deaos/reward.hpp"
#include "deaos/tuner.hpp"
