#pragma once

#include "metarole/beliefs.hpp"
#include "metarole/config_file.hpp"
#include "metarole/demography.hpp"
#include "metarole/engine.hpp"
#include "metarole/experiment.hpp"
#include "metarole/network.hpp"
#include "metarole/rng.hpp"
#include "metarole/state.hpp"
#include "metarole/types.hpp"
