#pragma once

#include "experiments/allflip.hpp"
#include "experiments/batch.hpp"
#include "experiments/invariants.hpp"
#include "experiments/stats.hpp"
#include "experiments/weak_sweep.hpp"
