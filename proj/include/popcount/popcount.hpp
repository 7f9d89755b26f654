#pragma once

#include "configuration.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "oracle.hpp"
#include "protocols.hpp"
#include "rng.hpp"
#include "schedulers.hpp"
#include "state.hpp"
#include "acceptance.hpp"
#include "io/csv.hpp"
#include "io/output_row.hpp"
