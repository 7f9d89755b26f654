#pragma once

#include "oracle/flip.hpp"
#include "oracle/gros.hpp"
#include "oracle/harmonic.hpp"
#include "oracle/rational.hpp"
#include "oracle/timeopt_chain.hpp"
