#pragma once

// Umbrella header.

#include "benchmarks.hpp"
#include "core.hpp"
#include "experiments.hpp"
#include "invariants.hpp"
#include "nsga2.hpp"
#include "oracle.hpp"
#include "stats.hpp"
