#pragma once

// Umbrella header for the ranking library (graph, formats, walks, CycleRank).
// The service headers (orchestrator.hpp, gateway.hpp) and the CLI are
// included separately.

#include "cyclerank/cycles.hpp"
#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/io.hpp"
#include "cyclerank/query.hpp"
#include "cyclerank/rank_walk.hpp"
#include "cyclerank/ranking.hpp"
