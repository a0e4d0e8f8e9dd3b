#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sarsim/metrics.hpp"
#include "sarsim/scenario.hpp"

namespace sar {

struct BatchSpec {
    ScenarioConfig base;
    std::vector<ControllerKind> controllers;
    std::vector<std::uint64_t> seeds;
    int jobs = 0; // 0 = hardware concurrency
};

struct BatchResult {
    std::vector<SummaryRow> rows; // controller-major, then seed order
    std::vector<AggregateRow> aggregates;
};

// Runs every (controller, seed) combination in parallel worker threads.
// Each run is an isolated world, so the result is independent of the
// thread count and scheduling.
BatchResult run_batch(const BatchSpec& spec);

} // namespace sar
