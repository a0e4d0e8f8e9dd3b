#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sarsim/engine.hpp"

namespace sar {

// First tick whose coverage reaches the threshold (percent), or absent.
std::optional<int> rise_time(const std::vector<TickStats>& series, double threshold_pct);

inline constexpr double kRiseThresholds[] = {50.0, 70.0, 80.0, 85.0, 90.0};

struct SummaryRow {
    std::string controller;
    std::uint64_t seed = 0;
    double final_coverage_pct = 0.0;
    std::optional<int> rise[5]; // ticks to reach kRiseThresholds
    int victims_found = 0;
    int victims_deceased = 0;
    int conflicts = 0;
    double mean_decision_ms = 0.0;
    double mean_objective_evals = 0.0;
};

SummaryRow summarize(const RunRecord& record);

// Per-controller aggregates over a batch. Variance is the population
// variance, so a single run reports zero.
struct AggregateRow {
    std::string controller;
    int runs = 0;
    double mean_final_coverage_pct = 0.0;
    double mean_rise[5] = {0, 0, 0, 0, 0}; // unreached runs count as steps + 1
    double mean_victims_found = 0.0;
    double var_victims_found = 0.0;
    double mean_victims_deceased = 0.0;
    double var_victims_deceased = 0.0;
    double mean_conflicts = 0.0;
    double mean_decision_ms = 0.0;
    double mean_objective_evals = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<SummaryRow>& rows, int steps);

} // namespace sar
