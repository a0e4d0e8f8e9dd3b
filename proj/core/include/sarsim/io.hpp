#pragma once

#include <string>
#include <vector>

#include "sarsim/engine.hpp"
#include "sarsim/metrics.hpp"

namespace sar {

// Per-tick series:
// tick,coverage_pct,victims_found,victims_deceased,conflicts,decision_ms,objective_evals
void write_tick_csv(const RunRecord& record, const std::string& path);
std::string tick_csv_text(const RunRecord& record);

// Per-victim outcomes: victim_id,detect_tick,health_at_detect,visits
// ("-" for the undetected).
void write_victim_csv(const RunRecord& record, const std::string& path);
std::string victim_csv_text(const RunRecord& record);

// Full structured record: config echo, series, conflict events, victim
// outcomes, final maps as row-major grids.
void write_run_record(const RunRecord& record, const std::string& path);
std::string run_record_json(const RunRecord& record);

// Batch summary: one row per run, then one aggregate row per controller
// (seed column reads "aggregate").
void write_batch_csv(const std::vector<SummaryRow>& rows,
                     const std::vector<AggregateRow>& aggregates,
                     const std::string& path);
std::string batch_csv_text(const std::vector<SummaryRow>& rows,
                           const std::vector<AggregateRow>& aggregates);

} // namespace sar
