#include "sarsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace sar {

std::optional<int> rise_time(const std::vector<TickStats>& series, double threshold_pct) {
    for (const TickStats& row : series)
        if (row.coverage_pct >= threshold_pct) return row.tick;
    return std::nullopt;
}

SummaryRow summarize(const RunRecord& record) {
    SummaryRow s;
    s.controller = to_string(record.config.controller);
    s.seed = record.config.seed;
    const auto& series = record.series;
    s.final_coverage_pct = series.back().coverage_pct;
    for (std::size_t t = 0; t < 5; ++t) s.rise[t] = rise_time(series, kRiseThresholds[t]);

    s.victims_found = series.back().victims_found;
    s.victims_deceased = series.back().victims_deceased;

    double ms = 0.0, evals = 0.0;
    int decided = 0;
    for (const TickStats& row : series) {
        s.conflicts += row.conflicts;
        if (row.tick == 0) continue; // row 0 has no decision
        ms += row.decision_ms;
        evals += static_cast<double>(row.objective_evals);
        ++decided;
    }
    if (decided > 0) {
        s.mean_decision_ms = ms / decided;
        s.mean_objective_evals = evals / decided;
    }
    return s;
}

std::vector<AggregateRow> aggregate(const std::vector<SummaryRow>& rows, int steps) {
    std::vector<AggregateRow> out;
    auto slot = [&](const std::string& controller) -> AggregateRow& {
        for (AggregateRow& a : out)
            if (a.controller == controller) return a;
        out.push_back(AggregateRow{});
        out.back().controller = controller;
        return out.back();
    };

    for (const SummaryRow& r : rows) {
        AggregateRow& a = slot(r.controller);
        ++a.runs;
        a.mean_final_coverage_pct += r.final_coverage_pct;
        for (std::size_t t = 0; t < 5; ++t)
            a.mean_rise[t] += r.rise[t] ? static_cast<double>(*r.rise[t])
                                        : static_cast<double>(steps + 1);
        a.mean_victims_found += r.victims_found;
        a.mean_victims_deceased += r.victims_deceased;
        a.mean_conflicts += r.conflicts;
        a.mean_decision_ms += r.mean_decision_ms;
        a.mean_objective_evals += r.mean_objective_evals;
    }
    for (AggregateRow& a : out) {
        const double n = a.runs;
        a.mean_final_coverage_pct /= n;
        for (double& m : a.mean_rise) m /= n;
        a.mean_victims_found /= n;
        a.mean_victims_deceased /= n;
        a.mean_conflicts /= n;
        a.mean_decision_ms /= n;
        a.mean_objective_evals /= n;
    }
    // population variance in a second pass over the means
    for (AggregateRow& a : out) {
        double sf = 0.0, sd = 0.0;
        for (const SummaryRow& r : rows) {
            if (r.controller != a.controller) continue;
            sf += (r.victims_found - a.mean_victims_found) *
                  (r.victims_found - a.mean_victims_found);
            sd += (r.victims_deceased - a.mean_victims_deceased) *
                  (r.victims_deceased - a.mean_victims_deceased);
        }
        a.var_victims_found = sf / a.runs;
        a.var_victims_deceased = sd / a.runs;
    }
    return out;
}

} // namespace sar
