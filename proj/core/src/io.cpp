#include "sarsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sar {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace

std::string tick_csv_text(const RunRecord& record) {
    std::ostringstream out;
    out << "tick,coverage_pct,victims_found,victims_deceased,conflicts,decision_ms,"
           "objective_evals\n";
    for (const TickStats& row : record.series) {
        out << row.tick << ',' << fixed(row.coverage_pct, 6) << ',' << row.victims_found
            << ',' << row.victims_deceased << ',' << row.conflicts << ','
            << fixed(row.decision_ms, 3) << ',' << row.objective_evals << '\n';
    }
    return out.str();
}

void write_tick_csv(const RunRecord& record, const std::string& path) {
    write_text(path, tick_csv_text(record));
}

std::string victim_csv_text(const RunRecord& record) {
    std::ostringstream out;
    out << "victim_id,detect_tick,health_at_detect,visits\n";
    for (const VictimOutcome& v : record.victims) {
        out << v.victim_id << ',';
        if (v.detect_tick)
            out << *v.detect_tick << ',' << fixed(v.health_at_detect, 4);
        else
            out << "-,-";
        out << ',' << v.visits << '\n';
    }
    return out.str();
}

void write_victim_csv(const RunRecord& record, const std::string& path) {
    write_text(path, victim_csv_text(record));
}

std::string run_record_json(const RunRecord& record) {
    using nlohmann::json;
    json j;
    j["config"] = json::parse(scenario_to_json(record.config));

    json series = json::array();
    for (const TickStats& row : record.series)
        series.push_back({{"tick", row.tick},
                          {"coverage_pct", row.coverage_pct},
                          {"victims_found", row.victims_found},
                          {"victims_deceased", row.victims_deceased},
                          {"conflicts", row.conflicts},
                          {"decision_ms", row.decision_ms},
                          {"objective_evals", row.objective_evals}});
    j["series"] = std::move(series);

    json conflicts = json::array();
    for (const ConflictEvent& e : record.conflict_events)
        conflicts.push_back(
            {{"tick", e.tick}, {"robot_a", e.robot_a}, {"robot_b", e.robot_b}, {"overlap", e.overlap}});
    j["conflict_events"] = std::move(conflicts);

    json victims = json::array();
    for (const VictimOutcome& v : record.victims) {
        json e = {{"victim_id", v.victim_id},
                  {"final_health", v.final_health},
                  {"alive_at_end", v.alive_at_end},
                  {"visits", v.visits},
                  {"final_pos", {v.final_pos.x, v.final_pos.y}}};
        if (v.detect_tick) {
            e["detect_tick"] = *v.detect_tick;
            e["health_at_detect"] = v.health_at_detect;
        } else {
            e["detect_tick"] = nullptr;
        }
        victims.push_back(std::move(e));
    }
    j["victims"] = std::move(victims);

    j["final_certainty"] = record.final_certainty;
    j["final_known"] = record.final_known;
    return j.dump(2) + "\n";
}

void write_run_record(const RunRecord& record, const std::string& path) {
    write_text(path, run_record_json(record));
}

namespace {

std::string rise_cell(const std::optional<int>& r) {
    return r ? std::to_string(*r) : "-";
}

} // namespace

std::string batch_csv_text(const std::vector<SummaryRow>& rows,
                           const std::vector<AggregateRow>& aggregates) {
    std::ostringstream out;
    out << "controller,seed,final_coverage_pct,rise_50,rise_70,rise_80,rise_85,rise_90,"
           "victims_found,victims_deceased,conflicts,mean_decision_ms,mean_objective_evals,"
           "var_victims_found,var_victims_deceased\n";
    for (const SummaryRow& r : rows) {
        out << r.controller << ',' << r.seed << ',' << fixed(r.final_coverage_pct, 4);
        for (const auto& rise : r.rise) out << ',' << rise_cell(rise);
        out << ',' << r.victims_found << ',' << r.victims_deceased << ',' << r.conflicts
            << ',' << fixed(r.mean_decision_ms, 3) << ',' << fixed(r.mean_objective_evals, 2)
            << ",,\n";
    }
    for (const AggregateRow& a : aggregates) {
        out << a.controller << ",aggregate," << fixed(a.mean_final_coverage_pct, 4);
        for (const double m : a.mean_rise) out << ',' << fixed(m, 2);
        out << ',' << fixed(a.mean_victims_found, 3) << ',' << fixed(a.mean_victims_deceased, 3)
            << ',' << fixed(a.mean_conflicts, 2) << ',' << fixed(a.mean_decision_ms, 3) << ','
            << fixed(a.mean_objective_evals, 2) << ',' << fixed(a.var_victims_found, 4) << ','
            << fixed(a.var_victims_deceased, 4) << '\n';
    }
    return out.str();
}

void write_batch_csv(const std::vector<SummaryRow>& rows,
                     const std::vector<AggregateRow>& aggregates, const std::string& path) {
    write_text(path, batch_csv_text(rows, aggregates));
}

} // namespace sar
