#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sarsim/batch.hpp"
#include "sarsim/engine.hpp"
#include "sarsim/io.hpp"
#include "sarsim/metrics.hpp"
#include "sarsim/scenario.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const std::uint64_t lo = std::stoull(text.substr(0, range));
        const std::uint64_t hi = std::stoull(text.substr(range + 2));
        if (hi < lo) throw sar::ConfigError("seeds: range end before start");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (seeds.empty()) throw sar::ConfigError("seeds: empty list");
    return seeds;
}

std::vector<sar::ControllerKind> parse_controllers(const std::string& text) {
    std::vector<sar::ControllerKind> kinds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) kinds.push_back(sar::controller_from_name(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (kinds.empty()) throw sar::ConfigError("controllers: empty list");
    return kinds;
}

std::string run_stem(const sar::ScenarioConfig& cfg) {
    return cfg.name + "_" + sar::to_string(cfg.controller) + "_seed" + std::to_string(cfg.seed);
}

int cmd_run(const std::string& scenario_path, const std::string& controller,
            std::int64_t seed, int steps, const std::string& out_dir) {
    sar::ScenarioConfig cfg = sar::load_scenario(scenario_path);
    if (!controller.empty()) cfg.controller = sar::controller_from_name(controller);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (steps >= 0) cfg.steps = steps;
    sar::validate_scenario(cfg);

    const sar::RunRecord record = sar::run_scenario(cfg);

    std::filesystem::create_directories(out_dir);
    const std::string stem = (std::filesystem::path(out_dir) / run_stem(cfg)).string();
    sar::write_tick_csv(record, stem + "_ticks.csv");
    sar::write_victim_csv(record, stem + "_victims.csv");
    sar::write_run_record(record, stem + "_record.json");

    const sar::SummaryRow s = sar::summarize(record);
    std::cout << "run " << run_stem(cfg) << ": coverage " << s.final_coverage_pct
              << "%, victims " << s.victims_found << "/" << record.victims.size()
              << " found, " << s.victims_deceased << " deceased, " << s.conflicts
              << " conflicts\n";
    std::cout << "wrote " << stem << "_{ticks,victims}.csv and _record.json\n";
    return 0;
}

int cmd_batch(const std::string& scenario_path, const std::string& controllers,
              const std::string& seeds, int jobs, const std::string& out_dir) {
    sar::BatchSpec spec;
    spec.base = sar::load_scenario(scenario_path);
    spec.controllers = parse_controllers(controllers);
    spec.seeds = parse_seeds(seeds);
    spec.jobs = jobs;

    const sar::BatchResult result = sar::run_batch(spec);

    std::filesystem::create_directories(out_dir);
    const std::string path =
        (std::filesystem::path(out_dir) / (spec.base.name + "_batch.csv")).string();
    sar::write_batch_csv(result.rows, result.aggregates, path);

    for (const sar::AggregateRow& a : result.aggregates) {
        std::cout << a.controller << ": coverage " << a.mean_final_coverage_pct
                  << "%, victims " << a.mean_victims_found << " (var "
                  << a.var_victims_found << "), deceased " << a.mean_victims_deceased
                  << ", conflicts " << a.mean_conflicts << ", evals/tick "
                  << a.mean_objective_evals << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_validate(const std::string& scenario_path) {
    const sar::ScenarioConfig cfg = sar::load_scenario(scenario_path);
    std::cout << cfg.name << ": ok (" << cfg.width << "x" << cfg.height << ", "
              << cfg.robots.size() << " robots, controller " << sar::to_string(cfg.controller)
              << ", " << cfg.steps << " steps)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-world search-and-rescue simulator"};
    app.require_subcommand(1);

    std::string scenario, controller, out_dir = "out";
    std::string controllers = "cooperative,selfish,pure_mpc,acs,exhaustive";
    std::string seeds = "1..20";
    std::int64_t seed = -1;
    int steps = -1, jobs = 0;

    CLI::App* run = app.add_subcommand("run", "run one scenario and write its records");
    run->add_option("--scenario", scenario, "scenario file")->required();
    run->add_option("--controller", controller, "override the configured controller");
    run->add_option("--seed", seed, "override the master seed");
    run->add_option("--steps", steps, "override the tick count");
    run->add_option("--out", out_dir, "output directory");

    CLI::App* batch = app.add_subcommand("batch", "run a controller/seed sweep");
    batch->add_option("--scenario", scenario, "scenario file")->required();
    batch->add_option("--controllers", controllers, "comma-separated controller list");
    batch->add_option("--seeds", seeds, "seed list: a..b or comma-separated");
    batch->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    batch->add_option("--out", out_dir, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("--scenario", scenario, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario, controller, seed, steps, out_dir);
        if (batch->parsed()) return cmd_batch(scenario, controllers, seeds, jobs, out_dir);
        if (validate->parsed()) return cmd_validate(scenario);
    } catch (const sar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
