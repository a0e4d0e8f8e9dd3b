#include "sarsim/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sarsim/rng.hpp"

namespace sar {

using nlohmann::json;

ControlParams ScenarioConfig::control_params() const {
    ControlParams p;
    p.weights = weights;
    p.k_paths = k_paths;
    p.tau_int = tau_int;
    p.w1 = w1;
    p.w2 = w2;
    p.budget = optimizer;
    p.rules = rules;
    return p;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Cell cell_pair(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return Cell{integer(j[0], path + "[0]"), integer(j[1], path + "[1]")};
}

void parse_obstacles(const json& j, ScenarioConfig& cfg) {
    if (const json* d = find(j, "density")) {
        cfg.obstacles.random = true;
        cfg.obstacles.density = num(*d, "obstacles.density");
    }
    if (const json* cells = find(j, "cells")) {
        if (!cells->is_array()) fail("obstacles.cells", "expected an array");
        for (std::size_t i = 0; i < cells->size(); ++i)
            cfg.obstacles.cells.push_back(
                cell_pair((*cells)[i], "obstacles.cells[" + std::to_string(i) + "]"));
    }
    if (cfg.obstacles.random && !cfg.obstacles.cells.empty())
        fail("obstacles", "give either density or cells, not both");
}

void parse_victims(const json& j, ScenarioConfig& cfg) {
    if (const json* count = find(j, "count")) {
        cfg.victims.random = true;
        cfg.victims.count = integer(*count, "victims.count");
        if (const json* range = find(j, "health_range")) {
            if (!range->is_array() || range->size() != 2)
                fail("victims.health_range", "expected [lo, hi]");
            cfg.victims.health_lo = num((*range)[0], "victims.health_range[0]");
            cfg.victims.health_hi = num((*range)[1], "victims.health_range[1]");
        }
    }
    if (const json* list = find(j, "list")) {
        if (!list->is_array()) fail("victims.list", "expected an array");
        for (std::size_t i = 0; i < list->size(); ++i) {
            const std::string path = "victims.list[" + std::to_string(i) + "]";
            const json& e = (*list)[i];
            if (!e.is_object()) fail(path, "expected an object");
            VictimEntry v;
            const json* pos = find(e, "pos");
            if (!pos) fail(path + ".pos", "missing");
            v.pos = cell_pair(*pos, path + ".pos");
            if (const json* h = find(e, "health")) v.health = num(*h, path + ".health");
            cfg.victims.list.push_back(v);
        }
    }
    if (cfg.victims.random && !cfg.victims.list.empty())
        fail("victims", "give either count or list, not both");
}

void parse_robots(const json& j, ScenarioConfig& cfg) {
    if (!j.is_array()) fail("robots", "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "robots[" + std::to_string(i) + "]";
        const json& e = j[i];
        if (!e.is_object()) fail(path, "expected an object");
        RobotSpec r;
        r.id = static_cast<int>(i) + 1;
        if (const json* id = find(e, "id")) r.id = integer(*id, path + ".id");
        const json* start = find(e, "start");
        if (!start) fail(path + ".start", "missing");
        r.start = cell_pair(*start, path + ".start");
        if (const json* rp = find(e, "r_p")) r.r_p = num(*rp, path + ".r_p");
        if (const json* eta = find(e, "eta")) r.eta = num(*eta, path + ".eta");
        cfg.robots.push_back(r);
    }
}

void parse_params(const json& j, ScenarioConfig& cfg) {
    if (const json* v = find(j, "p_stay")) cfg.p_stay = num(*v, "params.p_stay");
    if (const json* v = find(j, "alpha")) cfg.health.alpha = num(*v, "params.alpha");
    if (const json* v = find(j, "beta")) cfg.health.beta = num(*v, "params.beta");
    if (const json* v = find(j, "gamma")) cfg.health.gamma = num(*v, "params.gamma");
    if (const json* v = find(j, "h_crit")) cfg.health.h_crit = num(*v, "params.h_crit");
    if (const json* v = find(j, "lambda")) cfg.weights.lambda = num(*v, "params.lambda");
    if (const json* v = find(j, "c1")) cfg.weights.c1 = num(*v, "params.c1");
    if (const json* v = find(j, "c2")) cfg.weights.c2 = num(*v, "params.c2");
    if (const json* v = find(j, "tau_int")) cfg.tau_int = integer(*v, "params.tau_int");
    if (const json* v = find(j, "w1")) cfg.w1 = num(*v, "params.w1");
    if (const json* v = find(j, "w2")) cfg.w2 = num(*v, "params.w2");
}

void parse_certainty(const json& j, ScenarioConfig& cfg) {
    if (const json* v = find(j, "default"))
        cfg.initial_certainty = num(*v, "initial_certainty.default");
    if (const json* regions = find(j, "regions")) {
        if (!regions->is_array()) fail("initial_certainty.regions", "expected an array");
        for (std::size_t i = 0; i < regions->size(); ++i) {
            const std::string path = "initial_certainty.regions[" + std::to_string(i) + "]";
            const json& e = (*regions)[i];
            if (!e.is_object()) fail(path, "expected an object");
            CertaintyRegion r;
            for (const char* key : {"x1", "y1", "x2", "y2", "value"}) {
                if (!find(e, key)) fail(path + "." + key, "missing");
            }
            r.x1 = integer(e["x1"], path + ".x1");
            r.y1 = integer(e["y1"], path + ".y1");
            r.x2 = integer(e["x2"], path + ".x2");
            r.y2 = integer(e["y2"], path + ".y2");
            r.value = num(e["value"], path + ".value");
            cfg.regions.push_back(r);
        }
    }
}

void parse_optimizer(const json& j, ScenarioConfig& cfg) {
    if (const json* v = find(j, "budget")) cfg.optimizer.max_evals = integer(*v, "optimizer.budget");
    if (const json* v = find(j, "initial_mesh"))
        cfg.optimizer.initial_mesh = num(*v, "optimizer.initial_mesh");
    if (const json* v = find(j, "contraction"))
        cfg.optimizer.contraction = num(*v, "optimizer.contraction");
    if (const json* v = find(j, "min_mesh")) cfg.optimizer.min_mesh = num(*v, "optimizer.min_mesh");
    if (const json* v = find(j, "restarts")) cfg.optimizer.restarts = integer(*v, "optimizer.restarts");
}

ScenarioConfig parse_impl(const std::string& json_text, const std::string& name,
                          const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(name + ": not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ConfigError(name + ": top level must be an object");

    ScenarioConfig cfg;
    cfg.name = name;
    if (const json* grid = find(j, "grid")) {
        if (const json* w = find(*grid, "width")) cfg.width = integer(*w, "grid.width");
        if (const json* h = find(*grid, "height")) cfg.height = integer(*h, "grid.height");
    }
    if (const json* o = find(j, "obstacles")) parse_obstacles(*o, cfg);
    if (const json* v = find(j, "victims")) parse_victims(*v, cfg);
    const json* robots = find(j, "robots");
    if (!robots) fail("robots", "missing");
    parse_robots(*robots, cfg);
    if (const json* p = find(j, "params")) parse_params(*p, cfg);
    if (const json* c = find(j, "initial_certainty")) parse_certainty(*c, cfg);
    if (const json* c = find(j, "controller"))
        cfg.controller = controller_from_name(text(*c, "controller"));
    if (const json* s = find(j, "steps")) cfg.steps = integer(*s, "steps");
    if (const json* s = find(j, "seed")) {
        if (!s->is_number_integer() || s->get<long long>() < 0) fail("seed", "expected a non-negative integer");
        cfg.seed = s->get<std::uint64_t>();
    }
    if (const json* o = find(j, "optimizer")) parse_optimizer(*o, cfg);
    if (const json* k = find(j, "k_paths")) cfg.k_paths = integer(*k, "k_paths");
    if (const json* f = find(j, "fuzzy_rules")) cfg.rules_file = text(*f, "fuzzy_rules");

    if (!cfg.rules_file.empty()) {
        std::filesystem::path p(cfg.rules_file);
        if (p.is_relative()) p = base_dir / p;
        try {
            cfg.rules = load_rule_file(p.string());
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("fuzzy_rules: ") + e.what());
        }
    }

    validate_scenario(cfg);
    return cfg;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& name) {
    return parse_impl(json_text, name, std::filesystem::current_path());
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::filesystem::path p(path);
    return parse_impl(buf.str(), p.stem().string(), p.has_parent_path() ? p.parent_path()
                                                                        : std::filesystem::path("."));
}

void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.width < 1) fail("grid.width", "must be >= 1");
    if (cfg.height < 1) fail("grid.height", "must be >= 1");

    auto in_grid = [&](const Cell& c) {
        return c.x >= 1 && c.x <= cfg.width && c.y >= 1 && c.y <= cfg.height;
    };

    if (cfg.obstacles.random &&
        (cfg.obstacles.density < 0.0 || cfg.obstacles.density >= 1.0))
        fail("obstacles.density", "must be in [0, 1)");
    for (std::size_t i = 0; i < cfg.obstacles.cells.size(); ++i)
        if (!in_grid(cfg.obstacles.cells[i]))
            fail("obstacles.cells[" + std::to_string(i) + "]", "outside the grid");

    auto on_listed_obstacle = [&](const Cell& c) {
        for (const Cell& o : cfg.obstacles.cells)
            if (o == c) return true;
        return false;
    };

    if (cfg.robots.empty()) fail("robots", "at least one robot required");
    for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
        const std::string path = "robots[" + std::to_string(i) + "]";
        const RobotSpec& r = cfg.robots[i];
        if (!in_grid(r.start)) fail(path + ".start", "outside the grid");
        if (on_listed_obstacle(r.start)) fail(path + ".start", "on an obstacle");
        if (r.r_p <= 0.0) fail(path + ".r_p", "must be > 0");
        if (r.eta < 0.0 || r.eta > 1.0) fail(path + ".eta", "must be in [0, 1]");
        for (std::size_t k = 0; k < i; ++k)
            if (cfg.robots[k].id == r.id) fail(path + ".id", "duplicate robot id");
    }

    if (cfg.victims.random) {
        if (cfg.victims.count < 0) fail("victims.count", "must be >= 0");
        if (cfg.victims.health_lo < 0.0 || cfg.victims.health_hi > 100.0 ||
            cfg.victims.health_lo > cfg.victims.health_hi)
            fail("victims.health_range", "must satisfy 0 <= lo <= hi <= 100");
    }
    for (std::size_t i = 0; i < cfg.victims.list.size(); ++i) {
        const std::string path = "victims.list[" + std::to_string(i) + "]";
        const VictimEntry& v = cfg.victims.list[i];
        if (!in_grid(v.pos)) fail(path + ".pos", "outside the grid");
        if (on_listed_obstacle(v.pos)) fail(path + ".pos", "on an obstacle");
        if (v.health < 0.0 || v.health > 100.0) fail(path + ".health", "must be in [0, 100]");
    }

    if (cfg.p_stay < 0.0 || cfg.p_stay > 1.0) fail("params.p_stay", "must be in [0, 1]");
    if (cfg.health.alpha <= 0.0) fail("params.alpha", "must be > 0");
    if (cfg.health.beta < 0.0) fail("params.beta", "must be >= 0");
    if (cfg.health.h_crit <= 0.0 || cfg.health.h_crit > 100.0)
        fail("params.h_crit", "must be in (0, 100]");
    if (cfg.health.gamma < cfg.health.beta * cfg.health.h_crit)
        fail("params.gamma", "must be >= beta * h_crit so health never rises");
    if (cfg.weights.c1 <= 0.0) fail("params.c1", "must be > 0");
    if (cfg.weights.c2 <= 0.0) fail("params.c2", "must be > 0");
    if (cfg.weights.lambda < 0.0 || cfg.weights.lambda > 1.0)
        fail("params.lambda", "must be in [0, 1]");
    if (cfg.tau_int < 0) fail("params.tau_int", "must be >= 0");
    if (cfg.w1 < 0.0) fail("params.w1", "must be >= 0");
    if (cfg.w2 < 0.0) fail("params.w2", "must be >= 0");

    if (cfg.initial_certainty < 0.0 || cfg.initial_certainty > 1.0)
        fail("initial_certainty.default", "must be in [0, 1]");
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
        const std::string path = "initial_certainty.regions[" + std::to_string(i) + "]";
        const CertaintyRegion& r = cfg.regions[i];
        if (r.x1 < 1 || r.y1 < 1 || r.x2 > cfg.width || r.y2 > cfg.height)
            fail(path, "outside the grid");
        if (r.x1 > r.x2 || r.y1 > r.y2) fail(path, "needs x1 <= x2 and y1 <= y2");
        if (r.value < 0.0 || r.value > 1.0) fail(path + ".value", "must be in [0, 1]");
    }

    if (cfg.steps < 0) fail("steps", "must be >= 0");
    if (cfg.optimizer.max_evals < 0) fail("optimizer.budget", "must be >= 0");
    if (cfg.optimizer.initial_mesh <= 0.0) fail("optimizer.initial_mesh", "must be > 0");
    if (cfg.optimizer.contraction <= 0.0 || cfg.optimizer.contraction >= 1.0)
        fail("optimizer.contraction", "must be in (0, 1)");
    if (cfg.optimizer.min_mesh <= 0.0) fail("optimizer.min_mesh", "must be > 0");
    if (cfg.optimizer.restarts < 1) fail("optimizer.restarts", "must be >= 1");
    if (cfg.k_paths < 1) fail("k_paths", "must be >= 1");

    try {
        cfg.rules.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("fuzzy_rules: ") + e.what());
    }
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["grid"] = {{"width", cfg.width}, {"height", cfg.height}};

    json obstacles = json::object();
    if (cfg.obstacles.random) obstacles["density"] = cfg.obstacles.density;
    if (!cfg.obstacles.cells.empty()) {
        json cells = json::array();
        for (const Cell& c : cfg.obstacles.cells) cells.push_back({c.x, c.y});
        obstacles["cells"] = std::move(cells);
    }
    j["obstacles"] = std::move(obstacles);

    json victims = json::object();
    if (cfg.victims.random) {
        victims["count"] = cfg.victims.count;
        victims["health_range"] = {cfg.victims.health_lo, cfg.victims.health_hi};
    }
    if (!cfg.victims.list.empty()) {
        json list = json::array();
        for (const VictimEntry& v : cfg.victims.list)
            list.push_back({{"pos", {v.pos.x, v.pos.y}}, {"health", v.health}});
        victims["list"] = std::move(list);
    }
    j["victims"] = std::move(victims);

    json robots = json::array();
    for (const RobotSpec& r : cfg.robots)
        robots.push_back({{"id", r.id},
                          {"start", {r.start.x, r.start.y}},
                          {"r_p", r.r_p},
                          {"eta", r.eta}});
    j["robots"] = std::move(robots);

    j["params"] = {{"p_stay", cfg.p_stay},   {"alpha", cfg.health.alpha},
                   {"beta", cfg.health.beta}, {"gamma", cfg.health.gamma},
                   {"h_crit", cfg.health.h_crit}, {"lambda", cfg.weights.lambda},
                   {"c1", cfg.weights.c1},   {"c2", cfg.weights.c2},
                   {"tau_int", cfg.tau_int}, {"w1", cfg.w1},
                   {"w2", cfg.w2}};

    json certainty;
    certainty["default"] = cfg.initial_certainty;
    if (!cfg.regions.empty()) {
        json regions = json::array();
        for (const CertaintyRegion& r : cfg.regions)
            regions.push_back({{"x1", r.x1},
                               {"y1", r.y1},
                               {"x2", r.x2},
                               {"y2", r.y2},
                               {"value", r.value}});
        certainty["regions"] = std::move(regions);
    }
    j["initial_certainty"] = std::move(certainty);

    j["controller"] = to_string(cfg.controller);
    j["steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["optimizer"] = {{"budget", cfg.optimizer.max_evals},
                      {"initial_mesh", cfg.optimizer.initial_mesh},
                      {"contraction", cfg.optimizer.contraction},
                      {"min_mesh", cfg.optimizer.min_mesh},
                      {"restarts", cfg.optimizer.restarts}};
    j["k_paths"] = cfg.k_paths;
    if (!cfg.rules_file.empty()) j["fuzzy_rules"] = cfg.rules_file;
    return j.dump(2);
}

namespace {

// Stream tags for world generation and the simulation actors. Keeping them
// in one place avoids accidental stream sharing.
constexpr std::uint64_t kObstacleTag = 1;
constexpr std::uint64_t kVictimLayoutTag = 2;

} // namespace

WorldSetup materialize(const ScenarioConfig& cfg) {
    WorldSetup out{GridEnvironment(cfg.width, cfg.height),
                   {},
                   {},
                   ScanCertaintyMap(cfg.width, cfg.height, cfg.initial_certainty)};

    auto is_robot_start = [&](const Cell& c) {
        for (const RobotSpec& r : cfg.robots)
            if (r.start == c) return true;
        return false;
    };
    auto is_listed_victim = [&](const Cell& c) {
        for (const VictimEntry& v : cfg.victims.list)
            if (v.pos == c) return true;
        return false;
    };

    if (cfg.obstacles.random) {
        RngStream stream(mix_seed(cfg.seed, kObstacleTag));
        for (int y = 1; y <= cfg.height; ++y)
            for (int x = 1; x <= cfg.width; ++x) {
                const bool hit = stream.next_unit() < cfg.obstacles.density;
                const Cell c{x, y};
                if (hit && !is_robot_start(c) && !is_listed_victim(c))
                    out.env.add_obstacle(c);
            }
    } else {
        for (const Cell& c : cfg.obstacles.cells) out.env.add_obstacle(c);
    }

    if (cfg.victims.random) {
        RngStream stream(mix_seed(cfg.seed, kVictimLayoutTag));
        std::vector<Cell> candidates;
        for (int y = 1; y <= cfg.height; ++y)
            for (int x = 1; x <= cfg.width; ++x) {
                const Cell c{x, y};
                if (!out.env.is_obstacle(c) && !is_robot_start(c)) candidates.push_back(c);
            }
        if (cfg.victims.count > 0 && candidates.empty())
            throw ConfigError("victims.count: no free cells left for victims");
        for (int i = 0; i < cfg.victims.count; ++i) {
            Victim v;
            v.id = i + 1;
            v.pos = candidates[static_cast<std::size_t>(
                stream.next_below(static_cast<std::uint64_t>(candidates.size())))];
            v.health = cfg.victims.health_lo +
                       stream.next_unit() * (cfg.victims.health_hi - cfg.victims.health_lo);
            v.alive = v.health > 0.0;
            out.victims.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < cfg.victims.list.size(); ++i) {
            Victim v;
            v.id = static_cast<int>(i) + 1;
            v.pos = cfg.victims.list[i].pos;
            v.health = cfg.victims.list[i].health;
            v.alive = v.health > 0.0;
            out.victims.push_back(v);
        }
    }

    for (const RobotSpec& spec : cfg.robots) {
        if (out.env.is_obstacle(spec.start))
            throw ConfigError("robots: start cell became an obstacle");
        out.robots.push_back(RobotState{spec.id, spec.start, SensorSpec{spec.r_p, spec.eta}});
    }
    std::sort(out.robots.begin(), out.robots.end(),
              [](const RobotState& a, const RobotState& b) { return a.id < b.id; });

    for (const CertaintyRegion& r : cfg.regions)
        for (int y = r.y1; y <= r.y2; ++y)
            for (int x = r.x1; x <= r.x2; ++x) out.certainty.set(Cell{x, y}, r.value);

    return out;
}

} // namespace sar
