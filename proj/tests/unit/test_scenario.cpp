#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "sarsim/scenario.hpp"

using namespace sar;

namespace {

std::string parse_error(const std::string& body) {
    try {
        (void)parse_scenario(body, "t");
        return "";
    } catch (const ConfigError& e) {
        return e.what();
    }
}

void expect_error(const std::string& body, const std::string& needle) {
    const std::string msg = parse_error(body);
    INFO("error message: " << msg);
    CHECK(msg.find(needle) != std::string::npos);
}

} // namespace

TEST_CASE("a minimal scenario picks up all defaults") {
    const ScenarioConfig cfg = parse_scenario(R"({"robots": [{"start": [3, 3]}]})", "mini");
    CHECK(cfg.name == "mini");
    CHECK(cfg.width == 40);
    CHECK(cfg.height == 25);
    CHECK_FALSE(cfg.obstacles.random);
    CHECK(cfg.obstacles.cells.empty());
    CHECK_FALSE(cfg.victims.random);
    CHECK(cfg.victims.list.empty());
    REQUIRE(cfg.robots.size() == 1);
    CHECK(cfg.robots[0].id == 1); // auto-assigned
    CHECK(cfg.robots[0].start == Cell{3, 3});
    CHECK(cfg.robots[0].r_p == 4.0);
    CHECK(cfg.robots[0].eta == 0.3);
    CHECK(cfg.health.alpha == 0.25);
    CHECK(cfg.health.h_crit == 30.0);
    CHECK(cfg.p_stay == 0.6);
    CHECK(cfg.weights.c1 == 2.0);
    CHECK(cfg.weights.c2 == 5.0);
    CHECK(cfg.weights.lambda == 0.6);
    CHECK(cfg.tau_int == 30);
    CHECK(cfg.w1 == 1.0);
    CHECK(cfg.w2 == 0.05);
    CHECK(cfg.initial_certainty == 0.0);
    CHECK(cfg.controller == ControllerKind::cooperative);
    CHECK(cfg.steps == 300);
    CHECK(cfg.seed == 1);
    CHECK(cfg.optimizer.max_evals == 2000);
    CHECK(cfg.optimizer.restarts == 1);
    CHECK(cfg.k_paths == 3);
    CHECK(cfg.rules_file.empty());
}

TEST_CASE("a fully specified scenario parses field by field") {
    const ScenarioConfig cfg = parse_scenario(R"({
        "grid": {"width": 15, "height": 10},
        "obstacles": {"cells": [[5, 5], [6, 5]]},
        "victims": {"list": [{"pos": [8, 8], "health": 35}, {"pos": [2, 9]}]},
        "robots": [
            {"id": 4, "start": [1, 1], "r_p": 6, "eta": 0.1},
            {"id": 2, "start": [15, 10], "r_p": 2.5, "eta": 0.3}
        ],
        "params": {"p_stay": 0.8, "alpha": 0.5, "beta": 0.01, "gamma": 0.9,
                   "h_crit": 25, "lambda": 0.5, "c1": 1.5, "c2": 4.0,
                   "tau_int": 12, "w1": 0.7, "w2": 0.1},
        "initial_certainty": {"default": 0.25,
                              "regions": [{"x1": 2, "y1": 2, "x2": 4, "y2": 3, "value": 0.9}]},
        "controller": "acs",
        "steps": 42,
        "seed": 77,
        "optimizer": {"budget": 500, "initial_mesh": 1.5, "contraction": 0.4,
                      "min_mesh": 0.25, "restarts": 2},
        "k_paths": 2
    })", "full");
    CHECK(cfg.width == 15);
    CHECK(cfg.height == 10);
    REQUIRE(cfg.obstacles.cells.size() == 2);
    CHECK(cfg.obstacles.cells[1] == Cell{6, 5});
    REQUIRE(cfg.victims.list.size() == 2);
    CHECK(cfg.victims.list[0].health == 35.0);
    CHECK(cfg.victims.list[1].health == 100.0); // default
    REQUIRE(cfg.robots.size() == 2);
    CHECK(cfg.robots[0].id == 4);
    CHECK(cfg.robots[1].r_p == 2.5);
    CHECK(cfg.p_stay == 0.8);
    CHECK(cfg.health.gamma == 0.9);
    CHECK(cfg.weights.lambda == 0.5);
    CHECK(cfg.tau_int == 12);
    CHECK(cfg.initial_certainty == 0.25);
    REQUIRE(cfg.regions.size() == 1);
    CHECK(cfg.regions[0].x2 == 4);
    CHECK(cfg.regions[0].value == 0.9);
    CHECK(cfg.controller == ControllerKind::acs);
    CHECK(cfg.steps == 42);
    CHECK(cfg.seed == 77);
    CHECK(cfg.optimizer.max_evals == 500);
    CHECK(cfg.optimizer.contraction == 0.4);
    CHECK(cfg.optimizer.restarts == 2);
    CHECK(cfg.k_paths == 2);

    const ControlParams params = cfg.control_params();
    CHECK(params.k_paths == 2);
    CHECK(params.tau_int == 12);
    CHECK(params.w1 == 0.7);
    CHECK(params.w2 == 0.1);
    CHECK(params.budget.max_evals == 500);
    CHECK(params.weights.c1 == 1.5);
}

TEST_CASE("parse and validation errors name the offending field") {
    expect_error("not json at all", "not valid JSON");
    expect_error("[1, 2]", "top level must be an object");
    expect_error(R"({})", "robots");
    expect_error(R"({"robots": []})", "at least one robot");
    expect_error(R"({"robots": [{"id": 1}]})", "robots[0].start: missing");
    expect_error(R"({"robots": [{"start": [0, 3]}]})", "robots[0].start: outside the grid");
    expect_error(R"({"robots": [{"start": [3, 3], "r_p": 0}]})", "robots[0].r_p");
    expect_error(R"({"robots": [{"start": [3, 3], "eta": 1.5}]})", "robots[0].eta");
    expect_error(R"({"robots": [{"id": 1, "start": [3, 3]}, {"id": 1, "start": [4, 4]}]})",
                 "duplicate robot id");
    expect_error(R"({"robots": [{"start": [3, 3]}], "grid": {"width": 0}})",
                 "grid.width");
    expect_error(R"({"robots": [{"start": [3, 3]}], "grid": {"width": 5, "height": "x"}})",
                 "grid.height: expected an integer");

    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "obstacles": {"density": 0.1, "cells": [[1, 1]]}})",
                 "either density or cells");
    expect_error(R"({"robots": [{"start": [3, 3]}], "obstacles": {"density": 1.0}})",
                 "obstacles.density");
    expect_error(R"({"robots": [{"start": [3, 3]}], "obstacles": {"cells": [[99, 1]]}})",
                 "obstacles.cells[0]");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "obstacles": {"cells": [[3, 3]]}})",
                 "robots[0].start: on an obstacle");

    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "victims": {"count": 2, "list": [{"pos": [5, 5]}]}})",
                 "either count or list");
    expect_error(R"({"robots": [{"start": [3, 3]}], "victims": {"count": -1}})",
                 "victims.count");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "victims": {"count": 1, "health_range": [80, 20]}})",
                 "victims.health_range");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "victims": {"list": [{"pos": [3, 99]}]}})",
                 "victims.list[0].pos");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "victims": {"list": [{"pos": [5, 5], "health": 150}]}})",
                 "victims.list[0].health");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "obstacles": {"cells": [[5, 5]]},
                     "victims": {"list": [{"pos": [5, 5]}]}})",
                 "victims.list[0].pos: on an obstacle");

    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"p_stay": 1.2}})",
                 "params.p_stay");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"alpha": 0}})",
                 "params.alpha");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"beta": -0.1}})",
                 "params.beta");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"h_crit": 0}})",
                 "params.h_crit");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "params": {"beta": 0.05, "gamma": 1.0, "h_crit": 30}})",
                 "params.gamma: must be >= beta * h_crit");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"lambda": 1.5}})",
                 "params.lambda");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"c1": 0}})", "params.c1");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"tau_int": -1}})",
                 "params.tau_int");
    expect_error(R"({"robots": [{"start": [3, 3]}], "params": {"w2": -0.5}})", "params.w2");

    expect_error(R"({"robots": [{"start": [3, 3]}], "initial_certainty": {"default": 2}})",
                 "initial_certainty.default");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "initial_certainty": {"regions": [{"x1": 1, "y1": 1, "x2": 99,
                                                        "y2": 2, "value": 0.5}]}})",
                 "initial_certainty.regions[0]");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "initial_certainty": {"regions": [{"x1": 5, "y1": 1, "x2": 2,
                                                        "y2": 2, "value": 0.5}]}})",
                 "x1 <= x2");
    expect_error(R"({"robots": [{"start": [3, 3]}],
                     "initial_certainty": {"regions": [{"x1": 1, "y1": 1, "x2": 2,
                                                        "y2": 2}]}})",
                 "initial_certainty.regions[0].value: missing");

    expect_error(R"({"robots": [{"start": [3, 3]}], "controller": "greedy"})",
                 "unknown controller name");
    expect_error(R"({"robots": [{"start": [3, 3]}], "steps": -1})", "steps");
    expect_error(R"({"robots": [{"start": [3, 3]}], "seed": -4})",
                 "seed: expected a non-negative integer");
    expect_error(R"({"robots": [{"start": [3, 3]}], "optimizer": {"budget": -1}})",
                 "optimizer.budget");
    expect_error(R"({"robots": [{"start": [3, 3]}], "optimizer": {"contraction": 1.0}})",
                 "optimizer.contraction");
    expect_error(R"({"robots": [{"start": [3, 3]}], "optimizer": {"min_mesh": 0}})",
                 "optimizer.min_mesh");
    expect_error(R"({"robots": [{"start": [3, 3]}], "optimizer": {"restarts": 0}})",
                 "optimizer.restarts");
    expect_error(R"({"robots": [{"start": [3, 3]}], "k_paths": 0})", "k_paths");
    expect_error(R"({"robots": [{"start": [3, 3]}], "fuzzy_rules": "/no/such/file.txt"})",
                 "fuzzy_rules");
}

TEST_CASE("config echo round-trips through the parser") {
    const ScenarioConfig cfg = parse_scenario(R"({
        "grid": {"width": 12, "height": 9},
        "obstacles": {"density": 0.1},
        "victims": {"count": 3, "health_range": [40, 90]},
        "robots": [{"id": 1, "start": [2, 2], "r_p": 6, "eta": 0.1},
                   {"id": 2, "start": [11, 8], "r_p": 4, "eta": 0.3}],
        "params": {"p_stay": 0.7, "tau_int": 25},
        "initial_certainty": {"default": 0.2,
                              "regions": [{"x1": 1, "y1": 1, "x2": 3, "y2": 3, "value": 0.8}]},
        "controller": "selfish",
        "steps": 17,
        "seed": 123,
        "k_paths": 4
    })", "echo");

    const ScenarioConfig back = parse_scenario(scenario_to_json(cfg), "echo");
    CHECK(back.width == cfg.width);
    CHECK(back.height == cfg.height);
    CHECK(back.obstacles.random == cfg.obstacles.random);
    CHECK(back.obstacles.density == cfg.obstacles.density);
    CHECK(back.victims.random == cfg.victims.random);
    CHECK(back.victims.count == cfg.victims.count);
    CHECK(back.victims.health_lo == cfg.victims.health_lo);
    CHECK(back.victims.health_hi == cfg.victims.health_hi);
    REQUIRE(back.robots.size() == cfg.robots.size());
    for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
        CHECK(back.robots[i].id == cfg.robots[i].id);
        CHECK(back.robots[i].start == cfg.robots[i].start);
        CHECK(back.robots[i].r_p == cfg.robots[i].r_p);
        CHECK(back.robots[i].eta == cfg.robots[i].eta);
    }
    CHECK(back.p_stay == cfg.p_stay);
    CHECK(back.health.beta == cfg.health.beta);
    CHECK(back.tau_int == cfg.tau_int);
    CHECK(back.initial_certainty == cfg.initial_certainty);
    REQUIRE(back.regions.size() == 1);
    CHECK(back.regions[0].value == 0.8);
    CHECK(back.controller == cfg.controller);
    CHECK(back.steps == cfg.steps);
    CHECK(back.seed == cfg.seed);
    CHECK(back.optimizer.max_evals == cfg.optimizer.max_evals);
    CHECK(back.k_paths == cfg.k_paths);

    // and the echo is stable once normalized
    CHECK(scenario_to_json(back) == scenario_to_json(cfg));
}

TEST_CASE("all bundled scenarios load cleanly") {
    const std::string dir = SARSIM_SCENARIO_DIR;
    const ScenarioConfig c1 = load_scenario(dir + "/case1.json");
    CHECK(c1.name == "case1");
    CHECK(c1.width == 15);
    CHECK(c1.steps == 9);
    CHECK(c1.robots.size() == 2);
    CHECK(c1.victims.list.size() == 2);
    CHECK(c1.p_stay == 1.0);

    const ScenarioConfig c2 = load_scenario(dir + "/case2.json");
    CHECK(c2.victims.list.size() == 1);
    CHECK(c2.initial_certainty == 1.0);
    CHECK(c2.regions.size() == 2);

    const ScenarioConfig c3 = load_scenario(dir + "/case3.json");
    CHECK(c3.obstacles.cells.size() >= 2);
    CHECK(c3.tau_int == 20);

    const ScenarioConfig c4 = load_scenario(dir + "/case4.json");
    CHECK(c4.victims.list.empty());
    CHECK_FALSE(c4.victims.random);
    CHECK(c4.regions.size() == 2);

    const ScenarioConfig c5 = load_scenario(dir + "/case5.json");
    CHECK(c5.robots.size() == 2);
    CHECK(c5.victims.list.size() == 6);

    const ScenarioConfig g = load_scenario(dir + "/general.json");
    CHECK(g.width == 40);
    CHECK(g.height == 25);
    CHECK(g.obstacles.random);
    CHECK(g.victims.random);
    CHECK(g.steps == 300);

    CHECK_THROWS_AS((void)load_scenario(dir + "/missing.json"), ConfigError);
}

TEST_CASE("materialization is a pure function of the config") {
    const std::string body = R"({
        "grid": {"width": 20, "height": 14},
        "obstacles": {"density": 0.15},
        "victims": {"count": 5, "health_range": [35, 95]},
        "robots": [{"id": 1, "start": [2, 2]}, {"id": 2, "start": [19, 13]}],
        "seed": 42
    })";
    const ScenarioConfig cfg = parse_scenario(body, "gen");
    const WorldSetup a = materialize(cfg);
    const WorldSetup b = materialize(cfg);

    CHECK(a.env.obstacle_count() > 0);
    CHECK(a.env.obstacles() == b.env.obstacles());
    REQUIRE(a.victims.size() == 5);
    for (std::size_t i = 0; i < a.victims.size(); ++i) {
        CHECK(a.victims[i].pos == b.victims[i].pos);
        CHECK(a.victims[i].health == b.victims[i].health);
        CHECK(a.victims[i].id == static_cast<int>(i) + 1);
        CHECK(a.victims[i].health >= 35.0);
        CHECK(a.victims[i].health <= 95.0);
        CHECK_FALSE(a.env.is_obstacle(a.victims[i].pos));
        CHECK(a.victims[i].alive);
    }
    // robot starts are always kept free
    for (const auto& r : a.robots) CHECK_FALSE(a.env.is_obstacle(r.pos));

    // a different seed reshuffles the world
    ScenarioConfig other = cfg;
    other.seed = 43;
    const WorldSetup c = materialize(other);
    CHECK(a.env.obstacles() != c.env.obstacles());
}

TEST_CASE("materialization applies fixed layouts and certainty regions") {
    const ScenarioConfig cfg = parse_scenario(R"({
        "grid": {"width": 10, "height": 10},
        "obstacles": {"cells": [[4, 4], [5, 4]]},
        "victims": {"list": [{"pos": [8, 8], "health": 25}]},
        "robots": [{"id": 2, "start": [9, 9]}, {"id": 1, "start": [1, 1]}],
        "initial_certainty": {"default": 0.1,
                              "regions": [{"x1": 6, "y1": 6, "x2": 8, "y2": 7, "value": 0.75}]}
    })", "fixed");
    const WorldSetup w = materialize(cfg);
    CHECK(w.env.obstacle_count() == 2);
    CHECK(w.env.is_obstacle(Cell{4, 4}));
    REQUIRE(w.victims.size() == 1);
    CHECK(w.victims[0].pos == Cell{8, 8});
    CHECK(w.victims[0].health == 25.0);
    // robots come out ordered by id regardless of listing order
    REQUIRE(w.robots.size() == 2);
    CHECK(w.robots[0].id == 1);
    CHECK(w.robots[0].pos == Cell{1, 1});
    CHECK(w.robots[1].id == 2);
    CHECK(w.certainty.at(Cell{2, 2}) == 0.1);
    CHECK(w.certainty.at(Cell{7, 6}) == 0.75);
    CHECK(w.certainty.at(Cell{8, 7}) == 0.75);
    CHECK(w.certainty.at(Cell{9, 7}) == 0.1);
}

TEST_CASE("random obstacles never bury robot starts or listed victims") {
    const ScenarioConfig cfg = parse_scenario(R"({
        "grid": {"width": 12, "height": 12},
        "obstacles": {"density": 0.6},
        "victims": {"list": [{"pos": [6, 6], "health": 50}]},
        "robots": [{"id": 1, "start": [3, 3]}],
        "seed": 9
    })", "dense");
    const WorldSetup w = materialize(cfg);
    CHECK_FALSE(w.env.is_obstacle(Cell{3, 3}));
    CHECK_FALSE(w.env.is_obstacle(Cell{6, 6}));
    CHECK(w.env.obstacle_count() > 40); // densities this high leave a mark
}
