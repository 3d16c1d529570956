#pragma once

#include <string>
#include <vector>

#include "wildsim/config.hpp"
#include "wildsim/errors.hpp"

namespace wildsim {

struct Preset {
    const char* name;
    const char* description;
    const char* ini;
};

/// Built-in scenarios, each a complete config runnable by name. They are
/// sized to finish in well under a minute on one core.
inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> list = {
        {"random-walk",
         "clearing market with Gaussian prediction errors; mild random-walk returns",
         "[market]\n"
         "alpha = 1\n"
         "gamma = 0\n"
         "expectation_law = normal(0, 0.02)\n"
         "n_law = constant(10000)\n"
         "p0 = 100\n"
         "\n"
         "[analysis]\n"
         "tail = true\n"
         "moments = true\n"
         "solve_exponent = false\n"
         "stationarity = false\n"
         "\n"
         "[run]\n"
         "length = 100000\n"
         "seed = 42\n"},

        {"bubble",
         "self-confirming mispricing: fundamental buying compounds at rate rho per step",
         "[market]\n"
         "kind = bubble\n"
         "alpha = 1\n"
         "gamma = 0.1\n"
         "b0 = 1\n"
         "\n"
         "[run]\n"
         "length = 100\n"},

        {"negative-feedback",
         "value investors pull the price toward the fundamental at rate rho per step",
         "[market]\n"
         "kind = negative_feedback\n"
         "alpha = 1\n"
         "gamma = 0.5\n"
         "fundamental = 100\n"
         "p0 = 50\n"
         "\n"
         "[run]\n"
         "length = 60\n"},

        {"kesten-stock",
         "impact pricing with heavy-tailed participation; returns develop a power-law tail",
         "[market]\n"
         "price_rule = impact\n"
         "expectation_model = confidence\n"
         "alpha = 1\n"
         "gamma = 0\n"
         "beta = 0.5\n"
         "expectation_law = normal(0, 0.02)\n"
         "n_law = pareto(5, 100)\n"
         "l_law = constant(67.860440414872664)\n"
         "p0 = 100\n"
         "\n"
         "[analysis]\n"
         "tail = true\n"
         "moments = true\n"
         "solve_exponent = true\n"
         "\n"
         "[run]\n"
         "length = 500000\n"
         "burn_in = 10000\n"
         "seed = 7\n"
         "replicas = 8\n"},

        {"grincevicius",
         "heavy-tailed shocks through subcritical feedback; the tail carries over amplified",
         "[recurrence]\n"
         "a = uniform(0, 1.1603972084031947)\n"
         "e = pareto(1.5, 1)\n"
         "lag = 1\n"
         "r0 = 0\n"
         "\n"
         "[analysis]\n"
         "tail = true\n"
         "solve_exponent = false\n"
         "grincevicius_mu = 1.5\n"
         "ratio_quantile = 0.999\n"
         "\n"
         "[run]\n"
         "length = 2000000\n"
         "burn_in = 1000\n"
         "seed = 11\n"},

        {"opinion-network",
         "row-renormalized influence network; averaging keeps everyone's view mild",
         "[network]\n"
         "mode = opinion\n"
         "base = full(8, 0.12)\n"
         "jitter_sd = 0.25\n"
         "renormalize = true\n"
         "input = iid\n"
         "input_laws = normal(0, 0.02)\n"
         "\n"
         "[analysis]\n"
         "tail = true\n"
         "matrix_exponent = true\n"
         "horizon = 16\n"
         "chains = 20000\n"
         "\n"
         "[run]\n"
         "length = 200000\n"
         "burn_in = 1000\n"
         "seed = 3\n"},

        {"cross-asset",
         "coupled asset feedbacks with random gain; joint dynamics turn wild together",
         "[network]\n"
         "mode = cross_asset\n"
         "generator = diagonal_laws\n"
         "diag_laws = uniform(0, 1.8) | uniform(0, 1.8) | uniform(0, 1.8)\n"
         "off_diagonal = 0.02\n"
         "input = coupled\n"
         "input_laws = normal(0, 0.02)\n"
         "\n"
         "[analysis]\n"
         "tail = true\n"
         "matrix_exponent = true\n"
         "horizon = 16\n"
         "chains = 400000\n"
         "\n"
         "[run]\n"
         "length = 500000\n"
         "burn_in = 10000\n"
         "seed = 5\n"},
    };
    return list;
}

inline const Preset* find_preset(const std::string& name) {
    for (const Preset& p : presets())
        if (name == p.name) return &p;
    return nullptr;
}

inline ScenarioConfig load_preset(const std::string& name) {
    const Preset* p = find_preset(name);
    if (!p) {
        std::string names;
        for (const Preset& q : presets()) names += std::string(names.empty() ? "" : ", ") + q.name;
        throw config_error("no preset named '" + name + "' (have: " + names + ")");
    }
    ScenarioConfig cfg = parse_scenario_text(p->ini, p->name);
    cfg.name = p->name;
    return cfg;
}

} // namespace wildsim
