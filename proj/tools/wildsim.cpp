#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "wildsim/config.hpp"
#include "wildsim/csv.hpp"
#include "wildsim/presets.hpp"
#include "wildsim/scenario.hpp"

namespace {

// Exit codes: 0 ok, 1 unexpected, 2 bad config/usage, 3 not enough data,
// 4 the simulated system exploded.
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitExplosion = 4;

wildsim::ScenarioConfig resolve_config(const std::string& arg) {
    if (std::filesystem::exists(arg)) return wildsim::parse_scenario_file(arg);
    if (wildsim::find_preset(arg)) return wildsim::load_preset(arg);
    std::string names;
    for (const auto& p : wildsim::presets())
        names += std::string(names.empty() ? "" : ", ") + p.name;
    throw wildsim::config_error("'" + arg + "' is neither a config file nor a preset (presets: " +
                                names + ")");
}

int run_estimate_tail(const std::string& path, const std::string& column, std::size_t k) {
    using wildsim::json;
    const std::vector<double> col = wildsim::read_csv_column(path, column);
    const wildsim::MagnitudeSample mags = wildsim::positive_magnitudes(col);
    json out{{"file", path},
             {"column", column},
             {"rows", col.size()},
             {"zeros_dropped", mags.dropped_zeros},
             {"hill", nullptr},
             {"band", nullptr},
             {"rank_regression", nullptr},
             {"notes", json::array()}};
    bool have_hill = false;
    try {
        const std::size_t order =
            k ? k : wildsim::default_hill_order(mags.values.size());
        out["hill"] = wildsim::hill_estimator(mags.values, order);
        have_hill = true;
    } catch (const std::exception& e) {
        out["notes"].push_back(std::string("hill: ") + e.what());
    }
    try {
        out["band"] = wildsim::hill_stability_band(mags.values, k);
    } catch (const std::exception& e) {
        out["notes"].push_back(std::string("band: ") + e.what());
    }
    try {
        out["rank_regression"] = wildsim::rank_regression(mags.values, 0.05);
    } catch (const std::exception& e) {
        out["notes"].push_back(std::string("rank regression: ") + e.what());
    }
    std::cout << out.dump(2) << '\n';
    return have_hill ? 0 : kExitData;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wildsim: stochastic-recurrence market laboratory"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_dir = "out";
    auto* sim = app.add_subcommand("simulate",
                                   "run a scenario; writes series CSVs and summary.json");
    sim->add_option("config", config_arg, "config file or preset name")->required();
    sim->add_option("--out", out_dir, "output directory (default: out)");

    std::string solve_arg;
    auto* solve = app.add_subcommand("solve-exponent",
                                     "solve E(|a|^mu) = 1 for the configured feedback law");
    solve->add_option("config", solve_arg, "config file or preset name")->required();

    std::string tail_path, tail_column = "r";
    std::size_t tail_k = 0;
    auto* tail = app.add_subcommand("estimate-tail", "tail exponent estimates for a CSV column");
    tail->add_option("csv", tail_path, "CSV file with a header row")->required();
    tail->add_option("--column", tail_column, "column name (default: r)");
    tail->add_option("--k", tail_k, "Hill order (default: 2 sqrt(n))");

    std::string kesten_arg;
    auto* kesten = app.add_subcommand("check-kesten",
                                      "evaluate the power-law tail conditions for a recurrence");
    kesten->add_option("config", kesten_arg, "config file or preset name")->required();

    std::string network_arg;
    auto* network = app.add_subcommand("network",
                                       "influence-network facts and the matrix moment root");
    network->add_option("config", network_arg, "config file or preset name")->required();

    std::string validate_arg;
    auto* validate = app.add_subcommand("validate", "parse and cross-check a config");
    validate->add_option("config", validate_arg, "config file or preset name")->required();

    std::string ini_name;
    auto* list = app.add_subcommand("presets", "list built-in scenarios");
    list->add_option("--ini", ini_name, "print the named preset's config text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const wildsim::ScenarioConfig cfg = resolve_config(config_arg);
            const wildsim::ScenarioResult res = wildsim::run_scenario(cfg, out_dir);
            std::cout << res.summary.dump(2) << '\n';
            std::cerr << "wrote " << res.summary_path << '\n';
            return 0;
        }
        if (solve->parsed()) {
            std::cout << wildsim::solve_exponent_report(resolve_config(solve_arg)).dump(2)
                      << '\n';
            return 0;
        }
        if (tail->parsed()) return run_estimate_tail(tail_path, tail_column, tail_k);
        if (kesten->parsed()) {
            std::cout << wildsim::kesten_report_json(resolve_config(kesten_arg)).dump(2) << '\n';
            return 0;
        }
        if (network->parsed()) {
            std::cout << wildsim::network_report(resolve_config(network_arg)).dump(2) << '\n';
            return 0;
        }
        if (validate->parsed()) {
            const wildsim::ScenarioConfig cfg = resolve_config(validate_arg);
            wildsim::json out{{"ok", true}, {"scenario", cfg.name}, {"warnings", cfg.warnings}};
            std::cout << out.dump(2) << '\n';
            return 0;
        }
        if (list->parsed()) {
            if (!ini_name.empty()) {
                const wildsim::Preset* p = wildsim::find_preset(ini_name);
                if (!p) throw wildsim::config_error("no preset named '" + ini_name + "'");
                std::cout << p->ini;
                return 0;
            }
            for (const auto& p : wildsim::presets())
                std::printf("%-18s %s\n", p.name, p.description);
            return 0;
        }
    } catch (const wildsim::explosion_error& e) {
        std::cerr << "explosion: " << e.what() << '\n';
        return kExitExplosion;
    } catch (const wildsim::insufficient_data_error& e) {
        std::cerr << "not enough data: " << e.what() << '\n';
        return kExitData;
    } catch (const wildsim::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
