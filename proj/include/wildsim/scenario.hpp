#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wildsim/config.hpp"
#include "wildsim/csv.hpp"
#include "wildsim/kesten.hpp"
#include "wildsim/presets.hpp"
#include "wildsim/report.hpp"

namespace wildsim {

namespace detail {

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw insufficient_data_error("quantile: empty sample");
    std::size_t ix = static_cast<std::size_t>(q * static_cast<double>(v.size()));
    if (ix >= v.size()) ix = v.size() - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ix), v.end());
    return v[ix];
}

struct BasicMoments {
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

inline BasicMoments basic_moments(const std::vector<double>& v) {
    BasicMoments m;
    const double n = static_cast<double>(v.size());
    if (v.size() < 2) throw insufficient_data_error("basic_moments: need at least 2 values");
    for (double x : v) m.mean += x;
    m.mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.sd = std::sqrt(m2);
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

/// One series' sample-side analyses; failures downgrade to null + note.
struct SeriesBlocks {
    json tail = nullptr;
    json moments = nullptr;
    json log_walk = nullptr;
    json moment_probe = nullptr;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<std::string> notes;
};

inline json tail_block(const std::vector<double>& values, const AnalysisSettings& a,
                       std::vector<std::string>& notes, const std::string& label,
                       std::vector<std::pair<std::string, double>>* scalars) {
    const MagnitudeSample mags = positive_magnitudes(values);
    json block{{"hill", nullptr},
               {"band", nullptr},
               {"rank_regression", nullptr},
               {"zeros_dropped", mags.dropped_zeros}};
    try {
        const std::size_t k = a.tail_k ? a.tail_k : default_hill_order(mags.values.size());
        const TailEstimate hill = hill_estimator(mags.values, k);
        block["hill"] = hill;
        if (scalars) scalars->push_back({label + "_tail_exponent", hill.exponent});
    } catch (const std::exception& e) {
        notes.push_back(label + " hill: " + e.what());
    }
    try {
        const StabilityBand band = hill_stability_band(mags.values, a.tail_k);
        block["band"] = band;
        if (scalars) {
            const double lo = std::min({band.at_half.exponent, band.central.exponent,
                                        band.at_double.exponent});
            const double hi = std::max({band.at_half.exponent, band.central.exponent,
                                        band.at_double.exponent});
            scalars->push_back({label + "_band_low", lo});
            scalars->push_back({label + "_band_high", hi});
        }
    } catch (const std::exception& e) {
        notes.push_back(label + " band: " + e.what());
    }
    try {
        block["rank_regression"] = rank_regression(mags.values, 0.05);
    } catch (const std::exception& e) {
        notes.push_back(label + " rank regression: " + e.what());
    }
    return block;
}

inline SeriesBlocks analyze_series(const std::vector<double>& values, const AnalysisSettings& a,
                                   const std::string& label) {
    SeriesBlocks out;
    if (a.tail) out.tail = tail_block(values, a, out.notes, label, &out.scalars);
    if (a.moments) {
        try {
            const BasicMoments m = basic_moments(values);
            out.moments = json{{"mean", m.mean},
                               {"sd", m.sd},
                               {"skewness", m.skewness},
                               {"excess_kurtosis", m.excess_kurtosis}};
            out.scalars.push_back({label + "_sd", m.sd});
        } catch (const std::exception& e) {
            out.notes.push_back(label + " moments: " + std::string(e.what()));
        }
    }
    if (a.log_walk_quantile > 0.0) {
        try {
            std::vector<double> mags(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::fabs(values[i]);
            const double threshold = quantile(std::move(mags), a.log_walk_quantile);
            SeriesSample wrap;
            wrap.values = values;
            const LogWalkSummary w = log_abs_increment_diagnostic(wrap, threshold);
            json jw = w;
            jw["threshold"] = threshold;
            out.log_walk = jw;
            out.scalars.push_back({label + "_log_walk_mean", w.mean_increment});
        } catch (const std::exception& e) {
            out.notes.push_back(label + " log walk: " + std::string(e.what()));
        }
    }
    if (a.moment_probe_p > 0.0) {
        try {
            const MagnitudeSample mags = positive_magnitudes(values);
            json jp = moment_probe(mags.values, a.moment_probe_p);
            jp["order"] = a.moment_probe_p;
            out.moment_probe = jp;
        } catch (const std::exception& e) {
            out.notes.push_back(label + " moment probe: " + std::string(e.what()));
        }
    }
    return out;
}

/// Tail-transfer probe: the threshold is the input law's q-quantile
/// (estimated from a matched synthetic sample) and the ratio compares the
/// series' exceedance rate against the input's 1-q.
inline json empirical_tail_ratio(const std::vector<double>& values,
                                 const DistributionSpec& input_law, double q, RngState rng) {
    std::vector<double> inputs(values.size());
    for (double& x : inputs) x = std::fabs(input_law.sample(rng));
    const double threshold = quantile(std::move(inputs), q);
    std::size_t exceed = 0;
    for (double v : values)
        if (std::fabs(v) > threshold) ++exceed;
    const double n = static_cast<double>(values.size());
    const double p_hat = static_cast<double>(exceed) / n;
    const double ratio = p_hat / (1.0 - q);
    const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n) / (1.0 - q);
    return json{{"quantile", q},
                {"threshold", threshold},
                {"ratio", ratio},
                {"stderr", se},
                {"exceedances", exceed}};
}

class ReplicaSpread {
public:
    void add(const std::vector<std::pair<std::string, double>>& scalars) {
        for (const auto& [k, v] : scalars) vals_[k].push_back(v);
    }

    json to_json() const {
        if (vals_.empty()) return nullptr;
        json out;
        for (const auto& [k, v] : vals_) {
            const double n = static_cast<double>(v.size());
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= n;
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            const double se = v.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
            out[k] = json{{"mean", mean},
                          {"stderr", se},
                          {"min", *std::min_element(v.begin(), v.end())},
                          {"max", *std::max_element(v.begin(), v.end())},
                          {"replicas", v.size()}};
        }
        return out;
    }

private:
    std::map<std::string, std::vector<double>> vals_;
};

/// Run `jobs(i)` for i in [0, count) on up to hardware_concurrency threads,
/// collecting results in index order. Exceptions from any job propagate.
template <typename Out, typename Job>
inline std::vector<Out> run_replicas(std::size_t count, Job job) {
    std::vector<Out> outs;
    outs.reserve(count);
    if (count == 1) {
        outs.push_back(job(0));
        return outs;
    }
    const std::size_t par =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                       count));
    std::size_t next = 0;
    while (next < count) {
        const std::size_t batch = std::min(par, count - next);
        std::vector<std::future<Out>> futs;
        futs.reserve(batch);
        for (std::size_t j = 0; j < batch; ++j)
            futs.push_back(std::async(std::launch::async, job, next + j));
        for (auto& f : futs) outs.push_back(f.get());
        next += batch;
    }
    return outs;
}

} // namespace detail

struct ScenarioResult {
    json summary;
    std::string summary_path;
};

namespace detail {

inline json recurrence_config_analysis(const RecurrenceSpec& spec, const AnalysisSettings& a,
                                       std::vector<std::string>& warnings) {
    json block{{"solver_root", nullptr},
               {"stationarity", nullptr},
               {"kesten", nullptr},
               {"grincevicius_predicted", nullptr}};
    std::optional<double> root;
    if (a.solve_exponent) {
        try {
            ExponentSolveOptions opts;
            opts.mu_max = a.mu_max;
            opts.mc_budget = a.mc_budget;
            root = solve_exponent(spec.a_law, opts);
            block["solver_root"] = to_json_opt(root);
        } catch (const std::domain_error& e) {
            warnings.push_back(std::string("solver: ") + e.what());
        }
    }
    if (a.stationarity) {
        const StationarityReport st = check_stationarity(spec, a.mc_budget);
        block["stationarity"] = st;
        if (st.verdict == StationarityVerdict::nonstationary)
            warnings.push_back("recurrence: E(ln|a|) >= 0; the series has no stationary law");
    }
    if (a.check_kesten) {
        const double mu = a.mu > 0.0 ? a.mu : root.value_or(0.0);
        if (mu > 0.0) {
            block["kesten"] = check_kesten(spec, mu, a.mc_budget);
        } else {
            warnings.push_back(
                "kesten: no exponent to test (solver found no root and [analysis] mu is unset)");
        }
    }
    if (a.grincevicius_mu > 0.0) {
        try {
            block["grincevicius_predicted"] =
                grincevicius_predict(spec.a_law, a.grincevicius_mu,
                                     spec.input_mode == InputMode::coupled, a.mc_budget);
        } catch (const std::domain_error& e) {
            warnings.push_back(std::string("tail transfer: ") + e.what());
        }
    }
    return block;
}

inline json market_feedback_analysis(const MarketConfig& cfg, const AnalysisSettings& a,
                                     std::vector<std::string>& warnings) {
    json block{{"law", nullptr}, {"solver_root", nullptr}};
    if (cfg.price_rule != PriceRule::impact) return block;
    const auto law = impact_feedback_law(cfg);
    if (!law) {
        warnings.push_back(
            "feedback: liquidity law is not constant, so the per-step feedback has no closed "
            "law; exponent solving skipped");
        return block;
    }
    block["law"] = law->str();
    if (a.solve_exponent) {
        try {
            ExponentSolveOptions opts;
            opts.mu_max = a.mu_max;
            opts.mc_budget = a.mc_budget;
            block["solver_root"] = to_json_opt(solve_exponent(*law, opts));
        } catch (const std::domain_error& e) {
            warnings.push_back(std::string("feedback solver: ") + e.what());
        }
    }
    return block;
}

} // namespace detail

inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    json summary;
    summary["scenario"] = cfg.name;
    summary["seed"] = cfg.run.seed;
    summary["replicas"] = cfg.run.replicas;
    summary["run"] = json{{"length", cfg.run.length}, {"burn_in", cfg.run.burn_in}};
    summary["series"] =
        json{{"recurrence", nullptr}, {"market", nullptr}, {"network", nullptr}};
    summary["recurrence"] = nullptr;
    summary["market"] = nullptr;
    summary["network"] = nullptr;
    summary["replica_spread"] = nullptr;

    std::vector<std::string> warnings = cfg.warnings;
    detail::ReplicaSpread spread;
    const AnalysisSettings& a = cfg.analysis;
    const RunSettings& run = cfg.run;

    if (cfg.recurrence) {
        const RecurrenceSpec& spec = *cfg.recurrence;
        json block = detail::recurrence_config_analysis(spec, a, warnings);

        struct Out {
            detail::SeriesBlocks blocks;
            json ratio = nullptr;
        };
        auto job = [&](std::size_t i) -> Out {
            RngState rng(run.seed, i);
            const SeriesSample s = simulate_path(spec, run.length, run.burn_in, rng);
            Out out;
            out.blocks = detail::analyze_series(s.values, a, "r");
            if (a.grincevicius_mu > 0.0) {
                out.ratio = detail::empirical_tail_ratio(s.values, spec.input_law,
                                                         a.ratio_quantile, rng.split(0xA110));
                out.blocks.scalars.push_back(
                    {"r_tail_ratio", out.ratio["ratio"].get<double>()});
            }
            if (i == 0)
                write_series_csv(s, (fs::path(out_dir) / "recurrence.csv").string());
            return out;
        };
        auto outs = detail::run_replicas<Out>(run.replicas, job);
        for (const auto& o : outs) spread.add(o.blocks.scalars);
        warnings.insert(warnings.end(), outs[0].blocks.notes.begin(),
                        outs[0].blocks.notes.end());
        block["tail"] = outs[0].blocks.tail;
        block["moments"] = outs[0].blocks.moments;
        block["log_walk"] = outs[0].blocks.log_walk;
        block["moment_probe"] = outs[0].blocks.moment_probe;
        block["grincevicius_empirical"] = outs[0].ratio;
        summary["recurrence"] = block;
        summary["series"]["recurrence"] = "recurrence.csv";
    }

    if (cfg.market) {
        const MarketScenario& ms = *cfg.market;
        json block{{"kind", nullptr},        {"final_price", nullptr},
                   {"growth_factor", nullptr}, {"fixed_point", nullptr},
                   {"feedback", nullptr},    {"tail", nullptr},
                   {"moments", nullptr},     {"log_walk", nullptr},
                   {"moment_probe", nullptr}, {"volume_relation", nullptr}};
        const double rho = ms.config.rho();

        if (ms.kind == MarketPathKind::bubble) {
            block["kind"] = "bubble";
            const std::vector<double> b = bubble_path(rho, ms.b0, run.length);
            write_values_csv(b, "mispricing", (fs::path(out_dir) / "market.csv").string());
            block["growth_factor"] = 1.0 + rho;
            block["final_price"] = b.back();
        } else if (ms.kind == MarketPathKind::negative_feedback) {
            block["kind"] = "negative_feedback";
            const std::vector<double> p =
                negative_feedback_path(rho, ms.config.fundamental_value, ms.config.p0,
                                       run.length);
            write_values_csv(p, "price", (fs::path(out_dir) / "market.csv").string());
            block["fixed_point"] = ms.config.fundamental_value;
            block["final_price"] = p.back();
            if (std::fabs(1.0 - rho) > 1.0)
                warnings.push_back("negative feedback: |1 - rho| > 1, the price oscillates "
                                   "away from the fundamental");
        } else {
            block["kind"] = "simulate";
            block["feedback"] = detail::market_feedback_analysis(ms.config, a, warnings);

            struct Out {
                detail::SeriesBlocks blocks;
                json volume_relation = nullptr;
                double final_price = 0.0;
            };
            auto job = [&](std::size_t i) -> Out {
                RngState rng(run.seed, i);
                const MarketPath path =
                    simulate_market(ms.config, run.burn_in + run.length, rng);
                const std::vector<double> ret(path.ret.begin() +
                                                  static_cast<std::ptrdiff_t>(run.burn_in),
                                              path.ret.end());
                Out out;
                out.blocks = detail::analyze_series(ret, a, "r");
                out.final_price = path.price.back() * (1.0 + path.ret.back());
                if (a.volume_relation) {
                    try {
                        const std::vector<double> q(path.excess_demand.begin() +
                                                        static_cast<std::ptrdiff_t>(run.burn_in),
                                                    path.excess_demand.end());
                        const std::vector<double> v(path.volume.begin() +
                                                        static_cast<std::ptrdiff_t>(run.burn_in),
                                                    path.volume.end());
                        out.volume_relation = volume_imbalance_relation(v, q);
                    } catch (const std::exception& e) {
                        out.blocks.notes.push_back(std::string("volume relation: ") + e.what());
                    }
                }
                if (i == 0)
                    write_market_csv(path, (fs::path(out_dir) / "market.csv").string());
                return out;
            };
            auto outs = detail::run_replicas<Out>(run.replicas, job);
            for (const auto& o : outs) spread.add(o.blocks.scalars);
            warnings.insert(warnings.end(), outs[0].blocks.notes.begin(),
                            outs[0].blocks.notes.end());
            block["tail"] = outs[0].blocks.tail;
            block["moments"] = outs[0].blocks.moments;
            block["log_walk"] = outs[0].blocks.log_walk;
            block["moment_probe"] = outs[0].blocks.moment_probe;
            block["volume_relation"] = outs[0].volume_relation;
            block["final_price"] = outs[0].final_price;
        }
        summary["market"] = block;
        summary["series"]["market"] = "market.csv";
    }

    if (cfg.network) {
        const MatrixRecurrenceSpec& spec = cfg.network->spec;
        json block{{"mode", spec.mode == MatrixMode::opinion_network ? "opinion" : "cross_asset"},
                   {"spectral_radius", nullptr},
                   {"strongly_connected", nullptr},
                   {"influence_row_sums", nullptr},
                   {"norm_condition", nullptr},
                   {"matrix_exponent", nullptr},
                   {"tail", nullptr},
                   {"component_tails", nullptr},
                   {"moments", nullptr}};

        const auto kind = spec.matrix_gen.kind();
        const bool has_base = kind == MatrixGenerator::Kind::constant ||
                              kind == MatrixGenerator::Kind::jittered_base;
        if (has_base) {
            const WeightMatrix& base = spec.matrix_gen.base();
            block["spectral_radius"] = spectral_radius(base);
            block["strongly_connected"] = strong_connectivity(base);
            if (spec.mode == MatrixMode::opinion_network) {
                try {
                    const WeightMatrix k_mat = multiplier_matrix(base);
                    std::vector<double> sums(k_mat.size());
                    for (std::size_t i = 0; i < k_mat.size(); ++i) sums[i] = k_mat.row_sum(i);
                    block["influence_row_sums"] = sums;
                } catch (const singular_error& e) {
                    warnings.push_back(std::string("influence matrix: ") + e.what());
                }
            }
        }
        if (a.matrix_exponent) {
            block["matrix_exponent"] = estimate_matrix_exponent(
                spec.matrix_gen, a.mu_max, 1e-6, a.chains, a.horizon,
                RngState(run.seed, 0x33AA));
        }

        struct Out {
            detail::SeriesBlocks blocks;
            json component_tails = nullptr;
            json norm_condition = nullptr;
        };
        auto job = [&](std::size_t i) -> Out {
            const VectorPath path =
                simulate_vector_path(spec, run.length, run.burn_in, RngState(run.seed, i));
            Out out;
            out.blocks = detail::analyze_series(path.average, a, "avg");
            out.norm_condition = json{{"ok", path.norm_condition_ok},
                                      {"delta", path.norm_delta},
                                      {"moment", path.norm_moment}};
            if (a.tail) {
                json comps = json::array();
                for (const auto& c : path.components) {
                    const MagnitudeSample mags = positive_magnitudes(c);
                    try {
                        comps.push_back(
                            hill_estimator(mags.values, default_hill_order(mags.values.size()))
                                .exponent);
                    } catch (const std::exception&) {
                        comps.push_back(nullptr);
                    }
                }
                out.component_tails = comps;
            }
            if (i == 0)
                write_vector_csv(path, (fs::path(out_dir) / "network.csv").string());
            return out;
        };
        auto outs = detail::run_replicas<Out>(run.replicas, job);
        for (const auto& o : outs) spread.add(o.blocks.scalars);
        warnings.insert(warnings.end(), outs[0].blocks.notes.begin(),
                        outs[0].blocks.notes.end());
        block["tail"] = outs[0].blocks.tail;
        block["moments"] = outs[0].blocks.moments;
        block["norm_condition"] = outs[0].norm_condition;
        block["component_tails"] = outs[0].component_tails;
        if (!outs[0].norm_condition["ok"].get<bool>())
            warnings.push_back("network: no delta in the probe grid had E(||matrix||^delta) < "
                               "1; stationarity is not guaranteed");
        summary["network"] = block;
        summary["series"]["network"] = "network.csv";
    }

    if (run.replicas > 1) summary["replica_spread"] = spread.to_json();
    summary["warnings"] = warnings;

    ScenarioResult result;
    result.summary = summary;
    result.summary_path = (fs::path(out_dir) / "summary.json").string();
    std::ofstream out(result.summary_path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + result.summary_path + "' for writing");
    out << summary.dump(2) << '\n';
    return result;
}

/// Exponent report without simulation: the recurrence feedback law and, for
/// impact markets, the induced per-step feedback.
inline json solve_exponent_report(const ScenarioConfig& cfg) {
    json out{{"scenario", cfg.name}, {"law", nullptr}, {"root", nullptr},
             {"stationarity", nullptr}, {"notes", json::array()}};
    std::optional<DistributionSpec> law;
    if (cfg.recurrence) {
        law = cfg.recurrence->a_law;
    } else if (cfg.market && cfg.market->config.price_rule == PriceRule::impact) {
        law = impact_feedback_law(cfg.market->config);
        if (!law)
            out["notes"].push_back("liquidity law is not constant; no closed feedback law");
    } else {
        out["notes"].push_back("no scalar feedback law in this config (need [recurrence], or "
                               "[market] with price_rule = impact)");
    }
    if (!law) return out;
    out["law"] = law->str();
    ExponentSolveOptions opts;
    opts.mu_max = cfg.analysis.mu_max;
    opts.mc_budget = cfg.analysis.mc_budget;
    try {
        const auto root = solve_exponent(*law, opts);
        out["root"] = to_json_opt(root);
        if (!root)
            out["notes"].push_back("E(|a|^mu) stays below 1 up to mu_max; no finite root");
    } catch (const std::domain_error& e) {
        out["notes"].push_back(e.what());
    }
    if (cfg.recurrence)
        out["stationarity"] = check_stationarity(*cfg.recurrence, cfg.analysis.mc_budget);
    return out;
}

/// Tail-theorem condition report for the configured recurrence.
inline json kesten_report_json(const ScenarioConfig& cfg) {
    if (!cfg.recurrence)
        throw config_error(cfg.name + ": check-kesten requires a [recurrence] section");
    const RecurrenceSpec& spec = *cfg.recurrence;
    json out{{"scenario", cfg.name}, {"mu", nullptr}, {"kesten", nullptr},
             {"notes", json::array()}};
    double mu = cfg.analysis.mu;
    if (mu <= 0.0) {
        ExponentSolveOptions opts;
        opts.mu_max = cfg.analysis.mu_max;
        opts.mc_budget = cfg.analysis.mc_budget;
        try {
            const auto root = solve_exponent(spec.a_law, opts);
            if (root) {
                mu = *root;
                out["notes"].push_back("mu taken from the exponent solver");
            }
        } catch (const std::domain_error& e) {
            out["notes"].push_back(e.what());
        }
    }
    if (mu <= 0.0) {
        out["notes"].push_back(
            "no exponent to test: set [analysis] mu or use a law with a unit-moment root");
        return out;
    }
    out["mu"] = mu;
    out["kesten"] = check_kesten(spec, mu, cfg.analysis.mc_budget);
    return out;
}

/// Static network facts plus the product-chain exponent; no path simulation.
inline json network_report(const ScenarioConfig& cfg) {
    if (!cfg.network)
        throw config_error(cfg.name + ": the network command requires a [network] section");
    const MatrixRecurrenceSpec& spec = cfg.network->spec;
    json out{{"scenario", cfg.name},
             {"mode", spec.mode == MatrixMode::opinion_network ? "opinion" : "cross_asset"},
             {"dimension", spec.matrix_gen.dimension()},
             {"spectral_radius", nullptr},
             {"strongly_connected", nullptr},
             {"influence_row_sums", nullptr},
             {"matrix_exponent", nullptr},
             {"notes", json::array()}};
    const auto kind = spec.matrix_gen.kind();
    if (kind == MatrixGenerator::Kind::constant || kind == MatrixGenerator::Kind::jittered_base) {
        const WeightMatrix& base = spec.matrix_gen.base();
        out["spectral_radius"] = spectral_radius(base);
        out["strongly_connected"] = strong_connectivity(base);
        if (spec.mode == MatrixMode::opinion_network) {
            try {
                const WeightMatrix k_mat = multiplier_matrix(base);
                std::vector<double> sums(k_mat.size());
                for (std::size_t i = 0; i < k_mat.size(); ++i) sums[i] = k_mat.row_sum(i);
                out["influence_row_sums"] = sums;
            } catch (const singular_error& e) {
                out["notes"].push_back(e.what());
            }
        }
    }
    if (cfg.analysis.matrix_exponent)
        out["matrix_exponent"] =
            estimate_matrix_exponent(spec.matrix_gen, cfg.analysis.mu_max, 1e-6,
                                     cfg.analysis.chains, cfg.analysis.horizon,
                                     RngState(cfg.run.seed, 0x33AA));
    return out;
}

} // namespace wildsim
