#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wildsim/csv.hpp"
#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/market.hpp"
#include "wildsim/matrix.hpp"
#include "wildsim/recurrence.hpp"

namespace wildsim {

struct RunSettings {
    std::size_t length = 10'000;
    std::size_t burn_in = 0;
    std::uint64_t seed = 1;
    std::size_t replicas = 1;
};

enum class MarketPathKind { simulate, bubble, negative_feedback };

struct MarketScenario {
    MarketConfig config;
    MarketPathKind kind = MarketPathKind::simulate;
    double b0 = 1.0; // starting bubble size (bubble kind only)
};

struct AnalysisSettings {
    bool tail = true;             // Hill band + rank regression on magnitudes
    std::size_t tail_k = 0;       // 0 = rule-of-thumb order
    bool solve_exponent = true;   // unit-moment root of the feedback law
    bool check_kesten = false;    // tail-theorem condition report
    double mu = 0.0;              // exponent for the condition report; 0 = solver root
    bool stationarity = true;
    bool moments = false;         // mean/sd/skew/kurtosis of the series
    double log_walk_quantile = 0.0;  // >0: log-increment diagnostic above that quantile
    double grincevicius_mu = 0.0;    // >0: heavy-input tail-transfer prediction + empirics
    double ratio_quantile = 0.999;   // quantile for the empirical tail-ratio probe
    bool volume_relation = false;    // imbalance-vs-volume exponent comparison
    double moment_probe_p = 0.0;     // >0: running-moment divergence probe at this order
    std::size_t mc_budget = 1'000'000;
    bool matrix_exponent = true;  // network runs: product-chain moment root
    std::size_t horizon = 50;
    std::size_t chains = 200'000;
    double mu_max = 10.0;
};

struct NetworkScenario {
    MatrixRecurrenceSpec spec;
};

struct ScenarioConfig {
    std::string name;
    std::optional<RecurrenceSpec> recurrence;
    std::optional<MarketScenario> market;
    std::optional<NetworkScenario> network;
    AnalysisSettings analysis;
    RunSettings run;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct IniEntry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

struct IniSection {
    std::size_t line = 0;
    std::map<std::string, IniEntry> entries;
};

struct IniFile {
    std::string source;
    std::map<std::string, IniSection> sections;
};

inline IniFile parse_ini(const std::string& text, const std::string& source) {
    static const char* known[] = {"recurrence", "market", "network", "analysis", "run"};
    IniFile f;
    f.source = source;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    IniSection* cur = nullptr;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const std::string at = source + ":" + std::to_string(line_no);
        if (line[0] == '[') {
            if (line.back() != ']')
                throw config_error(at + ": section header must look like [name]");
            const std::string name = trim(line.substr(1, line.size() - 2));
            bool ok = false;
            for (const char* k : known) ok = ok || name == k;
            if (!ok)
                throw config_error(at + ": unknown section [" + name +
                                   "] (expected recurrence, market, network, analysis or run)");
            if (f.sections.count(name))
                throw config_error(at + ": duplicate section [" + name + "]");
            cur = &f.sections[name];
            cur->line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(at + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error(at + ": empty key");
        if (!cur) throw config_error(at + ": key '" + key + "' appears before any [section]");
        if (cur->entries.count(key))
            throw config_error(at + ": duplicate key '" + key + "'");
        cur->entries[key] = IniEntry{value, line_no, false};
    }
    return f;
}

/// Typed access to one section; every lookup marks its entry used, and
/// finish() rejects leftovers so misplaced keys cannot pass silently.
class SectionReader {
public:
    SectionReader(IniFile& f, std::string name, std::initializer_list<const char*> allowed)
        : source_(f.source), name_(std::move(name)) {
        auto it = f.sections.find(name_);
        sec_ = it == f.sections.end() ? nullptr : &it->second;
        if (!sec_) return;
        for (const auto& [k, e] : sec_->entries) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok)
                throw config_error(loc(e.line) + ": unknown key '" + k + "' in [" + name_ + "]");
        }
    }

    bool present() const { return sec_ != nullptr; }
    bool has(const std::string& key) const { return sec_ && sec_->entries.count(key); }
    std::size_t line() const { return sec_ ? sec_->line : 0; }

    std::string where(const std::string& key) const {
        if (sec_) {
            auto it = sec_->entries.find(key);
            if (it != sec_->entries.end()) return loc(it->second.line);
        }
        return source_;
    }

    std::string path(const std::string& key) const { return "[" + name_ + "] " + key; }

    std::optional<std::string> raw(const std::string& key) {
        if (!sec_) return std::nullopt;
        auto it = sec_->entries.find(key);
        if (it == sec_->entries.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto v = raw(key);
        return v ? *v : fallback;
    }

    double parse_double(const std::string& key, const std::string& text) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw config_error(where(key) + ": " + path(key) + ": not a number: '" + text + "'");
        }
    }

    double get_double(const std::string& key, double fallback) {
        auto v = raw(key);
        return v ? parse_double(key, *v) : fallback;
    }

    double require_double(const std::string& key) {
        auto v = raw(key);
        if (!v)
            throw config_error(source_ + ": " + path(key) + " is required");
        return parse_double(key, *v);
    }

    std::size_t get_count(const std::string& key, std::size_t fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        const double x = parse_double(key, *v);
        if (!(x >= 0.0) || x != std::floor(x) || x > 9e15)
            throw config_error(where(key) + ": " + path(key) +
                               ": expected a nonnegative integer, got '" + *v + "'");
        return static_cast<std::size_t>(x);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            if (!v->empty() && (*v)[0] == '-') throw std::invalid_argument("negative");
            const std::uint64_t x = std::stoull(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            throw config_error(where(key) + ": " + path(key) +
                               ": expected an unsigned integer, got '" + *v + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        std::string s = *v;
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
        if (s == "false" || s == "no" || s == "off" || s == "0") return false;
        throw config_error(where(key) + ": " + path(key) + ": expected true/false, got '" + *v +
                           "'");
    }

    std::optional<DistributionSpec> get_dist(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        try {
            return parse_distribution(*v);
        } catch (const config_error& err) {
            throw config_error(where(key) + ": " + path(key) + ": " + err.what());
        }
    }

    DistributionSpec require_dist(const std::string& key) {
        auto v = get_dist(key);
        if (!v)
            throw config_error(source_ + ": " + path(key) + " is required");
        return *v;
    }

    std::vector<DistributionSpec> get_dist_list(const std::string& key) {
        auto v = raw(key);
        std::vector<DistributionSpec> laws;
        if (!v) return laws;
        std::string cur;
        std::vector<std::string> parts;
        for (char c : *v) {
            if (c == '|') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        for (const auto& p : parts) {
            const std::string t = trim(p);
            if (t.empty())
                throw config_error(where(key) + ": " + path(key) + ": empty entry in law list");
            try {
                laws.push_back(parse_distribution(t));
            } catch (const config_error& err) {
                throw config_error(where(key) + ": " + path(key) + ": " + err.what());
            }
        }
        return laws;
    }

    /// Index into `choices` of the value (or of `fallback` when absent).
    std::size_t get_choice(const std::string& key, std::initializer_list<const char*> choices,
                           const std::string& fallback) {
        const std::string v = get_string(key, fallback);
        std::size_t i = 0;
        for (const char* c : choices) {
            if (v == c) return i;
            ++i;
        }
        std::string opts;
        for (const char* c : choices) opts += (opts.empty() ? "" : ", ") + std::string(c);
        throw config_error(where(key) + ": " + path(key) + ": expected one of " + opts +
                           " (got '" + v + "')");
    }

    void finish(const std::string& context) const {
        if (!sec_) return;
        for (const auto& [k, e] : sec_->entries)
            if (!e.used)
                throw config_error(loc(e.line) + ": key '" + k + "' in [" + name_ +
                                   "] does not apply " + context);
    }

private:
    std::string loc(std::size_t line) const { return source_ + ":" + std::to_string(line); }

    std::string source_;
    std::string name_;
    IniSection* sec_ = nullptr;
};

inline std::optional<RecurrenceSpec> build_recurrence(SectionReader& sec) {
    if (!sec.present()) return std::nullopt;
    DistributionSpec a = sec.require_dist("a");
    const std::size_t mode_ix = sec.get_choice("input_mode", {"direct", "coupled"}, "direct");
    const InputMode mode = mode_ix == 0 ? InputMode::direct : InputMode::coupled;
    std::optional<DistributionSpec> input;
    if (mode == InputMode::direct) {
        if (sec.has("b"))
            throw config_error(sec.where("b") + ": " + sec.path("b") +
                               ": only applies with input_mode = coupled (use e here)");
        input = sec.get_dist("e");
        if (!input) input = DistributionSpec::normal(0.0, 1.0);
    } else {
        if (sec.has("e"))
            throw config_error(sec.where("e") + ": " + sec.path("e") +
                               ": only applies with input_mode = direct (use b here)");
        input = sec.get_dist("b");
        if (!input)
            throw config_error(sec.where("b") + ": " + sec.path("b") +
                               " is required with input_mode = coupled");
    }
    const std::size_t lag = sec.get_count("lag", 1);
    if (lag > 1)
        throw config_error(sec.where("lag") + ": " + sec.path("lag") + ": must be 0 or 1");
    const double r0 = sec.get_double("r0", 0.0);
    sec.finish("here");
    return RecurrenceSpec(std::move(a), mode, std::move(*input), static_cast<int>(lag), r0);
}

inline std::optional<MarketScenario> build_market(SectionReader& sec,
                                                  std::vector<std::string>& warnings) {
    if (!sec.present()) return std::nullopt;
    MarketScenario out;
    const std::size_t kind_ix =
        sec.get_choice("kind", {"simulate", "bubble", "negative_feedback"}, "simulate");
    out.kind = static_cast<MarketPathKind>(kind_ix);

    MarketConfig& cfg = out.config;
    cfg.alpha = sec.get_double("alpha", cfg.alpha);
    cfg.gamma = sec.get_double("gamma", cfg.gamma);

    if (out.kind == MarketPathKind::bubble) {
        out.b0 = sec.get_double("b0", 1.0);
        if (!(cfg.alpha > 0.0) || !(cfg.gamma > 0.0))
            throw config_error(sec.where("gamma") + ": " + sec.path("gamma") +
                               ": a bubble needs rho = gamma/alpha > 0");
        if (!(out.b0 > 0.0))
            throw config_error(sec.where("b0") + ": " + sec.path("b0") + ": must be positive");
        sec.finish("(kind = bubble uses alpha, gamma, b0)");
        return out;
    }
    if (out.kind == MarketPathKind::negative_feedback) {
        cfg.fundamental_value = sec.get_double("fundamental", cfg.fundamental_value);
        cfg.p0 = sec.get_double("p0", cfg.p0);
        if (!(cfg.alpha > 0.0) || !(cfg.gamma > 0.0))
            throw config_error(sec.where("gamma") + ": " + sec.path("gamma") +
                               ": the fixed-point path needs rho = gamma/alpha > 0");
        if (!(cfg.fundamental_value > 0.0))
            throw config_error(sec.where("fundamental") + ": " + sec.path("fundamental") +
                               ": must be positive");
        if (!(cfg.p0 > 0.0))
            throw config_error(sec.where("p0") + ": " + sec.path("p0") + ": must be positive");
        sec.finish("(kind = negative_feedback uses alpha, gamma, fundamental, p0)");
        return out;
    }

    cfg.beta = sec.get_double("beta", cfg.beta);
    cfg.price_rule = sec.get_choice("price_rule", {"clearing", "impact"}, "clearing") == 0
                         ? PriceRule::clearing
                         : PriceRule::impact;
    cfg.expectation_model =
        sec.get_choice("expectation_model", {"prediction_error", "confidence"},
                       "prediction_error") == 0
            ? ExpectationModel::prediction_error
            : ExpectationModel::confidence;
    if (auto d = sec.get_dist("expectation_law")) cfg.expectation_law = std::move(*d);
    cfg.fundamental_value = sec.get_double("fundamental", cfg.fundamental_value);
    if (auto d = sec.get_dist("guess_law")) cfg.guess_law = std::move(*d);
    if (auto d = sec.get_dist("n_law")) cfg.n_law = std::move(*d);
    if (auto d = sec.get_dist("l_law")) cfg.l_law = std::move(*d);
    cfg.p0 = sec.get_double("p0", cfg.p0);
    cfg.demand_sign =
        sec.get_choice("demand", {"speculative", "law_of_demand"}, "speculative") == 0
            ? DemandSign::speculative
            : DemandSign::law_of_demand;
    sec.finish("here");

    try {
        auto w = cfg.validate();
        warnings.insert(warnings.end(), w.begin(), w.end());
    } catch (const config_error& err) {
        throw config_error("[market] at line " + std::to_string(sec.line()) + ": " + err.what());
    }
    return out;
}

inline WeightMatrix parse_base_matrix(SectionReader& sec, const std::string& key,
                                      const std::string& value, const std::string& base_dir) {
    if (value.rfind("csv:", 0) == 0) {
        const std::filesystem::path p(trim(value.substr(4)));
        const auto full = p.is_absolute() ? p : std::filesystem::path(base_dir) / p;
        return read_matrix_csv(full.string());
    }
    const auto open = value.find('(');
    const auto close = value.rfind(')');
    std::string name, args;
    if (open != std::string::npos && close != std::string::npos && close > open) {
        name = trim(value.substr(0, open));
        args = value.substr(open + 1, close - open - 1);
    }
    if (name != "ring" && name != "full")
        throw config_error(sec.where(key) + ": " + sec.path(key) +
                           ": expected ring(n, w), full(n, w) or csv:<path>, got '" + value +
                           "'");
    const auto comma = args.find(',');
    if (comma == std::string::npos)
        throw config_error(sec.where(key) + ": " + sec.path(key) + ": " + name +
                           " takes (size, weight)");
    const double nd = sec.parse_double(key, trim(args.substr(0, comma)));
    const double w = sec.parse_double(key, trim(args.substr(comma + 1)));
    if (!(nd >= 2.0) || nd != std::floor(nd) || nd > 4096.0)
        throw config_error(sec.where(key) + ": " + sec.path(key) +
                           ": size must be an integer in [2, 4096]");
    if (!(w >= 0.0))
        throw config_error(sec.where(key) + ": " + sec.path(key) +
                           ": weight must be nonnegative");
    const std::size_t n = static_cast<std::size_t>(nd);
    WeightMatrix m(n);
    if (name == "ring") {
        for (std::size_t i = 0; i < n; ++i) m.at(i, (i + 1) % n) = w;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) m.at(i, j) = w;
    }
    return m;
}

inline std::optional<NetworkScenario> build_network(SectionReader& sec,
                                                    const std::string& base_dir) {
    if (!sec.present()) return std::nullopt;
    const std::size_t mode_ix = sec.get_choice("mode", {"opinion", "cross_asset"}, "opinion");
    const MatrixMode mode =
        mode_ix == 0 ? MatrixMode::opinion_network : MatrixMode::cross_asset;

    std::string gen_default = "constant";
    if (sec.has("jitter_sd")) gen_default = "jittered";
    if (sec.has("a_law")) gen_default = "scalar_diagonal";
    if (sec.has("diag_laws")) gen_default = "diagonal_laws";
    const std::size_t gen_ix = sec.get_choice(
        "generator", {"constant", "jittered", "scalar_diagonal", "diagonal_laws"}, gen_default);

    std::optional<MatrixGenerator> gen;
    if (gen_ix <= 1) {
        auto base_val = sec.raw("base");
        if (!base_val)
            throw config_error(sec.where("base") + ": " + sec.path("base") +
                               " is required for constant/jittered generators");
        WeightMatrix base = parse_base_matrix(sec, "base", *base_val, base_dir);
        if (mode == MatrixMode::opinion_network) {
            try {
                base.validate_opinion_network();
            } catch (const config_error& err) {
                throw config_error(sec.where("base") + ": " + sec.path("base") + ": " +
                                   err.what());
            }
        }
        if (gen_ix == 0) {
            gen = MatrixGenerator::constant(std::move(base));
        } else {
            const double sd = sec.require_double("jitter_sd");
            const bool renorm =
                sec.get_bool("renormalize", mode == MatrixMode::opinion_network);
            if (mode == MatrixMode::opinion_network && !renorm)
                throw config_error(sec.where("renormalize") + ": " + sec.path("renormalize") +
                                   ": opinion mode requires row renormalization to keep row "
                                   "sums valid (use mode = cross_asset to drop it)");
            if (!(sd > 0.0))
                throw config_error(sec.where("jitter_sd") + ": " + sec.path("jitter_sd") +
                                   ": must be positive");
            gen = MatrixGenerator::jittered(std::move(base), sd, renorm);
        }
    } else {
        if (mode == MatrixMode::opinion_network)
            throw config_error(sec.where("generator") + ": " + sec.path("generator") +
                               ": diagonal generators put weight on the diagonal, which the "
                               "opinion invariants forbid; use mode = cross_asset");
        if (gen_ix == 2) {
            DistributionSpec a = sec.require_dist("a_law");
            const std::size_t n = sec.get_count("size", 0);
            if (n < 1)
                throw config_error(sec.where("size") + ": " + sec.path("size") +
                                   " is required (components) for scalar_diagonal");
            gen = MatrixGenerator::scalar_diagonal(std::move(a), n);
        } else {
            std::vector<DistributionSpec> laws = sec.get_dist_list("diag_laws");
            if (laws.empty())
                throw config_error(sec.where("diag_laws") + ": " + sec.path("diag_laws") +
                                   " is required for diagonal_laws (separate laws with |)");
            const double off = sec.get_double("off_diagonal", 0.0);
            const std::size_t n = laws.size();
            WeightMatrix base(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) base.at(i, j) = off;
            gen = MatrixGenerator::diagonal_laws(std::move(laws), std::move(base));
        }
    }

    const std::size_t in_ix = sec.get_choice("input", {"iid", "coupled"}, "iid");
    std::vector<DistributionSpec> in_laws = sec.get_dist_list("input_laws");
    if (in_laws.empty()) in_laws.push_back(DistributionSpec::normal(0.0, 0.02));
    VectorInputGenerator input = in_ix == 0
                                     ? VectorInputGenerator::iid(std::move(in_laws))
                                     : VectorInputGenerator::coupled_diagonal(std::move(in_laws));

    const double init = sec.get_double("initial", 0.0);
    std::vector<double> initial(gen->dimension(), init);
    sec.finish("here");

    NetworkScenario out{
        MatrixRecurrenceSpec{std::move(*gen), std::move(input), mode, std::move(initial)}};
    return out;
}

inline AnalysisSettings build_analysis(SectionReader& sec) {
    AnalysisSettings a;
    if (!sec.present()) return a;
    a.tail = sec.get_bool("tail", a.tail);
    a.tail_k = sec.get_count("tail_k", a.tail_k);
    a.solve_exponent = sec.get_bool("solve_exponent", a.solve_exponent);
    a.check_kesten = sec.get_bool("check_kesten", a.check_kesten);
    a.mu = sec.get_double("mu", a.mu);
    a.stationarity = sec.get_bool("stationarity", a.stationarity);
    a.moments = sec.get_bool("moments", a.moments);
    a.log_walk_quantile = sec.get_double("log_walk_quantile", a.log_walk_quantile);
    a.grincevicius_mu = sec.get_double("grincevicius_mu", a.grincevicius_mu);
    a.ratio_quantile = sec.get_double("ratio_quantile", a.ratio_quantile);
    a.volume_relation = sec.get_bool("volume_relation", a.volume_relation);
    a.moment_probe_p = sec.get_double("moment_probe_p", a.moment_probe_p);
    a.mc_budget = sec.get_count("mc_budget", a.mc_budget);
    a.matrix_exponent = sec.get_bool("matrix_exponent", a.matrix_exponent);
    a.horizon = sec.get_count("horizon", a.horizon);
    a.chains = sec.get_count("chains", a.chains);
    a.mu_max = sec.get_double("mu_max", a.mu_max);

    if (!(a.log_walk_quantile >= 0.0 && a.log_walk_quantile < 1.0))
        throw config_error(sec.where("log_walk_quantile") + ": " + sec.path("log_walk_quantile") +
                           ": must lie in [0, 1)");
    if (!(a.ratio_quantile > 0.0 && a.ratio_quantile < 1.0))
        throw config_error(sec.where("ratio_quantile") + ": " + sec.path("ratio_quantile") +
                           ": must lie in (0, 1)");
    if (a.mu < 0.0)
        throw config_error(sec.where("mu") + ": " + sec.path("mu") + ": must be nonnegative");
    if (a.grincevicius_mu < 0.0)
        throw config_error(sec.where("grincevicius_mu") + ": " + sec.path("grincevicius_mu") +
                           ": must be nonnegative");
    if (a.moment_probe_p < 0.0)
        throw config_error(sec.where("moment_probe_p") + ": " + sec.path("moment_probe_p") +
                           ": must be nonnegative");
    if (!(a.mu_max > 0.0))
        throw config_error(sec.where("mu_max") + ": " + sec.path("mu_max") +
                           ": must be positive");
    if (a.mc_budget < 100)
        throw config_error(sec.where("mc_budget") + ": " + sec.path("mc_budget") +
                           ": must be at least 100");
    sec.finish("here");
    return a;
}

inline RunSettings build_run(SectionReader& sec) {
    RunSettings r;
    if (!sec.present()) return r;
    r.length = sec.get_count("length", r.length);
    r.burn_in = sec.get_count("burn_in", r.burn_in);
    r.seed = sec.get_u64("seed", r.seed);
    r.replicas = sec.get_count("replicas", r.replicas);
    if (r.length < 1)
        throw config_error(sec.where("length") + ": " + sec.path("length") +
                           ": must be at least 1");
    if (r.length + r.burn_in > 200'000'000)
        throw config_error(sec.where("length") + ": " + sec.path("length") +
                           ": length + burn_in must stay within 2e8");
    if (r.replicas < 1 || r.replicas > 1024)
        throw config_error(sec.where("replicas") + ": " + sec.path("replicas") +
                           ": must lie in [1, 1024]");
    sec.finish("here");
    return r;
}

} // namespace detail

inline ScenarioConfig parse_scenario_text(const std::string& text, const std::string& source,
                                          const std::string& base_dir = ".") {
    detail::IniFile ini = detail::parse_ini(text, source);
    ScenarioConfig cfg;
    cfg.name = source;

    detail::SectionReader rec(ini, "recurrence", {"a", "input_mode", "e", "b", "lag", "r0"});
    detail::SectionReader mkt(ini, "market",
                              {"kind", "alpha", "gamma", "beta", "price_rule",
                               "expectation_model", "expectation_law", "fundamental",
                               "guess_law", "n_law", "l_law", "p0", "demand", "b0"});
    detail::SectionReader net(ini, "network",
                              {"mode", "base", "generator", "jitter_sd", "renormalize", "a_law",
                               "size", "diag_laws", "off_diagonal", "input", "input_laws",
                               "initial"});
    detail::SectionReader ana(ini, "analysis",
                              {"tail", "tail_k", "solve_exponent", "check_kesten", "mu",
                               "stationarity", "moments", "log_walk_quantile", "grincevicius_mu",
                               "ratio_quantile", "volume_relation", "moment_probe_p", "mc_budget",
                               "matrix_exponent", "horizon", "chains", "mu_max"});
    detail::SectionReader run(ini, "run", {"length", "burn_in", "seed", "replicas"});

    cfg.recurrence = detail::build_recurrence(rec);
    cfg.market = detail::build_market(mkt, cfg.warnings);
    cfg.network = detail::build_network(net, base_dir);
    cfg.analysis = detail::build_analysis(ana);
    cfg.run = detail::build_run(run);

    if (!cfg.recurrence && !cfg.market && !cfg.network)
        throw config_error(source +
                           ": a scenario needs at least one of [recurrence], [market], "
                           "[network]");
    if (cfg.analysis.check_kesten && !cfg.recurrence)
        throw config_error(source +
                           ": [analysis] check_kesten: requires a [recurrence] section");
    if (cfg.analysis.grincevicius_mu > 0.0 && !cfg.recurrence)
        throw config_error(source +
                           ": [analysis] grincevicius_mu: requires a [recurrence] section");
    if (cfg.analysis.volume_relation &&
        !(cfg.market && cfg.market->kind == MarketPathKind::simulate))
        throw config_error(source +
                           ": [analysis] volume_relation: requires a simulated [market] section");
    return cfg;
}

inline ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::filesystem::path p(path);
    ScenarioConfig cfg = parse_scenario_text(buf.str(), p.filename().string(),
                                             p.has_parent_path() ? p.parent_path().string()
                                                                 : std::string("."));
    cfg.name = p.stem().string();
    return cfg;
}

} // namespace wildsim
