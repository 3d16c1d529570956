#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/rng.hpp"

namespace wildsim {

/// Amplification of a persistent disturbance by feedback strength a:
/// k = (1 - a)^-1, the sum of the geometric echo series.
inline double multiplier(double a) {
    if (a == 1.0)
        throw singular_error("multiplier: a = 1 has no finite amplification");
    return 1.0 / (1.0 - a);
}

/// Stationary variance amplification: var(r) = k' var(e) with
/// k' = (1 - a^2)^-1.
inline double variance_multiplier(double a) {
    if (std::fabs(a) == 1.0)
        throw singular_error("variance_multiplier: |a| = 1 has no finite variance factor");
    return 1.0 / (1.0 - a * a);
}

/// Mean amplification under random feedback: k'' = (1 - E(a))^-1.
inline double mean_multiplier(double mean_a) {
    if (mean_a == 1.0)
        throw singular_error("mean_multiplier: E(a) = 1 has no finite mean factor");
    return 1.0 / (1.0 - mean_a);
}

/// Fixed point of the instantaneous (lag 0) feedback r = a r + a b, i.e.
/// r = a b / (1 - a). Exists only when the per-draw feedback is subcritical.
inline double instantaneous_solve(double a, double b) {
    if (a >= 1.0)
        throw explosion_error("instantaneous feedback a >= 1 has no fixed point");
    return a * b / (1.0 - a);
}

enum class InputMode {
    direct,  // e_t drawn from e_law, independent of a_t
    coupled, // e_t = a_t * b_t with b_t drawn from b_law
};

/// The scalar stochastic recurrence r_t = a_t r_{t-lag} + e_t. With lag 1
/// the value feeds back one step later; with lag 0 the equation is solved
/// per step at its instantaneous fixed point.
struct RecurrenceSpec {
    DistributionSpec a_law;
    InputMode input_mode;
    DistributionSpec input_law; // e_law for direct, b_law for coupled
    int lag = 1;
    double r0 = 0.0;

    RecurrenceSpec(DistributionSpec a, InputMode mode, DistributionSpec input, int lag_ = 1,
                   double r0_ = 0.0)
        : a_law(std::move(a)), input_mode(mode), input_law(std::move(input)), lag(lag_), r0(r0_) {
        if (lag != 0 && lag != 1)
            throw config_error("RecurrenceSpec: lag must be 0 or 1");
    }
};

/// A simulated series after burn-in, tagged with the stream that made it.
struct SeriesSample {
    std::vector<double> values;
    std::size_t burn_in_dropped = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Run the recurrence for burn_in + length steps and keep the last `length`
/// values. Each step draws a_t first, then the input variate. Lag-0 steps
/// with a_t >= 1 raise an explosion error carrying the step index.
inline SeriesSample simulate_path(const RecurrenceSpec& spec, std::size_t length,
                                  std::size_t burn_in, RngState rng) {
    if (length == 0)
        throw config_error("simulate_path: length must be positive");
    SeriesSample out;
    out.values.reserve(length);
    out.burn_in_dropped = burn_in;
    out.seed = rng.seed();
    out.stream_id = rng.stream_id();

    double r = spec.r0;
    const std::size_t total = burn_in + length;
    for (std::size_t t = 0; t < total; ++t) {
        const double a = spec.a_law.sample(rng);
        const double in = spec.input_law.sample(rng);
        if (spec.lag == 1) {
            const double e = spec.input_mode == InputMode::coupled ? a * in : in;
            r = a * r + e;
        } else {
            if (a >= 1.0)
                throw explosion_error("instantaneous feedback a >= 1 has no fixed point", t);
            const double e = spec.input_mode == InputMode::coupled ? a * in : in;
            r = e / (1.0 - a);
        }
        if (t >= burn_in)
            out.values.push_back(r);
    }
    return out;
}

enum class StationarityVerdict { stationary, nonstationary, undetermined };

inline const char* to_string(StationarityVerdict v) {
    switch (v) {
    case StationarityVerdict::stationary: return "stationary";
    case StationarityVerdict::nonstationary: return "nonstationary";
    case StationarityVerdict::undetermined: return "undetermined";
    }
    return "?";
}

struct StationarityReport {
    StationarityVerdict verdict = StationarityVerdict::undetermined;
    double log_a_mean = 0.0; // E(ln |a|), the contraction rate
    double log_a_std_error = 0.0;
    bool exact = false;           // closed-form E(ln |a|)
    bool zero_feedback_atom = false; // P(a = 0) > 0 forces stationarity outright
};

namespace detail {

inline bool has_atom_at_zero(const DistributionSpec& d) {
    switch (d.kind()) {
    case DistKind::constant: return d.p0() == 0.0;
    case DistKind::two_point:
        return (d.p0() == 0.0 && d.p1() > 0.0) || (d.p2() == 0.0 && d.p1() < 1.0);
    case DistKind::scaled: return d.p0() == 0.0 || has_atom_at_zero(d.base());
    case DistKind::jittered: return has_atom_at_zero(d.base());
    default: return false;
    }
}

} // namespace detail

/// Decide whether r_t = a_t r_{t-1} + e_t admits a stationary law: yes when
/// E(ln |a|) < 0 (with finite E(ln+ |e|), automatic for every supported
/// family) or when a has an atom at zero; no when E(ln |a|) > 0;
/// undetermined when the Monte Carlo confidence interval straddles zero.
inline StationarityReport check_stationarity(const RecurrenceSpec& spec, std::size_t mc_budget,
                                             RngState rng = RngState(0x57a710)) {
    StationarityReport rep;
    if (detail::has_atom_at_zero(spec.a_law)) {
        rep.zero_feedback_atom = true;
        rep.verdict = StationarityVerdict::stationary;
        rep.log_a_mean = -std::numeric_limits<double>::infinity();
        rep.exact = true;
        return rep;
    }
    const MomentValue m = log_abs_moment(spec.a_law, mc_budget, rng);
    rep.log_a_mean = m.value;
    rep.log_a_std_error = m.std_error;
    rep.exact = m.exact;
    const double half_width = m.exact ? 0.0 : 2.0 * m.std_error;
    if (m.value + half_width < 0.0)
        rep.verdict = StationarityVerdict::stationary;
    else if (m.value - half_width > 0.0)
        rep.verdict = StationarityVerdict::nonstationary;
    else
        rep.verdict = StationarityVerdict::undetermined;
    return rep;
}

/// Conditional log-magnitude walk: above a large threshold the input term
/// is negligible and ln|r_t| - ln|r_{t-1}| should behave like draws of
/// ln|a|. gaussian_fit_residual is the Kolmogorov-Smirnov distance between
/// the observed increments and a normal fitted to their mean and sd.
struct LogWalkSummary {
    double mean_increment = 0.0;
    double gaussian_fit_residual = 0.0;
    double std_error = 0.0;
    std::size_t excursions = 0;
};

namespace detail {

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace detail

inline LogWalkSummary log_abs_increment_diagnostic(const SeriesSample& sample, double threshold) {
    std::vector<double> increments;
    for (std::size_t t = 1; t < sample.values.size(); ++t) {
        const double prev = std::fabs(sample.values[t - 1]);
        const double cur = std::fabs(sample.values[t]);
        if (prev > threshold && cur > 0.0)
            increments.push_back(std::log(cur) - std::log(prev));
    }
    if (increments.size() < 2)
        throw insufficient_data_error(
            "log_abs_increment_diagnostic: too few excursions above threshold");

    LogWalkSummary out;
    out.excursions = increments.size();
    const double n = static_cast<double>(increments.size());
    double mean = 0.0;
    for (double v : increments) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : increments) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    out.mean_increment = mean;
    out.std_error = std::sqrt(var / n);

    const double sd = std::sqrt(var);
    if (sd == 0.0) {
        out.gaussian_fit_residual = 0.0;
        return out;
    }
    std::sort(increments.begin(), increments.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        const double fit = detail::normal_cdf((increments[i] - mean) / sd);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max({ks, std::fabs(fit - lo), std::fabs(fit - hi)});
    }
    out.gaussian_fit_residual = ks;
    return out;
}

} // namespace wildsim
