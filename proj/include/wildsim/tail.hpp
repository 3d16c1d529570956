#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wildsim/errors.hpp"

namespace wildsim {

/// A tail-exponent estimate from k upper order statistics. For the Hill
/// estimator std_error = exponent / sqrt(order_count); for rank regression
/// it is the least-squares slope error.
struct TailEstimate {
    double exponent = 0.0;
    std::string method;
    std::size_t order_count = 0;
    double std_error = 0.0;
    double x_min = 0.0;
};

/// Hill estimator over the k largest values: with descending order
/// statistics x_(1) >= ... >= x_(n),
///   exponent = k / sum_{i=1..k} ln(x_(i) / x_(k+1)).
/// Estimates below k = 10 are numerically valid but statistically
/// meaningless; band-based detection refuses them.
inline TailEstimate hill_estimator(std::vector<double> sample, std::size_t k) {
    const std::size_t n = sample.size();
    if (k < 1 || k >= n)
        throw insufficient_data_error("hill_estimator: requires 1 <= k < sample size");
    for (double v : sample)
        if (!(v > 0.0))
            throw std::domain_error("hill_estimator: sample must be strictly positive");
    std::nth_element(sample.begin(), sample.begin() + k, sample.end(), std::greater<>());
    const double ref = sample[k]; // x_(k+1)
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        sum += std::log(sample[i] / ref);
    if (!(sum > 0.0))
        throw numeric_error("hill_estimator: degenerate upper tail (no spread above threshold)");
    TailEstimate est;
    est.exponent = static_cast<double>(k) / sum;
    est.method = "hill";
    est.order_count = k;
    est.std_error = est.exponent / std::sqrt(static_cast<double>(k));
    est.x_min = ref;
    return est;
}

/// Empirical complementary CDF: one (x, P(X > x)) pair per distinct sample
/// value, ascending in x, with strictly-greater counting (the maximum maps
/// to P = 0).
inline std::vector<std::pair<double, double>> ccdf_points(std::vector<double> sample) {
    if (sample.empty())
        throw insufficient_data_error("ccdf_points: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (i + 1 < sample.size() && sample[i + 1] == sample[i]) continue;
        points.emplace_back(sample[i], static_cast<double>(sample.size() - i - 1) / n);
    }
    return points;
}

/// Least-squares fit of ln P(X > x) against ln x over the largest
/// tail_fraction of the sample; exponent = -slope. The P = 0 point at the
/// sample maximum carries no information and is dropped.
inline TailEstimate rank_regression(std::vector<double> sample, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5))
        throw config_error("rank_regression: tail_fraction must be in (0, 0.5]");
    const std::size_t n = sample.size();
    const auto m = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(n)));
    if (m < 2)
        throw insufficient_data_error("rank_regression: fewer than 10 tail points");
    std::sort(sample.begin(), sample.end(), std::greater<>());

    // Distinct values among the top m order statistics, with globally
    // counted strictly-greater probabilities.
    std::vector<double> lx, lp;
    for (std::size_t i = 0; i < m; ++i) {
        if (i > 0 && sample[i] == sample[i - 1]) continue;
        if (i == 0) continue; // P(X > max) = 0
        if (!(sample[i] > 0.0))
            throw std::domain_error("rank_regression: tail values must be strictly positive");
        lx.push_back(std::log(sample[i]));
        lp.push_back(std::log(static_cast<double>(i) / static_cast<double>(n)));
    }
    if (lx.size() < 10)
        throw insufficient_data_error("rank_regression: fewer than 10 tail points");

    const auto used = static_cast<double>(lx.size());
    double mx = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        mp += lp[i];
    }
    mx /= used;
    mp /= used;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (lp[i] - mp);
    }
    if (!(sxx > 0.0))
        throw numeric_error("rank_regression: degenerate tail (no spread in ln x)");
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double resid = lp[i] - mp - slope * (lx[i] - mx);
        ssr += resid * resid;
    }
    TailEstimate est;
    est.exponent = -slope;
    est.method = "rank_regression";
    est.order_count = lx.size();
    est.std_error = std::sqrt(ssr / (used - 2.0) / sxx);
    est.x_min = std::exp(lx.back());
    return est;
}

/// Default Hill order: k = floor(2 sqrt(n)).
inline std::size_t default_hill_order(std::size_t n) {
    return static_cast<std::size_t>(std::floor(2.0 * std::sqrt(static_cast<double>(n))));
}

/// Hill estimates at k/2, k, and 2k. A genuine power law is insensitive to
/// the cut; the band width (max - min exponent) relative to the central
/// estimate flags departures.
struct StabilityBand {
    TailEstimate at_half;
    TailEstimate central;
    TailEstimate at_double;
    double width = 0.0;
    bool power_law = false;
};

inline StabilityBand hill_stability_band(const std::vector<double>& sample, std::size_t k = 0) {
    const std::size_t n = sample.size();
    if (k == 0) k = default_hill_order(n);
    if (k / 2 < 10 || 2 * k >= n)
        throw insufficient_data_error(
            "hill_stability_band: requires k/2 >= 10 and 2k < sample size");
    StabilityBand band;
    band.at_half = hill_estimator(sample, k / 2);
    band.central = hill_estimator(sample, k);
    band.at_double = hill_estimator(sample, 2 * k);
    const double lo = std::min({band.at_half.exponent, band.central.exponent,
                                band.at_double.exponent});
    const double hi = std::max({band.at_half.exponent, band.central.exponent,
                                band.at_double.exponent});
    band.width = hi - lo;
    band.power_law = band.width < 0.25 * band.central.exponent;
    return band;
}

enum class WildnessVerdict { x_wilder, y_wilder, comparable, both_mild };

inline const char* to_string(WildnessVerdict v) {
    switch (v) {
    case WildnessVerdict::x_wilder: return "x_wilder";
    case WildnessVerdict::y_wilder: return "y_wilder";
    case WildnessVerdict::comparable: return "comparable";
    case WildnessVerdict::both_mild: return "both_mild";
    }
    return "?";
}

/// Order two positive samples by tail wildness: a power-law sample is wilder
/// than one with no detectable power law, and of two power laws the smaller
/// exponent is wilder. Overlapping 2-SE intervals give "comparable".
inline WildnessVerdict wildness_compare(const std::vector<double>& sample_x,
                                        const std::vector<double>& sample_y) {
    const StabilityBand bx = hill_stability_band(sample_x);
    const StabilityBand by = hill_stability_band(sample_y);
    if (!bx.power_law && !by.power_law) return WildnessVerdict::both_mild;
    if (bx.power_law && !by.power_law) return WildnessVerdict::x_wilder;
    if (!bx.power_law && by.power_law) return WildnessVerdict::y_wilder;
    const double ex = bx.central.exponent, sx = bx.central.std_error;
    const double ey = by.central.exponent, sy = by.central.std_error;
    if (ex + 2.0 * sx >= ey - 2.0 * sy && ey + 2.0 * sy >= ex - 2.0 * sx)
        return WildnessVerdict::comparable;
    return ex < ey ? WildnessVerdict::x_wilder : WildnessVerdict::y_wilder;
}

/// Running p-th absolute sample moment over geometrically growing prefixes.
/// A finite moment stabilizes; a divergent one keeps growing with sample
/// size, flagged when the full-sample mean exceeds twice the half-sample
/// mean.
struct MomentProbe {
    std::vector<std::pair<std::size_t, double>> trajectory; // (prefix size, running mean)
    double growth_ratio = 1.0;
    bool divergent_suspected = false;
};

inline MomentProbe moment_probe(const std::vector<double>& sample, double p) {
    const std::size_t n = sample.size();
    if (n < 32)
        throw insufficient_data_error("moment_probe: requires at least 32 samples");
    std::vector<std::size_t> checkpoints;
    for (std::size_t s = n; s >= 16; s = s / 2)
        checkpoints.push_back(s);
    std::reverse(checkpoints.begin(), checkpoints.end());

    MomentProbe probe;
    double sum = 0.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += std::pow(std::fabs(sample[i]), p);
        if (next < checkpoints.size() && i + 1 == checkpoints[next]) {
            probe.trajectory.emplace_back(i + 1, sum / static_cast<double>(i + 1));
            ++next;
        }
    }
    const double full = probe.trajectory.back().second;
    const double half = probe.trajectory[probe.trajectory.size() - 2].second;
    if (half > 0.0)
        probe.growth_ratio = full / half;
    else
        probe.growth_ratio = full > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    probe.divergent_suspected = probe.growth_ratio > 2.0;
    return probe;
}

/// Magnitudes of a signed series with zeros removed; tail estimation
/// concerns large values only, and the dropped count is reported.
struct MagnitudeSample {
    std::vector<double> values;
    std::size_t dropped_zeros = 0;
};

inline MagnitudeSample positive_magnitudes(const std::vector<double>& series) {
    MagnitudeSample out;
    out.values.reserve(series.size());
    for (double v : series) {
        if (v == 0.0)
            ++out.dropped_zeros;
        else
            out.values.push_back(std::fabs(v));
    }
    return out;
}

} // namespace wildsim
