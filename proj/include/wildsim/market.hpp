#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/recurrence.hpp"
#include "wildsim/rng.hpp"
#include "wildsim/tail.hpp"

namespace wildsim {

enum class PriceRule { clearing, impact };
enum class ExpectationModel { prediction_error, confidence };
enum class DemandSign { speculative, law_of_demand };

/// Agent-market parameters. rho = gamma/alpha is always derived, never
/// stored. Defaults describe the plain random-walk market: clearing rule,
/// zero fundamental motive, Gaussian prediction errors.
struct MarketConfig {
    double alpha = 1.0;  // speculative demand strength
    double gamma = 0.0;  // fundamental demand strength
    double beta = 0.5;   // price-impact coefficient, in (0,1)
    PriceRule price_rule = PriceRule::clearing;
    ExpectationModel expectation_model = ExpectationModel::prediction_error;
    DistributionSpec expectation_law = DistributionSpec::normal(0.0, 0.02); // eps or theta
    double fundamental_value = 100.0;
    DistributionSpec guess_law = DistributionSpec::constant(100.0); // F_it, mean must equal F
    DistributionSpec n_law = DistributionSpec::constant(1e4);       // order count per step
    DistributionSpec l_law = DistributionSpec::constant(1e4);       // liquidity per step
    double p0 = 100.0;
    DemandSign demand_sign = DemandSign::speculative;

    double rho() const { return gamma / alpha; }

    /// Throws config_error on hard violations; returns soft warnings
    /// (subcritical-feedback estimate, unused laws).
    std::vector<std::string> validate() const;
};

/// One simulated market history. price[t] is P_t before the step's move,
/// so ret[t] = (price[t+1] - price[t]) / price[t] holds exactly (the final
/// price is price.back() * (1 + ret.back())). trade_count mirrors
/// order_count: each participating order counts as one trade.
struct MarketPath {
    std::vector<double> price;
    std::vector<double> ret;
    std::vector<double> excess_demand;
    std::vector<double> order_count;
    std::vector<double> liquidity;
    std::vector<double> volume; // sum of |q_it| over traders
    std::vector<double> impulse; // b_t, the averaged behavioral input
    std::vector<double> trade_count;
    std::vector<std::string> warnings;
};

/// One trader's demand. Speculative sign: alpha r_expected + gamma phi
/// (demand chases expected returns). Law-of-demand sign: gamma phi -
/// alpha r, where the realized return takes the expected one's slot and
/// higher prices curb demand.
inline double individual_demand(double expected_return, double value_gap,
                                const MarketConfig& cfg) {
    if (cfg.demand_sign == DemandSign::law_of_demand)
        return cfg.gamma * value_gap - cfg.alpha * expected_return;
    return cfg.alpha * expected_return + cfg.gamma * value_gap;
}

/// Equilibrium return clearing the fundamental-plus-speculative market:
/// r* = eps_bar - rho phi_bar.
inline double clearing_return(double eps_bar, double phi_bar, double rho) {
    return eps_bar - rho * phi_bar;
}

/// Linear price impact of an order imbalance: r = beta q / L.
inline double impact_return(double q, double l, double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw config_error("impact_return: beta must lie in (0,1)");
    if (!(l > 0.0))
        throw std::domain_error("impact_return: liquidity must be positive");
    return beta * q / l;
}

/// Aggregate over one step's N traders: excess demand q evaluated at the
/// given return, behavioral impulse b (mean expectation term plus rho times
/// the mean value gap), and volume v = sum |q_it|.
struct AggregateDemand {
    double q = 0.0;
    double b = 0.0;
    double v = 0.0;
    double expectation_bar = 0.0; // mean eps_it (or theta_it)
    double phi_bar = 0.0;
};

namespace detail {

inline long long sample_count(const DistributionSpec& d, RngState& rng) {
    const double x = std::ceil(d.sample(rng));
    if (!(x >= 1.0)) return 1;
    if (x > 1e9)
        throw numeric_error("sample_count: a count draw exceeded 10^9; choose a tamer law");
    return static_cast<long long>(x);
}

} // namespace detail

/// The prediction-error sign convention follows each price rule's
/// derivation: under clearing, eps_it = r - r_e, so r_e = r - eps and
/// q = alpha N (r - eps_bar) + gamma N phi_bar; under impact the error is
/// redefined as eps_it = r_e - r, so q = alpha N (r + eps_bar) +
/// gamma N phi_bar. Under the confidence model r_e = prev_return +
/// theta_it regardless of rule.
inline AggregateDemand aggregate_excess_demand(const MarketConfig& cfg, double realized_return,
                                               double prev_return, double price, long long n,
                                               RngState& rng, std::vector<double>* expectation_buf,
                                               std::vector<double>* gap_buf) {
    if (n < 1)
        throw config_error("aggregate_excess_demand: need at least one trader");
    AggregateDemand out;
    const double nn = static_cast<double>(n);

    expectation_buf->clear();
    double sum = 0.0;
    for (long long i = 0; i < n; ++i) {
        const double x = cfg.expectation_law.sample(rng);
        expectation_buf->push_back(x);
        sum += x;
    }
    out.expectation_bar = sum / nn;

    gap_buf->clear();
    if (cfg.gamma > 0.0) {
        double gap_sum = 0.0;
        for (long long i = 0; i < n; ++i) {
            const double guess = cfg.guess_law.sample(rng);
            const double gap = (guess - price) / price;
            gap_buf->push_back(gap);
            gap_sum += gap;
        }
        out.phi_bar = gap_sum / nn;
    }

    double q = 0.0, v = 0.0;
    for (long long i = 0; i < n; ++i) {
        const double gap = cfg.gamma > 0.0 ? (*gap_buf)[static_cast<std::size_t>(i)] : 0.0;
        double expected;
        if (cfg.demand_sign == DemandSign::law_of_demand) {
            expected = realized_return; // Eq-of-demand slot holds the realized return
        } else if (cfg.expectation_model == ExpectationModel::confidence) {
            expected = prev_return + (*expectation_buf)[static_cast<std::size_t>(i)];
        } else if (cfg.price_rule == PriceRule::impact) {
            expected = realized_return + (*expectation_buf)[static_cast<std::size_t>(i)];
        } else {
            expected = realized_return - (*expectation_buf)[static_cast<std::size_t>(i)];
        }
        const double qi = individual_demand(expected, gap, cfg);
        q += qi;
        v += std::fabs(qi);
    }
    out.q = q;
    out.v = v;

    const double rho = cfg.rho();
    out.b = cfg.demand_sign == DemandSign::law_of_demand
                ? rho * out.phi_bar
                : out.expectation_bar + rho * out.phi_bar;
    return out;
}

inline std::vector<std::string> MarketConfig::validate() const {
    if (!(alpha > 0.0))
        throw config_error("market: alpha must be positive");
    if (!(gamma >= 0.0))
        throw config_error("market: gamma must be nonnegative");
    if (!(beta > 0.0 && beta < 1.0))
        throw config_error("market: beta must lie strictly between 0 and 1");
    if (!(fundamental_value > 0.0))
        throw config_error("market: fundamental_value must be positive");
    if (!(p0 > 0.0))
        throw config_error("market: p0 must be positive");
    if (!(l_law.support().lo > 0.0))
        throw config_error("market: l_law must be bounded away from zero "
                           "(liquidity cannot dry up)");
    if (price_rule == PriceRule::clearing &&
        expectation_model == ExpectationModel::confidence &&
        demand_sign == DemandSign::speculative)
        throw config_error(
            "market: the confidence model cannot be priced by clearing — excess demand "
            "would not depend on the current return, so no clearing return exists; "
            "use the impact rule");

    // Guesses must be unbiased around the fundamental value.
    const MomentValue guess_mean = moment(guess_law, 1.0, 100000);
    if (guess_mean.divergent)
        throw config_error("market: guess_law has no finite mean");
    const double tol =
        (guess_mean.exact ? 1e-9 : 4.0 * guess_mean.std_error + 1e-9) *
        std::max(1.0, std::fabs(fundamental_value));
    if (std::fabs(guess_mean.value - fundamental_value) > tol)
        throw config_error("market: guess_law mean must equal fundamental_value");

    std::vector<std::string> warnings;
    if (price_rule == PriceRule::impact) {
        // Mean feedback a = alpha beta N / L; N and L are independent, so
        // E(a) = alpha beta E(N) E(1/L). The ceil on N is ignored here —
        // this is a subcriticality estimate, not an exact moment.
        const MomentValue mean_n = moment(n_law, 1.0, 100000);
        const auto inv_l = l_law.closed_power_moment(-1.0, false);
        double mean_inv_l;
        if (inv_l && !inv_l->divergent) {
            mean_inv_l = inv_l->value;
        } else {
            RngState rng(0x11517);
            double s = 0.0;
            for (int i = 0; i < 100000; ++i) s += 1.0 / l_law.sample(rng);
            mean_inv_l = s / 1e5;
        }
        if (mean_n.divergent) {
            warnings.push_back("impact feedback: E(N) is infinite, mean feedback undefined");
        } else {
            const double mean_a = alpha * beta * mean_n.value * mean_inv_l;
            if (mean_a >= 1.0)
                warnings.push_back("impact feedback: estimated E(alpha beta N / L) = " +
                                   std::to_string(mean_a) +
                                   " >= 1; the market amplifies on average");
        }
    }
    if (demand_sign == DemandSign::law_of_demand)
        warnings.push_back("law-of-demand sign: the expectation law is drawn but does not "
                           "enter demand");
    return warnings;
}

/// The per-step impact feedback a = alpha beta N / L as a closed
/// distribution; available when liquidity is degenerate (constant).
/// The ceil applied to N draws is not representable here, so treat the
/// result as the continuous-N idealization.
inline std::optional<DistributionSpec> impact_feedback_law(const MarketConfig& cfg) {
    const auto l_const = cfg.l_law.degenerate_value();
    if (!l_const || !(*l_const > 0.0)) return std::nullopt;
    return DistributionSpec::scaled(cfg.n_law, cfg.alpha * cfg.beta / *l_const);
}

/// Run the market for `length` steps. Clearing mode sets each return at the
/// zero of aggregate excess demand. Impact mode feeds demand through
/// r = beta q / L: with prediction errors the step solves its instantaneous
/// fixed point (demanding per-draw feedback below 1); with the confidence
/// model the return follows the lag-1 recurrence r_t = a_t r_{t-1} + a_t b_t.
/// A step with r <= -1 would drive the price nonpositive and aborts.
inline MarketPath simulate_market(const MarketConfig& cfg, std::size_t length, RngState rng) {
    if (length == 0)
        throw config_error("simulate_market: length must be positive");
    MarketPath path;
    path.warnings = cfg.validate();
    path.price.reserve(length);
    path.ret.reserve(length);
    path.excess_demand.reserve(length);
    path.order_count.reserve(length);
    path.liquidity.reserve(length);
    path.volume.reserve(length);
    path.impulse.reserve(length);
    path.trade_count.reserve(length);

    std::vector<double> expectation_buf, gap_buf;
    double price = cfg.p0;
    double prev_return = 0.0;
    const double rho = cfg.rho();

    for (std::size_t t = 0; t < length; ++t) {
        const long long n = detail::sample_count(cfg.n_law, rng);
        const double l = cfg.l_law.sample(rng);
        if (!(l > 0.0))
            throw std::domain_error("simulate_market: drew nonpositive liquidity");

        double r, q, v, b;
        if (cfg.price_rule == PriceRule::clearing) {
            // Demand is linear in r with slope -alpha N (speculative) or
            // -alpha N (law of demand), so the clearing return is exact; at
            // r* excess demand is zero by construction.
            const AggregateDemand at_zero =
                aggregate_excess_demand(cfg, 0.0, prev_return, price, n, rng, &expectation_buf,
                                        &gap_buf);
            if (cfg.demand_sign == DemandSign::law_of_demand)
                r = rho * at_zero.phi_bar;
            else
                r = clearing_return(at_zero.expectation_bar, at_zero.phi_bar, rho);
            q = 0.0;
            b = at_zero.b;
            // Volume at the clearing return, from the same draws.
            v = 0.0;
            for (long long i = 0; i < n; ++i) {
                const double gap =
                    cfg.gamma > 0.0 ? gap_buf[static_cast<std::size_t>(i)] : 0.0;
                double expected;
                if (cfg.demand_sign == DemandSign::law_of_demand)
                    expected = r;
                else
                    expected = r - expectation_buf[static_cast<std::size_t>(i)];
                v += std::fabs(individual_demand(expected, gap, cfg));
            }
        } else {
            const double a = cfg.alpha * cfg.beta * static_cast<double>(n) / l;
            const AggregateDemand base =
                aggregate_excess_demand(cfg, 0.0, prev_return, price, n, rng, &expectation_buf,
                                        &gap_buf);
            b = base.b;
            if (cfg.demand_sign == DemandSign::law_of_demand) {
                // q(r) = gamma N phi_bar - alpha N r: negative feedback,
                // fixed point exists for any positive feedback strength.
                r = cfg.beta * cfg.gamma * static_cast<double>(n) * base.phi_bar / l /
                    (1.0 + a);
            } else if (cfg.expectation_model == ExpectationModel::prediction_error) {
                if (a >= 1.0)
                    throw explosion_error(
                        "impact feedback a = alpha beta N / L reached 1; the instantaneous "
                        "fixed point does not exist",
                        t);
                r = instantaneous_solve(a, b);
            } else {
                r = a * prev_return + a * b;
            }
            q = r * l / cfg.beta; // exact inversion of the impact rule
            // Volume at the realized return.
            v = 0.0;
            for (long long i = 0; i < n; ++i) {
                const double gap =
                    cfg.gamma > 0.0 ? gap_buf[static_cast<std::size_t>(i)] : 0.0;
                double expected;
                if (cfg.demand_sign == DemandSign::law_of_demand)
                    expected = r;
                else if (cfg.expectation_model == ExpectationModel::confidence)
                    expected = prev_return + expectation_buf[static_cast<std::size_t>(i)];
                else
                    expected = r + expectation_buf[static_cast<std::size_t>(i)];
                v += std::fabs(individual_demand(expected, gap, cfg));
            }
        }

        if (r <= -1.0)
            throw explosion_error("return " + std::to_string(r) +
                                      " <= -1 would drive the price nonpositive",
                                  t);

        path.price.push_back(price);
        path.ret.push_back(r);
        path.excess_demand.push_back(q);
        path.order_count.push_back(static_cast<double>(n));
        path.liquidity.push_back(l);
        path.volume.push_back(v);
        path.impulse.push_back(b);
        path.trade_count.push_back(static_cast<double>(n));

        price *= 1.0 + r;
        prev_return = r;
    }
    return path;
}

/// Pure speculative bubble: B_t = (1+rho)^t b0, indices 0..length.
inline std::vector<double> bubble_path(double rho, double b0, std::size_t length) {
    if (length < 1)
        throw config_error("bubble_path: length must be at least 1");
    std::vector<double> b(length + 1);
    b[0] = b0;
    for (std::size_t t = 0; t < length; ++t) b[t + 1] = b[t] * (1.0 + rho);
    return b;
}

/// Fundamentalist correction with the demand sign flipped: P_{t+1} =
/// (1-rho) P_t + rho f. Converges to f iff |1-rho| < 1; divergence is a
/// reportable outcome, not an error.
inline std::vector<double> negative_feedback_path(double rho, double f, double p0,
                                                  std::size_t length) {
    if (length < 1)
        throw config_error("negative_feedback_path: length must be at least 1");
    if (!(rho > 0.0) || !(f > 0.0))
        throw config_error("negative_feedback_path: rho and f must be positive");
    std::vector<double> p(length + 1);
    p[0] = p0;
    for (std::size_t t = 0; t < length; ++t) p[t + 1] = (1.0 - rho) * p[t] + rho * f;
    return p;
}

/// Tail comparison of excess demand against volume. When imbalance behaves
/// like the square root of volume, the exponents satisfy mu_q = 2 mu_v; the
/// report carries both Hill fits, their ratio, and a 2-SE consistency
/// verdict against the factor 2.
struct VolumeImbalanceReport {
    bool q_power_law = false;
    bool v_power_law = false;
    TailEstimate q_tail;
    TailEstimate v_tail;
    double exponent_ratio = 0.0;
    double ratio_std_error = 0.0;
    bool consistent_with_square_root = false;
};

inline VolumeImbalanceReport volume_imbalance_relation(const std::vector<double>& v_samples,
                                                       const std::vector<double>& q_samples) {
    if (v_samples.size() != q_samples.size())
        throw config_error("volume_imbalance_relation: samples must be paired");
    const MagnitudeSample v_mag = positive_magnitudes(v_samples);
    const MagnitudeSample q_mag = positive_magnitudes(q_samples);
    if (v_mag.values.size() < 10000 || q_mag.values.size() < 10000)
        throw insufficient_data_error(
            "volume_imbalance_relation: need at least 10^4 nonzero pairs");

    VolumeImbalanceReport rep;
    try {
        const StabilityBand band = hill_stability_band(q_mag.values);
        rep.q_tail = band.central;
        rep.q_power_law = band.power_law;
    } catch (const numeric_error&) {
        rep.q_power_law = false;
    }
    try {
        const StabilityBand band = hill_stability_band(v_mag.values);
        rep.v_tail = band.central;
        rep.v_power_law = band.power_law;
    } catch (const numeric_error&) {
        rep.v_power_law = false;
    }
    if (rep.q_tail.order_count > 0 && rep.v_tail.order_count > 0 && rep.v_tail.exponent > 0.0) {
        rep.exponent_ratio = rep.q_tail.exponent / rep.v_tail.exponent;
        const double rq = rep.q_tail.std_error / rep.q_tail.exponent;
        const double rv = rep.v_tail.std_error / rep.v_tail.exponent;
        rep.ratio_std_error = rep.exponent_ratio * std::sqrt(rq * rq + rv * rv);
        rep.consistent_with_square_root =
            std::fabs(rep.exponent_ratio - 2.0) <= 2.0 * rep.ratio_std_error;
    }
    return rep;
}

} // namespace wildsim
