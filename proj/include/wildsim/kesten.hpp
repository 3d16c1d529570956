#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/recurrence.hpp"
#include "wildsim/rng.hpp"
#include "wildsim/tail.hpp"

namespace wildsim {

/// Root of g(mu) = 1 on (0, mu_max] for a moment function g that equals 1
/// at 0, initially decreases (negative log-moment slope), and is convex —
/// so it crosses 1 at most once from below. Bisection holds g(lo) < 1 and
/// g(hi) >= 1; nullopt when g stays below 1 on the whole interval.
inline std::optional<double> solve_unit_moment_root(const std::function<double(double)>& g,
                                                    double mu_max, double tol) {
    if (!(mu_max > 0.0) || !(tol > 0.0))
        throw config_error("solve_unit_moment_root: mu_max and tol must be positive");
    if (g(mu_max) < 1.0)
        return std::nullopt;
    double lo = 0.0, hi = mu_max;
    for (int iter = 0; iter < 500; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double v = g(mid);
        if (std::fabs(v - 1.0) < tol)
            return mid;
        (v < 1.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14 * std::max(1.0, hi))
            break;
    }
    return hi;
}

struct ExponentSolveOptions {
    double mu_max = 10.0; // exponents of practical interest stay well below this
    double tol = 1e-10;   // on |E(|a|^mu) - 1|
    std::size_t mc_budget = 1'000'000;
    bool force_monte_carlo = false; // exercise the sampling path even for closed forms
};

/// Solve E(|a|^mu) = 1 for the tail exponent of the stationary recurrence.
/// Closed-form families are evaluated analytically; otherwise the moment is
/// a Monte Carlo mean over one fixed set of draws reused across all mu
/// (common random numbers), so bisection sees a smooth function. Returns
/// nullopt when no root exists in (0, mu_max]: the law never exceeds 1 in
/// magnitude, or the moment stays below 1 on the interval.
inline std::optional<double> solve_exponent(const DistributionSpec& a_law,
                                            ExponentSolveOptions opts = {},
                                            RngState rng = RngState(0xE8907)) {
    const auto support = a_law.support();
    const double peak = std::max(std::fabs(support.lo), std::fabs(support.hi));
    if (peak <= 1.0)
        return std::nullopt; // |a| never exceeds 1: E(|a|^mu) < 1 for all mu > 0

    const bool closed =
        !opts.force_monte_carlo && a_law.closed_power_moment(1.0, true).has_value() &&
        a_law.closed_log_abs_moment().has_value();

    if (closed) {
        if (*a_law.closed_log_abs_moment() >= 0.0)
            throw std::domain_error(
                "solve_exponent: E(ln|a|) >= 0, the recurrence has no stationary regime");
        auto g = [&a_law](double mu) {
            const MomentValue m = *a_law.closed_power_moment(mu, true);
            return m.divergent ? std::numeric_limits<double>::infinity() : m.value;
        };
        return solve_unit_moment_root(g, opts.mu_max, opts.tol);
    }

    // Common random numbers: one sample set shared by every mu evaluation.
    std::vector<double> draws(opts.mc_budget);
    for (double& x : draws) x = std::fabs(a_law.sample(rng));
    double log_sum = 0.0;
    for (double x : draws) log_sum += std::log(x);
    if (!(log_sum < 0.0))
        throw std::domain_error(
            "solve_exponent: E(ln|a|) >= 0, the recurrence has no stationary regime");
    auto g = [&draws](double mu) {
        double sum = 0.0;
        for (double x : draws) sum += std::pow(x, mu);
        return sum / static_cast<double>(draws.size());
    };
    return solve_unit_moment_root(g, opts.mu_max, opts.tol);
}

enum class ConditionVerdict { pass, fail, undetermined };

inline const char* to_string(ConditionVerdict v) {
    switch (v) {
    case ConditionVerdict::pass: return "pass";
    case ConditionVerdict::fail: return "fail";
    case ConditionVerdict::undetermined: return "undetermined";
    }
    return "?";
}

/// Structural finiteness of E(|X|^p): bounded-support and all-moment
/// families always pass; a Pareto tail requires p strictly below its
/// exponent. nullopt means the family gives no structural answer.
inline std::optional<bool> moment_finite_structural(const DistributionSpec& d, double p) {
    switch (d.kind()) {
    case DistKind::constant:
    case DistKind::uniform:
    case DistKind::two_point: return true; // bounded support
    case DistKind::normal:
    case DistKind::lognormal: return true; // all moments finite
    case DistKind::pareto: return p < d.p0();
    case DistKind::scaled:
    case DistKind::jittered: return moment_finite_structural(d.base(), p);
    }
    return std::nullopt;
}

/// Verdicts for the four tail-theorem conditions at a candidate exponent,
/// the stationarity check, and the degenerate fixed-point flag.
struct KestenReport {
    std::optional<double> mu_root;
    ConditionVerdict condition_i = ConditionVerdict::undetermined;   // E(|a|^mu) = 1
    ConditionVerdict condition_ii = ConditionVerdict::undetermined;  // E(|a|^mu ln+|a|) finite
    ConditionVerdict condition_iii = ConditionVerdict::undetermined; // E(|e|^mu) finite
    ConditionVerdict condition_iv = ConditionVerdict::undetermined;  // ln|a| nonarithmetic
    StationarityVerdict stationarity = StationarityVerdict::undetermined;
    bool degenerate_fixed_point = false; // (1-a)^{-1} e is a.s. constant: trivial tail
    double moment_at_mu = 0.0;
    double moment_std_error = 0.0;
    std::string notes;
};

namespace detail {

inline ConditionVerdict probe_finiteness(std::vector<double> derived) {
    // A probe can refute finiteness but never prove it.
    const MomentProbe probe = moment_probe(derived, 1.0);
    return probe.divergent_suspected ? ConditionVerdict::fail : ConditionVerdict::undetermined;
}

inline void append_note(std::string& notes, const std::string& line) {
    if (!notes.empty()) notes += "; ";
    notes += line;
}

} // namespace detail

/// Evaluate the power-law tail conditions for r_t = a_t r_{t-1} + e_t at a
/// given exponent mu. Condition (i) checks E(|a|^mu) = 1 at that mu;
/// (ii)-(iii) are moment-finiteness verdicts (structural where the family
/// decides them, sampling probe otherwise); (iv) is the structural
/// nonarithmetic check on ln|a|.
inline KestenReport check_kesten(const RecurrenceSpec& spec, double mu, std::size_t mc_budget,
                                 RngState rng = RngState(0xC4EC)) {
    if (!(mu > 0.0))
        throw config_error("check_kesten: mu must be positive");
    KestenReport rep;

    const MomentValue m = abs_moment(spec.a_law, mu, mc_budget, rng.split(1));
    rep.moment_at_mu = m.value;
    rep.moment_std_error = m.std_error;
    if (m.divergent) {
        rep.condition_i = ConditionVerdict::fail;
        detail::append_note(rep.notes, "E(|a|^mu) is infinite at this mu");
    } else if (m.exact) {
        rep.condition_i = std::fabs(m.value - 1.0) <= 1e-9 ? ConditionVerdict::pass
                                                           : ConditionVerdict::fail;
    } else if (std::fabs(m.value - 1.0) > 3.0 * m.std_error) {
        rep.condition_i = ConditionVerdict::fail;
    } else {
        rep.condition_i =
            m.std_error <= 0.05 ? ConditionVerdict::pass : ConditionVerdict::undetermined;
    }
    if (rep.condition_i == ConditionVerdict::pass)
        rep.mu_root = mu;

    // (ii): E(|a|^mu ln+ |a|) < infinity.
    if (auto fin = moment_finite_structural(spec.a_law, mu)) {
        rep.condition_ii = *fin ? ConditionVerdict::pass : ConditionVerdict::fail;
    } else {
        std::vector<double> derived(std::min<std::size_t>(mc_budget, 1 << 20));
        RngState sub = rng.split(2);
        for (double& v : derived) {
            const double x = std::fabs(spec.a_law.sample(sub));
            v = std::pow(x, mu) * std::max(std::log(x), 0.0);
        }
        rep.condition_ii = detail::probe_finiteness(std::move(derived));
    }

    // (iii): E(|e|^mu) < infinity; in coupled mode e = a b with independent
    // draws, so the moment factorizes.
    std::optional<bool> fin_e;
    if (spec.input_mode == InputMode::coupled) {
        const auto fa = moment_finite_structural(spec.a_law, mu);
        const auto fb = moment_finite_structural(spec.input_law, mu);
        if (fa && fb) fin_e = *fa && *fb;
    } else {
        fin_e = moment_finite_structural(spec.input_law, mu);
    }
    if (fin_e) {
        rep.condition_iii = *fin_e ? ConditionVerdict::pass : ConditionVerdict::fail;
    } else {
        std::vector<double> derived(std::min<std::size_t>(mc_budget, 1 << 20));
        RngState sub = rng.split(3);
        for (double& v : derived) {
            const double a = spec.a_law.sample(sub);
            const double in = spec.input_law.sample(sub);
            const double e = spec.input_mode == InputMode::coupled ? a * in : in;
            v = std::pow(std::fabs(e), mu);
        }
        rep.condition_iii = detail::probe_finiteness(std::move(derived));
    }

    // (iv): nonarithmetic ln|a| — structural; no finite sample can tell a
    // lattice from a fine continuum.
    if (spec.a_law.log_is_lattice()) {
        rep.condition_iv = ConditionVerdict::fail;
        detail::append_note(rep.notes,
                            "ln|a| is lattice-valued; wrap the feedback law in jittered(...) "
                            "to restore the nonarithmetic condition");
    } else {
        rep.condition_iv = ConditionVerdict::pass;
    }

    rep.stationarity = check_stationarity(spec, mc_budget, rng.split(4)).verdict;

    // Degenerate fixed point: both laws constant (or input identically
    // zero) make r settle to the constant e/(1-a) — the tail constant
    // vanishes and no power law is visible.
    const auto av = spec.a_law.degenerate_value();
    const auto iv = spec.input_law.degenerate_value();
    if (iv && (*iv == 0.0 || (av && *av != 1.0))) {
        rep.degenerate_fixed_point = true;
        if (av && *av != 1.0) {
            const double e0 = spec.input_mode == InputMode::coupled ? *av * *iv : *iv;
            const double fixed = e0 / (1.0 - *av);
            detail::append_note(rep.notes, "degenerate case: r settles to the constant " +
                                               std::to_string(fixed) +
                                               ", so the tail constant is zero");
        } else {
            detail::append_note(rep.notes,
                                "degenerate case: zero input pins r at zero, trivial tail");
        }
    }
    return rep;
}

inline KestenReport check_kesten(const DistributionSpec& a_law, const DistributionSpec& e_law,
                                 double mu, std::size_t mc_budget,
                                 RngState rng = RngState(0xC4EC)) {
    return check_kesten(RecurrenceSpec(a_law, InputMode::direct, e_law, 1), mu, mc_budget, rng);
}

/// Tail transfer when the input e is itself power-law tailed with exponent
/// mu_e and the nonnegative feedback is subcritical at that order:
/// P(r > x) / P(e > x) -> tail_ratio = (1 - E(a^mu_e))^-1. In the coupled
/// case e = a b the same feedback moment gives the excess-likelihood factor
/// amplification = E(a^mu_e) * tail_ratio.
struct GrincevReport {
    double tail_ratio = 1.0;
    double amplification = 0.0;
    double feedback_moment = 0.0; // E(a^mu_e)
    double moment_std_error = 0.0;
    bool coupled = false;
};

inline GrincevReport grincevicius_predict(const DistributionSpec& a_law, double mu_e,
                                          bool coupled, std::size_t mc_budget,
                                          RngState rng = RngState(0x69C)) {
    if (!(mu_e > 0.0))
        throw config_error("grincevicius_predict: mu_e must be positive");
    if (!a_law.nonnegative())
        throw std::domain_error("grincevicius_predict: requires P(a >= 0) = 1");
    const MomentValue m = moment(a_law, mu_e, mc_budget, rng);
    if (m.divergent || m.value >= 1.0)
        throw std::domain_error(
            "grincevicius_predict: E(a^mu_e) >= 1, the tail-transfer result does not apply");
    GrincevReport rep;
    rep.feedback_moment = m.value;
    rep.moment_std_error = m.std_error;
    rep.tail_ratio = 1.0 / (1.0 - m.value);
    rep.amplification = m.value * rep.tail_ratio;
    rep.coupled = coupled;
    return rep;
}

/// The divergent-opinions hypothesis forces the return exponent at or below
/// the opinion exponent; an opinion exponent below 2 therefore contradicts
/// the observed return exponent near 3.
struct LevyRegimeCheck {
    bool consistent = false;
    bool boundary = false; // exactly at the Levy edge: consistent, with caveat
};

inline LevyRegimeCheck levy_regime_check(double theta_exponent) {
    LevyRegimeCheck out;
    out.consistent = theta_exponent >= 2.0;
    out.boundary = theta_exponent == 2.0;
    return out;
}

} // namespace wildsim
