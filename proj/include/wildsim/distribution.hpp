#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "wildsim/errors.hpp"
#include "wildsim/rng.hpp"

namespace wildsim {

enum class DistKind {
    constant,
    uniform,
    normal,
    lognormal,
    pareto,
    two_point,
    scaled,
    jittered,
};

/// A moment E(X^p): either a closed-form value (exact, std_error 0) or a
/// Monte Carlo estimate with its standard error. `divergent` marks an
/// infinite moment (e.g. Pareto order >= tail exponent).
struct MomentValue {
    double value = 0.0;
    double std_error = 0.0;
    bool divergent = false;
    bool exact = false;

    static MomentValue closed(double v) { return {v, 0.0, false, true}; }
    static MomentValue estimated(double v, double se) { return {v, se, false, false}; }
    static MomentValue infinite() {
        return {std::numeric_limits<double>::infinity(), 0.0, true, true};
    }
};

namespace detail {

inline bool is_integer(double p) noexcept {
    return std::isfinite(p) && std::floor(p) == p;
}

/// x^p over the reals. Negative base with a fractional exponent has no real
/// value; that is a caller error, not a divergence.
inline double real_pow(double x, double p) {
    if (x > 0.0)
        return std::pow(x, p);
    if (x == 0.0) {
        if (p > 0.0) return 0.0;
        if (p == 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    if (!is_integer(p))
        throw std::domain_error("E(X^p): fractional power of a negative value is undefined");
    const double m = std::pow(-x, p);
    return std::fmod(p, 2.0) != 0.0 ? -m : m;
}

inline constexpr double euler_gamma = 0.57721566490153286060651209;
inline constexpr double pi = 3.14159265358979323846264338;

/// Antiderivative of ln x on [0, inf): H(x) = x ln x - x, H(0) = 0.
inline double xlogx_primitive(double x) {
    return x > 0.0 ? x * std::log(x) - x : 0.0;
}

} // namespace detail

/// Parametric description of a scalar random variable. Specs are immutable
/// values; `scaled` and `jittered` wrap a base spec. Jittering multiplies by
/// lognormal(0, jitter_sd) noise, which turns a lattice-valued law into a
/// continuous one without changing a Pareto-type tail exponent.
class DistributionSpec {
public:
    static DistributionSpec constant(double c) { return DistributionSpec(DistKind::constant, c, 0, 0); }

    static DistributionSpec uniform(double lo, double hi) {
        if (!(lo < hi))
            throw config_error("uniform(lo, hi): requires lo < hi");
        return DistributionSpec(DistKind::uniform, lo, hi, 0);
    }

    static DistributionSpec normal(double mean, double sd) {
        if (!(sd > 0.0))
            throw config_error("normal(mean, sd): requires sd > 0");
        return DistributionSpec(DistKind::normal, mean, sd, 0);
    }

    static DistributionSpec lognormal(double mu, double sigma) {
        if (!(sigma > 0.0))
            throw config_error("lognormal(mu, sigma): requires sigma > 0");
        return DistributionSpec(DistKind::lognormal, mu, sigma, 0);
    }

    /// Tail convention P(X > x) = (x / x_min)^-exponent for x >= x_min.
    static DistributionSpec pareto(double exponent, double x_min) {
        if (!(exponent > 0.0) || !(x_min > 0.0))
            throw config_error("pareto(exponent, x_min): requires exponent > 0 and x_min > 0");
        return DistributionSpec(DistKind::pareto, exponent, x_min, 0);
    }

    /// Value v1 with probability p1, else v2.
    static DistributionSpec two_point(double v1, double p1, double v2) {
        if (!(p1 >= 0.0 && p1 <= 1.0))
            throw config_error("two_point(v1, p1, v2): requires 0 <= p1 <= 1");
        return DistributionSpec(DistKind::two_point, v1, p1, v2);
    }

    static DistributionSpec scaled(DistributionSpec base, double factor) {
        DistributionSpec d(DistKind::scaled, factor, 0, 0);
        d.base_ = std::make_shared<DistributionSpec>(std::move(base));
        return d;
    }

    static DistributionSpec jittered(DistributionSpec base, double jitter_sd) {
        if (!(jitter_sd > 0.0))
            throw config_error("jittered(base, jitter_sd): requires jitter_sd > 0");
        DistributionSpec d(DistKind::jittered, jitter_sd, 0, 0);
        d.base_ = std::make_shared<DistributionSpec>(std::move(base));
        return d;
    }

    DistKind kind() const noexcept { return kind_; }
    double p0() const noexcept { return p0_; }
    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    const DistributionSpec& base() const { return *base_; }

    double sample(RngState& rng) const {
        switch (kind_) {
        case DistKind::constant: return p0_;
        case DistKind::uniform: return p0_ + rng.uniform01() * (p1_ - p0_);
        case DistKind::normal: return p0_ + p1_ * rng.normal();
        case DistKind::lognormal: return std::exp(p0_ + p1_ * rng.normal());
        case DistKind::pareto: return p1_ * std::pow(rng.uniform_pos(), -1.0 / p0_);
        case DistKind::two_point: return rng.uniform01() < p1_ ? p0_ : p2_;
        case DistKind::scaled: return p0_ * base_->sample(rng);
        case DistKind::jittered: return base_->sample(rng) * std::exp(p0_ * rng.normal());
        }
        throw config_error("invalid distribution kind");
    }

    struct Support {
        double lo;
        double hi;
    };

    Support support() const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        switch (kind_) {
        case DistKind::constant: return {p0_, p0_};
        case DistKind::uniform: return {p0_, p1_};
        case DistKind::normal: return {-inf, inf};
        case DistKind::lognormal: return {0.0, inf};
        case DistKind::pareto: return {p1_, inf};
        case DistKind::two_point: return {std::min(p0_, p2_), std::max(p0_, p2_)};
        case DistKind::scaled: {
            const Support s = base_->support();
            return p0_ >= 0.0 ? Support{p0_ * s.lo, p0_ * s.hi}
                              : Support{p0_ * s.hi, p0_ * s.lo};
        }
        case DistKind::jittered: {
            const Support s = base_->support();
            return {s.lo < 0.0 ? -inf : 0.0, s.hi > 0.0 ? inf : 0.0};
        }
        }
        throw config_error("invalid distribution kind");
    }

    /// The almost-sure value if the law is degenerate, else nullopt.
    std::optional<double> degenerate_value() const {
        switch (kind_) {
        case DistKind::constant: return p0_;
        case DistKind::two_point:
            if (p0_ == p2_ || p1_ == 1.0) return p0_;
            if (p1_ == 0.0) return p2_;
            return std::nullopt;
        case DistKind::scaled:
            if (p0_ == 0.0) return 0.0;
            if (auto v = base_->degenerate_value()) return p0_ * *v;
            return std::nullopt;
        case DistKind::jittered:
            // Positive multiplicative noise spreads every nonzero value.
            if (auto v = base_->degenerate_value(); v && *v == 0.0) return 0.0;
            return std::nullopt;
        default: return std::nullopt;
        }
    }

    /// Structural verdict for the nonarithmetic condition on ln|X|:
    /// lattice-valued log laws (constants, two-point and their rescalings)
    /// fail it; continuous families (and anything jittered) satisfy it.
    bool log_is_lattice() const {
        switch (kind_) {
        case DistKind::constant:
        case DistKind::two_point: return true;
        case DistKind::scaled: return base_->log_is_lattice();
        default: return false;
        }
    }

    bool has_mass_above(double x) const {
        return support().hi > x;
    }

    bool nonnegative() const { return support().lo >= 0.0; }

    /// Closed-form E(X^p) where the family admits one; nullopt means
    /// "estimate by Monte Carlo". `absolute` asks for E(|X|^p) instead.
    std::optional<MomentValue> closed_power_moment(double p, bool absolute) const;

    /// Closed-form E(ln |X|); may be -infinity when P(X = 0) > 0.
    std::optional<double> closed_log_abs_moment() const;

    std::string str() const;

private:
    DistributionSpec(DistKind k, double a, double b, double c)
        : kind_(k), p0_(a), p1_(b), p2_(c) {}

    DistKind kind_;
    double p0_, p1_, p2_;
    std::shared_ptr<const DistributionSpec> base_;
};

inline std::optional<MomentValue> DistributionSpec::closed_power_moment(double p, bool absolute) const {
    using detail::real_pow;
    switch (kind_) {
    case DistKind::constant: {
        const double x = absolute ? std::fabs(p0_) : p0_;
        if (x == 0.0 && p < 0.0) return MomentValue::infinite();
        return MomentValue::closed(real_pow(x, p));
    }
    case DistKind::uniform: {
        const double lo = p0_, hi = p1_;
        if (lo >= 0.0) {
            if (lo == 0.0 && p <= -1.0) return MomentValue::infinite();
            if (p == -1.0)
                return MomentValue::closed((std::log(hi) - std::log(lo)) / (hi - lo));
            return MomentValue::closed(
                (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo)));
        }
        if (hi <= 0.0) {
            auto flipped = DistributionSpec::uniform(-hi, -lo).closed_power_moment(p, true);
            if (!flipped || flipped->divergent || absolute) return flipped;
            if (!detail::is_integer(p))
                throw std::domain_error("E(X^p): fractional power on negative support");
            const double sign = std::fmod(p, 2.0) != 0.0 ? -1.0 : 1.0;
            return MomentValue::closed(sign * flipped->value);
        }
        // Support straddles zero.
        if (absolute) {
            if (p <= -1.0) return MomentValue::infinite();
            return MomentValue::closed(
                (std::pow(-lo, p + 1.0) + std::pow(hi, p + 1.0)) / ((p + 1.0) * (hi - lo)));
        }
        if (!detail::is_integer(p))
            throw std::domain_error("E(X^p): fractional power on signed support");
        if (p < 0.0) return MomentValue::infinite();
        return MomentValue::closed(
            (std::pow(hi, p + 1.0) - real_pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo)));
    }
    case DistKind::normal: {
        const double m = p0_, sd = p1_;
        if (p == 0.0) return MomentValue::closed(1.0);
        if (!absolute) {
            if (p == 1.0) return MomentValue::closed(m);
            if (p == 2.0) return MomentValue::closed(m * m + sd * sd);
            if (!detail::is_integer(p))
                throw std::domain_error("E(X^p): fractional power on signed support");
            return std::nullopt;
        }
        if (m == 0.0) {
            if (p <= -1.0) return MomentValue::infinite();
            return MomentValue::closed(std::pow(sd, p) * std::pow(2.0, p / 2.0) *
                                       std::tgamma((p + 1.0) / 2.0) / std::sqrt(detail::pi));
        }
        return std::nullopt;
    }
    case DistKind::lognormal:
        return MomentValue::closed(std::exp(p * p0_ + 0.5 * p * p * p1_ * p1_));
    case DistKind::pareto: {
        const double k = p0_, xm = p1_;
        if (p >= k) return MomentValue::infinite();
        return MomentValue::closed(k * std::pow(xm, p) / (k - p));
    }
    case DistKind::two_point: {
        const double x1 = absolute ? std::fabs(p0_) : p0_;
        const double x2 = absolute ? std::fabs(p2_) : p2_;
        const double w1 = p1_, w2 = 1.0 - p1_;
        if (p < 0.0 && ((x1 == 0.0 && w1 > 0.0) || (x2 == 0.0 && w2 > 0.0)))
            return MomentValue::infinite();
        return MomentValue::closed(w1 * real_pow(x1, p) + w2 * real_pow(x2, p));
    }
    case DistKind::scaled: {
        if (p0_ == 0.0) return DistributionSpec::constant(0.0).closed_power_moment(p, absolute);
        auto b = base_->closed_power_moment(p, absolute);
        if (!b || b->divergent) return b;
        const double f = absolute ? std::pow(std::fabs(p0_), p) : real_pow(p0_, p);
        return MomentValue::closed(f * b->value);
    }
    case DistKind::jittered: {
        auto b = base_->closed_power_moment(p, absolute);
        if (!b || b->divergent) return b;
        return MomentValue::closed(b->value * std::exp(0.5 * p * p * p0_ * p0_));
    }
    }
    throw config_error("invalid distribution kind");
}

inline std::optional<double> DistributionSpec::closed_log_abs_moment() const {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    using detail::xlogx_primitive;
    switch (kind_) {
    case DistKind::constant:
        return p0_ == 0.0 ? ninf : std::log(std::fabs(p0_));
    case DistKind::uniform: {
        const double lo = p0_, hi = p1_;
        double integral;
        if (lo >= 0.0)
            integral = xlogx_primitive(hi) - xlogx_primitive(lo);
        else if (hi <= 0.0)
            integral = xlogx_primitive(-lo) - xlogx_primitive(-hi);
        else
            integral = xlogx_primitive(hi) + xlogx_primitive(-lo);
        return integral / (hi - lo);
    }
    case DistKind::normal:
        if (p0_ == 0.0)
            return std::log(p1_) - 0.5 * (detail::euler_gamma + std::log(2.0));
        return std::nullopt;
    case DistKind::lognormal: return p0_;
    case DistKind::pareto: return std::log(p1_) + 1.0 / p0_;
    case DistKind::two_point: {
        if ((p0_ == 0.0 && p1_ > 0.0) || (p2_ == 0.0 && p1_ < 1.0)) return ninf;
        return p1_ * std::log(std::fabs(p0_)) + (1.0 - p1_) * std::log(std::fabs(p2_));
    }
    case DistKind::scaled: {
        if (p0_ == 0.0) return ninf;
        auto b = base_->closed_log_abs_moment();
        if (!b) return std::nullopt;
        return std::log(std::fabs(p0_)) + *b;
    }
    case DistKind::jittered: return base_->closed_log_abs_moment();
    }
    throw config_error("invalid distribution kind");
}

namespace detail {

inline void format_into(const DistributionSpec& d, std::string& out) {
    auto num = [&out](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
    };
    switch (d.kind()) {
    case DistKind::constant: out += "constant("; num(d.p0()); break;
    case DistKind::uniform: out += "uniform("; num(d.p0()); out += ", "; num(d.p1()); break;
    case DistKind::normal: out += "normal("; num(d.p0()); out += ", "; num(d.p1()); break;
    case DistKind::lognormal: out += "lognormal("; num(d.p0()); out += ", "; num(d.p1()); break;
    case DistKind::pareto: out += "pareto("; num(d.p0()); out += ", "; num(d.p1()); break;
    case DistKind::two_point:
        out += "two_point("; num(d.p0()); out += ", "; num(d.p1()); out += ", "; num(d.p2());
        break;
    case DistKind::scaled:
        out += "scaled(";
        format_into(d.base(), out);
        out += ", ";
        num(d.p0());
        break;
    case DistKind::jittered:
        out += "jittered(";
        format_into(d.base(), out);
        out += ", ";
        num(d.p0());
        break;
    }
    out += ")";
}

} // namespace detail

inline std::string DistributionSpec::str() const {
    std::string out;
    detail::format_into(*this, out);
    return out;
}

/// Monte Carlo E(X^p) (or E(|X|^p)) with standard error of the mean.
inline MomentValue mc_power_moment(const DistributionSpec& d, double p, std::size_t budget,
                                   RngState& rng, bool absolute) {
    if (budget < 2) throw config_error("mc_power_moment: budget must be >= 2");
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < budget; ++i) {
        double x = d.sample(rng);
        if (absolute) x = std::fabs(x);
        const double v = detail::real_pow(x, p);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double n = static_cast<double>(budget);
    return MomentValue::estimated(mean, std::sqrt(m2 / (n - 1.0) / n));
}

/// E(X^p): closed form where the family admits one (constant, uniform,
/// two_point, pareto, lognormal, and their scaled/jittered wrappers),
/// otherwise a Monte Carlo estimate over mc_budget draws. Divergent moments
/// are flagged, not thrown.
inline MomentValue moment(const DistributionSpec& d, double p, std::size_t mc_budget,
                          RngState rng = RngState(0x0077c0ffee)) {
    if (p < 0.0)
        throw config_error("moment: negative order is unsupported");
    if (auto closed = d.closed_power_moment(p, false)) return *closed;
    return mc_power_moment(d, p, mc_budget, rng, false);
}

/// E(|X|^p); same evaluation strategy as moment().
inline MomentValue abs_moment(const DistributionSpec& d, double p, std::size_t mc_budget,
                              RngState rng = RngState(0x0077c0ffee)) {
    if (auto closed = d.closed_power_moment(p, true)) return *closed;
    return mc_power_moment(d, p, mc_budget, rng, true);
}

/// E(ln |X|); -infinity when the law puts mass at zero.
inline MomentValue log_abs_moment(const DistributionSpec& d, std::size_t mc_budget,
                                  RngState rng = RngState(0x0077c0ffee)) {
    if (auto closed = d.closed_log_abs_moment()) return MomentValue::closed(*closed);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < mc_budget; ++i) {
        const double v = std::log(std::fabs(d.sample(rng)));
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double n = static_cast<double>(mc_budget);
    return MomentValue::estimated(mean, std::sqrt(m2 / (n - 1.0) / n));
}

// ---------------------------------------------------------------------------
// Mini-grammar: specs are written in config files as `kind(arg, arg, ...)`,
// with nested specs allowed where a base law is expected, e.g.
//   jittered(two_point(2, 0.2, 0.5), 0.01)

namespace detail {

struct SpecParser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw config_error("distribution '" + std::string(text) + "': " + what +
                           " at offset " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string_view ident() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected a distribution name");
        return text.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        const char* begin = text.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }

    DistributionSpec parse_spec() {
        const std::string_view name = ident();
        if (!consume('(')) fail("expected '('");
        DistributionSpec result = dispatch(name);
        if (!consume(')')) fail("expected ')'");
        return result;
    }

    DistributionSpec dispatch(std::string_view name) {
        auto next_number = [this] {
            if (!consume(',')) fail("expected ','");
            return number();
        };
        if (name == "constant") return DistributionSpec::constant(number());
        if (name == "uniform") {
            const double lo = number();
            return DistributionSpec::uniform(lo, next_number());
        }
        if (name == "normal") {
            const double m = number();
            return DistributionSpec::normal(m, next_number());
        }
        if (name == "lognormal") {
            const double m = number();
            return DistributionSpec::lognormal(m, next_number());
        }
        if (name == "pareto") {
            const double k = number();
            return DistributionSpec::pareto(k, next_number());
        }
        if (name == "two_point") {
            const double v1 = number();
            const double p1 = next_number();
            return DistributionSpec::two_point(v1, p1, next_number());
        }
        if (name == "scaled") {
            DistributionSpec base = parse_spec();
            return DistributionSpec::scaled(std::move(base), next_number());
        }
        if (name == "jittered") {
            DistributionSpec base = parse_spec();
            return DistributionSpec::jittered(std::move(base), next_number());
        }
        fail("unknown distribution kind '" + std::string(name) + "'");
    }
};

} // namespace detail

inline DistributionSpec parse_distribution(std::string_view text) {
    detail::SpecParser p{text};
    DistributionSpec d = p.parse_spec();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return d;
}

} // namespace wildsim
