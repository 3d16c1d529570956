#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/rng.hpp"

using namespace wildsim;

TEST_CASE("rng streams are deterministic and split streams diverge", "[dist][rng]") {
    RngState a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 64; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
    bool any_diff = false;
    RngState a2(42, 0);
    for (int i = 0; i < 64; ++i) any_diff |= a2.next_u64() != c.next_u64();
    REQUIRE(any_diff);

    RngState s(7, 3);
    RngState t = s.split(11);
    REQUIRE(t.seed() == s.seed());
    REQUIRE(t.stream_id() != s.stream_id());
    REQUIRE(s.split(11).stream_id() == t.stream_id()); // split is a pure function
}

TEST_CASE("uniform01 stays in [0,1) and normal matches its first moments", "[dist][rng]") {
    RngState rng(123);
    const int n = 200000;
    double mn = 1.0, mx = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        mn = std::min(mn, u);
        mx = std::max(mx, u);
    }
    REQUIRE(mn >= 0.0);
    REQUIRE(mx < 1.0);

    double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
        sum3 += z * z * z;
    }
    REQUIRE(std::fabs(sum / n) < 4.0 / std::sqrt(double(n)));
    REQUIRE(std::fabs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    REQUIRE(std::fabs(sum3 / n) < 4.0 * std::sqrt(15.0 / n));
}

TEST_CASE("sampling matches closed moments family by family", "[dist]") {
    const int n = 400000;
    auto mc_mean_sd = [&](const DistributionSpec& d, std::uint64_t seed) {
        RngState rng(seed);
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = d.sample(rng);
            s += x;
            s2 += x * x;
        }
        const double mean = s / n;
        return std::pair{mean, std::sqrt(s2 / n - mean * mean)};
    };

    auto [mu, su] = mc_mean_sd(DistributionSpec::uniform(-1.0, 3.0), 1);
    REQUIRE_THAT(mu, Catch::Matchers::WithinAbs(1.0, 0.01));
    REQUIRE_THAT(su, Catch::Matchers::WithinAbs(4.0 / std::sqrt(12.0), 0.01));

    auto [mn, sn] = mc_mean_sd(DistributionSpec::normal(2.0, 0.5), 2);
    REQUIRE_THAT(mn, Catch::Matchers::WithinAbs(2.0, 0.005));
    REQUIRE_THAT(sn, Catch::Matchers::WithinAbs(0.5, 0.005));

    // lognormal(0, 0.25): mean e^{sigma^2/2}
    auto [ml, sl] = mc_mean_sd(DistributionSpec::lognormal(0.0, 0.25), 3);
    REQUIRE_THAT(ml, Catch::Matchers::WithinAbs(std::exp(0.03125), 0.005));
    (void)sl;

    // pareto(3, 2): mean = exponent*x_min/(exponent-1) = 3
    auto [mp, sp] = mc_mean_sd(DistributionSpec::pareto(3.0, 2.0), 4);
    REQUIRE_THAT(mp, Catch::Matchers::WithinAbs(3.0, 0.03));
    (void)sp;

    auto [mt, st] = mc_mean_sd(DistributionSpec::two_point(2.0, 0.2, 0.5), 5);
    REQUIRE_THAT(mt, Catch::Matchers::WithinAbs(0.8, 0.005));
    (void)st;

    RngState rng_const(1);
    REQUIRE(DistributionSpec::constant(3.5).sample(rng_const) == 3.5);
}

TEST_CASE("closed power moments match hand values and flag divergence", "[dist]") {
    const auto u = DistributionSpec::uniform(0.0, 2.0);
    REQUIRE(u.closed_power_moment(1.0, true)->value == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(u.closed_power_moment(2.0, true)->value ==
            Catch::Approx(4.0 / 3.0).margin(1e-14));

    const auto p = DistributionSpec::pareto(3.0, 1.0);
    REQUIRE(p.closed_power_moment(2.0, true)->value == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(p.closed_power_moment(3.0, true)->divergent);
    REQUIRE(p.closed_power_moment(4.0, true)->divergent);

    const auto tp = DistributionSpec::two_point(2.0, 0.2, 0.5);
    REQUIRE(tp.closed_power_moment(2.0, true)->value == Catch::Approx(1.0).margin(1e-14));

    const auto sc = DistributionSpec::scaled(u, -3.0);
    REQUIRE(sc.closed_power_moment(2.0, true)->value ==
            Catch::Approx(9.0 * 4.0 / 3.0).margin(1e-12));

    // multiplicative lognormal jitter contributes exp(p^2 sd^2 / 2)
    const auto j = DistributionSpec::jittered(u, 0.1);
    REQUIRE(j.closed_power_moment(2.0, true)->value ==
            Catch::Approx(4.0 / 3.0 * std::exp(0.02)).margin(1e-12));
}

TEST_CASE("closed log moments match hand values", "[dist]") {
    const auto u = DistributionSpec::uniform(0.0, 2.0);
    REQUIRE(*u.closed_log_abs_moment() ==
            Catch::Approx(std::log(2.0) - 1.0).margin(1e-12));

    // E ln pareto(alpha, xm) = ln xm + 1/alpha
    const auto p = DistributionSpec::pareto(4.0, 2.0);
    REQUIRE(*p.closed_log_abs_moment() ==
            Catch::Approx(std::log(2.0) + 0.25).margin(1e-12));

    const auto tp = DistributionSpec::two_point(2.0, 0.2, 0.5);
    REQUIRE(*tp.closed_log_abs_moment() ==
            Catch::Approx(0.2 * std::log(2.0) + 0.8 * std::log(0.5)).margin(1e-12));
}

TEST_CASE("support and nonnegativity are computed structurally", "[dist]") {
    const auto u = DistributionSpec::uniform(0.5, 2.0);
    REQUIRE(u.support().lo == 0.5);
    REQUIRE(u.support().hi == 2.0);
    REQUIRE(u.nonnegative());

    const auto flipped = DistributionSpec::scaled(u, -2.0);
    REQUIRE(flipped.support().lo == -4.0);
    REQUIRE(flipped.support().hi == -1.0);
    REQUIRE_FALSE(flipped.nonnegative());

    const auto p = DistributionSpec::pareto(1.5, 3.0);
    REQUIRE(p.support().lo == 3.0);
    REQUIRE(std::isinf(p.support().hi));

    REQUIRE_FALSE(DistributionSpec::normal(0.0, 1.0).nonnegative());
}

TEST_CASE("monte carlo moment agrees with the closed form", "[dist]") {
    const auto u = DistributionSpec::uniform(0.0, 2.0);
    const MomentValue closed = moment(u, 1.5, 1000);
    REQUIRE(closed.exact);
    REQUIRE(closed.value == Catch::Approx(std::pow(2.0, 1.5) / 2.5).margin(1e-12));

    // jitter has no full closed form under |.|^p with p fractional? it does;
    // force the sampling path through a law without one: two-sided uniform
    // absolute moment is closed too, so just check MC against it directly.
    const MomentValue mc = moment(u, 1.5, 200000, RngState(9));
    REQUIRE(mc.value == Catch::Approx(closed.value).margin(5.0 * mc.std_error + 1e-3));
}

TEST_CASE("distribution grammar parses and rejects what it should", "[dist][config]") {
    REQUIRE(parse_distribution("uniform(0, 2)").str() == "uniform(0, 2)");
    REQUIRE(parse_distribution("  normal( 0 , 0.02 )").str() == "normal(0, 0.02)");
    REQUIRE(parse_distribution("scaled(jittered(pareto(3.4, 100), 0.01), 0.5)").kind() ==
            DistKind::scaled);
    RngState rng_c7(0);
    REQUIRE(parse_distribution("constant(7)").sample(rng_c7) == 7.0);

    REQUIRE_THROWS_AS(parse_distribution("gamma(1, 2)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("uniform(1)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("uniform(2, 1)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("uniform(0, 2) trailing"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("normal(0, -1)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("pareto(0, 1)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution("two_point(1, 1.5, 2)"), config_error);
    REQUIRE_THROWS_AS(parse_distribution(""), config_error);
    REQUIRE_THROWS_AS(parse_distribution("uniform(a, b)"), config_error);
}

TEST_CASE("parse and str round-trip preserves sampling behavior", "[dist]") {
    const char* texts[] = {
        "uniform(-1, 1)",        "normal(0, 0.02)",  "lognormal(0, 0.5)",
        "pareto(1.5, 1)",        "two_point(2, 0.2, 0.5)",
        "scaled(pareto(5, 100), 0.25)", "jittered(two_point(2, 0.2, 0.5), 0.01)",
    };
    for (const char* text : texts) {
        const DistributionSpec d1 = parse_distribution(text);
        const DistributionSpec d2 = parse_distribution(d1.str());
        RngState r1(77, 5), r2(77, 5);
        for (int i = 0; i < 32; ++i) REQUIRE(d1.sample(r1) == d2.sample(r2));
    }
}
