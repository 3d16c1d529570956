#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wildsim/errors.hpp"
#include "wildsim/kesten.hpp"

using namespace wildsim;

TEST_CASE("unit-moment bisection solves closed moment curves", "[kesten]") {
    // E uniform(0,2)^mu = 2^mu/(mu+1), root exactly 1
    auto g_uniform = [](double mu) { return std::pow(2.0, mu) / (mu + 1.0); };
    const auto root = solve_unit_moment_root(g_uniform, 10.0, 1e-10);
    REQUIRE(root);
    REQUIRE(*root == Catch::Approx(1.0).margin(1e-8));

    auto g_two_point = [](double mu) {
        return 0.2 * std::pow(2.0, mu) + 0.8 * std::pow(0.5, mu);
    };
    REQUIRE(*solve_unit_moment_root(g_two_point, 10.0, 1e-10) ==
            Catch::Approx(2.0).margin(1e-8));

    // stays below 1 on (0, mu_max]: no root to report
    auto g_low = [](double mu) { return 0.5 * std::pow(1.01, mu); };
    REQUIRE_FALSE(solve_unit_moment_root(g_low, 10.0, 1e-10));
}

TEST_CASE("exponent solver handles the canonical laws", "[kesten]") {
    const auto u = solve_exponent(DistributionSpec::uniform(0.0, 2.0));
    REQUIRE(u);
    REQUIRE(*u == Catch::Approx(1.0).margin(1e-6));

    const auto tp = solve_exponent(DistributionSpec::two_point(2.0, 0.2, 0.5));
    REQUIRE(tp);
    REQUIRE(*tp == Catch::Approx(2.0).margin(1e-6));

    // light multiplicative jitter barely moves the root
    const auto jtp = solve_exponent(
        DistributionSpec::jittered(DistributionSpec::two_point(2.0, 0.2, 0.5), 0.01));
    REQUIRE(jtp);
    REQUIRE(*jtp == Catch::Approx(1.99952).margin(5e-4));

    // market-style composition: a = c N with pareto participation
    const auto market = solve_exponent(DistributionSpec::scaled(
        DistributionSpec::pareto(5.0, 100.0), 0.0073680629972807726));
    REQUIRE(market);
    REQUIRE(*market == Catch::Approx(3.0).margin(1e-6));
}

TEST_CASE("exponent solver reports absence and rejects nonstationary laws", "[kesten]") {
    // |a| never above 1: moments all below 1
    REQUIRE_FALSE(solve_exponent(DistributionSpec::uniform(0.0, 0.9)));
    // crosses 1 only far beyond mu_max
    REQUIRE_FALSE(solve_exponent(DistributionSpec::uniform(0.0, 1.02)));
    // E ln|a| >= 0: no stationary regime at all
    REQUIRE_THROWS_AS(solve_exponent(DistributionSpec::uniform(0.0, 3.0)), std::domain_error);
}

TEST_CASE("monte carlo fallback agrees with the closed solver", "[kesten]") {
    ExponentSolveOptions opts;
    opts.force_monte_carlo = true;
    const auto root = solve_exponent(DistributionSpec::uniform(0.0, 2.0), opts, RngState(5));
    REQUIRE(root);
    REQUIRE(*root == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("structural moment finiteness", "[kesten]") {
    REQUIRE(*moment_finite_structural(DistributionSpec::uniform(-3.0, 5.0), 7.0));
    REQUIRE(*moment_finite_structural(DistributionSpec::normal(0.0, 1.0), 12.0));
    REQUIRE(*moment_finite_structural(DistributionSpec::pareto(2.5, 1.0), 2.0));
    REQUIRE_FALSE(*moment_finite_structural(DistributionSpec::pareto(2.5, 1.0), 2.5));
    REQUIRE_FALSE(*moment_finite_structural(DistributionSpec::pareto(2.5, 1.0), 3.0));
}

TEST_CASE("theorem conditions: continuous contracting feedback passes all", "[kesten]") {
    const KestenReport rep = check_kesten(DistributionSpec::uniform(0.0, 2.0),
                                          DistributionSpec::normal(0.0, 1.0), 1.0, 100000);
    REQUIRE(rep.condition_i == ConditionVerdict::pass);
    REQUIRE(rep.condition_ii == ConditionVerdict::pass);
    REQUIRE(rep.condition_iii == ConditionVerdict::pass);
    REQUIRE(rep.condition_iv == ConditionVerdict::pass);
    REQUIRE(rep.stationarity == StationarityVerdict::stationary);
    REQUIRE_FALSE(rep.degenerate_fixed_point);
    REQUIRE(rep.mu_root);
    REQUIRE(*rep.mu_root == 1.0);
    REQUIRE(rep.moment_at_mu == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("theorem conditions: a two-point feedback is lattice in the log", "[kesten]") {
    const KestenReport rep = check_kesten(DistributionSpec::two_point(2.0, 0.2, 0.5),
                                          DistributionSpec::normal(0.0, 1.0), 2.0, 100000);
    REQUIRE(rep.condition_i == ConditionVerdict::pass);
    REQUIRE(rep.condition_iv == ConditionVerdict::fail);
    REQUIRE(rep.notes.find("jittered") != std::string::npos);

    // the documented fix restores (iv)
    const KestenReport fixed = check_kesten(
        DistributionSpec::jittered(DistributionSpec::two_point(2.0, 0.2, 0.5), 0.01),
        DistributionSpec::normal(0.0, 1.0), 2.0, 100000);
    REQUIRE(fixed.condition_iv == ConditionVerdict::pass);
}

TEST_CASE("theorem conditions: constant coefficients are degenerate", "[kesten]") {
    const KestenReport rep = check_kesten(DistributionSpec::constant(0.8),
                                          DistributionSpec::constant(0.4), 1.0, 10000);
    REQUIRE(rep.degenerate_fixed_point);
    REQUIRE(rep.condition_iv == ConditionVerdict::fail);
    REQUIRE(rep.stationarity == StationarityVerdict::stationary);
    REQUIRE(rep.notes.find("2.000000") != std::string::npos); // (1-0.8)^{-1} 0.4

    const KestenReport zero_input = check_kesten(DistributionSpec::uniform(0.0, 2.0),
                                                 DistributionSpec::constant(0.0), 1.0, 10000);
    REQUIRE(zero_input.degenerate_fixed_point);
}

TEST_CASE("condition (i) fails off the root and at divergent moments", "[kesten]") {
    const KestenReport off = check_kesten(DistributionSpec::uniform(0.0, 2.0),
                                          DistributionSpec::normal(0.0, 1.0), 2.0, 100000);
    REQUIRE(off.condition_i == ConditionVerdict::fail); // E a^2 = 4/3
    REQUIRE_FALSE(off.mu_root);

    const KestenReport heavy = check_kesten(DistributionSpec::pareto(1.5, 0.5),
                                            DistributionSpec::normal(0.0, 1.0), 2.0, 100000);
    REQUIRE(heavy.condition_i == ConditionVerdict::fail);
    REQUIRE(heavy.notes.find("infinite") != std::string::npos);
}

TEST_CASE("grincevicius prediction matches the closed amplification numbers", "[kesten]") {
    // E(a^1.5) = 0.5 exactly for uniform(0, 1.25^{2/3})
    const GrincevReport half = grincevicius_predict(
        DistributionSpec::uniform(0.0, 1.1603972084031947), 1.5, false, 1000);
    REQUIRE(half.feedback_moment == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(half.tail_ratio == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(half.amplification == Catch::Approx(1.0).margin(1e-9));
    REQUIRE_FALSE(half.coupled);

    // E(a^mu) = 0.9 exactly: ratio 10, excess likelihood 0.9 x 10 = 9
    const GrincevReport nine =
        grincevicius_predict(DistributionSpec::two_point(1.0, 0.9, 0.0), 1.5, true, 1000);
    REQUIRE(nine.feedback_moment == Catch::Approx(0.9).margin(1e-15));
    REQUIRE(nine.tail_ratio == Catch::Approx(10.0).margin(1e-12));
    REQUIRE(nine.amplification == Catch::Approx(9.0).margin(1e-12));
    REQUIRE(nine.coupled);
}

TEST_CASE("grincevicius prediction rejects out-of-regime laws", "[kesten]") {
    REQUIRE_THROWS_AS(grincevicius_predict(DistributionSpec::uniform(0.0, 2.0), 1.5, false, 1000),
                      std::domain_error); // E a^1.5 > 1
    REQUIRE_THROWS_AS(grincevicius_predict(DistributionSpec::normal(0.0, 1.0), 1.5, false, 1000),
                      std::domain_error); // signed feedback
    REQUIRE_THROWS_AS(grincevicius_predict(DistributionSpec::uniform(0.0, 1.0), 0.0, false, 1000),
                      config_error);
}

TEST_CASE("levy regime consistency against a return exponent near 3", "[kesten]") {
    REQUIRE_FALSE(levy_regime_check(1.5).consistent); // divergent-variance opinions
    REQUIRE(levy_regime_check(3.5).consistent);
    const LevyRegimeCheck edge = levy_regime_check(2.0);
    REQUIRE(edge.boundary);
}
