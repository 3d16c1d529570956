#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/rng.hpp"
#include "wildsim/tail.hpp"

using namespace wildsim;

namespace {

std::vector<double> pareto_sample(double exponent, std::size_t n, std::uint64_t seed) {
    const auto law = DistributionSpec::pareto(exponent, 1.0);
    RngState rng(seed);
    std::vector<double> out(n);
    for (double& x : out) x = law.sample(rng);
    return out;
}

} // namespace

TEST_CASE("hill estimator matches the closed three-point example", "[tail]") {
    const double e1 = std::exp(1.0);
    const std::vector<double> sample{e1, e1 * e1 * e1, e1 * e1}; // order must not matter
    const TailEstimate est = hill_estimator(sample, 2);
    // descending logs 3, 2 against reference 1: exponent = 2 / ((3-1)+(2-1))
    REQUIRE(est.exponent == Catch::Approx(2.0 / 3.0).margin(1e-12));
    REQUIRE(est.order_count == 2);
    REQUIRE(est.x_min == Catch::Approx(e1).margin(1e-12));
    REQUIRE(est.std_error == Catch::Approx(est.exponent / std::sqrt(2.0)).margin(1e-12));
    REQUIRE(est.method == "hill");
}

TEST_CASE("hill estimator input validation", "[tail]") {
    std::vector<double> ok{1.0, 2.0, 3.0, 4.0};
    REQUIRE_THROWS_AS(hill_estimator(ok, 0), insufficient_data_error);
    REQUIRE_THROWS_AS(hill_estimator(ok, 4), insufficient_data_error);
    std::vector<double> with_zero{1.0, 0.0, 3.0};
    REQUIRE_THROWS_AS(hill_estimator(with_zero, 1), std::domain_error);
    std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
    REQUIRE_THROWS_AS(hill_estimator(flat, 2), numeric_error);
}

TEST_CASE("hill estimator recovers a pareto exponent", "[tail]") {
    const auto sample = pareto_sample(2.5, 100000, 31);
    const std::size_t k = default_hill_order(sample.size());
    const TailEstimate est = hill_estimator(sample, k);
    REQUIRE(std::fabs(est.exponent - 2.5) < 3.0 * est.std_error);
}

TEST_CASE("default hill order is twice the square root", "[tail]") {
    REQUIRE(default_hill_order(100) == 20);
    REQUIRE(default_hill_order(1000000) == 2000);
    REQUIRE(default_hill_order(4) == 4); // rule meets n here; below n from 5 on
    REQUIRE(default_hill_order(5) < 5);
}

TEST_CASE("ccdf uses strictly-greater counting", "[tail]") {
    const std::vector<double> sample{1.0, 2.0, 2.0, 3.0};
    const auto pts = ccdf_points(sample);
    REQUIRE(pts.size() == 3);
    REQUIRE(pts[0] == std::pair{1.0, 0.75});
    REQUIRE(pts[1] == std::pair{2.0, 0.25});
    REQUIRE(pts[2] == std::pair{3.0, 0.0});
}

TEST_CASE("rank regression fits an exact power grid", "[tail]") {
    // deterministic pareto(2) quantiles: x_i = (i/n)^{-1/2}
    std::vector<double> grid;
    const std::size_t n = 20000;
    for (std::size_t i = 1; i <= n; ++i)
        grid.push_back(std::pow(double(i) / double(n), -0.5));
    const TailEstimate est = rank_regression(grid, 0.05);
    REQUIRE(est.method == "rank_regression");
    REQUIRE(est.exponent == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("stability band accepts pareto tails and rejects bounded ones", "[tail]") {
    const StabilityBand on_pareto = hill_stability_band(pareto_sample(1.5, 200000, 77));
    REQUIRE(on_pareto.power_law);
    REQUIRE(on_pareto.central.exponent == Catch::Approx(1.5).margin(0.15));
    REQUIRE(on_pareto.at_half.order_count == on_pareto.central.order_count / 2);
    REQUIRE(on_pareto.at_double.order_count == on_pareto.central.order_count * 2);

    // bounded support: the apparent exponent roughly halves when the cut
    // doubles, so the width rule rejects it. (A tame lognormal drifts too
    // slowly for this rule to catch at these sizes — known Hill caveat.)
    const auto flat_law = DistributionSpec::uniform(0.0, 1.0);
    RngState rng(78);
    std::vector<double> flat_sample(200000);
    for (double& x : flat_sample) x = flat_law.sample(rng);
    const StabilityBand on_bounded = hill_stability_band(flat_sample);
    REQUIRE_FALSE(on_bounded.power_law);
    REQUIRE(on_bounded.at_double.exponent < on_bounded.at_half.exponent);
}

TEST_CASE("stability band width is relative to the central estimate", "[tail]") {
    const StabilityBand band = hill_stability_band(pareto_sample(3.0, 200000, 79));
    const double lo = std::min({band.at_half.exponent, band.central.exponent,
                                band.at_double.exponent});
    const double hi = std::max({band.at_half.exponent, band.central.exponent,
                                band.at_double.exponent});
    REQUIRE(band.width == Catch::Approx(hi - lo).margin(1e-12));
    REQUIRE(band.power_law == (band.width < 0.25 * band.central.exponent));
}

TEST_CASE("moment probe suspects divergence only past the tail exponent", "[tail]") {
    const auto heavy = pareto_sample(1.5, 200000, 80);
    REQUIRE(moment_probe(heavy, 2.0).divergent_suspected);   // E x^2 infinite
    REQUIRE_FALSE(moment_probe(heavy, 0.5).divergent_suspected);

    const auto thin = pareto_sample(6.0, 200000, 81);
    REQUIRE_FALSE(moment_probe(thin, 2.0).divergent_suspected);
}

TEST_CASE("wildness compare ranks a heavy tail against a mild one", "[tail]") {
    const auto heavy = pareto_sample(1.2, 100000, 82);
    RngState rng(83);
    std::vector<double> mild(100000);
    const auto norm = DistributionSpec::normal(0.0, 1.0);
    for (double& x : mild) x = std::fabs(norm.sample(rng)) + 1e-12;
    REQUIRE(wildness_compare(heavy, mild) == WildnessVerdict::x_wilder);
    REQUIRE(wildness_compare(mild, heavy) == WildnessVerdict::y_wilder);
    REQUIRE(wildness_compare(mild, mild) == WildnessVerdict::both_mild);
}

TEST_CASE("positive magnitudes folds signs and counts dropped zeros", "[tail]") {
    const std::vector<double> series{-2.0, 0.0, 1.5, 0.0, -0.5};
    const MagnitudeSample mags = positive_magnitudes(series);
    REQUIRE(mags.dropped_zeros == 2);
    REQUIRE(mags.values == std::vector<double>{2.0, 1.5, 0.5});
}
