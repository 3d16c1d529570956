// Tour of the library: exponent solving, simulation, tail estimation,
// and the market presets, printed as a short narrative.
#include <cmath>
#include <cstdio>

#include "wildsim/kesten.hpp"
#include "wildsim/market.hpp"
#include "wildsim/presets.hpp"
#include "wildsim/recurrence.hpp"
#include "wildsim/tail.hpp"

using namespace wildsim;

int main() {
    // A disturbance hitting a feedback loop of strength a echoes 1/(1-a)
    // times over; at a = 0.9 a one-cent shock moves the price ten cents.
    std::printf("multiplier at a = 0.9: %.1f\n\n", multiplier(0.9));

    // Random feedback: r_t = a_t r_{t-1} + e_t. When a_t sometimes exceeds 1
    // the stationary distribution grows a power-law tail whose exponent
    // solves E(a^mu) = 1.
    const DistributionSpec a_law = DistributionSpec::uniform(0.0, 2.0);
    const DistributionSpec e_law = DistributionSpec::normal(0.0, 1.0);
    const auto root = solve_exponent(a_law);
    std::printf("a ~ %s  =>  predicted tail exponent %.4f\n", a_law.str().c_str(), *root);

    const RecurrenceSpec spec(a_law, InputMode::direct, e_law, 1);
    const SeriesSample series = simulate_path(spec, 400000, 2000, RngState(1));
    const StabilityBand band = hill_stability_band(positive_magnitudes(series.values).values);
    std::printf("simulated |r| Hill band: %.3f / %.3f / %.3f (k/2, k, 2k)\n\n",
                band.at_half.exponent, band.central.exponent, band.at_double.exponent);

    // The same machinery drives a stock market where traders' demand feeds
    // back into the price through finite liquidity.
    const ScenarioConfig preset = load_preset("kesten-stock");
    const auto feedback = impact_feedback_law(preset.market->config);
    std::printf("kesten-stock feedback law: %s\n", feedback->str().c_str());
    std::printf("its moment root: %.3f  (simulated returns inherit this tail)\n\n",
                *solve_exponent(*feedback));

    // Pure speculation compounds: a bubble growing at rho = 10% per step.
    const std::vector<double> bubble = bubble_path(0.1, 1.0, 10);
    std::printf("bubble after 10 steps of rho = 0.1: %.4f (= 1.1^10)\n", bubble.back());

    // Overcorrecting fundamentalists overshoot instead of converging.
    const std::vector<double> correction = negative_feedback_path(2.5, 100.0, 50.0, 10);
    std::printf("overcorrection rho = 2.5, 10 steps: price swings to %.0f\n\n",
                correction.back());

    std::printf("presets: ");
    for (const Preset& p : presets()) std::printf("%s ", p.name);
    std::printf("\n");
    return 0;
}
