#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wildsim/kesten.hpp"
#include "wildsim/market.hpp"
#include "wildsim/matrix.hpp"
#include "wildsim/recurrence.hpp"
#include "wildsim/tail.hpp"

namespace wildsim {

using json = nlohmann::json;

inline json to_json_opt(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline void to_json(json& j, const TailEstimate& t) {
    j = json{{"exponent", t.exponent},
             {"method", t.method},
             {"k", t.order_count},
             {"stderr", t.std_error},
             {"xmin", t.x_min}};
}

inline void to_json(json& j, const StabilityBand& b) {
    j = json{{"at_half", b.at_half},
             {"central", b.central},
             {"at_double", b.at_double},
             {"width", b.width},
             {"power_law", b.power_law}};
}

inline void to_json(json& j, const MomentProbe& p) {
    j = json{{"trajectory", p.trajectory},
             {"growth_ratio", p.growth_ratio},
             {"divergent_suspected", p.divergent_suspected}};
}

inline void to_json(json& j, const StationarityReport& r) {
    j = json{{"verdict", to_string(r.verdict)},
             {"log_a_mean", r.log_a_mean},
             {"log_a_stderr", r.log_a_std_error},
             {"exact", r.exact},
             {"zero_feedback_atom", r.zero_feedback_atom}};
}

inline void to_json(json& j, const LogWalkSummary& w) {
    j = json{{"mean_increment", w.mean_increment},
             {"stderr", w.std_error},
             {"gaussian_fit_residual", w.gaussian_fit_residual},
             {"excursions", w.excursions}};
}

inline void to_json(json& j, const KestenReport& r) {
    j = json{{"mu_root", to_json_opt(r.mu_root)},
             {"condition_i", to_string(r.condition_i)},
             {"condition_ii", to_string(r.condition_ii)},
             {"condition_iii", to_string(r.condition_iii)},
             {"condition_iv", to_string(r.condition_iv)},
             {"stationarity", to_string(r.stationarity)},
             {"degenerate_fixed_point", r.degenerate_fixed_point},
             {"moment_at_mu", r.moment_at_mu},
             {"moment_stderr", r.moment_std_error},
             {"notes", r.notes}};
}

inline void to_json(json& j, const GrincevReport& r) {
    j = json{{"tail_ratio", r.tail_ratio},
             {"amplification", r.amplification},
             {"feedback_moment", r.feedback_moment},
             {"moment_stderr", r.moment_std_error},
             {"coupled", r.coupled}};
}

inline void to_json(json& j, const VolumeImbalanceReport& r) {
    j = json{{"q_power_law", r.q_power_law},
             {"v_power_law", r.v_power_law},
             {"q_tail", r.q_tail},
             {"v_tail", r.v_tail},
             {"exponent_ratio", r.exponent_ratio},
             {"ratio_stderr", r.ratio_std_error},
             {"consistent_with_square_root", r.consistent_with_square_root}};
}

inline void to_json(json& j, const MatrixExponentEstimate& e) {
    j = json{{"root", to_json_opt(e.root)},
             {"half_horizon_root", to_json_opt(e.half_horizon_root)},
             {"converged", e.converged}};
}

} // namespace wildsim
