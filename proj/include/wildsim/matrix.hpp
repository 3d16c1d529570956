#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wildsim/distribution.hpp"
#include "wildsim/errors.hpp"
#include "wildsim/kesten.hpp"
#include "wildsim/rng.hpp"
#include "wildsim/tail.hpp"

namespace wildsim {

/// Dense square matrix, row-major. Doubles as the opinion-network weight
/// matrix (validate_opinion_network enforces those invariants) and as a
/// plain container for derived matrices like the multiplier.
class WeightMatrix {
public:
    WeightMatrix() = default;
    explicit WeightMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    static WeightMatrix identity(std::size_t n) {
        WeightMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        WeightMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw config_error("WeightMatrix: rows must form a square grid");
            for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += at(i, j);
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::fabs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    /// Opinion-network invariants: zero diagonal, nonnegative entries, row
    /// sums at most 1, and at least one row keeping some self-weight.
    void validate_opinion_network() const {
        if (n_ == 0)
            throw config_error("opinion network: matrix must be nonempty");
        bool some_row_below_one = false;
        for (std::size_t i = 0; i < n_; ++i) {
            if (at(i, i) != 0.0)
                throw config_error("opinion network: diagonal must be zero (no self-imitation)");
            double sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                if (at(i, j) < 0.0)
                    throw config_error("opinion network: weights must be nonnegative");
                sum += at(i, j);
            }
            if (sum > 1.0 + 1e-12)
                throw config_error("opinion network: row sums must not exceed 1");
            if (sum < 1.0 - 1e-12) some_row_below_one = true;
        }
        if (!some_row_below_one)
            throw config_error(
                "opinion network: at least one row sum must stay below 1 "
                "(someone must keep weight on their own judgment)");
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline WeightMatrix operator*(const WeightMatrix& a, const WeightMatrix& b) {
    const std::size_t n = a.size();
    WeightMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

inline void mat_vec(const WeightMatrix& m, const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = m.size();
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m.at(i, j) * x[j];
        out[i] = s;
    }
}

/// True iff the directed graph of positive entries is strongly connected:
/// node 0 reaches every node along edges and along reversed edges.
inline bool strong_connectivity(const WeightMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return false;
    auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                const double w = transpose ? m.at(j, i) : m.at(i, j);
                if (w > 0.0 && !seen[j]) {
                    seen[j] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == n;
    };
    return reaches_all(false) && reaches_all(true);
}

namespace detail {

/// Gelfand fallback: rho(A) = lim ||A^k||^{1/k}, evaluated by repeated
/// squaring with Frobenius rescaling so k reaches 2^50 without overflow.
/// Converges for any matrix, including oscillatory spectra that defeat
/// plain power iteration.
inline double spectral_radius_squaring(WeightMatrix b, double tol) {
    double log_scale = 0.0;
    double previous = -1.0;
    for (int m = 1; m <= 60; ++m) {
        b = b * b;
        const double s = b.frobenius();
        if (s == 0.0) return 0.0;
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) b.at(i, j) /= s;
        log_scale = 2.0 * log_scale + std::log(s);
        const double estimate = std::exp(log_scale / std::pow(2.0, m));
        if (!std::isfinite(estimate))
            throw numeric_error("spectral_radius: scaling broke down");
        if (previous >= 0.0 && std::fabs(estimate - previous) <= tol * std::max(1.0, estimate))
            return estimate;
        previous = estimate;
    }
    return previous;
}

} // namespace detail

/// Maximum absolute eigenvalue. Power iteration handles the common case;
/// spectra with several eigenvalues tied in magnitude (rings, +/- pairs)
/// make the iteration oscillate, and the repeated-squaring fallback
/// resolves those.
inline double spectral_radius(const WeightMatrix& m, double tol = 1e-10) {
    const std::size_t n = m.size();
    if (n == 0)
        throw config_error("spectral_radius: empty matrix");
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7); // break symmetry deterministically
    double lambda = 0.0, prev = -1.0;
    int stable = 0;
    for (int iter = 0; iter < 512; ++iter) {
        mat_vec(m, v, w);
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        double vnorm = 0.0;
        for (double x : v) vnorm += x * x;
        lambda = norm / std::sqrt(vnorm);
        if (!std::isfinite(lambda))
            throw numeric_error("spectral_radius: power iteration overflowed");
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (prev >= 0.0 && std::fabs(lambda - prev) <= tol * std::max(1.0, lambda)) {
            if (++stable >= 4) return lambda;
        } else {
            stable = 0;
        }
        prev = lambda;
    }
    return detail::spectral_radius_squaring(m, tol);
}

/// Largest singular value (Euclidean operator norm): power iteration on
/// M^T M, whose spectrum is nonnegative and cannot oscillate.
inline double operator_norm(const WeightMatrix& m, double tol = 1e-10) {
    const std::size_t n = m.size();
    if (n == 0)
        throw config_error("operator_norm: empty matrix");
    std::vector<double> v(n), mv(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 5);
    double sigma = 0.0, prev = -1.0;
    for (int iter = 0; iter < 2048; ++iter) {
        mat_vec(m, v, mv); // M v
        // w = M^T (M v)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += m.at(i, j) * mv[i];
            w[j] = s;
        }
        double mvn = 0.0, vn = 0.0;
        for (double x : mv) mvn += x * x;
        for (double x : v) vn += x * x;
        if (vn == 0.0 || mvn == 0.0) return 0.0;
        sigma = std::sqrt(mvn / vn);
        double wn = 0.0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (wn == 0.0) return sigma;
        for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
        if (prev >= 0.0 && std::fabs(sigma - prev) <= tol * std::max(1.0, sigma)) return sigma;
        prev = sigma;
    }
    return sigma;
}

/// K = (I - Omega)^{-1}, the matrix multiplier summing direct and indirect
/// influence along all paths. Exists only for spectral radius below 1.
inline WeightMatrix multiplier_matrix(const WeightMatrix& omega) {
    const std::size_t n = omega.size();
    if (spectral_radius(omega, 1e-12) >= 1.0 - 1e-12)
        throw singular_error("multiplier_matrix: spectral radius >= 1, influence series diverges");

    // Gaussian elimination with partial pivoting on (I - Omega) | I.
    std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = (i == j ? 1.0 : 0.0) - omega.at(i, j);
        a[i][n + i] = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300)
            throw singular_error("multiplier_matrix: I - Omega is numerically singular");
        std::swap(a[col], a[pivot]);
        const double d = a[col][col];
        for (std::size_t j = col; j < 2 * n; ++j) a[col][j] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    WeightMatrix k(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k.at(i, j) = a[i][n + j];
    return k;
}

enum class MatrixMode { opinion_network, cross_asset };

/// Rule producing one random matrix per step.
class MatrixGenerator {
public:
    enum class Kind {
        constant,        // the base matrix every step
        jittered_base,   // entrywise lognormal jitter; optional row renormalization
        scalar_diagonal, // a_t I with one scalar draw per step
        diagonal_laws,   // independent per-component diagonal draws over a fixed off-diagonal base
    };

    static MatrixGenerator constant(WeightMatrix base) {
        MatrixGenerator g;
        g.kind_ = Kind::constant;
        g.base_ = std::move(base);
        return g;
    }

    /// Entrywise multiplicative jitter w exp(sd z); zero entries stay zero,
    /// so sparsity and the zero diagonal survive. With renormalize_rows the
    /// jittered row is rescaled back to the base row sum, preserving the
    /// network row-sum invariants exactly.
    static MatrixGenerator jittered(WeightMatrix base, double jitter_sd, bool renormalize_rows) {
        if (!(jitter_sd > 0.0))
            throw config_error("MatrixGenerator::jittered: jitter_sd must be positive");
        MatrixGenerator g;
        g.kind_ = Kind::jittered_base;
        g.base_ = std::move(base);
        g.jitter_sd_ = jitter_sd;
        g.renormalize_rows_ = renormalize_rows;
        return g;
    }

    static MatrixGenerator scalar_diagonal(DistributionSpec a_law, std::size_t n) {
        if (n == 0)
            throw config_error("MatrixGenerator::scalar_diagonal: dimension must be positive");
        MatrixGenerator g;
        g.kind_ = Kind::scalar_diagonal;
        g.base_ = WeightMatrix(n);
        g.laws_.push_back(std::move(a_law));
        return g;
    }

    static MatrixGenerator diagonal_laws(std::vector<DistributionSpec> laws,
                                         WeightMatrix off_diagonal) {
        if (laws.empty() || laws.size() != off_diagonal.size())
            throw config_error(
                "MatrixGenerator::diagonal_laws: need one law per component of the base");
        MatrixGenerator g;
        g.kind_ = Kind::diagonal_laws;
        g.base_ = std::move(off_diagonal);
        g.laws_ = std::move(laws);
        return g;
    }

    Kind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return base_.size(); }
    const WeightMatrix& base() const noexcept { return base_; }

    WeightMatrix draw(RngState& rng) const {
        switch (kind_) {
        case Kind::constant: return base_;
        case Kind::jittered_base: {
            WeightMatrix m = base_;
            const std::size_t n = m.size();
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j)
                    if (m.at(i, j) != 0.0)
                        m.at(i, j) *= std::exp(jitter_sd_ * rng.normal());
                if (renormalize_rows_) {
                    const double target = base_.row_sum(i);
                    const double got = m.row_sum(i);
                    if (got > 0.0) {
                        const double f = target / got;
                        for (std::size_t j = 0; j < n; ++j) m.at(i, j) *= f;
                    }
                }
            }
            return m;
        }
        case Kind::scalar_diagonal: {
            WeightMatrix m(base_.size());
            const double a = laws_[0].sample(rng);
            for (std::size_t i = 0; i < m.size(); ++i) m.at(i, i) = a;
            return m;
        }
        case Kind::diagonal_laws: {
            WeightMatrix m = base_;
            for (std::size_t i = 0; i < m.size(); ++i) m.at(i, i) = laws_[i].sample(rng);
            return m;
        }
        }
        throw config_error("invalid matrix generator kind");
    }

private:
    MatrixGenerator() = default;
    Kind kind_ = Kind::constant;
    WeightMatrix base_;
    double jitter_sd_ = 0.0;
    bool renormalize_rows_ = false;
    std::vector<DistributionSpec> laws_;
};

/// Rule producing one input vector per step. iid draws one independent
/// value per component (laws broadcast when a single law is given);
/// coupled_diagonal sets e_i = a_ii b_i from the step's matrix diagonal.
class VectorInputGenerator {
public:
    enum class Kind { iid, coupled_diagonal };

    static VectorInputGenerator iid(std::vector<DistributionSpec> laws) {
        if (laws.empty())
            throw config_error("VectorInputGenerator::iid: need at least one law");
        VectorInputGenerator g;
        g.kind_ = Kind::iid;
        g.laws_ = std::move(laws);
        return g;
    }

    static VectorInputGenerator coupled_diagonal(std::vector<DistributionSpec> b_laws) {
        if (b_laws.empty())
            throw config_error("VectorInputGenerator::coupled_diagonal: need at least one law");
        VectorInputGenerator g;
        g.kind_ = Kind::coupled_diagonal;
        g.laws_ = std::move(b_laws);
        return g;
    }

    Kind kind() const noexcept { return kind_; }

    void draw(const WeightMatrix& step_matrix, RngState& rng, std::vector<double>& out) const {
        const std::size_t n = step_matrix.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = laws_[i % laws_.size()].sample(rng);
            out[i] = kind_ == Kind::coupled_diagonal ? step_matrix.at(i, i) * v : v;
        }
    }

private:
    VectorInputGenerator() = default;
    Kind kind_ = Kind::iid;
    std::vector<DistributionSpec> laws_;
};

struct MatrixRecurrenceSpec {
    MatrixGenerator matrix_gen;
    VectorInputGenerator input_gen;
    MatrixMode mode = MatrixMode::opinion_network;
    std::vector<double> initial; // empty means zeros
};

/// Per-component series plus their cross-sectional average, with the
/// subcriticality diagnostic E(||Omega||^delta) < 1 evaluated up front.
struct VectorPath {
    std::vector<std::vector<double>> components; // [component][t]
    std::vector<double> average;
    std::size_t burn_in_dropped = 0;
    bool norm_condition_ok = false;
    double norm_delta = 0.0;  // the delta that worked (or the last one tried)
    double norm_moment = 0.0; // estimated E(||Omega||^delta) at that delta
};

/// Estimate min over a small delta grid of E(||Omega||^delta) from sampled
/// matrices; the recurrence is guaranteed stationary when some value is
/// below 1.
inline void estimate_norm_condition(const MatrixGenerator& gen, VectorPath& path, RngState rng,
                                    std::size_t matrices = 200) {
    std::vector<double> norms(matrices);
    for (double& x : norms) {
        const WeightMatrix m = gen.draw(rng);
        x = operator_norm(m, 1e-8);
    }
    path.norm_condition_ok = false;
    for (double delta : {0.05, 0.1, 0.25, 0.5, 1.0}) {
        double sum = 0.0;
        for (double x : norms) sum += std::pow(x, delta);
        const double est = sum / static_cast<double>(matrices);
        path.norm_delta = delta;
        path.norm_moment = est;
        if (est < 1.0) {
            path.norm_condition_ok = true;
            break;
        }
    }
}

inline VectorPath simulate_vector_path(const MatrixRecurrenceSpec& spec, std::size_t length,
                                       std::size_t burn_in, RngState rng) {
    if (length == 0)
        throw config_error("simulate_vector_path: length must be positive");
    const std::size_t n = spec.matrix_gen.dimension();
    if (spec.mode == MatrixMode::opinion_network &&
        (spec.matrix_gen.kind() == MatrixGenerator::Kind::constant ||
         spec.matrix_gen.kind() == MatrixGenerator::Kind::jittered_base))
        spec.matrix_gen.base().validate_opinion_network();

    VectorPath path;
    path.burn_in_dropped = burn_in;
    estimate_norm_condition(spec.matrix_gen, path, rng.split(0xD1A6));
    path.components.assign(n, {});
    for (auto& c : path.components) c.reserve(length);
    path.average.reserve(length);

    std::vector<double> theta = spec.initial;
    if (theta.empty()) theta.assign(n, 0.0);
    if (theta.size() != n)
        throw config_error("simulate_vector_path: initial vector size mismatch");

    std::vector<double> next(n), input(n);
    const std::size_t total = burn_in + length;
    for (std::size_t t = 0; t < total; ++t) {
        const WeightMatrix omega = spec.matrix_gen.draw(rng);
        spec.input_gen.draw(omega, rng, input);
        mat_vec(omega, theta, next);
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] += input[i];
            peak = std::max(peak, std::fabs(next[i]));
        }
        if (!std::isfinite(peak) || peak > 1e200)
            throw explosion_error("vector recurrence overflow (norm " + std::to_string(peak) +
                                      "); the feedback matrices look supercritical",
                                  t);
        theta.swap(next);
        if (t >= burn_in) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                path.components[i].push_back(theta[i]);
                sum += theta[i];
            }
            path.average.push_back(sum / static_cast<double>(n));
        }
    }
    return path;
}

/// Result of the product-chain moment-growth root search. converged
/// compares the root against the half-horizon root (relative difference
/// below 5%) as a finite-horizon proxy check on the t -> infinity limit.
struct MatrixExponentEstimate {
    std::optional<double> root;
    std::optional<double> half_horizon_root;
    bool converged = false;
};

/// Find mu with lim_t (E ||Omega_1 ... Omega_t||^mu)^{1/t} = 1, the
/// multidimensional version of the scalar moment equation. Chains of
/// `horizon` matrix products are sampled once; their log operator norms are
/// reused for every mu (common random numbers), and the per-step growth
/// g(mu) = exp(logmeanexp(mu ln||chain||)/horizon) feeds the unit-root
/// bisection. no-root (nullopt) means g stays below 1 up to mu_max.
inline MatrixExponentEstimate estimate_matrix_exponent(const MatrixGenerator& gen, double mu_max,
                                                       double tol, std::size_t chains,
                                                       std::size_t horizon = 50,
                                                       RngState rng = RngState(0x3A7)) {
    if (!(mu_max > 0.0) || !(tol > 0.0))
        throw config_error("estimate_matrix_exponent: mu_max and tol must be positive");
    if (chains < 100 || horizon < 4)
        throw config_error("estimate_matrix_exponent: need >= 100 chains and horizon >= 4");

    const std::size_t half = horizon / 2;
    std::vector<double> log_norm_half(chains, -std::numeric_limits<double>::infinity());
    std::vector<double> log_norm_full(chains);
    for (std::size_t c = 0; c < chains; ++c) {
        WeightMatrix prod = gen.draw(rng);
        double log_scale = 0.0;
        for (std::size_t t = 1; t < horizon; ++t) {
            prod = gen.draw(rng) * prod;
            const double s = prod.frobenius();
            if (s == 0.0) {
                log_scale = -std::numeric_limits<double>::infinity();
                break;
            }
            for (std::size_t i = 0; i < prod.size(); ++i)
                for (std::size_t j = 0; j < prod.size(); ++j) prod.at(i, j) /= s;
            log_scale += std::log(s);
            if (t + 1 == half)
                log_norm_half[c] = log_scale + std::log(operator_norm(prod, 1e-9));
        }
        log_norm_full[c] = std::isinf(log_scale)
                               ? -std::numeric_limits<double>::infinity()
                               : log_scale + std::log(operator_norm(prod, 1e-9));
        if (std::isnan(log_norm_full[c]) || log_norm_full[c] == std::numeric_limits<double>::infinity())
            throw numeric_error("estimate_matrix_exponent: chain norm not representable");
    }

    auto growth = [](const std::vector<double>& logs, double mu, double steps) {
        // logmeanexp in the log domain: shift by the max to avoid overflow.
        double peak = -std::numeric_limits<double>::infinity();
        for (double x : logs) peak = std::max(peak, mu * x);
        if (std::isinf(peak)) return 0.0; // all chains annihilated
        double sum = 0.0;
        for (double x : logs) sum += std::exp(mu * x - peak);
        const double log_mean = peak + std::log(sum / static_cast<double>(logs.size()));
        return std::exp(log_mean / steps);
    };

    MatrixExponentEstimate est;
    est.root = solve_unit_moment_root(
        [&](double mu) { return growth(log_norm_full, mu, static_cast<double>(horizon)); },
        mu_max, tol);
    est.half_horizon_root = solve_unit_moment_root(
        [&](double mu) { return growth(log_norm_half, mu, static_cast<double>(half)); }, mu_max,
        tol);
    if (est.root && est.half_horizon_root)
        est.converged = std::fabs(*est.root - *est.half_horizon_root) <= 0.05 * *est.root;
    else
        est.converged = !est.root && !est.half_horizon_root; // agree there is no root
    return est;
}

/// Hill estimate of the cross-sectional average's tail; for specs in the
/// matrix power-law regime this should match estimate_matrix_exponent.
inline TailEstimate average_opinion_tail(const VectorPath& path, std::size_t k = 0) {
    const MagnitudeSample mags = positive_magnitudes(path.average);
    if (k == 0) k = default_hill_order(mags.values.size());
    return hill_estimator(mags.values, k);
}

} // namespace wildsim
