#pragma once

#include <cmath>
#include <cstdint>

namespace wildsim {

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random generator. Draw i of stream (seed, stream_id) is a
/// pure function of (seed, stream_id, i), so replicas running on distinct
/// stream_ids are reproducible and need no coordination. Internally this is
/// the SplitMix64 sequence started at a key derived from (seed, stream_id);
/// distinct keys select disjoint segments of the underlying sequence except
/// with negligible probability.
class RngState {
public:
    explicit constexpr RngState(std::uint64_t seed = 0, std::uint64_t stream_id = 0) noexcept
        : seed_(seed),
          stream_(stream_id),
          key_(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(stream_id + 0x6A09E667F3BCC909ULL)),
          counter_(0) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }
    constexpr std::uint64_t stream_id() const noexcept { return stream_; }
    constexpr std::uint64_t draws() const noexcept { return counter_; }

    /// A fresh generator for a derived stream; used to split work across
    /// replicas or Monte Carlo sub-budgets deterministically.
    constexpr RngState split(std::uint64_t substream) const noexcept {
        return RngState(seed_, mix64(stream_ ^ (substream + 0x9E3779B97F4A7C15ULL)));
    }

    constexpr std::uint64_t next_u64() noexcept {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix64(key_ + counter_);
    }

    /// Uniform on [0, 1).
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe under log() and negative powers.
    double uniform_pos() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal draw (Marsaglia polar method). Rejection consumes a
    /// variable number of counter steps but stays deterministic per stream.
    /// Each accepted pair yields two variates; the second is served from a
    /// one-slot cache on the next call.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double f = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = v * f;
                has_spare_ = true;
                return u * f;
            }
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace wildsim
