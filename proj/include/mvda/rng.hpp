#pragma once
// Counter-based random numbers (Philox4x32-10) and the scalar variates the
// samplers need. A generator is fully determined by (seed, stream, substream)
// and the number of draws taken so far, so Monte Carlo chunks can be handed
// to any worker without changing the sequence.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "mvda/errors.hpp"

namespace mvda {

struct SeedSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

using Philox4x32Block = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Block philox4x32_10(Philox4x32Block ctr, Philox4x32Key key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(SeedSpec s, std::uint32_t substream = 0)
        : key_{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32)},
          substream_(substream),
          stream_(s.stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    result_type operator()() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal by Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() {
        buf_ = philox4x32_10({static_cast<std::uint32_t>(block_), substream_, static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)},
                             key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32Key key_;
    std::uint32_t substream_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32Block buf_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// log of a Gamma(shape, 1) variate. Marsaglia-Tsang squeeze for shape >= 1;
// smaller shapes use G(shape) = G(shape + 1) * U^{1/shape}, kept in log
// space so that tiny shapes do not underflow to zero.
inline double log_gamma_variate(CounterRng& rng, double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma variate needs shape > 0");
    double boost = 0.0;
    if (shape < 1.0) {
        boost = std::log(rng.uniform()) / shape;
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return std::log(d * v) + boost;
    }
}

inline double gamma_variate(CounterRng& rng, double shape) { return std::exp(log_gamma_variate(rng, shape)); }

}  // namespace mvda
