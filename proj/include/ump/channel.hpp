#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ump/gf2.hpp"

namespace ump {

/// BPSK over the real AWGN channel, parameterized by Es/N0. Symbols have
/// unit energy, so the per-dimension noise variance is 1 / (2 Es/N0).
struct ChannelParams {
    double esn0_db = 0.0;
    double esn0_linear = 1.0;
    double sigma2 = 0.5;
    double sigma = std::sqrt(0.5);

    static ChannelParams from_esn0_db(double db) {
        ChannelParams p;
        p.esn0_db = db;
        p.esn0_linear = std::pow(10.0, db / 10.0);
        p.sigma2 = 1.0 / (2.0 * p.esn0_linear);
        p.sigma = std::sqrt(p.sigma2);
        return p;
    }
};

/// Deterministic substream generator: (seed, stream) pairs give independent
/// sequences, so per-frame streams do not depend on scheduling order.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 steps fed by seed then stream id; decorrelates nearby
        // (seed, stream) pairs before seeding the engine.
        auto step = [](std::uint64_t& s) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        };
        std::uint64_t s = seed;
        std::uint64_t a = step(s);
        s ^= stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
        std::uint64_t b = step(s);
        return a ^ (b + 0x9e3779b97f4a7c15ULL);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Bit 0 -> +1, bit 1 -> -1.
inline std::vector<double> modulate_bpsk(const BitVector& c) {
    std::vector<double> x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = c.get(i) ? -1.0 : 1.0;
    return x;
}

/// y = x + sigma z with z iid standard normal.
inline std::vector<double> transmit(const std::vector<double>& x, const ChannelParams& ch,
                                    RngStream& rng) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + ch.sigma * rng.gaussian();
    return y;
}

/// Per-symbol LLR log p(y|0) / p(y|1) = 2 y / sigma^2.
inline std::vector<double> llr_awgn(const std::vector<double>& y, const ChannelParams& ch) {
    std::vector<double> l(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) l[i] = 2.0 * y[i] / ch.sigma2;
    return l;
}

}  // namespace ump
