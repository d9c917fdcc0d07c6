#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "causal/errors.hpp"

namespace causal {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable seed for an independent stream identified by a path of indices under a
// master seed. Every randomized stage derives its own stream this way, so results
// are reproducible regardless of scheduling or evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t t : path)
        h = splitmix64(h ^ (t + 0x9e3779b97f4a7c15ULL));
    return h;
}

// Deterministic random source. All draws go through explicit arithmetic on the raw
// 64-bit stream (no std::*_distribution, whose output differs across standard
// library implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer on [0, n). Rejection sampling keeps it exactly uniform.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0)
            throw ParameterError("uniform_int: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (one value per call; the sine twin is dropped
    // so the stream layout stays independent of call parity).
    double normal() {
        double u1 = uniform();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through G(a+1) * U^(1/a).
    double gamma(double shape) {
        if (shape <= 0.0)
            throw ParameterError("gamma: shape must be positive");
        if (shape < 1.0) {
            double u = uniform();
            if (u <= 0.0)
                u = 0x1.0p-53;
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2)
                return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    // Index draw proportional to the given nonnegative weights.
    int categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0)
                throw ParameterError("categorical: negative weight");
            total += w;
        }
        if (!(total > 0.0))
            throw ParameterError("categorical: weights sum to zero");
        double u = uniform() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0)
                return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_int(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace causal
