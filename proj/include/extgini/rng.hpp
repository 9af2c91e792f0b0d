#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "extgini/estimator.hpp"
#include "extgini/theory.hpp"

namespace extgini {

/// SplitMix64: tiny, fast, and fully deterministic across platforms, which
/// keeps seeded runs bit-identical regardless of standard library.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw strictly inside (0, 1).
    double next_uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller (one of the pair is discarded so every
    /// draw consumes a fixed number of uniforms).
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based derivation of independent substreams from (seed, index):
/// replicate order and thread count cannot change what each stream produces.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return detail::mix64(detail::mix64(seed) ^ (index * 0xD1342543DE82EF95ULL + 1ULL));
}

/// One Gamma(shape, rate) variate by the Marsaglia-Tsang squeeze method for
/// shape >= 1, with the U^{1/shape} boost below 1. Exact distribution, so a
/// bias study sees no sampling distortion.
inline double gamma_variate(SplitMix64& rng, double shape, double rate) {
    if (shape < 1.0) {
        const double boost = std::pow(rng.next_uniform(), 1.0 / shape);
        return gamma_variate(rng, shape + 1.0, rate) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        const double x = rng.next_normal();
        const double base = 1.0 + c * x;
        if (base <= 0.0) {
            continue;
        }
        const double v = base * base * base;
        const double u = rng.next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v / rate;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v / rate;
        }
    }
}

/// n iid Gamma(shape, rate) variates drawn from the given stream.
inline Sample gamma_sample(const GammaParams& params, int n, SplitMix64& rng) {
    if (n < 1) {
        throw invalid_input("gamma_sample: n must be >= 1");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        values.push_back(gamma_variate(rng, params.shape, params.rate));
    }
    return Sample(std::move(values));
}

}  // namespace extgini
