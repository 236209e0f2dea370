/**
 * Copyright 2026 The denfg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DENFG_RNG_HPP
#define DENFG_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace denfg {

/// splitmix64 step (Steele/Lea/Flood finalizer). Used both as a stream
/// generator and as a key-mixing function for counter-based seeding.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a seed and up to three counters. Trials and
/// entries keyed this way are independent of execution order.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t c0,
                                std::uint64_t c1 = 0, std::uint64_t c2 = 0) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= c0;
    (void)splitmix64(s);
    s ^= c1;
    (void)splitmix64(s);
    s ^= c2;
    std::uint64_t t = s;
    return splitmix64(t);
}

/// Small deterministic random stream. Transforms are hand-rolled inverse-CDF
/// / Box-Muller so output is identical across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Exp(1) via inverse CDF.
    double exponential() { return -std::log1p(-uniform01()); }

    /// Standard normal pair via Box-Muller.
    std::array<double, 2> normal_pair() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Standard complex Gaussian CN(0,1): variance 1/2 per component.
    std::complex<double> complex_normal() {
        const auto g = normal_pair();
        return {g[0] / std::sqrt(2.0), g[1] / std::sqrt(2.0)};
    }

private:
    std::uint64_t state_;
};

} // namespace denfg

#endif
