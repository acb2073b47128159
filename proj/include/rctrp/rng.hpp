// rctrp - statistics toolkit for reverberation-chamber TRP measurements
// Copyright (C) 2026 the rctrp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RCTRP_RNG_HPP
#define RCTRP_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace rctrp {

// Reproducibility contract for everything randomized in this toolkit:
//   engine     mt19937_64 (bit-exact per the C++ standard)
//   substreams substream_seed(seed, k) = splitmix64 output k from state
//              `seed`; one substream per beam (k = beam_id) or per trial
//   uniforms   u = (x >> 11) * 2^-53 in [0, 1)
//   normals    Box-Muller on (1-u, u') pairs
// Identical seeds therefore reproduce identical datasets on one build;
// across platforms the stream of engine words is identical and results
// match up to libm rounding.

/// splitmix64 step: advances the state and returns the next output.
inline constexpr std::uint64_t splitmix64_next(std::uint64_t &state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// k-th splitmix64 output from initial state `seed` (k >= 0); used to
/// derive independent per-beam / per-trial engine seeds.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t state = seed + k * 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given mean, via inversion (strictly positive).
    double exponential(double mean) {
        return -mean * std::log1p(-uniform());
    }

    /// Standard normal pair (Box-Muller); draw order is part of the
    /// reproducibility contract.
    std::pair<double, double> normal_pair() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Circularly symmetric complex normal, unit variance: E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const auto [a, b] = normal_pair();
        return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace rctrp

#endif
