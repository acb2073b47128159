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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "rctrp/correlation.hpp"
#include "rctrp/gof.hpp"
#include "rctrp/rng.hpp"
#include "rctrp/simulator.hpp"

using namespace rctrp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("rng substreams are deterministic and distinct") {
    CHECK(substream_seed(42, 1) == substream_seed(42, 1));
    CHECK(substream_seed(42, 1) != substream_seed(42, 2));
    CHECK(substream_seed(42, 1) != substream_seed(43, 1));

    // substream_seed(seed, k) is the k-th splitmix64 output from `seed`.
    std::uint64_t state = 42;
    const std::uint64_t first = splitmix64_next(state);
    const std::uint64_t second = splitmix64_next(state);
    CHECK(substream_seed(42, 0) == first);
    CHECK(substream_seed(42, 1) == second);

    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rng normal pairs have the right first moments") {
    Rng rng(99);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n / 2; ++i) {
        const auto [a, b] = rng.normal_pair();
        sum += a + b;
        sum2 += a * a + b * b;
    }
    CHECK_THAT(sum / n, WithinAbs(0.0, 0.02));
    CHECK_THAT(sum2 / n, WithinAbs(1.0, 0.02));
}

TEST_CASE("circulant covariance spectrum") {
    const auto flat = circulant_covariance_spectrum(0.0, 7);
    for (double l : flat)
        CHECK(l == 1.0);

    // 4-point DFT of the first row (1, 0.5, 0.25, 0.5) by hand.
    const auto lam = circulant_covariance_spectrum(0.5, 4);
    REQUIRE(lam.size() == 4);
    CHECK_THAT(lam[0], WithinAbs(2.25, 1e-12));
    CHECK_THAT(lam[1], WithinAbs(0.75, 1e-12));
    CHECK_THAT(lam[2], WithinAbs(0.25, 1e-12));
    CHECK_THAT(lam[3], WithinAbs(0.75, 1e-12));

    // Near-full correlation concentrates the spectrum on the constant mode.
    const auto peaked = circulant_covariance_spectrum(0.999, 8);
    CHECK(peaked[0] > 7.9);

    CHECK_THROWS_AS(circulant_covariance_spectrum(1.0, 8), std::domain_error);
    CHECK_THROWS_AS(circulant_covariance_spectrum(-0.1, 8), std::domain_error);
    CHECK_THROWS_AS(circulant_covariance_spectrum(0.5, 0), std::invalid_argument);
}

TEST_CASE("spectrum always renormalizes to unit average eigenvalue") {
    for (double rho : {0.0, 0.3, 0.7, 0.95}) {
        for (int n : {3, 24, 25, 100}) {
            const auto lam = circulant_covariance_spectrum(rho, n);
            double mean = 0.0;
            for (double l : lam) {
                CHECK(l >= 0.0);
                mean += l;
            }
            CHECK_THAT(mean / n, WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("simulated grids are reproducible and beam-distinct") {
    SimulationParams params;
    params.seed = 42;
    params.rho_in = 0.4;
    const StirrerGrid a = simulate_grid(params, 3);
    const StirrerGrid b = simulate_grid(params, 3);
    REQUIRE(a.values.size() == b.values.size());
    for (size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == b.values[i]);

    const StirrerGrid c = simulate_grid(params, 4);
    bool any_diff = false;
    for (size_t i = 0; i < a.values.size(); ++i)
        any_diff |= a.values[i] != c.values[i];
    CHECK(any_diff);
}

TEST_CASE("simulated power has the configured mean") {
    SimulationParams params;
    params.trp_true_w = {0.25};
    params.chamber_gain = 0.01;
    params.n_beams = 1;
    params.layout = GridLayout{24, 25, 14.4};
    double sum = 0.0;
    long count = 0;
    const int grids = 10000;
    for (int s = 0; s < grids; ++s) {
        params.seed = static_cast<std::uint64_t>(s);
        const StirrerGrid g = simulate_grid(params, 1);
        for (double v : g.values)
            sum += v;
        count += g.size();
    }
    CHECK_THAT(sum / static_cast<double>(count), WithinRel(0.25 * 0.01, 0.01));
}

TEST_CASE("power samples stay exponential for any correlation setting") {
    // One sample per independent seed isolates the marginal law even for
    // strongly correlated grids.
    SimulationParams params;
    params.rho_in = 0.9;
    params.rho_out = 0.5;
    params.n_beams = 1;
    std::vector<double> pooled;
    pooled.reserve(4000);
    for (int s = 0; s < 4000; ++s) {
        params.seed = 900000 + static_cast<std::uint64_t>(s);
        pooled.push_back(simulate_grid(params, 1).values[137]);
    }
    const KsResult r = ks_test(pooled);
    CHECK_FALSE(r.reject);
    CHECK_THAT(fit_exponential_mean(pooled), WithinRel(1.0, 0.06));
}

TEST_CASE("lag-1 power correlation matches rho on both axes") {
    double acc_in = 0.0, acc_out = 0.0;
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s) {
        SimulationParams params;
        params.rho_in = 0.5;
        params.rho_out = 0.3;
        params.n_beams = 1;
        params.seed = 50000 + static_cast<std::uint64_t>(s);
        const StirrerGrid g = simulate_grid(params, 1);
        acc_in += circular_shift_correlation(g, 0, 1);
        acc_out += circular_shift_correlation(g, 1, 0);
    }
    CHECK_THAT(acc_in / seeds, WithinAbs(0.5, 0.05));
    CHECK_THAT(acc_out / seeds, WithinAbs(0.3, 0.05));
}

TEST_CASE("well-stirred grids pass the analysis loop, stirred-down grids do not") {
    SimulationParams params;
    params.n_beams = 1;
    int ks_pass = 0, ratio_high = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        params.seed = 7700 + static_cast<std::uint64_t>(s);
        const StirrerGrid g = simulate_grid(params, 1);
        ks_pass += !ks_test(g.values).reject;
        ratio_high += effective_samples(g).ratio >= 0.95;
    }
    CHECK(ks_pass >= 90);
    CHECK(ratio_high >= 95);

    params.rho_in = 0.9;
    params.seed = 7800;
    const StirrerGrid correlated = simulate_grid(params, 1);
    CHECK(effective_samples(correlated).ratio < 0.5);
}

TEST_CASE("simulate_dataset is deterministic and self-consistent") {
    SimulationParams params;
    params.seed = 42;
    params.rho_in = 0.2;
    const Dataset a = simulate_dataset(params);
    const Dataset b = simulate_dataset(params);
    REQUIRE(a.sweeps.size() == 21);
    CHECK(validate_dataset(a).empty());
    for (size_t s = 0; s < a.sweeps.size(); ++s)
        for (size_t i = 0; i < a.sweeps[s].samples.size(); ++i)
            CHECK(a.sweeps[s].samples[i].power_w == b.sweeps[s].samples[i].power_w);

    CHECK(a.sweeps[0].steering_angle_deg == -45.0);
    CHECK_THAT(a.sweeps[20].steering_angle_deg, WithinAbs(45.0, 1e-12));
    CHECK_THAT(a.calibration.chamber_gain, WithinRel(params.chamber_gain, 1e-12));
}

TEST_CASE("noise floor shifts the mean and keeps the marginal exponential") {
    SimulationParams params;
    params.n_beams = 1;
    params.trp_true_w = {1.0};
    params.noise_floor_w = 0.5;
    std::vector<double> pooled;
    double sum = 0.0;
    long count = 0;
    for (int s = 0; s < 2000; ++s) {
        params.seed = 880000 + static_cast<std::uint64_t>(s);
        const StirrerGrid g = simulate_grid(params, 1);
        for (double v : g.values)
            sum += v;
        count += g.size();
        pooled.push_back(g.values[42]);
    }
    CHECK_THAT(sum / static_cast<double>(count), WithinRel(1.5, 0.01));
    CHECK_FALSE(ks_test(pooled).reject);

    params.noise_floor_w = -1.0;
    CHECK_THROWS_AS(simulate_grid(params, 1), std::domain_error);
}

TEST_CASE("simulate_dataset validates its parameters") {
    SimulationParams params;
    params.rho_in = 1.0;
    CHECK_THROWS_AS(simulate_dataset(params), std::domain_error);
    params.rho_in = 0.0;
    params.trp_true_w = {1.0, 2.0};  // neither 1 nor n_beams entries
    CHECK_THROWS_AS(simulate_dataset(params), std::invalid_argument);
    params.trp_true_w = {1.0, -2.0};
    params.n_beams = 2;
    CHECK_THROWS_AS(simulate_dataset(params), std::domain_error);
    params.trp_true_w = {0.5};
    params.chamber_gain = 1.5;
    CHECK_THROWS_AS(simulate_dataset(params), std::domain_error);
}
