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

#ifndef RCTRP_SIMULATOR_HPP
#define RCTRP_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rctrp/fft.hpp"
#include "rctrp/model.hpp"
#include "rctrp/rng.hpp"
#include "rctrp/strings.hpp"
#include "rctrp/units.hpp"

namespace rctrp {

// Synthetic chamber data: a correlated complex-Gaussian stirred channel on
// the (turntable x paddle) torus, whose power samples are exponentially
// distributed by construction for ANY correlation setting. This is the
// Monte-Carlo stand-in for hardware measurements, with known ground truth
// for every quantity the analysis modules estimate.
//
// The field h has a separable circulant covariance (Kronecker product of
// one covariance per stirrer axis) and is synthesized spectrally:
// independent CN(0,1) weights per 2D frequency bin, scaled by the square
// root of the bin eigenvalue, then a unitary inverse DFT. With the
// spectrum normalized to unit average eigenvalue, each h entry is exactly
// CN(0,1), so |h|^2 is exactly exponential with unit mean.
//
// rho_out / rho_in target the adjacent-position correlation of the POWER
// samples, which is what the correlation-matrix analysis measures. For a
// complex Gaussian field, corr(|h_a|^2, |h_b|^2) = |corr(h_a, h_b)|^2, so
// the field itself is synthesized with amplitude correlation sqrt(rho).

struct SimulationParams {
    GridLayout layout{24, 25, 14.4};
    double rho_out = 0.0;           // adjacent-lag power correlation, turntable axis
    double rho_in = 0.0;            // adjacent-lag power correlation, paddle axis
    std::vector<double> trp_true_w{1.0};  // per beam; a single value applies to all
    double chamber_gain = 1.0;
    double noise_floor_w = 0.0;     // receiver noise power; 0 = noise-free stirring
    int n_beams = 21;
    std::uint64_t seed = 0;
    double frequency_hz = 28e9;
    double steering_start_deg = -45.0;
    double steering_step_deg = 4.5;

    double trp_for_beam(int beam_id) const {
        if (trp_true_w.size() == 1)
            return trp_true_w[0];
        return trp_true_w.at(static_cast<size_t>(beam_id - 1));
    }
};

inline void validate_params(const SimulationParams &p) {
    if (p.layout.n_out < 1 || p.layout.n_in < 1)
        throw std::invalid_argument("simulator: layout sizes must be >= 1");
    if (!(p.rho_out >= 0.0 && p.rho_out < 1.0) || !(p.rho_in >= 0.0 && p.rho_in < 1.0))
        throw std::domain_error("simulator: rho_out and rho_in must lie in [0, 1)");
    if (p.n_beams < 1)
        throw std::invalid_argument("simulator: n_beams must be >= 1");
    if (p.trp_true_w.size() != 1 && p.trp_true_w.size() != static_cast<size_t>(p.n_beams))
        throw std::invalid_argument("simulator: trp_true_w must have 1 or n_beams entries");
    for (double t : p.trp_true_w)
        if (!(t > 0.0))
            throw std::domain_error("simulator: trp_true_w entries must be > 0 W");
    if (!(p.chamber_gain > 0.0) || p.chamber_gain > 1.0)
        throw std::domain_error("simulator: chamber_gain must lie in (0, 1]");
    if (!(p.noise_floor_w >= 0.0))
        throw std::domain_error("simulator: noise_floor_w must be >= 0");
}

/// Eigenvalues (DFT bin order) of the circulant covariance with first row
/// c_k = rho^min(k, n-k). Negative numerical eigenvalues are clipped to
/// zero and the spectrum renormalized to unit average, which preserves a
/// valid covariance with exactly unit marginal variance.
inline std::vector<double> circulant_covariance_spectrum(double rho, int n) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::domain_error("circulant_covariance_spectrum: rho must lie in [0, 1)");
    if (n < 1)
        throw std::invalid_argument("circulant_covariance_spectrum: n must be >= 1");

    std::vector<double> lambda(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const int lag = std::min(j, n - j);
            sum += std::pow(rho, lag) * std::cos(2.0 * std::numbers::pi * j * k / n);
        }
        lambda[static_cast<size_t>(k)] = sum;
    }
    double total = 0.0;
    for (double &l : lambda) {
        if (l < 0.0)
            l = 0.0;
        total += l;
    }
    if (!(total > 0.0))
        throw std::domain_error("circulant_covariance_spectrum: spectrum collapsed to zero");
    const double scale = static_cast<double>(n) / total;
    for (double &l : lambda)
        l *= scale;
    return lambda;
}

/// One beam's stirred power grid. Deterministic given (params.seed,
/// beam_id): the beam's substream fills the frequency bins in row-major
/// order, one complex normal each.
inline StirrerGrid simulate_grid(const SimulationParams &params, int beam_id) {
    validate_params(params);
    if (beam_id < 1)
        throw std::invalid_argument("simulate_grid: beam_id must be >= 1");

    const int rows = params.layout.n_out;
    const int cols = params.layout.n_in;
    const size_t n = static_cast<size_t>(rows) * cols;

    const std::vector<double> lam_out =
        circulant_covariance_spectrum(std::sqrt(params.rho_out), rows);
    const std::vector<double> lam_in = circulant_covariance_spectrum(std::sqrt(params.rho_in), cols);

    Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(beam_id)));
    std::vector<std::complex<double>> field(n);
    for (int k1 = 0; k1 < rows; ++k1)
        for (int k2 = 0; k2 < cols; ++k2)
            field[static_cast<size_t>(k1) * cols + k2] =
                rng.complex_normal() * std::sqrt(lam_out[static_cast<size_t>(k1)] *
                                                 lam_in[static_cast<size_t>(k2)]);

    // Unitary inverse DFT: backward FFT scaled by 1/sqrt(n).
    if (rows == 1)
        fft_1d_inplace(field, +1);
    else
        fft_2d_inplace(field, rows, cols, +1);
    const double unitary = 1.0 / std::sqrt(static_cast<double>(n));

    const double mean_power = params.trp_for_beam(beam_id) * params.chamber_gain;
    StirrerGrid grid;
    grid.layout = params.layout;
    grid.values.resize(n);
    if (params.noise_floor_w > 0.0) {
        // Noise adds at the field level, so the measured power stays
        // exponential with mean shifted up by the noise floor.
        const double amp_n = std::sqrt(params.noise_floor_w);
        const double amp_s = std::sqrt(mean_power);
        for (size_t i = 0; i < n; ++i)
            grid.values[i] = std::norm(field[i] * unitary * amp_s + rng.complex_normal() * amp_n);
    } else {
        for (size_t i = 0; i < n; ++i)
            grid.values[i] = std::norm(field[i] * unitary) * mean_power;
    }
    return grid;
}

/// Full campaign: one grid per beam, flattened in acquisition order
/// (paddle inner, turntable outer), with the calibration record attached.
inline Dataset simulate_dataset(const SimulationParams &params) {
    validate_params(params);

    Dataset ds;
    ds.layout = params.layout;
    // Round-trip through the stored dB form so that saving and reloading
    // reproduces the same linear gain bit-exactly.
    ds.calibration =
        CalibrationRecord::from_loss_db(params.frequency_hz, -linear_to_db(params.chamber_gain));

    ds.metadata["source"] = "rctrp-simulator";
    ds.metadata["seed"] = std::to_string(params.seed);
    ds.metadata["rho_out"] = format_double(params.rho_out);
    ds.metadata["rho_in"] = format_double(params.rho_in);
    ds.metadata["n_beams"] = std::to_string(params.n_beams);
    ds.metadata["steering_start_deg"] = format_double(params.steering_start_deg);
    ds.metadata["steering_step_deg"] = format_double(params.steering_step_deg);

    ds.sweeps.reserve(static_cast<size_t>(params.n_beams));
    for (int beam = 1; beam <= params.n_beams; ++beam) {
        const StirrerGrid grid = simulate_grid(params, beam);
        BeamSweep sweep;
        sweep.beam_id = beam;
        sweep.steering_angle_deg = params.steering_start_deg + params.steering_step_deg * (beam - 1);
        sweep.samples.reserve(grid.values.size());
        for (int t = 0; t < params.layout.n_out; ++t)
            for (int p = 0; p < params.layout.n_in; ++p)
                sweep.samples.push_back(SampleRecord{
                    beam, t, p, static_cast<long>(t) * params.layout.n_in + p, grid.at(t, p)});
        ds.sweeps.push_back(std::move(sweep));
    }
    return ds;
}

} // namespace rctrp

#endif
