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

#ifndef RCTRP_MODEL_HPP
#define RCTRP_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rctrp/units.hpp"

namespace rctrp {

/// One stirred received-power sample. Beam ids are 1-based (matching the
/// instrument's beam numbering); stirrer indices are 0-based.
struct SampleRecord {
    int beam_id = 0;
    int turntable_index = 0;   // outer stirrer position
    int paddle_index = 0;      // inner stirrer position
    long sequence_index = 0;   // acquisition order within the beam
    double power_w = 0.0;      // linear watts, > 0
};

/// Two-stirrer sampling grid: n_out turntable positions (outer loop),
/// n_in paddle positions (inner loop). Acquisition order is paddle-inner,
/// so raw sample k belongs to turntable k / n_in, paddle k % n_in.
struct GridLayout {
    int n_out = 24;
    int n_in = 25;
    double turntable_step_deg = 14.4;

    long total_samples() const { return static_cast<long>(n_out) * n_in; }
    double coverage_deg() const { return (n_out - 1) * turntable_step_deg; }
};

/// Chamber calibration. The dB loss is the stored (lab-convention) form;
/// the linear gain used by all power math is derived from it on
/// construction so that file round trips reproduce the gain bit-exactly.
struct CalibrationRecord {
    double frequency_hz = 28e9;
    double chamber_loss_db = 0.0;
    double chamber_gain = 1.0;  // 10^(-loss/10), in (0, 1]

    static CalibrationRecord from_loss_db(double frequency_hz, double loss_db) {
        CalibrationRecord c;
        c.frequency_hz = frequency_hz;
        c.chamber_loss_db = loss_db;
        c.chamber_gain = db_to_linear(-loss_db);
        return c;
    }
};

/// Ordered sample sequence for one beam. The steering angle is carried as
/// metadata only; no analysis depends on it numerically.
struct BeamSweep {
    int beam_id = 0;
    double steering_angle_deg = 0.0;
    std::vector<SampleRecord> samples;

    std::vector<double> powers() const {
        std::vector<double> p;
        p.reserve(samples.size());
        for (const auto &s : samples)
            p.push_back(s.power_w);
        return p;
    }
};

/// A full measurement campaign: one sweep per beam over a common grid.
struct Dataset {
    GridLayout layout;
    CalibrationRecord calibration;
    std::vector<BeamSweep> sweeps;
    std::map<std::string, std::string> metadata;
};

/// One structural-invariant violation. beam_id 0 marks dataset-level
/// problems; sequence_index -1 marks problems not tied to one sample.
struct Violation {
    int beam_id = 0;
    long sequence_index = -1;
    std::string message;
};

/// Power samples arranged on the (turntable x paddle) torus, row-major.
struct StirrerGrid {
    std::vector<double> values;
    GridLayout layout;

    int rows() const { return layout.n_out; }
    int cols() const { return layout.n_in; }
    long size() const { return static_cast<long>(values.size()); }
    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols() + c]; }
    double &at(int r, int c) { return values[static_cast<size_t>(r) * cols() + c]; }
};

/// Checks every structural invariant and returns the full violation list
/// (empty = valid). Violations are data, not failures: the function never
/// throws on bad content.
inline std::vector<Violation> validate_dataset(const Dataset &ds) {
    std::vector<Violation> out;
    const auto &lay = ds.layout;

    if (lay.n_out < 1 || lay.n_in < 1)
        out.push_back({0, -1, "grid layout must have n_out >= 1 and n_in >= 1"});
    if (!(lay.turntable_step_deg > 0.0))
        out.push_back({0, -1, "turntable_step_deg must be > 0"});
    if (!(ds.calibration.chamber_gain > 0.0) || ds.calibration.chamber_gain > 1.0)
        out.push_back({0, -1, "chamber_gain must lie in (0, 1]"});
    if (ds.sweeps.empty())
        out.push_back({0, -1, "dataset contains no beam sweeps"});

    // Beam id bookkeeping: duplicates and gaps in 1..max.
    std::vector<int> ids;
    ids.reserve(ds.sweeps.size());
    for (const auto &sw : ds.sweeps)
        ids.push_back(sw.beam_id);
    std::sort(ids.begin(), ids.end());
    for (size_t i = 1; i < ids.size(); ++i)
        if (ids[i] == ids[i - 1])
            out.push_back({ids[i], -1, "duplicate beam id " + std::to_string(ids[i])});
    if (!ids.empty()) {
        if (ids.front() < 1)
            out.push_back({ids.front(), -1, "beam ids must be >= 1"});
        for (int b = 1; b <= ids.back(); ++b)
            if (!std::binary_search(ids.begin(), ids.end(), b))
                out.push_back({b, -1, "missing beam " + std::to_string(b)});
    }

    const long expected = lay.total_samples();
    for (const auto &sw : ds.sweeps) {
        if (static_cast<long>(sw.samples.size()) != expected)
            out.push_back({sw.beam_id, -1,
                           "beam " + std::to_string(sw.beam_id) + " has " +
                               std::to_string(sw.samples.size()) + " samples, expected " +
                               std::to_string(expected) + " (n_out*n_in)"});
        long prev_seq = -1;
        for (const auto &s : sw.samples) {
            if (s.beam_id != sw.beam_id)
                out.push_back({sw.beam_id, s.sequence_index, "sample beam id mismatch"});
            if (!(s.power_w > 0.0))
                out.push_back({sw.beam_id, s.sequence_index,
                               "non-positive power " + std::to_string(s.power_w) + " W in beam " +
                                   std::to_string(sw.beam_id)});
            if (s.sequence_index <= prev_seq)
                out.push_back({sw.beam_id, s.sequence_index,
                               "samples not strictly ordered by sequence_index"});
            prev_seq = s.sequence_index;
            if (s.turntable_index < 0 || s.turntable_index >= lay.n_out ||
                s.paddle_index < 0 || s.paddle_index >= lay.n_in)
                out.push_back({sw.beam_id, s.sequence_index, "stirrer index out of range"});
            else if (s.sequence_index !=
                     static_cast<long>(s.turntable_index) * lay.n_in + s.paddle_index)
                out.push_back({sw.beam_id, s.sequence_index,
                               "sequence_index does not equal turntable*n_in + paddle"});
        }
    }
    return out;
}

/// Arranges a contiguous sample run onto the stirrer grid: element (r, c)
/// holds the sample at offset r*n_in + c from the first sample.
inline StirrerGrid reshape_to_grid(std::span<const SampleRecord> samples, const GridLayout &layout) {
    const long expected = layout.total_samples();
    if (static_cast<long>(samples.size()) != expected)
        throw std::invalid_argument("reshape_to_grid: expected " + std::to_string(expected) +
                                    " samples for a " + std::to_string(layout.n_out) + "x" +
                                    std::to_string(layout.n_in) + " grid, got " +
                                    std::to_string(samples.size()));
    for (size_t i = 1; i < samples.size(); ++i)
        if (samples[i].sequence_index != samples[i - 1].sequence_index + 1)
            throw std::invalid_argument(
                "reshape_to_grid: samples not contiguous in sequence_index at position " +
                std::to_string(i));

    StirrerGrid g;
    g.layout = layout;
    g.values.reserve(samples.size());
    for (const auto &s : samples)
        g.values.push_back(s.power_w);
    return g;
}

inline StirrerGrid reshape_to_grid(const BeamSweep &sweep, const GridLayout &layout) {
    return reshape_to_grid(std::span<const SampleRecord>(sweep.samples), layout);
}

} // namespace rctrp

#endif
