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

#ifndef RCTRP_SAMPLING_HPP
#define RCTRP_SAMPLING_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "rctrp/model.hpp"
#include "rctrp/strings.hpp"

namespace rctrp {

enum class PlanKind { Full, Contiguous, Decimated };

inline const char *to_string(PlanKind k) {
    switch (k) {
    case PlanKind::Full: return "full";
    case PlanKind::Contiguous: return "contiguous";
    case PlanKind::Decimated: return "decimated";
    }
    return "?";
}

/// Index scheme into the acquisition sequence: positions start,
/// start+stride, ..., start+stride*(count-1), all 0-based. Contiguous
/// plans keep a leading block (stride 1); decimated plans keep every
/// stride-th sample and so span the whole turntable rotation.
struct SamplingPlan {
    std::string name;
    long start = 0;
    long stride = 1;
    long count = 0;
    PlanKind kind = PlanKind::Contiguous;

    long last_index() const { return start + stride * (count - 1); }
    long index_at(long k) const { return start + stride * k; }
};

inline const std::vector<std::string> &named_plan_names() {
    static const std::vector<std::string> names = {"600",  "300C", "300D", "200C", "200D",
                                                   "150C", "150D", "100C", "100D"};
    return names;
}

/// The nine named plans, defined against the 600-sample acquisition
/// sequence. In 1-based notation they select [1 2..600], [1 2..300],
/// [1 3..599], [1 2..200], [1 4..598], [1 2..150], [1 5..597],
/// [1 2..100], [1 7..595].
inline SamplingPlan named_plan(const std::string &name) {
    struct Row {
        const char *name;
        long stride;
        long count;
        PlanKind kind;
    };
    static constexpr std::array<Row, 9> table = {{
        {"600", 1, 600, PlanKind::Full},
        {"300C", 1, 300, PlanKind::Contiguous},
        {"300D", 2, 300, PlanKind::Decimated},
        {"200C", 1, 200, PlanKind::Contiguous},
        {"200D", 3, 200, PlanKind::Decimated},
        {"150C", 1, 150, PlanKind::Contiguous},
        {"150D", 4, 150, PlanKind::Decimated},
        {"100C", 1, 100, PlanKind::Contiguous},
        {"100D", 6, 100, PlanKind::Decimated},
    }};
    for (const auto &row : table)
        if (name == row.name)
            return SamplingPlan{row.name, 0, row.stride, row.count, row.kind};

    std::string valid;
    for (const auto &n : named_plan_names())
        valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown sampling plan '" + name + "' (valid names: " + valid + ")");
}

/// Generic plan for sensitivity studies beyond the nine named ones.
inline SamplingPlan make_plan(long start, long stride, long count) {
    if (start < 0 || stride < 1 || count < 1)
        throw std::invalid_argument("make_plan: require start >= 0, stride >= 1, count >= 1");
    SamplingPlan p;
    p.name = std::to_string(start) + ":" + std::to_string(stride) + ":" + std::to_string(count);
    p.start = start;
    p.stride = stride;
    p.count = count;
    p.kind = stride == 1 ? PlanKind::Contiguous : PlanKind::Decimated;
    return p;
}

/// Accepts either a named plan or "start:stride:count" (0-based).
inline SamplingPlan parse_plan(const std::string &text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos)
        return named_plan(text);
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("plan spec must be a name or start:stride:count, got '" + text + "'");
    const long start = parse_long(trim(text.substr(0, c1)), "plan start");
    const long stride = parse_long(trim(text.substr(c1 + 1, c2 - c1 - 1)), "plan stride");
    const long count = parse_long(trim(text.substr(c2 + 1)), "plan count");
    return make_plan(start, stride, count);
}

/// Sample subset selected by a plan, original stirrer/sequence indices
/// retained.
struct SubsampledSweep {
    SamplingPlan plan;
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

inline SubsampledSweep apply_plan(const BeamSweep &sweep, const SamplingPlan &plan) {
    const long n = static_cast<long>(sweep.samples.size());
    if (plan.count < 1 || plan.last_index() >= n)
        throw std::out_of_range("plan '" + plan.name + "' selects up to position " +
                                std::to_string(plan.last_index()) + " but the sweep has only " +
                                std::to_string(n) + " samples");
    SubsampledSweep out;
    out.plan = plan;
    out.beam_id = sweep.beam_id;
    out.steering_angle_deg = sweep.steering_angle_deg;
    out.samples.reserve(static_cast<size_t>(plan.count));
    for (long k = 0; k < plan.count; ++k)
        out.samples.push_back(sweep.samples[static_cast<size_t>(plan.index_at(k))]);
    return out;
}

/// Angular span of the turntable positions a plan visits.
inline double turntable_coverage(const SamplingPlan &plan, const GridLayout &layout) {
    if (plan.last_index() >= layout.total_samples())
        throw std::out_of_range("plan '" + plan.name + "' does not fit a " +
                                std::to_string(layout.n_out) + "x" + std::to_string(layout.n_in) +
                                " layout");
    long t_min = layout.n_out, t_max = -1;
    for (long k = 0; k < plan.count; ++k) {
        const long t = plan.index_at(k) / layout.n_in;
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    return static_cast<double>(t_max - t_min) * layout.turntable_step_deg;
}

} // namespace rctrp

#endif
