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

#ifndef RCTRP_ANALYSIS_HPP
#define RCTRP_ANALYSIS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rctrp/correlation.hpp"
#include "rctrp/estimation.hpp"
#include "rctrp/gof.hpp"
#include "rctrp/model.hpp"
#include "rctrp/sampling.hpp"
#include "rctrp/version.hpp"

namespace rctrp {

struct AnalysisConfig {
    double alpha = 0.05;
    double confidence = 0.95;
    CiMethod ci_method = CiMethod::NormalApprox;
    KsCriticalMode ks_mode = KsCriticalMode::Asymptotic;
    ThresholdMode threshold_mode = ThresholdMode::OneSided;
    // No multiple-comparison correction by default, matching per-pair 95%
    // CIs across all beam pairs; opt-in Bonferroni recomputes the
    // comparison intervals at confidence 1 - (1-c)/n_pairs.
    bool bonferroni = false;
};

struct BeamAnalysis {
    int beam_id = 0;
    double steering_angle_deg = 0.0;
    long n_samp = 0;
    std::string error;  // empty = all stages succeeded
    std::optional<KsResult> ks;
    std::optional<NeffResult> neff;
    std::optional<TrpEstimate> trp;
};

struct AnalysisReport {
    std::string toolkit_version = version_string;
    std::string generated_at;  // empty = omitted from serialization
    SamplingPlan plan;
    AnalysisConfig config;
    GridLayout layout;
    CalibrationRecord calibration;
    double coverage_deg = 0.0;
    std::vector<BeamAnalysis> beams;
    SignificanceMatrix significance;
};

/// Runs the full per-beam pipeline (subsample, exponential GoF, effective
/// samples, TRP with CI) and the cross-beam CI-overlap comparison. Stage
/// failures are recorded per beam and the pipeline continues; beams
/// without a TRP estimate are left out of the significance matrix.
inline AnalysisReport analyze_dataset(const Dataset &dataset, const SamplingPlan &plan,
                                      const AnalysisConfig &config = {}) {
    if (dataset.sweeps.empty())
        throw std::invalid_argument("analyze_dataset: dataset has no beam sweeps");
    if (plan.last_index() >= dataset.layout.total_samples())
        throw std::out_of_range("analyze_dataset: plan '" + plan.name +
                                "' does not fit the dataset's " +
                                std::to_string(dataset.layout.total_samples()) +
                                " samples per beam");

    AnalysisReport report;
    report.plan = plan;
    report.config = config;
    report.layout = dataset.layout;
    report.calibration = dataset.calibration;
    report.coverage_deg = turntable_coverage(plan, dataset.layout);

    std::vector<TrpEstimate> estimates;
    estimates.reserve(dataset.sweeps.size());
    for (const auto &sweep : dataset.sweeps) {
        BeamAnalysis ba;
        ba.beam_id = sweep.beam_id;
        ba.steering_angle_deg = sweep.steering_angle_deg;
        try {
            const SubsampledSweep sub = apply_plan(sweep, plan);
            ba.n_samp = static_cast<long>(sub.samples.size());
            const std::vector<double> powers = sub.powers();
            ba.ks = ks_test(powers, config.alpha, config.ks_mode);
            ba.neff = effective_samples(sub, dataset.layout, config.threshold_mode);
            ba.trp = make_trp_estimate(sweep.beam_id, powers, dataset.calibration,
                                       static_cast<double>(ba.neff->n_eff), config.confidence,
                                       config.ci_method);
            estimates.push_back(*ba.trp);
        } catch (const std::exception &e) {
            ba.error = e.what();
        }
        report.beams.push_back(std::move(ba));
    }

    if (estimates.size() >= 2) {
        if (config.bonferroni) {
            const double n_pairs =
                static_cast<double>(estimates.size()) * (estimates.size() - 1) / 2.0;
            const double adjusted = 1.0 - (1.0 - config.confidence) / n_pairs;
            std::vector<TrpEstimate> widened = estimates;
            for (auto &e : widened) {
                e.confidence = adjusted;
                std::tie(e.ci_low_w, e.ci_high_w) = trp_ci(e.trp_w, e.n_eff, adjusted, e.method);
            }
            report.significance = compare_beams(widened);
        } else {
            report.significance = compare_beams(estimates);
        }
    } else {
        for (const auto &e : estimates)
            report.significance.beam_ids.push_back(e.beam_id);
        report.significance.greater.assign(estimates.size(),
                                           std::vector<bool>(estimates.size(), false));
    }
    return report;
}

} // namespace rctrp

#endif
