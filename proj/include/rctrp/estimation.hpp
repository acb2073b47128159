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

#ifndef RCTRP_ESTIMATION_HPP
#define RCTRP_ESTIMATION_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rctrp/model.hpp"

namespace rctrp {

// Per-beam TRP with chamber-loss compensation and confidence intervals
// driven by the effective sample count: sigma = 1/sqrt(N_eff) relative.

enum class CiMethod { NormalApprox, GammaExact };

inline const char *to_string(CiMethod m) {
    return m == CiMethod::NormalApprox ? "normal" : "gamma";
}

struct TrpEstimate {
    int beam_id = 0;
    double trp_w = 0.0;
    double n_eff = 0.0;
    double sigma_rel = 0.0;   // 1/sqrt(n_eff)
    double ci_low_w = 0.0;
    double ci_high_w = 0.0;
    double confidence = 0.95;
    CiMethod method = CiMethod::NormalApprox;
    bool low_neff_warning = false;  // NormalApprox with n_eff < 10
};

/// TRP estimate: mean received power compensated by the chamber gain.
inline double trp_estimate(std::span<const double> watts, const CalibrationRecord &calibration) {
    if (watts.empty())
        throw std::domain_error("trp_estimate: empty sample");
    if (!(calibration.chamber_gain > 0.0))
        throw std::domain_error("trp_estimate: chamber_gain must be > 0");
    double sum = 0.0;
    for (double w : watts) {
        if (!(w > 0.0))
            throw std::domain_error("trp_estimate: samples must be > 0 W");
        sum += w;
    }
    return sum / static_cast<double>(watts.size()) / calibration.chamber_gain;
}

/// Confidence interval for the TRP estimate.
///
/// NormalApprox matches the sigma = 1/sqrt(N_eff) description:
/// trp * (1 -+ z * sigma). It can distort near n_eff < 10 (flagged by the
/// caller via TrpEstimate.low_neff_warning; the lower bound may go
/// non-positive).
///
/// GammaExact uses the exact sampling distribution of the mean of k
/// independent exponentials: 2k * mean / TRP ~ chi-squared(2k), giving
/// [2k*trp / chi2_{(1+c)/2, 2k}, 2k*trp / chi2_{(1-c)/2, 2k}] with
/// k = floor(n_eff). NormalApprox uses n_eff as-is (no rounding).
inline std::pair<double, double> trp_ci(double trp_w, double n_eff, double confidence,
                                        CiMethod method) {
    if (!(trp_w > 0.0))
        throw std::domain_error("trp_ci: trp must be > 0 W");
    if (!(n_eff >= 1.0))
        throw std::domain_error("trp_ci: n_eff must be >= 1");
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw std::invalid_argument("trp_ci: confidence must lie in (0, 1)");

    if (method == CiMethod::NormalApprox) {
        const boost::math::normal_distribution<double> norm;
        const double z = boost::math::quantile(norm, (1.0 + confidence) / 2.0);
        const double sigma = 1.0 / std::sqrt(n_eff);
        return {trp_w * (1.0 - z * sigma), trp_w * (1.0 + z * sigma)};
    }

    const double k = std::floor(n_eff);
    const boost::math::chi_squared_distribution<double> chi2(2.0 * k);
    const double hi_q = boost::math::quantile(chi2, (1.0 + confidence) / 2.0);
    const double lo_q = boost::math::quantile(chi2, (1.0 - confidence) / 2.0);
    return {2.0 * k * trp_w / hi_q, 2.0 * k * trp_w / lo_q};
}

inline TrpEstimate make_trp_estimate(int beam_id, std::span<const double> watts,
                                     const CalibrationRecord &calibration, double n_eff,
                                     double confidence = 0.95,
                                     CiMethod method = CiMethod::NormalApprox) {
    TrpEstimate e;
    e.beam_id = beam_id;
    e.trp_w = trp_estimate(watts, calibration);
    e.n_eff = n_eff;
    e.sigma_rel = 1.0 / std::sqrt(n_eff);
    e.confidence = confidence;
    e.method = method;
    e.low_neff_warning = method == CiMethod::NormalApprox && n_eff < 10.0;
    std::tie(e.ci_low_w, e.ci_high_w) = trp_ci(e.trp_w, n_eff, confidence, method);
    return e;
}

/// Pairwise CI-overlap comparison: beam i significantly exceeds beam j
/// only when their intervals are disjoint with i above j.
struct SignificanceMatrix {
    std::vector<int> beam_ids;
    std::vector<std::vector<bool>> greater;  // greater[i][j]

    bool is_greater(size_t i, size_t j) const { return greater[i][j]; }

    /// (higher beam_id, lower beam_id) for every significant ordering.
    std::vector<std::pair<int, int>> significant_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (size_t i = 0; i < beam_ids.size(); ++i)
            for (size_t j = 0; j < beam_ids.size(); ++j)
                if (greater[i][j])
                    out.emplace_back(beam_ids[i], beam_ids[j]);
        return out;
    }
};

inline SignificanceMatrix compare_beams(const std::vector<TrpEstimate> &estimates) {
    if (estimates.size() < 2)
        throw std::invalid_argument("compare_beams: need at least 2 estimates");
    for (const auto &e : estimates)
        if (e.confidence != estimates.front().confidence || e.method != estimates.front().method)
            throw std::invalid_argument(
                "compare_beams: estimates mix confidence levels or CI methods");

    SignificanceMatrix m;
    m.beam_ids.reserve(estimates.size());
    for (const auto &e : estimates)
        m.beam_ids.push_back(e.beam_id);
    m.greater.assign(estimates.size(), std::vector<bool>(estimates.size(), false));
    for (size_t i = 0; i < estimates.size(); ++i)
        for (size_t j = 0; j < estimates.size(); ++j)
            if (i != j)
                m.greater[i][j] = estimates[i].ci_low_w > estimates[j].ci_high_w;
    return m;
}

} // namespace rctrp

#endif
