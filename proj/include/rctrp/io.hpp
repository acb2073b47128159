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

#ifndef RCTRP_IO_HPP
#define RCTRP_IO_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rctrp/analysis.hpp"
#include "rctrp/model.hpp"
#include "rctrp/strings.hpp"
#include "rctrp/units.hpp"

namespace rctrp {

// Dataset files come as a CSV/metadata pair:
//
//   samples.csv   header `beam,turntable_index,paddle_index,power`, one
//                 row per sample, any row order (the acquisition sequence
//                 is reconstructed from the stirrer indices)
//   samples.meta  `key = value` lines; required keys frequency_hz,
//                 turntable_step_deg, n_out, n_in, chamber_loss_db,
//                 power_unit (watts|dbm); '#' starts a comment
//
// Power is stored in the declared unit and converted to linear watts on
// load. Saving always normalizes to watts with shortest round-trip
// formatting, so save(load(x)) is byte-stable after one pass.

struct ParseError : std::runtime_error {
    ParseError(const std::filesystem::path &file, long line, const std::string &msg)
        : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + msg) {}
};

struct DatasetValidationError : std::runtime_error {
    std::vector<Violation> violations;

    explicit DatasetValidationError(std::vector<Violation> v)
        : std::runtime_error(render(v)), violations(std::move(v)) {}

    static std::string render(const std::vector<Violation> &v) {
        std::string s = "dataset validation failed (" + std::to_string(v.size()) + " violation" +
                        (v.size() == 1 ? "" : "s") + ")";
        for (const auto &viol : v)
            s += "\n  - " + viol.message;
        return s;
    }
};

namespace detail {

inline std::map<std::string, std::string> read_key_values(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open metadata file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#')
            continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(path, line_no, "expected 'key = value', got '" + std::string(sv) + "'");
        const std::string key(trim(sv.substr(0, eq)));
        const std::string value(trim(sv.substr(eq + 1)));
        if (key.empty())
            throw ParseError(path, line_no, "empty key");
        kv[key] = value;
    }
    return kv;
}

inline std::vector<std::string_view> split_csv_row(std::string_view row) {
    std::vector<std::string_view> fields;
    size_t begin = 0;
    while (true) {
        const size_t comma = row.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(row.substr(begin)));
            break;
        }
        fields.push_back(trim(row.substr(begin, comma - begin)));
        begin = comma + 1;
    }
    return fields;
}

} // namespace detail

inline Dataset load_dataset(const std::filesystem::path &samples_csv,
                            const std::filesystem::path &metadata_file) {
    auto kv = detail::read_key_values(metadata_file);
    const auto require = [&](const char *key) -> std::string {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error(metadata_file.string() + ": missing required key '" +
                                     std::string(key) + "'");
        return it->second;
    };

    Dataset ds;
    ds.layout.n_out = static_cast<int>(parse_long(require("n_out"), "n_out"));
    ds.layout.n_in = static_cast<int>(parse_long(require("n_in"), "n_in"));
    ds.layout.turntable_step_deg = parse_double(require("turntable_step_deg"), "turntable_step_deg");
    ds.calibration = CalibrationRecord::from_loss_db(
        parse_double(require("frequency_hz"), "frequency_hz"),
        parse_double(require("chamber_loss_db"), "chamber_loss_db"));

    const std::string unit = require("power_unit");
    if (unit != "watts" && unit != "dbm")
        throw std::runtime_error(metadata_file.string() + ": power_unit must be 'watts' or 'dbm', got '" +
                                 unit + "'");
    const bool in_dbm = unit == "dbm";

    double steer_start = -45.0, steer_step = 4.5;
    if (auto it = kv.find("steering_start_deg"); it != kv.end())
        steer_start = parse_double(it->second, "steering_start_deg");
    if (auto it = kv.find("steering_step_deg"); it != kv.end())
        steer_step = parse_double(it->second, "steering_step_deg");

    for (const char *consumed :
         {"n_out", "n_in", "turntable_step_deg", "frequency_hz", "chamber_loss_db", "power_unit"})
        kv.erase(consumed);
    ds.metadata = std::move(kv);

    std::ifstream in(samples_csv);
    if (!in)
        throw std::runtime_error("cannot open sample file " + samples_csv.string());

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line))
        throw ParseError(samples_csv, 1, "empty file, expected CSV header");
    ++line_no;
    {
        static const char *expected[4] = {"beam", "turntable_index", "paddle_index", "power"};
        const auto header = detail::split_csv_row(line);
        if (header.size() != 4)
            throw ParseError(samples_csv, 1,
                             "expected 4 header columns, got " + std::to_string(header.size()));
        for (size_t i = 0; i < 4; ++i)
            if (header[i] != expected[i])
                throw ParseError(samples_csv, 1,
                                 "unknown column '" + std::string(header[i]) + "' (expected '" +
                                     expected[i] + "')");
    }

    std::map<int, std::vector<SampleRecord>> by_beam;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 4)
            throw ParseError(samples_csv, line_no,
                             "expected 4 fields, got " + std::to_string(fields.size()));
        try {
            SampleRecord s;
            s.beam_id = static_cast<int>(parse_long(fields[0], "beam"));
            s.turntable_index = static_cast<int>(parse_long(fields[1], "turntable_index"));
            s.paddle_index = static_cast<int>(parse_long(fields[2], "paddle_index"));
            const double raw = parse_double(fields[3], "power");
            s.power_w = in_dbm ? dbm_to_watts(raw) : raw;
            s.sequence_index = static_cast<long>(s.turntable_index) * ds.layout.n_in + s.paddle_index;
            by_beam[s.beam_id].push_back(s);
        } catch (const std::invalid_argument &e) {
            throw ParseError(samples_csv, line_no, e.what());
        }
    }

    for (auto &[beam_id, samples] : by_beam) {
        std::sort(samples.begin(), samples.end(),
                  [](const SampleRecord &a, const SampleRecord &b) {
                      return a.sequence_index < b.sequence_index;
                  });
        BeamSweep sweep;
        sweep.beam_id = beam_id;
        sweep.steering_angle_deg = steer_start + steer_step * (beam_id - 1);
        sweep.samples = std::move(samples);
        ds.sweeps.push_back(std::move(sweep));
    }

    auto violations = validate_dataset(ds);
    // A missing trailing beam leaves no id gap; the optional n_beams
    // metadata key catches it.
    if (auto it = ds.metadata.find("n_beams"); it != ds.metadata.end()) {
        const long declared = parse_long(it->second, "n_beams");
        if (declared != static_cast<long>(ds.sweeps.size()))
            violations.push_back({0, -1,
                                  "metadata declares " + std::to_string(declared) +
                                      " beams but the sample file has " +
                                      std::to_string(ds.sweeps.size())});
    }
    if (!violations.empty())
        throw DatasetValidationError(std::move(violations));
    return ds;
}

inline void save_dataset(const Dataset &ds, const std::filesystem::path &samples_csv,
                         const std::filesystem::path &metadata_file) {
    {
        std::ofstream out(metadata_file);
        if (!out)
            throw std::runtime_error("cannot write metadata file " + metadata_file.string());
        out << "frequency_hz = " << format_double(ds.calibration.frequency_hz) << "\n";
        out << "turntable_step_deg = " << format_double(ds.layout.turntable_step_deg) << "\n";
        out << "n_out = " << ds.layout.n_out << "\n";
        out << "n_in = " << ds.layout.n_in << "\n";
        out << "chamber_loss_db = " << format_double(ds.calibration.chamber_loss_db) << "\n";
        out << "power_unit = watts\n";
        for (const auto &[key, value] : ds.metadata)
            out << key << " = " << value << "\n";
        if (!out)
            throw std::runtime_error("write failed for " + metadata_file.string());
    }
    {
        std::ofstream out(samples_csv);
        if (!out)
            throw std::runtime_error("cannot write sample file " + samples_csv.string());
        out << "beam,turntable_index,paddle_index,power\n";
        for (const auto &sweep : ds.sweeps)
            for (const auto &s : sweep.samples)
                out << s.beam_id << ',' << s.turntable_index << ',' << s.paddle_index << ','
                    << format_double(s.power_w) << "\n";
        if (!out)
            throw std::runtime_error("write failed for " + samples_csv.string());
    }
}

// ---- report serialization -------------------------------------------------

namespace detail {

inline nlohmann::ordered_json ks_to_json(const KsResult &k) {
    return {{"n", k.n},
            {"fitted_mean_w", k.fitted_mean_w},
            {"d_statistic", k.d_statistic},
            {"d_critical", k.d_critical},
            {"alpha", k.alpha},
            {"reject", k.reject}};
}

inline KsResult ks_from_json(const nlohmann::ordered_json &j) {
    KsResult k;
    k.n = j.at("n").get<long>();
    k.fitted_mean_w = j.at("fitted_mean_w").get<double>();
    k.d_statistic = j.at("d_statistic").get<double>();
    k.d_critical = j.at("d_critical").get<double>();
    k.alpha = j.at("alpha").get<double>();
    k.reject = j.at("reject").get<bool>();
    return k;
}

inline nlohmann::ordered_json neff_to_json(const NeffResult &n) {
    return {{"n_samp", n.n_samp},
            {"threshold", n.threshold},
            {"dependent_shifts", n.dependent_shifts},
            {"dependent_classes", n.dependent_classes},
            {"n_eff", n.n_eff},
            {"ratio", n.ratio},
            {"view", to_string(n.view)}};
}

inline NeffResult neff_from_json(const nlohmann::ordered_json &j) {
    NeffResult n;
    n.n_samp = j.at("n_samp").get<long>();
    n.threshold = j.at("threshold").get<double>();
    n.dependent_shifts = j.at("dependent_shifts").get<long>();
    n.dependent_classes = j.at("dependent_classes").get<long>();
    n.n_eff = j.at("n_eff").get<long>();
    n.ratio = j.at("ratio").get<double>();
    n.view = j.at("view").get<std::string>() == "grid2d" ? NeffView::Grid2D : NeffView::Sequence1D;
    return n;
}

inline nlohmann::ordered_json trp_to_json(const TrpEstimate &t) {
    return {{"beam_id", t.beam_id},
            {"trp_w", t.trp_w},
            {"n_eff", t.n_eff},
            {"sigma_rel", t.sigma_rel},
            {"ci_low_w", t.ci_low_w},
            {"ci_high_w", t.ci_high_w},
            {"confidence", t.confidence},
            {"method", to_string(t.method)},
            {"low_neff_warning", t.low_neff_warning}};
}

inline TrpEstimate trp_from_json(const nlohmann::ordered_json &j) {
    TrpEstimate t;
    t.beam_id = j.at("beam_id").get<int>();
    t.trp_w = j.at("trp_w").get<double>();
    t.n_eff = j.at("n_eff").get<double>();
    t.sigma_rel = j.at("sigma_rel").get<double>();
    t.ci_low_w = j.at("ci_low_w").get<double>();
    t.ci_high_w = j.at("ci_high_w").get<double>();
    t.confidence = j.at("confidence").get<double>();
    t.method = j.at("method").get<std::string>() == "gamma" ? CiMethod::GammaExact
                                                            : CiMethod::NormalApprox;
    t.low_neff_warning = j.at("low_neff_warning").get<bool>();
    return t;
}

inline PlanKind plan_kind_from_string(const std::string &s) {
    if (s == "full")
        return PlanKind::Full;
    if (s == "contiguous")
        return PlanKind::Contiguous;
    if (s == "decimated")
        return PlanKind::Decimated;
    throw std::invalid_argument("unknown plan kind '" + s + "'");
}

} // namespace detail

inline nlohmann::ordered_json report_to_json(const AnalysisReport &report) {
    nlohmann::ordered_json j;
    j["toolkit"] = {{"name", "rctrp"}, {"version", report.toolkit_version}};
    if (!report.generated_at.empty())
        j["generated_at"] = report.generated_at;
    j["plan"] = {{"name", report.plan.name},
                 {"start", report.plan.start},
                 {"stride", report.plan.stride},
                 {"count", report.plan.count},
                 {"kind", to_string(report.plan.kind)}};
    j["config"] = {
        {"alpha", report.config.alpha},
        {"confidence", report.config.confidence},
        {"ci_method", to_string(report.config.ci_method)},
        {"ks_mode",
         report.config.ks_mode == KsCriticalMode::Asymptotic ? "asymptotic" : "lilliefors"},
        {"threshold_mode",
         report.config.threshold_mode == ThresholdMode::OneSided ? "one_sided" : "two_sided"},
        {"bonferroni", report.config.bonferroni}};
    j["dataset"] = {{"n_out", report.layout.n_out},
                    {"n_in", report.layout.n_in},
                    {"turntable_step_deg", report.layout.turntable_step_deg},
                    {"frequency_hz", report.calibration.frequency_hz},
                    {"chamber_loss_db", report.calibration.chamber_loss_db},
                    {"chamber_gain", report.calibration.chamber_gain},
                    {"n_beams", report.beams.size()},
                    {"coverage_deg", report.coverage_deg}};
    j["beams"] = nlohmann::ordered_json::array();
    for (const auto &b : report.beams) {
        nlohmann::ordered_json jb;
        jb["beam_id"] = b.beam_id;
        jb["steering_angle_deg"] = b.steering_angle_deg;
        jb["n_samp"] = b.n_samp;
        jb["error"] = b.error.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(b.error);
        jb["ks"] = b.ks ? detail::ks_to_json(*b.ks) : nlohmann::ordered_json();
        jb["neff"] = b.neff ? detail::neff_to_json(*b.neff) : nlohmann::ordered_json();
        jb["trp"] = b.trp ? detail::trp_to_json(*b.trp) : nlohmann::ordered_json();
        j["beams"].push_back(std::move(jb));
    }
    nlohmann::ordered_json sig;
    sig["beam_ids"] = report.significance.beam_ids;
    sig["greater"] = report.significance.greater;
    sig["significant_pairs"] = nlohmann::ordered_json::array();
    for (const auto &[hi, lo] : report.significance.significant_pairs())
        sig["significant_pairs"].push_back({hi, lo});
    j["significance"] = std::move(sig);
    return j;
}

inline AnalysisReport report_from_json(const nlohmann::ordered_json &j) {
    AnalysisReport r;
    r.toolkit_version = j.at("toolkit").at("version").get<std::string>();
    if (j.contains("generated_at"))
        r.generated_at = j.at("generated_at").get<std::string>();

    const auto &jp = j.at("plan");
    r.plan.name = jp.at("name").get<std::string>();
    r.plan.start = jp.at("start").get<long>();
    r.plan.stride = jp.at("stride").get<long>();
    r.plan.count = jp.at("count").get<long>();
    r.plan.kind = detail::plan_kind_from_string(jp.at("kind").get<std::string>());

    const auto &jc = j.at("config");
    r.config.alpha = jc.at("alpha").get<double>();
    r.config.confidence = jc.at("confidence").get<double>();
    r.config.ci_method = jc.at("ci_method").get<std::string>() == "gamma" ? CiMethod::GammaExact
                                                                          : CiMethod::NormalApprox;
    r.config.ks_mode = jc.at("ks_mode").get<std::string>() == "lilliefors"
                           ? KsCriticalMode::LillieforsExponential
                           : KsCriticalMode::Asymptotic;
    r.config.threshold_mode = jc.at("threshold_mode").get<std::string>() == "two_sided"
                                  ? ThresholdMode::TwoSided
                                  : ThresholdMode::OneSided;
    r.config.bonferroni = jc.at("bonferroni").get<bool>();

    const auto &jd = j.at("dataset");
    r.layout.n_out = jd.at("n_out").get<int>();
    r.layout.n_in = jd.at("n_in").get<int>();
    r.layout.turntable_step_deg = jd.at("turntable_step_deg").get<double>();
    r.calibration.frequency_hz = jd.at("frequency_hz").get<double>();
    r.calibration.chamber_loss_db = jd.at("chamber_loss_db").get<double>();
    r.calibration.chamber_gain = jd.at("chamber_gain").get<double>();
    r.coverage_deg = jd.at("coverage_deg").get<double>();

    for (const auto &jb : j.at("beams")) {
        BeamAnalysis b;
        b.beam_id = jb.at("beam_id").get<int>();
        b.steering_angle_deg = jb.at("steering_angle_deg").get<double>();
        b.n_samp = jb.at("n_samp").get<long>();
        if (!jb.at("error").is_null())
            b.error = jb.at("error").get<std::string>();
        if (!jb.at("ks").is_null())
            b.ks = detail::ks_from_json(jb.at("ks"));
        if (!jb.at("neff").is_null())
            b.neff = detail::neff_from_json(jb.at("neff"));
        if (!jb.at("trp").is_null())
            b.trp = detail::trp_from_json(jb.at("trp"));
        r.beams.push_back(std::move(b));
    }

    const auto &js = j.at("significance");
    r.significance.beam_ids = js.at("beam_ids").get<std::vector<int>>();
    r.significance.greater = js.at("greater").get<std::vector<std::vector<bool>>>();
    return r;
}

inline void save_report(const AnalysisReport &report, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write report file " + path.string());
    out << report_to_json(report).dump(2) << "\n";
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

inline AnalysisReport load_report(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open report file " + path.string());
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw std::runtime_error("cannot parse report " + path.string() + ": " + e.what());
    }
    return report_from_json(j);
}

} // namespace rctrp

#endif
