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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rctrp/rctrp.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_data_error = 1;
constexpr int exit_usage_error = 2;

std::string iso8601_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> parse_dbm_list(const std::string &text) {
    std::vector<double> out;
    size_t begin = 0;
    while (begin <= text.size()) {
        const size_t comma = text.find(',', begin);
        const std::string tok(rctrp::trim(text.substr(
            begin, comma == std::string::npos ? std::string::npos : comma - begin)));
        out.push_back(rctrp::parse_double(tok, "--trp-dbm"));
        if (comma == std::string::npos)
            break;
        begin = comma + 1;
    }
    return out;
}

void print_ks(const rctrp::KsResult &ks) {
    std::printf("  n            %ld\n", ks.n);
    std::printf("  fitted mean  %s W (%.3f dBm)\n", rctrp::format_double(ks.fitted_mean_w).c_str(),
                rctrp::watts_to_dbm(ks.fitted_mean_w));
    std::printf("  D            %.6f\n", ks.d_statistic);
    std::printf("  D critical   %.6f (alpha %.3g)\n", ks.d_critical, ks.alpha);
    std::printf("  exponential  %s\n", ks.reject ? "REJECTED" : "not rejected");
}

void print_neff(const rctrp::NeffResult &ne) {
    std::printf("  n_samp            %ld\n", ne.n_samp);
    std::printf("  threshold         %.6f\n", ne.threshold);
    std::printf("  dependent shifts  %ld (%ld classes)\n", ne.dependent_shifts,
                ne.dependent_classes);
    std::printf("  n_eff             %ld (%.1f%%)\n", ne.n_eff, 100.0 * ne.ratio);
    std::printf("  view              %s\n", rctrp::to_string(ne.view));
}

void print_trp(const rctrp::TrpEstimate &t) {
    std::printf("  TRP        %s W (%.3f dBm)\n", rctrp::format_double(t.trp_w).c_str(),
                rctrp::watts_to_dbm(t.trp_w));
    std::printf("  n_eff      %.0f, sigma 1/sqrt(n_eff) = %.3f%%\n", t.n_eff, 100.0 * t.sigma_rel);
    std::printf("  %.0f%% CI     [%s, %s] W (%s)\n", 100.0 * t.confidence,
                rctrp::format_double(t.ci_low_w).c_str(), rctrp::format_double(t.ci_high_w).c_str(),
                rctrp::to_string(t.method));
    if (t.low_neff_warning)
        std::printf("  warning    n_eff < 10, normal approximation is distorted\n");
}

const rctrp::BeamSweep &find_beam(const rctrp::Dataset &ds, int beam_id) {
    for (const auto &sw : ds.sweeps)
        if (sw.beam_id == beam_id)
            return sw;
    throw std::runtime_error("beam " + std::to_string(beam_id) + " not present in dataset");
}

int run(int argc, char **argv) {
    CLI::App app{"rctrp - statistics toolkit for reverberation-chamber TRP measurements"};
    app.set_version_flag("--version", std::string("rctrp ") + rctrp::version_string);
    app.require_subcommand(1);

    // ---- simulate ----
    auto *sim = app.add_subcommand("simulate", "generate a synthetic stirred-channel dataset");
    std::uint64_t seed = 0;
    int n_out = 24, n_in = 25, beams = 21;
    double rho_out = 0.0, rho_in = 0.0, chamber_loss_db = 30.0;
    double turntable_step = 14.4;
    std::string trp_dbm = "-10";
    std::string out_prefix;
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option("--n-out", n_out, "turntable positions")->capture_default_str();
    sim->add_option("--n-in", n_in, "paddle positions")->capture_default_str();
    sim->add_option("--rho-out", rho_out, "adjacent power correlation, turntable axis [0,1)")
        ->capture_default_str();
    sim->add_option("--rho-in", rho_in, "adjacent power correlation, paddle axis [0,1)")
        ->capture_default_str();
    sim->add_option("--beams", beams, "number of beams")->capture_default_str();
    sim->add_option("--trp-dbm", trp_dbm, "true TRP in dBm; one value or comma list per beam")
        ->capture_default_str();
    sim->add_option("--chamber-loss-db", chamber_loss_db, "chamber loss in dB")
        ->capture_default_str();
    sim->add_option("--turntable-step-deg", turntable_step, "turntable step size")
        ->capture_default_str();
    double noise_floor_dbm = 0.0;
    auto *noise_opt =
        sim->add_option("--noise-floor-dbm", noise_floor_dbm, "receiver noise power (default: off)");
    sim->add_option("--out", out_prefix, "output prefix; writes <out>.csv and <out>.meta")
        ->required();

    // ---- shared dataset/plan options ----
    struct DatasetArgs {
        std::string samples, meta, plan = "600";
        int beam = 1;
    };
    const auto add_dataset_args = [](CLI::App *cmd, DatasetArgs &args, bool with_beam) {
        cmd->add_option("samples", args.samples, "sample CSV file")->required();
        cmd->add_option("metadata", args.meta, "metadata file")->required();
        cmd->add_option("--plan", args.plan,
                        "sampling plan: named (600, 300C, 300D, 200C, 200D, 150C, 150D, 100C, "
                        "100D) or start:stride:count")
            ->capture_default_str();
        if (with_beam)
            cmd->add_option("--beam", args.beam, "beam id (1-based)")->capture_default_str();
    };

    // ---- analyze ----
    auto *analyze = app.add_subcommand("analyze", "run the full per-beam analysis pipeline");
    DatasetArgs an_args;
    add_dataset_args(analyze, an_args, false);
    double alpha = 0.05, confidence = 0.95;
    std::string ci_method = "normal";
    std::string report_path;
    bool no_timestamp = false, two_sided = false, lilliefors = false, bonferroni = false;
    analyze->add_option("--alpha", alpha, "GoF significance level")->capture_default_str();
    analyze->add_option("--confidence", confidence, "CI confidence level")->capture_default_str();
    analyze->add_option("--ci-method", ci_method, "CI method: normal | gamma")
        ->check(CLI::IsMember({"normal", "gamma"}))
        ->capture_default_str();
    analyze->add_option("--report", report_path, "write the JSON report here");
    analyze->add_flag("--no-timestamp", no_timestamp, "omit generated_at from the report");
    analyze->add_flag("--two-sided-threshold", two_sided,
                      "count |r| >= threshold as dependent (default: r >= threshold)");
    analyze->add_flag("--lilliefors", lilliefors,
                      "estimated-mean corrected GoF critical values");
    analyze->add_flag("--bonferroni", bonferroni,
                      "Bonferroni-adjust the beam-comparison intervals");

    // ---- gof / neff / trp ----
    auto *gof = app.add_subcommand("gof", "exponential goodness-of-fit test for one beam");
    DatasetArgs gof_args;
    add_dataset_args(gof, gof_args, true);
    double gof_alpha = 0.05;
    bool gof_lilliefors = false;
    gof->add_option("--alpha", gof_alpha, "significance level")->capture_default_str();
    gof->add_flag("--lilliefors", gof_lilliefors, "estimated-mean corrected critical values");

    auto *neff = app.add_subcommand("neff", "effective-sample estimate for one beam");
    DatasetArgs neff_args;
    add_dataset_args(neff, neff_args, true);
    bool neff_two_sided = false;
    neff->add_flag("--two-sided-threshold", neff_two_sided, "count |r| >= threshold as dependent");

    auto *trp = app.add_subcommand("trp", "TRP estimate with confidence interval for one beam");
    DatasetArgs trp_args;
    add_dataset_args(trp, trp_args, true);
    double trp_confidence = 0.95;
    std::string trp_method = "normal";
    trp->add_option("--confidence", trp_confidence, "CI confidence level")->capture_default_str();
    trp->add_option("--ci-method", trp_method, "CI method: normal | gamma")
        ->check(CLI::IsMember({"normal", "gamma"}))
        ->capture_default_str();

    // ---- compare ----
    auto *compare = app.add_subcommand("compare", "compare per-beam TRP between two reports");
    std::string report_a, report_b;
    compare->add_option("report_a", report_a, "first JSON report")->required();
    compare->add_option("report_b", report_b, "second JSON report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage_error;
    }

    if (app.got_subcommand(sim)) {
        rctrp::SimulationParams params;
        params.layout = rctrp::GridLayout{n_out, n_in, turntable_step};
        params.rho_out = rho_out;
        params.rho_in = rho_in;
        params.n_beams = beams;
        params.seed = seed;
        params.chamber_gain = rctrp::db_to_linear(-chamber_loss_db);
        if (noise_opt->count() > 0)
            params.noise_floor_w = rctrp::dbm_to_watts(noise_floor_dbm);
        params.trp_true_w.clear();
        for (double dbm : parse_dbm_list(trp_dbm))
            params.trp_true_w.push_back(rctrp::dbm_to_watts(dbm));
        const rctrp::Dataset ds = rctrp::simulate_dataset(params);
        rctrp::save_dataset(ds, out_prefix + ".csv", out_prefix + ".meta");
        std::printf("wrote %s.csv and %s.meta (%d beams, %d x %d grid, seed %llu)\n",
                    out_prefix.c_str(), out_prefix.c_str(), beams, n_out, n_in,
                    static_cast<unsigned long long>(seed));
        return exit_ok;
    }

    if (app.got_subcommand(analyze)) {
        const rctrp::Dataset ds = rctrp::load_dataset(an_args.samples, an_args.meta);
        const rctrp::SamplingPlan plan = rctrp::parse_plan(an_args.plan);
        rctrp::AnalysisConfig config;
        config.alpha = alpha;
        config.confidence = confidence;
        config.ci_method =
            ci_method == "gamma" ? rctrp::CiMethod::GammaExact : rctrp::CiMethod::NormalApprox;
        config.ks_mode = lilliefors ? rctrp::KsCriticalMode::LillieforsExponential
                                    : rctrp::KsCriticalMode::Asymptotic;
        config.threshold_mode =
            two_sided ? rctrp::ThresholdMode::TwoSided : rctrp::ThresholdMode::OneSided;
        config.bonferroni = bonferroni;

        rctrp::AnalysisReport report = rctrp::analyze_dataset(ds, plan, config);
        if (!no_timestamp)
            report.generated_at = iso8601_utc_now();

        std::printf("plan %s: %ld samples per beam, turntable coverage %.1f deg\n",
                    plan.name.c_str(), plan.count, report.coverage_deg);
        std::printf("%5s %10s %8s %8s %7s %14s %24s\n", "beam", "angle", "ks", "D", "neff%",
                    "TRP dBm", "CI dBm");
        bool any_error = false;
        for (const auto &b : report.beams) {
            if (!b.error.empty()) {
                std::printf("%5d %10.1f  error: %s\n", b.beam_id, b.steering_angle_deg,
                            b.error.c_str());
                any_error = true;
                continue;
            }
            std::printf("%5d %10.1f %8s %8.4f %7.1f %14.3f [%10.3f, %10.3f]\n", b.beam_id,
                        b.steering_angle_deg, b.ks->reject ? "reject" : "ok", b.ks->d_statistic,
                        100.0 * b.neff->ratio, rctrp::watts_to_dbm(b.trp->trp_w),
                        rctrp::watts_to_dbm(b.trp->ci_low_w), rctrp::watts_to_dbm(b.trp->ci_high_w));
        }
        const auto pairs = report.significance.significant_pairs();
        if (pairs.empty()) {
            std::printf("no statistically significant TRP differences at %.0f%% confidence\n",
                        100.0 * confidence);
        } else {
            std::printf("significant TRP differences (%zu):\n", pairs.size());
            for (const auto &[hi, lo] : pairs)
                std::printf("  beam %d > beam %d\n", hi, lo);
        }
        if (!report_path.empty()) {
            rctrp::save_report(report, report_path);
            std::printf("report written to %s\n", report_path.c_str());
        }
        return any_error ? exit_data_error : exit_ok;
    }

    if (app.got_subcommand(gof)) {
        const rctrp::Dataset ds = rctrp::load_dataset(gof_args.samples, gof_args.meta);
        const auto sub = rctrp::apply_plan(find_beam(ds, gof_args.beam),
                                           rctrp::parse_plan(gof_args.plan));
        const auto res = rctrp::ks_test(sub.powers(), gof_alpha,
                                        gof_lilliefors ? rctrp::KsCriticalMode::LillieforsExponential
                                                       : rctrp::KsCriticalMode::Asymptotic);
        std::printf("beam %d, plan %s:\n", gof_args.beam, sub.plan.name.c_str());
        print_ks(res);
        return exit_ok;
    }

    if (app.got_subcommand(neff)) {
        const rctrp::Dataset ds = rctrp::load_dataset(neff_args.samples, neff_args.meta);
        const auto sub = rctrp::apply_plan(find_beam(ds, neff_args.beam),
                                           rctrp::parse_plan(neff_args.plan));
        const auto res = rctrp::effective_samples(sub, ds.layout,
                                                  neff_two_sided ? rctrp::ThresholdMode::TwoSided
                                                                 : rctrp::ThresholdMode::OneSided);
        std::printf("beam %d, plan %s:\n", neff_args.beam, sub.plan.name.c_str());
        print_neff(res);
        return exit_ok;
    }

    if (app.got_subcommand(trp)) {
        const rctrp::Dataset ds = rctrp::load_dataset(trp_args.samples, trp_args.meta);
        const auto sub = rctrp::apply_plan(find_beam(ds, trp_args.beam),
                                           rctrp::parse_plan(trp_args.plan));
        const auto ne = rctrp::effective_samples(sub, ds.layout);
        const auto est = rctrp::make_trp_estimate(
            trp_args.beam, sub.powers(), ds.calibration, static_cast<double>(ne.n_eff),
            trp_confidence,
            trp_method == "gamma" ? rctrp::CiMethod::GammaExact : rctrp::CiMethod::NormalApprox);
        std::printf("beam %d, plan %s:\n", trp_args.beam, sub.plan.name.c_str());
        print_trp(est);
        return exit_ok;
    }

    if (app.got_subcommand(compare)) {
        const rctrp::AnalysisReport a = rctrp::load_report(report_a);
        const rctrp::AnalysisReport b = rctrp::load_report(report_b);
        std::printf("A: %s (plan %s)\nB: %s (plan %s)\n", report_a.c_str(), a.plan.name.c_str(),
                    report_b.c_str(), b.plan.name.c_str());
        int significant = 0, compared = 0;
        std::printf("%5s %14s %14s %10s\n", "beam", "TRP A dBm", "TRP B dBm", "verdict");
        for (const auto &ba : a.beams) {
            if (!ba.trp)
                continue;
            for (const auto &bb : b.beams) {
                if (bb.beam_id != ba.beam_id || !bb.trp)
                    continue;
                if (ba.trp->confidence != bb.trp->confidence || ba.trp->method != bb.trp->method)
                    throw std::runtime_error(
                        "reports use different CI configurations; re-run analyze with matching "
                        "--confidence and --ci-method");
                ++compared;
                const char *verdict = "overlap";
                if (ba.trp->ci_low_w > bb.trp->ci_high_w) {
                    verdict = "A > B";
                    ++significant;
                } else if (bb.trp->ci_low_w > ba.trp->ci_high_w) {
                    verdict = "B > A";
                    ++significant;
                }
                std::printf("%5d %14.3f %14.3f %10s\n", ba.beam_id,
                            rctrp::watts_to_dbm(ba.trp->trp_w), rctrp::watts_to_dbm(bb.trp->trp_w),
                            verdict);
            }
        }
        std::printf("%d of %d beams differ significantly at %.0f%% confidence\n", significant,
                    compared, 100.0 * a.config.confidence);
        return exit_ok;
    }

    return exit_usage_error;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data_error;
    }
}
