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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <catch2/catch_amalgamated.hpp>

#include "rctrp/io.hpp"
#include "rctrp/simulator.hpp"

using namespace rctrp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rctrp_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string &name) const { return path / name; }
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Dataset small_dataset(std::uint64_t seed = 1, int beams = 4) {
    SimulationParams params;
    params.seed = seed;
    params.n_beams = beams;
    params.rho_in = 0.15;
    params.chamber_gain = db_to_linear(-30.0);
    params.trp_true_w = {0.05};
    return simulate_dataset(params);
}

int run_cli(const std::string &args, const fs::path &stdout_to = {}) {
    std::string cmd = std::string(RCTRP_CLI_PATH) + " " + args;
    cmd += stdout_to.empty() ? " > /dev/null 2>&1" : " > " + stdout_to.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("dataset survives a save/load round trip exactly") {
    const TempDir tmp;
    const Dataset ds = small_dataset();
    save_dataset(ds, tmp / "d.csv", tmp / "d.meta");
    const Dataset back = load_dataset(tmp / "d.csv", tmp / "d.meta");

    CHECK(back.layout.n_out == ds.layout.n_out);
    CHECK(back.layout.n_in == ds.layout.n_in);
    CHECK(back.layout.turntable_step_deg == ds.layout.turntable_step_deg);
    CHECK(back.calibration.chamber_gain == ds.calibration.chamber_gain);
    CHECK(back.calibration.frequency_hz == ds.calibration.frequency_hz);
    CHECK(back.metadata == ds.metadata);
    REQUIRE(back.sweeps.size() == ds.sweeps.size());
    for (size_t s = 0; s < ds.sweeps.size(); ++s) {
        CHECK(back.sweeps[s].steering_angle_deg == ds.sweeps[s].steering_angle_deg);
        REQUIRE(back.sweeps[s].samples.size() == ds.sweeps[s].samples.size());
        for (size_t i = 0; i < ds.sweeps[s].samples.size(); ++i) {
            CHECK(back.sweeps[s].samples[i].power_w == ds.sweeps[s].samples[i].power_w);
            CHECK(back.sweeps[s].samples[i].sequence_index ==
                  ds.sweeps[s].samples[i].sequence_index);
        }
    }
}

TEST_CASE("saving is byte-stable after one normalization pass") {
    const TempDir tmp;
    save_dataset(small_dataset(), tmp / "a.csv", tmp / "a.meta");
    const Dataset once = load_dataset(tmp / "a.csv", tmp / "a.meta");
    save_dataset(once, tmp / "b.csv", tmp / "b.meta");
    const Dataset twice = load_dataset(tmp / "b.csv", tmp / "b.meta");
    save_dataset(twice, tmp / "c.csv", tmp / "c.meta");
    CHECK(slurp(tmp / "b.csv") == slurp(tmp / "c.csv"));
    CHECK(slurp(tmp / "b.meta") == slurp(tmp / "c.meta"));
}

TEST_CASE("load_dataset accepts dBm powers and shuffled rows") {
    const TempDir tmp;
    {
        std::ofstream meta(tmp / "d.meta");
        meta << "frequency_hz = 28e9\nturntable_step_deg = 90\nn_out = 2\nn_in = 2\n"
             << "chamber_loss_db = 0\npower_unit = dbm\n";
        std::ofstream csv(tmp / "d.csv");
        csv << "beam,turntable_index,paddle_index,power\n";
        csv << "1,1,1,-10\n1,0,0,0\n1,1,0,-20\n1,0,1,-30\n";  // out of order
    }
    const Dataset ds = load_dataset(tmp / "d.csv", tmp / "d.meta");
    REQUIRE(ds.sweeps.size() == 1);
    REQUIRE(ds.sweeps[0].samples.size() == 4);
    CHECK_THAT(ds.sweeps[0].samples[0].power_w, WithinRel(1e-3, 1e-12));   // 0 dBm
    CHECK_THAT(ds.sweeps[0].samples[1].power_w, WithinRel(1e-6, 1e-12));   // -30 dBm
    CHECK_THAT(ds.sweeps[0].samples[3].power_w, WithinRel(1e-4, 1e-12));   // -10 dBm
    CHECK(ds.sweeps[0].samples[3].sequence_index == 3);
}

TEST_CASE("load_dataset names an unknown CSV column") {
    const TempDir tmp;
    {
        std::ofstream meta(tmp / "d.meta");
        meta << "frequency_hz = 28e9\nturntable_step_deg = 14.4\nn_out = 2\nn_in = 2\n"
             << "chamber_loss_db = 0\npower_unit = watts\n";
        std::ofstream csv(tmp / "d.csv");
        csv << "beam,turntable_idx,paddle_index,power\n";
    }
    try {
        load_dataset(tmp / "d.csv", tmp / "d.meta");
        FAIL("expected parse error");
    } catch (const ParseError &e) {
        CHECK_THAT(e.what(), ContainsSubstring("turntable_idx"));
    }
}

TEST_CASE("load_dataset reports bad numbers with their line") {
    const TempDir tmp;
    {
        std::ofstream meta(tmp / "d.meta");
        meta << "frequency_hz = 28e9\nturntable_step_deg = 14.4\nn_out = 1\nn_in = 2\n"
             << "chamber_loss_db = 0\npower_unit = watts\n";
        std::ofstream csv(tmp / "d.csv");
        csv << "beam,turntable_index,paddle_index,power\n1,0,0,1e-6\n1,0,1,oops\n";
    }
    try {
        load_dataset(tmp / "d.csv", tmp / "d.meta");
        FAIL("expected parse error");
    } catch (const ParseError &e) {
        CHECK_THAT(e.what(), ContainsSubstring(":3:"));
        CHECK_THAT(e.what(), ContainsSubstring("oops"));
    }
}

TEST_CASE("load_dataset surfaces validation failures with the beam named") {
    const TempDir tmp;
    const Dataset ds = small_dataset(3, 8);
    save_dataset(ds, tmp / "d.csv", tmp / "d.meta");
    // Rewrite the CSV without beam 7.
    {
        std::ifstream in(tmp / "d.csv");
        std::ofstream out(tmp / "f.csv");
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("7,", 0) != 0)
                out << line << "\n";
    }
    try {
        load_dataset(tmp / "f.csv", tmp / "d.meta");
        FAIL("expected validation error");
    } catch (const DatasetValidationError &e) {
        REQUIRE(e.violations.size() == 2);
        CHECK_THAT(e.violations[0].message, ContainsSubstring("missing beam 7"));
        CHECK_THAT(e.violations[1].message, ContainsSubstring("declares 8"));
    }

    // Dropping the last beam leaves no id gap; the n_beams key catches it.
    {
        std::ifstream in(tmp / "d.csv");
        std::ofstream out(tmp / "g.csv");
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("8,", 0) != 0)
                out << line << "\n";
    }
    try {
        load_dataset(tmp / "g.csv", tmp / "d.meta");
        FAIL("expected validation error");
    } catch (const DatasetValidationError &e) {
        REQUIRE(e.violations.size() == 1);
        CHECK_THAT(e.violations[0].message, ContainsSubstring("declares 8"));
        CHECK_THAT(e.violations[0].message, ContainsSubstring("has 7"));
    }
}

TEST_CASE("load_dataset requires the metadata keys") {
    const TempDir tmp;
    {
        std::ofstream meta(tmp / "d.meta");
        meta << "frequency_hz = 28e9\nn_out = 2\nn_in = 2\n"
             << "chamber_loss_db = 0\npower_unit = watts\n";  // missing turntable_step_deg
        std::ofstream csv(tmp / "d.csv");
        csv << "beam,turntable_index,paddle_index,power\n";
    }
    try {
        load_dataset(tmp / "d.csv", tmp / "d.meta");
        FAIL("expected missing-key error");
    } catch (const std::runtime_error &e) {
        CHECK_THAT(e.what(), ContainsSubstring("turntable_step_deg"));
    }
}

TEST_CASE("report serialization is a fixed point") {
    const Dataset ds = small_dataset(9, 3);
    AnalysisReport report = analyze_dataset(ds, named_plan("300D"));
    report.generated_at = "2026-01-01T00:00:00Z";

    const std::string first = report_to_json(report).dump(2);
    const AnalysisReport back = report_from_json(nlohmann::ordered_json::parse(first));
    const std::string second = report_to_json(back).dump(2);
    CHECK(first == second);

    const AnalysisReport again = report_from_json(nlohmann::ordered_json::parse(second));
    CHECK(report_to_json(again).dump(2) == second);
}

TEST_CASE("save_report / load_report round trip") {
    const TempDir tmp;
    const Dataset ds = small_dataset(11, 3);
    const AnalysisReport report = analyze_dataset(ds, named_plan("600"));
    save_report(report, tmp / "r.json");
    const AnalysisReport back = load_report(tmp / "r.json");
    CHECK(report_to_json(back) == report_to_json(report));
    CHECK(back.plan.name == "600");
    CHECK(back.beams.size() == 3);

    CHECK_THROWS_WITH(save_report(report, "/nonexistent-dir-rctrp/r.json"),
                      ContainsSubstring("/nonexistent-dir-rctrp/r.json"));
}

TEST_CASE("simulate->save->load->analyze equals the in-memory pipeline") {
    const TempDir tmp;
    SimulationParams params;
    params.seed = 2718;
    params.rho_in = 0.3;
    params.n_beams = 6;
    params.chamber_gain = db_to_linear(-25.0);
    const Dataset direct = simulate_dataset(params);
    save_dataset(direct, tmp / "d.csv", tmp / "d.meta");
    const Dataset loaded = load_dataset(tmp / "d.csv", tmp / "d.meta");

    const AnalysisReport a = analyze_dataset(direct, named_plan("300C"));
    const AnalysisReport b = analyze_dataset(loaded, named_plan("300C"));
    CHECK(report_to_json(a).dump(2) == report_to_json(b).dump(2));
}

// ---- CLI ---------------------------------------------------------------------

TEST_CASE("cli simulate/analyze produce deterministic reports") {
    const TempDir tmp;
    const std::string prefix = (tmp / "sim").string();
    REQUIRE(run_cli("simulate --seed 7 --beams 3 --chamber-loss-db 28 --out " + prefix) == 0);
    CHECK(fs::exists(prefix + ".csv"));
    CHECK(fs::exists(prefix + ".meta"));

    const std::string base_args = "analyze " + prefix + ".csv " + prefix +
                                  ".meta --plan 300D --no-timestamp --report ";
    REQUIRE(run_cli(base_args + (tmp / "r1.json").string()) == 0);
    REQUIRE(run_cli(base_args + (tmp / "r2.json").string()) == 0);
    CHECK(slurp(tmp / "r1.json") == slurp(tmp / "r2.json"));
    CHECK_FALSE(slurp(tmp / "r1.json").empty());
}

TEST_CASE("cli exit codes distinguish usage and data errors") {
    const TempDir tmp;
    const std::string prefix = (tmp / "sim").string();
    REQUIRE(run_cli("simulate --seed 1 --beams 2 --out " + prefix) == 0);

    // Usage errors -> 2
    CHECK(run_cli("analyze") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("analyze " + prefix + ".csv " + prefix + ".meta --ci-method bogus") == 2);

    // Data errors -> 1
    CHECK(run_cli("analyze missing.csv missing.meta") == 1);
    CHECK(run_cli("analyze " + prefix + ".csv " + prefix + ".meta --plan nope") == 1);

    // Help -> 0
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("simulate --help") == 0);
}

TEST_CASE("cli single-beam subcommands and compare") {
    const TempDir tmp;
    const std::string prefix = (tmp / "sim").string();
    REQUIRE(run_cli("simulate --seed 5 --beams 3 --trp-dbm -12,-12,-9 --out " + prefix) == 0);
    const std::string files = prefix + ".csv " + prefix + ".meta";

    CHECK(run_cli("gof " + files + " --beam 2 --plan 300C") == 0);
    CHECK(run_cli("neff " + files + " --beam 2 --plan 300D") == 0);
    const fs::path out = tmp / "trp.txt";
    CHECK(run_cli("trp " + files + " --beam 3 --ci-method gamma", out) == 0);
    CHECK_THAT(slurp(out), ContainsSubstring("TRP"));
    CHECK(run_cli("gof " + files + " --beam 9") == 1);  // no such beam

    REQUIRE(run_cli("analyze " + files + " --no-timestamp --report " +
                    (tmp / "a.json").string()) == 0);
    REQUIRE(run_cli("analyze " + files + " --plan 300C --no-timestamp --report " +
                    (tmp / "b.json").string()) == 0);
    const fs::path cmp = tmp / "cmp.txt";
    CHECK(run_cli("compare " + (tmp / "a.json").string() + " " + (tmp / "b.json").string(), cmp) ==
          0);
    CHECK_THAT(slurp(cmp), ContainsSubstring("verdict"));
}
