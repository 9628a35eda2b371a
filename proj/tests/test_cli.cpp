// Exercises the installed command-line surface end to end by shelling out to
// the built binary: output files, exit-code contract, and determinism.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "subsql/constants.hpp"
#include "subsql/io.hpp"
#include "subsql/params.hpp"
#include "subsql/qnoise.hpp"
#include "subsql/rng.hpp"
#include "subsql/synth.hpp"

using namespace subsql;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& tag) {
    fs::create_directories("cli_test_tmp");
    const std::string log = "cli_test_tmp/" + tag + ".log";
    const std::string cmd = std::string(SUBSQL_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string data_file(const char* name) {
    return std::string(SUBSQL_DATA_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_test_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<double>> read_csv_columns(const fs::path& p, std::string* header) {
    std::ifstream in(p);
    REQUIRE(static_cast<bool>(in));
    std::string line;
    REQUIRE(std::getline(in, line));
    if (header) *header = line;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(row, cell, ',')) {
            if (cols.size() <= c) cols.emplace_back();
            cols[c].push_back(std::strtod(cell.c_str(), nullptr));
            ++c;
        }
    }
    return cols;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Spectrum make_spectrum(const FrequencyGrid& g, const std::vector<double>& v) {
    Spectrum s;
    s.grid = g;
    s.values = v;
    s.bin_width_hz = g.size() >= 2 ? g[1] - g[0] : 0.0;
    s.segment_count = 100;
    return s;
}

}  // namespace

TEST_CASE("the shipped default config matches the built-in defaults") {
    const LoadedConfig file = load_config(data_file("default_config.json"));
    const LoadedConfig builtin = default_config();
    CHECK(file.interferometer.arm_power_w == builtin.interferometer.arm_power_w);
    CHECK(file.interferometer.mirror_mass_kg == builtin.interferometer.mirror_mass_kg);
    CHECK(file.interferometer.arm_length_m == builtin.interferometer.arm_length_m);
    CHECK(file.interferometer.bandwidth_rad_s ==
          doctest::Approx(builtin.interferometer.bandwidth_rad_s).epsilon(1e-15));
    CHECK(file.interferometer.wavelength_m == builtin.interferometer.wavelength_m);
    CHECK(file.interferometer.input_efficiency ==
          doctest::Approx(builtin.interferometer.input_efficiency).epsilon(1e-15));
    CHECK(file.interferometer.output_efficiency ==
          doctest::Approx(builtin.interferometer.output_efficiency).epsilon(1e-15));
    CHECK(file.interferometer.src_detuning_rad ==
          doctest::Approx(builtin.interferometer.src_detuning_rad).epsilon(1e-15));
    CHECK(file.squeeze_db == builtin.squeeze_db);
    CHECK(file.squeeze_angle_rad ==
          doctest::Approx(builtin.squeeze_angle_rad).epsilon(1e-15));
}

TEST_CASE("model emits the documented curve table with a monotone SQL column") {
    const fs::path out = fresh_dir("model");
    const RunResult r = run_cli("model --config " + data_file("default_config.json") +
                                    " --fmin 10 --fmax 200 --out " + out.string(),
                                "model");
    CHECK(r.exit_code == 0);

    std::string header;
    const auto cols = read_csv_columns(out / "model.csv", &header);
    CHECK(header ==
          "f_hz,sql_amp_m_rthz,ideal_amp_m_rthz,lossy_amp_m_rthz,shot_amp_m_rthz,"
          "qrpn_amp_m_rthz,S_star");
    REQUIRE(cols.size() == 7);
    REQUIRE(cols[0].size() == 761);  // 10..200 Hz at 0.25 Hz
    for (std::size_t i = 1; i < cols[0].size(); ++i) {
        CHECK(cols[0][i] > cols[0][i - 1]);
        CHECK(cols[1][i] < cols[1][i - 1]);  // SQL amplitude falls as 1/f
    }
    // Spot value: SQL amplitude at 40 Hz.
    const std::size_t k40 = 120;  // (40 - 10) / 0.25
    CHECK(cols[0][k40] == doctest::Approx(40.0));
    CHECK(cols[1][k40] == doctest::Approx(1.8273e-20).epsilon(5e-4));

    const json manifest = json::parse(read_bytes(out / "manifest.json"));
    CHECK(manifest.at("command") == "model");
    CHECK(manifest.at("tool_version") == std::string(tool_version));
}

TEST_CASE("contour covers the angle sweep in long format") {
    const fs::path out = fresh_dir("contour");
    const RunResult r =
        run_cli("contour --fmin 20 --fmax 60 --out " + out.string(), "contour");
    CHECK(r.exit_code == 0);
    std::string header;
    const auto cols = read_csv_columns(out / "contour.csv", &header);
    CHECK(header == "phi_deg,f_hz,S_star");
    REQUIRE(cols.size() == 3);
    const std::size_t bins = 161;  // 20..60 at 0.25
    CHECK(cols[0].size() == 36 * bins);
    CHECK(cols[0].front() == doctest::Approx(-85.0));
    CHECK(cols[0].back() == doctest::Approx(90.0));
}

TEST_CASE("exit codes: usage 2, missing file 2 with path, domain 3") {
    RunResult r = run_cli("model --config cli_test_tmp/absent.json", "missing_cfg");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("cli_test_tmp/absent.json") != std::string::npos);

    CHECK(run_cli("frobnicate", "bad_subcommand").exit_code == 2);
    CHECK(run_cli("estimate-psd", "missing_required").exit_code == 2);
    CHECK(run_cli("model --fmin 50 --fmax 20 --out cli_test_tmp/dom", "bad_band").exit_code ==
          3);
    CHECK(run_cli("--help", "help").exit_code == 0);
}

TEST_CASE("synth writes one series per plan entry and reproduces bytes for a seed") {
    const fs::path out_a = fresh_dir("synth_a");
    const fs::path out_b = fresh_dir("synth_b");
    const fs::path out_c = fresh_dir("synth_c");
    CHECK(run_cli("synth --fs 256 --seed 3 --out " + out_a.string(), "synth_a").exit_code == 0);
    CHECK(run_cli("synth --fs 256 --seed 3 --out " + out_b.string(), "synth_b").exit_code == 0);
    CHECK(run_cli("synth --fs 256 --seed 4 --out " + out_c.string(), "synth_c").exit_code == 0);

    const json m = json::parse(read_bytes(out_a / "synth_manifest.json"));
    const std::size_t n = m.at("n_segments").get<std::size_t>();
    CHECK(n == m.at("segments").size());
    CHECK(n >= 10);
    double sweep_prev = -1e9;
    bool saw_sweep = false;
    for (const json& seg : m.at("segments")) {
        const std::string mode = seg.at("mode");
        CHECK((mode == "reference" || mode == "squeezed"));
        CHECK(seg.at("fs_hz").get<double>() == doctest::Approx(256.0));
        CHECK(fs::exists(out_a / seg.at("file").get<std::string>()));
        if (mode == "squeezed" && seg.at("duration_s").get<double>() < 100.0) {
            saw_sweep = true;  // the short angle-sweep stretches
            CHECK(seg.at("phi_deg").get<double>() > sweep_prev);
            sweep_prev = seg.at("phi_deg").get<double>();
        }
    }
    CHECK(saw_sweep);

    CHECK(read_bytes(out_a / "seg_000.f64") == read_bytes(out_b / "seg_000.f64"));
    CHECK(read_bytes(out_a / "seg_000.f64") != read_bytes(out_c / "seg_000.f64"));

    // The synthesized segments feed straight back into estimate-psd.
    const fs::path est = fresh_dir("estimate");
    const RunResult r = run_cli("estimate-psd --input " + (out_a / "seg_000").string() +
                                    " --out " + est.string(),
                                "estimate");
    CHECK(r.exit_code == 0);
    std::string header;
    const auto cols = read_csv_columns(est / "psd.csv", &header);
    CHECK(header == "f_hz,psd_m2_hz,n_segments");
    REQUIRE(cols.size() == 3);
    CHECK(cols[2].front() == doctest::Approx(119.0));  // 120 s of 2 s half-overlapped
}

TEST_CASE("subtract honors the inference identity and the budget columns") {
    const fs::path dir = fresh_dir("subtract");
    const FrequencyGrid g = FrequencyGrid::uniform_bins(1.0, 10, 29);
    std::vector<double> ds, dr, mr;
    for (std::size_t i = 0; i < g.size(); ++i) {
        ds.push_back(5.0 + 0.05 * static_cast<double>(i));
        dr.push_back(7.0 + 0.02 * static_cast<double>(i));
        mr.push_back(3.0);
    }
    write_spectrum_csv((dir / "ds.csv").string(), make_spectrum(g, ds));
    write_spectrum_csv((dir / "dr.csv").string(), make_spectrum(g, dr));
    write_spectrum_csv((dir / "mr.csv").string(), make_spectrum(g, mr));
    {
        std::ofstream e(dir / "errors.json");
        e << R"({"gain_rel": 0.01, "stat_ref_rel": 0.05, "stat_sqz_rel": 0.04})";
    }
    const RunResult r = run_cli("subtract --dsqz " + (dir / "ds.csv").string() + " --dref " +
                                    (dir / "dr.csv").string() + " --mref " +
                                    (dir / "mr.csv").string() + " --errors " +
                                    (dir / "errors.json").string() + " --out " + dir.string(),
                                "subtract");
    CHECK(r.exit_code == 0);

    const Spectrum q = read_spectrum_csv((dir / "quantum.csv").string());
    std::string header;
    const auto budget = read_csv_columns(dir / "budget.csv", &header);
    CHECK(header == "f_hz,dQ_rel,dG,dC,dMr,dDr,dDs,dNt,dNm,V");
    REQUIRE(budget.size() == 10);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double expected_q = ds[i] - (dr[i] - mr[i]);
        CHECK(q.values[i] == doctest::Approx(expected_q).epsilon(1e-14));
        CHECK(budget[9][i] == doctest::Approx((dr[i] - mr[i]) / expected_q).epsilon(1e-12));
        const double dq = std::sqrt(
            0.01 * 0.01 + (dr[i] * dr[i] * 0.05 * 0.05 + ds[i] * ds[i] * 0.04 * 0.04) /
                              (expected_q * expected_q));
        CHECK(budget[1][i] == doctest::Approx(dq).epsilon(1e-12));
    }

    // Unknown error key is a data error (exit 3), not a crash.
    {
        std::ofstream e(dir / "bad.json");
        e << R"({"gain": 0.01})";
    }
    CHECK(run_cli("subtract --dsqz " + (dir / "ds.csv").string() + " --dref " +
                      (dir / "dr.csv").string() + " --mref " + (dir / "mr.csv").string() +
                      " --errors " + (dir / "bad.json").string() + " --out " + dir.string(),
                  "subtract_bad")
              .exit_code == 3);
}

TEST_CASE("stationarity consumes six spectra and flags nothing for identical periods") {
    const fs::path dir = fresh_dir("stationarity");
    const FrequencyGrid g = FrequencyGrid::uniform_bins(0.5, 2, 41);
    std::vector<std::string> refs, sqzs;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = 2.0 + 0.01 * static_cast<double>(i);
        const std::string rp = (dir / ("ref" + std::to_string(k) + ".csv")).string();
        const std::string sp = (dir / ("sqz" + std::to_string(k) + ".csv")).string();
        write_spectrum_csv(rp, make_spectrum(g, v));
        for (auto& x : v) x *= 0.5;
        write_spectrum_csv(sp, make_spectrum(g, v));
        refs.push_back(rp);
        sqzs.push_back(sp);
    }
    const RunResult r = run_cli("stationarity --ref " + refs[0] + " " + refs[1] + " " +
                                    refs[2] + " --sqz " + sqzs[0] + " " + sqzs[1] + " " +
                                    sqzs[2] + " --delta 0.08 --out " + dir.string(),
                                "stationarity");
    CHECK(r.exit_code == 0);
    std::string header;
    const auto cols = read_csv_columns(dir / "stationarity.csv", &header);
    CHECK(header ==
          "f_hz,pair_0_1,pair_0_2,pair_1_2,pair_3_4,pair_3_5,pair_4_5,combined_n2,"
          "expected_n2,bound_2sigma_n2,drift_rel,flagged");
    REQUIRE(cols.size() == 12);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(cols[7][i] == 0.0);   // identical periods: no deviation
        CHECK(cols[11][i] == 0.0);  // nothing flagged
    }
    CHECK(cols[8][0] == doctest::Approx(2.0 * 0.08 * 0.08));

    CHECK(run_cli("stationarity --ref " + refs[0] + " " + refs[1] + " --sqz " + sqzs[0] +
                      " " + sqzs[1] + " " + sqzs[2] + " --out " + dir.string(),
                  "stationarity_bad")
              .exit_code == 2);
}

TEST_CASE("calibrate recovers a known readout gain through the CLI") {
    const fs::path dir = fresh_dir("calibrate");
    const double fs_hz = 512.0;
    const double g_true = 2.5;
    const double s_common = 1e-2, s_sense = 5e-3;

    const FrequencyGrid est_grid = FrequencyGrid::uniform_bins(0.5, 1, 512);
    Spectrum flat = make_spectrum(est_grid, std::vector<double>(est_grid.size(), s_common));
    const TimeSeries common = colorize(flat, 120.0, fs_hz, 0xCA11ULL);
    DualReadoutConfig rd_cfg;
    rd_cfg.gain = g_true;
    rd_cfg.dark_noise_fraction = 0.01;
    Spectrum sense = make_spectrum(est_grid, std::vector<double>(est_grid.size(), s_sense));
    const DualReadout rd = simulate_dual_readout(common, sense, rd_cfg, 0x51DEULL);

    write_timeseries((dir / "pd_a").string(), rd.a);
    write_timeseries((dir / "pd_b").string(), rd.b);
    write_spectrum_csv(
        (dir / "dark.csv").string(),
        make_spectrum(est_grid, std::vector<double>(
                                    est_grid.size(),
                                    g_true * g_true * rd_cfg.dark_noise_fraction * s_sense)),
        "psd_readout2_hz");
    write_spectrum_csv((dir / "model.csv").string(), sense);

    const RunResult r = run_cli("calibrate --pda " + (dir / "pd_a").string() + " --pdb " +
                                    (dir / "pd_b").string() + " --dark " +
                                    (dir / "dark.csv").string() + " --model " +
                                    (dir / "model.csv").string() + " --fmin 100 --fmax 200" +
                                    " --out " + dir.string(),
                                "calibrate");
    CHECK(r.exit_code == 0);
    const json cal = json::parse(read_bytes(dir / "calibration.json"));
    CHECK(cal.at("gain").get<double>() == doctest::Approx(g_true).epsilon(0.03));
    CHECK(cal.at("band_bins").get<int>() == 201);
    CHECK(fs::exists(dir / "sensing_observed.csv"));
}

TEST_CASE("fit recovers squeezer parameters from clean spectra via the CLI") {
    const fs::path dir = fresh_dir("fit");
    InterferometerParams p;
    const SqueezerParams truth = SqueezerParams::from_db(9.8, 0.0);
    const FrequencyGrid g = FrequencyGrid::linear(20.0, 200.0, 91);
    const std::vector<double> angles_deg{-50.0, -20.0, 7.0, 35.0, 65.0};

    json manifest;
    manifest["datasets"] = json::array();
    for (const double a : angles_deg) {
        SqueezerParams sq = truth;
        sq.angle_rad = a * constants::pi / 180.0;
        const Spectrum s = lossy_squeezing_spectrum(p, sq, g);
        char name[32];
        std::snprintf(name, sizeof(name), "s_%+03.0f.csv", a);
        write_spectrum_csv((dir / name).string(), s, "S_star");
        manifest["datasets"].push_back(
            {{"file", std::string(name)}, {"phi_deg", a}, {"sigma", 0.02}});
    }
    manifest["bounds"] = {{"r", {0.0, 3.0}}};
    {
        std::ofstream m(dir / "fit_manifest.json");
        m << manifest.dump(2);
    }

    const RunResult r = run_cli("fit --manifest " + (dir / "fit_manifest.json").string() +
                                    " --out " + dir.string(),
                                "fit");
    CHECK(r.exit_code == 0);
    const json res = json::parse(read_bytes(dir / "fit.json"));
    CHECK(res.at("params").at("r").get<double>() == doctest::Approx(truth.r).epsilon(0.03));
    CHECK(res.at("params").at("eta_input").get<double>() ==
          doctest::Approx(p.input_efficiency).epsilon(0.02));
    CHECK(std::abs(res.at("params").at("dphi_rad").get<double>()) < 0.01);
    CHECK(res.at("chi2").get<double>() < 1e-6);
    CHECK(res.at("dof").get<int>() == 5 * 91 - 4);

    // A dataset list with one angle cannot separate the parameters.
    json bad = manifest;
    bad["datasets"] = json::array({manifest["datasets"][0]});
    {
        std::ofstream m(dir / "bad_manifest.json");
        m << bad.dump(2);
    }
    CHECK(run_cli("fit --manifest " + (dir / "bad_manifest.json").string() + " --out " +
                      dir.string(),
                  "fit_bad")
              .exit_code == 3);
}

TEST_CASE("demo runs the full chain and passes its own checks") {
    const fs::path dir = fresh_dir("demo");
    const RunResult r =
        run_cli("demo --seed 7 --check --out " + dir.string(), "demo");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    const json s = json::parse(read_bytes(dir / "summary.json"));
    CHECK(s.at("checks").at("pass").get<bool>());
    CHECK(s.at("model_dip_hz").get<double>() == doctest::Approx(38.802).epsilon(1e-4));
    CHECK(s.at("measured_dip_ratio").get<double>() > 0.6);
    CHECK(s.at("measured_dip_ratio").get<double>() < 0.75);
}
