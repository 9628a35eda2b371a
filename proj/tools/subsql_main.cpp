// subsql: quantum-noise model and analysis pipeline for a squeezed-light
// interferometer. Subcommands cover the model surface (model, contour),
// synthetic data (synth), spectral estimation (estimate-psd), the subtraction
// pipeline (subtract, stationarity, calibrate), parameter fits (fit), and the
// end-to-end chain (demo). All runs are deterministic for a fixed seed and
// emit a manifest next to their outputs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsql/constants.hpp"
#include "subsql/demo.hpp"
#include "subsql/errors.hpp"
#include "subsql/fitting.hpp"
#include "subsql/io.hpp"
#include "subsql/pipeline.hpp"
#include "subsql/qnoise.hpp"
#include "subsql/spectral.hpp"
#include "subsql/synth.hpp"

namespace {

using namespace subsql;
using nlohmann::json;

// Raised by demo --check when an acceptance threshold is missed (exit code 4).
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LoadedConfig config_or_default(const std::string& path) {
    return path.empty() ? default_config() : load_config(path);
}

std::string config_label(const std::string& path) {
    return path.empty() ? std::string("<builtin-defaults>") : path;
}

std::string out_path(const std::string& dir, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

// 0.25 Hz model grid covering [fmin, fmax].
FrequencyGrid model_grid(double fmin_hz, double fmax_hz) {
    if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz)) {
        throw std::invalid_argument("need 0 < fmin < fmax");
    }
    const double df = 0.25;
    std::size_t k_lo = static_cast<std::size_t>(std::ceil(fmin_hz / df - 1e-9));
    if (k_lo < 1) k_lo = 1;
    const auto k_hi = static_cast<std::size_t>(std::floor(fmax_hz / df + 1e-9));
    if (k_hi <= k_lo) {
        throw std::invalid_argument("band holds fewer than two model grid points");
    }
    return FrequencyGrid::uniform_bins(df, k_lo, k_hi);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw file_error("cannot open file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw file_error("cannot write file: " + path);
    }
    out << j.dump(2) << '\n';
}

void emit_manifest(const std::string& dir, const std::string& command,
                   const std::string& config, std::uint64_t seed,
                   std::vector<std::string> inputs, std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.config_path = config;
    m.seed = seed;
    m.inputs = std::move(inputs);
    m.outputs = std::move(outputs);
    write_manifest(out_path(dir, "manifest.json"), m);
}

// --- model -------------------------------------------------------------------

void cmd_model(const std::string& cfg_path, double fmin, double fmax,
               const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const InterferometerParams& p = cfg.interferometer;
    const SqueezerParams sqz = SqueezerParams::from_db(cfg.squeeze_db, cfg.squeeze_angle_rad);
    const FrequencyGrid g = model_grid(fmin, fmax);

    const Spectrum sql = sql_psd(p, g).amplitude();
    const Spectrum ideal = ideal_displacement_psd(p, sqz, g).amplitude();
    const Spectrum lossy = lossy_displacement_psd(p, sqz, g).amplitude();
    const NoiseDecomposition dec = decompose(p, g);
    const Spectrum s_star = lossy_squeezing_spectrum(p, sqz, g);

    write_table_csv(out_path(out, "model.csv"),
                    {"f_hz", "sql_amp_m_rthz", "ideal_amp_m_rthz", "lossy_amp_m_rthz",
                     "shot_amp_m_rthz", "qrpn_amp_m_rthz", "S_star"},
                    {g.hz(), sql.values, ideal.values, lossy.values,
                     dec.shot.amplitude().values, dec.qrpn.amplitude().values, s_star.values});
    emit_manifest(out, "model", config_label(cfg_path), 0, {config_label(cfg_path)},
                  {"model.csv"});
}

// --- contour -----------------------------------------------------------------

void cmd_contour(const std::string& cfg_path, double fmin, double fmax,
                 const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const SqueezerParams sqz = SqueezerParams::from_db(cfg.squeeze_db, cfg.squeeze_angle_rad);
    const FrequencyGrid g = model_grid(fmin, fmax);

    std::vector<double> angles_deg, angles_rad;
    for (int a = -85; a <= 90; a += 5) {
        angles_deg.push_back(a);
        angles_rad.push_back(a * constants::pi / 180.0);
    }
    const SqueezingContour c = squeezing_contour(cfg.interferometer, sqz.r, angles_rad, g);

    std::vector<double> col_phi, col_f, col_s;
    for (std::size_t a = 0; a < angles_rad.size(); ++a) {
        for (std::size_t k = 0; k < g.size(); ++k) {
            col_phi.push_back(angles_deg[a]);
            col_f.push_back(g[k]);
            col_s.push_back(c.s_star[a][k]);
        }
    }
    write_table_csv(out_path(out, "contour.csv"), {"phi_deg", "f_hz", "S_star"},
                    {col_phi, col_f, col_s});
    emit_manifest(out, "contour", config_label(cfg_path), 0, {config_label(cfg_path)},
                  {"contour.csv"});
}

// --- synth -------------------------------------------------------------------

void cmd_synth(const std::string& cfg_path, std::uint64_t seed, double fs,
               const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const SegmentPlan plan = SegmentPlan::desk_default();
    const ExperimentData data =
        run_experiment(cfg.interferometer, cfg.squeeze_db, cfg.classical, plan, fs, seed);

    json segments = json::array();
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const SynthRecord& rec = data.records[i];
        char name[32];
        std::snprintf(name, sizeof(name), "seg_%03zu", i);
        write_timeseries(out_path(out, name), rec.series);
        const bool squeezed = rec.entry.mode == PlanEntry::Mode::squeezed;
        segments.push_back(
            {{"index", i},
             {"mode", squeezed ? "squeezed" : "reference"},
             {"phi_deg", squeezed ? rec.entry.angle_rad * 180.0 / constants::pi : 0.0},
             {"duration_s", rec.entry.duration_s},
             {"classical_scale", rec.entry.classical_scale},
             {"seed", seed},
             {"fs_hz", data.fs_hz},
             {"file", std::string(name) + ".f64"}});
        outputs.push_back(std::string(name) + ".f64");
        outputs.push_back(std::string(name) + ".json");
    }
    json top;
    top["seed"] = seed;
    top["fs_hz"] = data.fs_hz;
    top["n_segments"] = data.records.size();
    top["segments"] = segments;
    write_json_file(out_path(out, "synth_manifest.json"), top);
    outputs.push_back("synth_manifest.json");
    emit_manifest(out, "synth", config_label(cfg_path), seed, {config_label(cfg_path)},
                  outputs);
}

// --- estimate-psd ------------------------------------------------------------

void cmd_estimate(const std::string& cfg_path, const std::string& input,
                  const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const TimeSeries ts = read_timeseries(input);
    const Spectrum psd = estimate_psd(ts, cfg.estimator);
    write_spectrum_csv(out_path(out, "psd.csv"), psd);
    emit_manifest(out, "estimate-psd", config_label(cfg_path), 0, {input}, {"psd.csv"});
}

// --- subtract ----------------------------------------------------------------

BudgetInputs parse_budget_errors(const std::string& path) {
    BudgetInputs in;
    if (path.empty()) {
        return in;  // all components zero
    }
    const json j = load_json_file(path);
    const std::set<std::string> allowed{"gain_rel",     "model_rel",   "classical_rel",
                                        "stat_ref_rel", "stat_sqz_rel", "nonstat_rel",
                                        "monitor_rel"};
    for (const auto& item : j.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            throw std::runtime_error("unknown key '" + item.key() + "' in " + path);
        }
        if (!item.value().is_number()) {
            throw std::runtime_error("key '" + item.key() + "' in " + path +
                                     " must be a number");
        }
    }
    const auto get = [&](const char* k) { return j.contains(k) ? j[k].get<double>() : 0.0; };
    in.gain = RelativeError::scalar(get("gain_rel"));
    in.model_reference = RelativeError::scalar(get("model_rel"));
    in.classical = RelativeError::scalar(get("classical_rel"));
    in.stat_reference = RelativeError::scalar(get("stat_ref_rel"));
    in.stat_squeezed = RelativeError::scalar(get("stat_sqz_rel"));
    in.nonstationarity = RelativeError::scalar(get("nonstat_rel"));
    in.monitor = RelativeError::scalar(get("monitor_rel"));
    return in;
}

void cmd_subtract(const std::string& dsqz_path, const std::string& dref_path,
                  const std::string& mref_path, const std::string& errors_path,
                  const std::string& out) {
    const Spectrum d_sqz = read_spectrum_csv(dsqz_path);
    const Spectrum d_ref = read_spectrum_csv(dref_path);
    const Spectrum m_ref = read_spectrum_csv(mref_path);
    const BudgetInputs inputs = parse_budget_errors(errors_path);

    const QuantumInference inf = infer_quantum(d_sqz, d_ref, m_ref);
    const UncertaintyBudget budget = uncertainty_budget(d_sqz, d_ref, m_ref, inf.quantum, inputs);

    write_spectrum_csv(out_path(out, "quantum.csv"), inf.quantum);
    write_table_csv(out_path(out, "budget.csv"),
                    {"f_hz", "dQ_rel", "dG", "dC", "dMr", "dDr", "dDs", "dNt", "dNm", "V"},
                    {inf.quantum.grid.hz(), budget.total.values, budget.gain, budget.classical,
                     budget.model_reference, budget.stat_reference, budget.stat_squeezed,
                     budget.nonstationarity, budget.monitor, budget.amplification.values});
    std::vector<std::string> inputs_list{dsqz_path, dref_path, mref_path};
    if (!errors_path.empty()) inputs_list.push_back(errors_path);
    emit_manifest(out, "subtract", "", 0, inputs_list, {"quantum.csv", "budget.csv"});
}

// --- stationarity ------------------------------------------------------------

void cmd_stationarity(const std::vector<std::string>& ref_paths,
                      const std::vector<std::string>& sqz_paths, double delta,
                      const std::string& out) {
    std::vector<Spectrum> refs, sqzs;
    for (const auto& p : ref_paths) refs.push_back(read_spectrum_csv(p));
    for (const auto& p : sqz_paths) sqzs.push_back(read_spectrum_csv(p));

    if (delta <= 0.0) {
        // Per-period relative statistical error from the segment count of the
        // first reference spectrum: T*dF = (n+1)/2 at half-overlap, scaled by
        // the median-estimator efficiency.
        if (refs.empty() || refs.front().segment_count < 1) {
            throw std::invalid_argument(
                "cannot infer --delta: first reference spectrum carries no segment count");
        }
        const double t_df = (refs.front().segment_count + 1) / 2.0;
        delta = 1.0 / std::sqrt(0.93 * t_df);
    }
    const StationarityReport report = stationarity_check(refs, sqzs, delta);
    write_stationarity_csv(out_path(out, "stationarity.csv"), report);

    std::vector<std::string> inputs = ref_paths;
    inputs.insert(inputs.end(), sqz_paths.begin(), sqz_paths.end());
    emit_manifest(out, "stationarity", "", 0, inputs, {"stationarity.csv"});
}

// --- calibrate ---------------------------------------------------------------

void cmd_calibrate(const std::string& cfg_path, const std::string& pda_path,
                   const std::string& pdb_path, const std::string& dark_path,
                   const std::string& model_path, double fmin, double fmax,
                   const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const TimeSeries pd_a = read_timeseries(pda_path);
    const TimeSeries pd_b = read_timeseries(pdb_path);
    const Spectrum dark = read_spectrum_csv(dark_path);
    const Spectrum model = read_spectrum_csv(model_path);

    const GainCalibration cal =
        calibrate_gain(pd_a, pd_b, dark, model, cfg.estimator, fmin, fmax);

    json j;
    j["gain"] = cal.gain;
    j["gain_squared"] = cal.gain_squared;
    j["band_hz"] = {fmin, fmax};
    j["band_bins"] = cal.band_bins;
    write_json_file(out_path(out, "calibration.json"), j);
    write_spectrum_csv(out_path(out, "sensing_observed.csv"), cal.sensing_observed,
                       "psd_readout2_hz");
    emit_manifest(out, "calibrate", config_label(cfg_path), 0,
                  {pda_path, pdb_path, dark_path, model_path},
                  {"calibration.json", "sensing_observed.csv"});
}

// --- fit ---------------------------------------------------------------------

void cmd_fit(const std::string& cfg_path, const std::string& manifest_path,
             const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    const json m = load_json_file(manifest_path);
    if (!m.contains("datasets") || !m.at("datasets").is_array() || m.at("datasets").empty()) {
        throw std::runtime_error("fit manifest needs a non-empty 'datasets' array: " +
                                 manifest_path);
    }

    FitDataset data;
    std::vector<std::string> inputs{manifest_path};
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    for (const json& entry : m.at("datasets")) {
        if (!entry.contains("file") || !entry.contains("phi_deg")) {
            throw std::runtime_error("each fit dataset needs 'file' and 'phi_deg'");
        }
        std::string file = entry.at("file").get<std::string>();
        if (!std::filesystem::path(file).is_absolute()) {
            file = (base / file).string();
        }
        const Spectrum s = read_spectrum_csv(file);
        if (data.s_obs.empty()) {
            data.grid = s.grid;
        } else if (!(s.grid == data.grid)) {
            throw std::runtime_error("fit datasets must share one frequency grid: " + file);
        }
        const double sigma = entry.contains("sigma") ? entry.at("sigma").get<double>() : 1.0;
        if (!(sigma > 0.0)) {
            throw std::runtime_error("dataset sigma must be positive: " + file);
        }
        data.angles_rad.push_back(entry.at("phi_deg").get<double>() * constants::pi / 180.0);
        data.s_obs.push_back(s.values);
        data.weights.emplace_back(s.values.size(), 1.0 / (sigma * sigma));
        inputs.push_back(file);
    }

    FitBounds bounds;
    if (m.contains("bounds")) {
        const json& b = m.at("bounds");
        const std::set<std::string> allowed{"r", "psi_rad", "dphi_rad", "eta_input"};
        for (const auto& item : b.items()) {
            if (allowed.find(item.key()) == allowed.end()) {
                throw std::runtime_error("unknown bounds key '" + item.key() + "'");
            }
            if (!item.value().is_array() || item.value().size() != 2) {
                throw std::runtime_error("bounds entries are [lo, hi] pairs");
            }
        }
        const auto range = [&](const char* k, double& lo, double& hi) {
            if (b.contains(k)) {
                lo = b[k][0].get<double>();
                hi = b[k][1].get<double>();
            }
        };
        range("r", bounds.r_lo, bounds.r_hi);
        range("psi_rad", bounds.psi_lo, bounds.psi_hi);
        range("dphi_rad", bounds.dphi_lo, bounds.dphi_hi);
        range("eta_input", bounds.eta_lo, bounds.eta_hi);
    }

    const FitResult res = fit_squeezing_model(cfg.interferometer, data, bounds);

    json j;
    j["params"] = {{"r", res.params.r},
                   {"psi_rad", res.params.psi_rad},
                   {"dphi_rad", res.params.dphi_rad},
                   {"eta_input", res.params.eta_input}};
    j["errors_1sigma"] = {{"r", std::sqrt(res.covariance[0][0])},
                          {"psi_rad", std::sqrt(res.covariance[1][1])},
                          {"dphi_rad", std::sqrt(res.covariance[2][2])},
                          {"eta_input", std::sqrt(res.covariance[3][3])}};
    json cov = json::array();
    for (const auto& row : res.covariance) {
        cov.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["covariance"] = cov;
    j["chi2"] = res.chi2;
    j["dof"] = res.dof;
    j["chi2_per_dof"] = res.chi2_per_dof;
    j["evaluations"] = res.evaluations;
    write_json_file(out_path(out, "fit.json"), j);
    emit_manifest(out, "fit", config_label(cfg_path), 0, inputs, {"fit.json"});
}

// --- demo --------------------------------------------------------------------

void cmd_demo(const std::string& cfg_path, std::uint64_t seed, double fmin, double fmax,
              bool check, const std::string& out) {
    const LoadedConfig cfg = config_or_default(cfg_path);
    DemoOptions opts;
    opts.seed = seed;
    opts.f_lo_hz = fmin;
    opts.f_hi_hz = fmax;
    opts.out_dir = out;
    opts.config_label = config_label(cfg_path);
    const DemoSummary s = run_demo(cfg, opts);

    std::printf("demo: model dip %.3f Hz (window [35, 45]): %s\n", s.model_dip_hz,
                s.checks.dip_in_window ? "ok" : "MISS");
    std::printf("demo: measured dip amplitude ratio %.4f +- %.4f (window [0.60, 0.75]): %s\n",
                s.measured_dip_ratio, s.measured_dip_ratio * s.measured_dip_ratio_rel_unc,
                s.checks.ratio_in_window ? "ok" : "MISS");
    std::printf("demo: 2-sigma coverage %.1f%% of band bins (need >= 95%%): %s\n",
                100.0 * s.coverage, s.checks.coverage_ok ? "ok" : "MISS");
    std::printf("demo: classical amplification at dip V = %.2f\n", s.amplification_at_dip);
    std::printf("demo: %s (outputs in %s)\n", s.checks.pass ? "PASS" : "FAIL", out.c_str());
    if (check && !s.checks.pass) {
        throw CheckFailure("demo --check failed an acceptance threshold");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-noise model and statistical pipeline for a squeezed-light "
                 "sub-SQL interferometer"};
    app.require_subcommand(1);

    std::string cfg_path, out_dir = ".", input, errors_path, manifest_path;
    std::string dsqz_path, dref_path, mref_path, pda_path, pdb_path, dark_path, model_path;
    std::vector<std::string> ref_paths, sqz_paths;
    std::uint64_t seed = 7;
    double fmin = 10.0, fmax = 200.0, fs = 1024.0, delta = 0.0;
    double cal_fmin = 100.0, cal_fmax = 200.0;
    bool check = false;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", cfg_path, "parameter file (JSON); built-in defaults when absent");
    };
    const auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    };
    const auto add_band = [&](CLI::App* sub, double& lo, double& hi) {
        sub->add_option("--fmin", lo, "band lower edge in Hz")->capture_default_str();
        sub->add_option("--fmax", hi, "band upper edge in Hz")->capture_default_str();
    };

    CLI::App* model = app.add_subcommand("model", "noise model curves on a 0.25 Hz grid");
    add_config(model);
    add_out(model);
    add_band(model, fmin, fmax);
    model->callback([&] { cmd_model(cfg_path, fmin, fmax, out_dir); });

    CLI::App* contour = app.add_subcommand("contour", "S*(phi, f) surface as long CSV");
    add_config(contour);
    add_out(contour);
    add_band(contour, fmin, fmax);
    contour->callback([&] { cmd_contour(cfg_path, fmin, fmax, out_dir); });

    CLI::App* synth = app.add_subcommand("synth", "synthesize the desk-scale observing plan");
    add_config(synth);
    add_out(synth);
    synth->add_option("--seed", seed, "master seed")->capture_default_str();
    synth->add_option("--fs", fs, "sampling rate in Hz")->capture_default_str();
    synth->callback([&] { cmd_synth(cfg_path, seed, fs, out_dir); });

    CLI::App* estimate = app.add_subcommand(
        "estimate-psd", "Welch PSD of a time series (.f64 stem or t,value CSV)");
    add_config(estimate);
    add_out(estimate);
    estimate->add_option("--input", input, "time series path")->required();
    estimate->callback([&] { cmd_estimate(cfg_path, input, out_dir); });

    CLI::App* subtract =
        app.add_subcommand("subtract", "classical-noise subtraction with uncertainty budget");
    add_out(subtract);
    subtract->add_option("--dsqz", dsqz_path, "measured squeezed PSD CSV")->required();
    subtract->add_option("--dref", dref_path, "measured reference PSD CSV")->required();
    subtract->add_option("--mref", mref_path, "modeled reference quantum PSD CSV")->required();
    subtract->add_option("--errors", errors_path, "relative-error components (JSON)");
    subtract->callback(
        [&] { cmd_subtract(dsqz_path, dref_path, mref_path, errors_path, out_dir); });

    CLI::App* stationarity =
        app.add_subcommand("stationarity", "pairwise deviation test over 3+3 periods");
    add_out(stationarity);
    stationarity->add_option("--ref", ref_paths, "reference-period PSD CSVs (three)")
        ->expected(3)
        ->required();
    stationarity->add_option("--sqz", sqz_paths, "squeezed-period PSD CSVs (three)")
        ->expected(3)
        ->required();
    stationarity->add_option("--delta", delta,
                             "per-period relative statistical error (inferred when omitted)");
    stationarity->callback([&] { cmd_stationarity(ref_paths, sqz_paths, delta, out_dir); });

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "photodiode gain from the dual-readout cross-spectrum");
    add_config(calibrate);
    add_out(calibrate);
    calibrate->add_option("--pda", pda_path, "photodiode A time series")->required();
    calibrate->add_option("--pdb", pdb_path, "photodiode B time series")->required();
    calibrate->add_option("--dark", dark_path, "dark-noise PSD CSV")->required();
    calibrate->add_option("--model", model_path, "modeled sensing PSD CSV")->required();
    add_band(calibrate, cal_fmin, cal_fmax);
    calibrate->callback([&] {
        cmd_calibrate(cfg_path, pda_path, pdb_path, dark_path, model_path, cal_fmin, cal_fmax,
                      out_dir);
    });

    CLI::App* fit = app.add_subcommand("fit", "weighted least-squares squeezing-model fit");
    add_config(fit);
    add_out(fit);
    fit->add_option("--manifest", manifest_path,
                    "JSON listing S* CSVs with nominal angles, optional sigma and bounds")
        ->required();
    fit->callback([&] { cmd_fit(cfg_path, manifest_path, out_dir); });

    CLI::App* demo = app.add_subcommand("demo", "end-to-end synthetic pipeline with scoring");
    add_config(demo);
    demo->add_option("--seed", seed, "master seed")->capture_default_str();
    demo->add_option("--out", out_dir, "output directory")->default_str("demo_out");
    demo->add_flag("--check", check, "exit 4 unless every acceptance threshold passes");
    double demo_fmin = 20.0, demo_fmax = 100.0;
    add_band(demo, demo_fmin, demo_fmax);
    demo->callback([&] {
        if (out_dir == ".") out_dir = "demo_out";
        cmd_demo(cfg_path, seed, demo_fmin, demo_fmax, check, out_dir);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors -> 2; --help -> 0
    } catch (const CheckFailure& e) {
        std::cerr << "subsql: " << e.what() << '\n';
        return 4;
    } catch (const file_error& e) {
        std::cerr << "subsql: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "subsql: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
