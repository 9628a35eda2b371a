#include "subsql/demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subsql/errors.hpp"
#include "subsql/pipeline.hpp"
#include "subsql/qnoise.hpp"
#include "subsql/spectral.hpp"
#include "subsql/synth.hpp"

namespace subsql {

namespace {

using nlohmann::json;

Spectrum slice_band(const Spectrum& s, double f_lo_hz, double f_hi_hz) {
    const auto [first, last] = band_indices(s.grid, f_lo_hz, f_hi_hz);
    const auto b = static_cast<std::ptrdiff_t>(first);
    const auto e = static_cast<std::ptrdiff_t>(last + 1);
    Spectrum out;
    out.grid = FrequencyGrid(
        std::vector<double>(s.grid.hz().begin() + b, s.grid.hz().begin() + e));
    out.values.assign(s.values.begin() + b, s.values.begin() + e);
    out.bin_width_hz = s.bin_width_hz;
    out.segment_count = s.segment_count;
    out.duration_s = s.duration_s;
    out.label = s.label;
    return out;
}

void check_options(const DemoOptions& o) {
    if (!(o.fs_hz > 0.0) || !(o.period_seconds > 0.0) || o.periods < 1) {
        throw std::invalid_argument("demo needs positive sampling rate, period, and count");
    }
    if (o.periods != 3) {
        throw std::invalid_argument(
            "demo uses exactly three periods per kind (the stationarity test requires it)");
    }
    if (!(o.f_lo_hz > 0.0) || !(o.f_hi_hz > o.f_lo_hz) || !(o.f_hi_hz <= o.fs_hz / 2.0)) {
        throw std::invalid_argument("demo band must satisfy 0 < f_lo < f_hi <= fs/2");
    }
    if (!(o.dip_halfwidth_hz > 0.0) || !(o.estimator_efficiency > 0.0)) {
        throw std::invalid_argument("demo averaging width and efficiency must be positive");
    }
}

}  // namespace

DemoSummary run_demo(const LoadedConfig& cfg, const DemoOptions& opts) {
    check_options(opts);
    const InterferometerParams& p = cfg.interferometer;
    const SqueezerParams sqz = SqueezerParams::from_db(cfg.squeeze_db, cfg.squeeze_angle_rad);

    // --- Synthesize interleaved reference / squeezed stretches ---------------
    SegmentPlan plan;
    for (int i = 0; i < opts.periods; ++i) {
        plan.entries.push_back({PlanEntry::Mode::reference, 0.0, opts.period_seconds, 1.0});
        plan.entries.push_back(
            {PlanEntry::Mode::squeezed, cfg.squeeze_angle_rad, opts.period_seconds, 1.0});
    }
    const ExperimentData data =
        run_experiment(p, cfg.squeeze_db, cfg.classical, plan, opts.fs_hz, opts.seed);

    // --- Per-period and pooled spectral estimates ----------------------------
    const EstimatorConfig& est = cfg.estimator;
    std::vector<Spectrum> ref_specs, sqz_specs;
    std::vector<TimeSeries> ref_ts, sqz_ts;
    for (const SynthRecord& rec : data.records) {
        const Spectrum s = estimate_psd(rec.series, est);
        if (rec.entry.mode == PlanEntry::Mode::reference) {
            ref_specs.push_back(s);
            ref_ts.push_back(rec.series);
        } else {
            sqz_specs.push_back(s);
            sqz_ts.push_back(rec.series);
        }
    }
    const Spectrum d_ref = estimate_psd(ref_ts, est);
    const Spectrum d_sqz = estimate_psd(sqz_ts, est);

    const double df = est.bin_width_hz();
    const double t_per_kind = opts.periods * opts.period_seconds;
    const double stat_rel =
        statistical_uncertainty(opts.estimator_efficiency, t_per_kind, df);
    const double per_period_rel =
        statistical_uncertainty(opts.estimator_efficiency, opts.period_seconds, df);

    // --- Stationarity across the three periods of each kind ------------------
    const StationarityReport stat = stationarity_check(ref_specs, sqz_specs, per_period_rel);

    // --- Band-limited model and measured spectra -----------------------------
    const Spectrum d_ref_band = slice_band(d_ref, opts.f_lo_hz, opts.f_hi_hz);
    const Spectrum d_sqz_band = slice_band(d_sqz, opts.f_lo_hz, opts.f_hi_hz);
    const FrequencyGrid& band = d_ref_band.grid;

    Spectrum m_ref = lossy_displacement_psd(p, SqueezerParams{0.0, 0.0}, band);
    m_ref.bin_width_hz = df;
    const Spectrum model_sqz = lossy_displacement_psd(p, sqz, band);
    const Spectrum classical_band = cfg.classical.evaluate(band);
    const Spectrum sql_band = sql_psd(p, band);

    // --- Subtraction and budget ----------------------------------------------
    const QuantumInference inf = infer_quantum(d_sqz_band, d_ref_band, m_ref);

    // Nonstationarity component: per-bin excess of the measured drift over the
    // purely statistical floor, so stationary data is not double-counted.
    const auto [b_first, b_last] = band_indices(stat.drift_error.grid, opts.f_lo_hz, opts.f_hi_hz);
    std::vector<double> drift_excess(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) {
        const double d = stat.drift_error.values[b_first + i];
        const double f2 = stat.statistical_floor * stat.statistical_floor;
        drift_excess[i] = std::sqrt(std::max(0.0, d * d - f2));
    }

    BudgetInputs inputs;
    inputs.gain = RelativeError::scalar(opts.gain_rel);
    inputs.model_reference = RelativeError::scalar(opts.model_rel);
    inputs.classical = RelativeError::scalar(opts.classical_rel);
    inputs.stat_reference = RelativeError::scalar(stat_rel);
    inputs.stat_squeezed = RelativeError::scalar(stat_rel);
    inputs.nonstationarity = RelativeError::per_bin(drift_excess);
    inputs.monitor = RelativeError::scalar(opts.monitor_rel);

    const UncertaintyBudget budget =
        uncertainty_budget(d_sqz_band, d_ref_band, m_ref, inf.quantum, inputs);

    // Expected budget: same error inputs evaluated on the noiseless model
    // spectra. This gives a smooth 2-sigma band that stays defined even where
    // the measured Q fluctuates through zero.
    Spectrum d_ref_exp = m_ref;
    Spectrum d_sqz_exp = model_sqz;
    for (std::size_t i = 0; i < band.size(); ++i) {
        d_ref_exp.values[i] += classical_band.values[i];
        d_sqz_exp.values[i] += classical_band.values[i];
    }
    const UncertaintyBudget expected =
        uncertainty_budget(d_sqz_exp, d_ref_exp, m_ref, model_sqz, inputs);

    // --- Scores --------------------------------------------------------------
    DemoSummary out;
    out.model_dip_hz = dip_frequency(p, sqz, opts.f_lo_hz, opts.f_hi_hz);

    {
        const FrequencyGrid dense = FrequencyGrid::linear(opts.f_lo_hz, opts.f_hi_hz, 4001);
        const Spectrum lossy = lossy_displacement_psd(p, sqz, dense);
        const Spectrum sql = sql_psd(p, dense);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dense.size(); ++i) {
            best = std::min(best, lossy.values[i] / sql.values[i]);
        }
        out.model_min_ratio = std::sqrt(best);
    }

    // Dip score: band mean of the pointwise power ratio Q/SQL around the model
    // dip. Averaging the ratio (not the absolute spectra) keeps the score near
    // the pointwise minimum instead of being dominated by the louder band edges.
    const double dip_lo = std::max(opts.f_lo_hz, out.model_dip_hz - opts.dip_halfwidth_hz);
    const double dip_hi = std::min(opts.f_hi_hz, out.model_dip_hz + opts.dip_halfwidth_hz);
    Spectrum ratio2 = inf.quantum;
    Spectrum model_ratio2 = model_sqz;
    for (std::size_t i = 0; i < band.size(); ++i) {
        ratio2.values[i] /= sql_band.values[i];
        model_ratio2.values[i] /= sql_band.values[i];
    }
    const double r2_dip = band_mean(ratio2, dip_lo, dip_hi);
    out.measured_dip_ratio =
        r2_dip > 0.0 ? std::sqrt(r2_dip) : std::numeric_limits<double>::quiet_NaN();
    out.model_dip_band_ratio = std::sqrt(band_mean(model_ratio2, dip_lo, dip_hi));

    {
        const auto [d_first, d_last] = band_indices(band, dip_lo, dip_hi);
        const std::size_t n_dip = d_last - d_first + 1;
        double mean_rel = 0.0;
        for (std::size_t i = d_first; i <= d_last; ++i) {
            mean_rel += expected.total.values[i];
        }
        mean_rel /= static_cast<double>(n_dip);
        // Band average over n bins whose Hann-window frequency response
        // correlates neighbors (power correlation 4/9 at lag 1, 1/36 at lag 2),
        // inflating the variance of the mean by ~1.94; amplitude halves the
        // relative error.
        out.measured_dip_ratio_rel_unc =
            0.5 * mean_rel * std::sqrt(1.94 / static_cast<double>(n_dip));

        const auto dip_idx = static_cast<std::size_t>(
            std::llround((out.model_dip_hz - band[0]) / df));
        out.amplification_at_dip =
            expected.amplification.values[std::min(dip_idx, band.size() - 1)];
    }

    std::size_t covered = 0;
    for (std::size_t i = 0; i < band.size(); ++i) {
        const double bound = 2.0 * expected.total.values[i] * model_sqz.values[i];
        if (std::abs(inf.quantum.values[i] - model_sqz.values[i]) <= bound) {
            ++covered;
        }
    }
    out.coverage = static_cast<double>(covered) / static_cast<double>(band.size());

    out.checks.dip_in_window = out.model_dip_hz >= 35.0 && out.model_dip_hz <= 45.0;
    out.checks.ratio_in_window =
        out.measured_dip_ratio >= 0.60 && out.measured_dip_ratio <= 0.75;
    out.checks.coverage_ok = out.coverage >= 0.95;
    out.checks.pass =
        out.checks.dip_in_window && out.checks.ratio_in_window && out.checks.coverage_ok;

    // --- Outputs -------------------------------------------------------------
    if (!opts.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(opts.out_dir);
        const auto path = [&](const char* name) { return (fs::path(opts.out_dir) / name).string(); };

        write_spectrum_csv(path("d_ref.csv"), d_ref);
        write_spectrum_csv(path("d_sqz.csv"), d_sqz);
        write_spectrum_csv(path("m_ref.csv"), m_ref);
        write_spectrum_csv(path("quantum.csv"), inf.quantum);
        write_spectrum_csv(path("s_observed.csv"), observed_squeezing(inf.quantum, m_ref),
                           "S_star");

        {
            std::vector<std::string> headers{"f_hz", "dQ_rel", "dG",  "dC",  "dMr",
                                             "dDr",  "dDs",    "dNt", "dNm", "V"};
            std::vector<std::vector<double>> cols{
                band.hz(),          budget.total.values,  budget.gain,
                budget.classical,   budget.model_reference, budget.stat_reference,
                budget.stat_squeezed, budget.nonstationarity, budget.monitor,
                budget.amplification.values};
            write_table_csv(path("budget.csv"), headers, cols);
        }
        write_stationarity_csv(path("stationarity.csv"), stat);
        {
            json j;
            j["seed"] = opts.seed;
            j["band_hz"] = {opts.f_lo_hz, opts.f_hi_hz};
            j["model_dip_hz"] = out.model_dip_hz;
            j["model_min_ratio"] = out.model_min_ratio;
            j["model_dip_band_ratio"] = out.model_dip_band_ratio;
            j["measured_dip_ratio"] = out.measured_dip_ratio;
            j["measured_dip_ratio_rel_unc"] = out.measured_dip_ratio_rel_unc;
            j["amplification_at_dip"] = out.amplification_at_dip;
            j["coverage_2sigma"] = out.coverage;
            j["thresholds"] = {{"dip_window_hz", {35.0, 45.0}},
                               {"ratio_window", {0.60, 0.75}},
                               {"coverage_min", 0.95}};
            j["checks"] = {{"dip_in_window", out.checks.dip_in_window},
                           {"ratio_in_window", out.checks.ratio_in_window},
                           {"coverage_ge_95", out.checks.coverage_ok},
                           {"pass", out.checks.pass}};
            std::ofstream sf(path("summary.json"));
            if (!sf) {
                throw file_error("cannot write file: " + path("summary.json"));
            }
            sf << j.dump(2) << '\n';
        }
        RunManifest m;
        m.command = "demo";
        m.config_path = opts.config_label;
        m.seed = opts.seed;
        m.inputs = {opts.config_label};
        m.outputs = {"d_ref.csv",   "d_sqz.csv",        "m_ref.csv",
                     "quantum.csv", "s_observed.csv",   "budget.csv",
                     "stationarity.csv", "summary.json"};
        write_manifest(path("manifest.json"), m);
    }
    return out;
}

}  // namespace subsql
