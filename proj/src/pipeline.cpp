#include "subsql/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace subsql {

namespace {

// 95.45% (two-sigma equivalent) quantile of chi^2 with four degrees of freedom.
constexpr double chi2_4_quantile_2sigma = 9.715641142541578;

void require_triplet(const std::vector<Spectrum>& group, const char* what) {
    if (group.size() != 3) {
        throw std::invalid_argument(std::string("stationarity check needs exactly three ") +
                                    what + " periods");
    }
}

}  // namespace

QuantumInference infer_quantum(const Spectrum& measured_squeezed,
                               const Spectrum& measured_reference,
                               const Spectrum& model_reference) {
    measured_squeezed.validate();
    measured_reference.validate();
    model_reference.validate();
    measured_squeezed.require_same_grid(measured_reference);
    measured_squeezed.require_same_grid(model_reference);

    QuantumInference out;
    out.quantum = measured_squeezed;
    out.quantum.label = "inferred_quantum";
    for (std::size_t k = 0; k < out.quantum.size(); ++k) {
        out.quantum.values[k] = measured_squeezed.values[k] -
                                (measured_reference.values[k] - model_reference.values[k]);
        if (out.quantum.values[k] < 0.0) {
            out.negative_bins.push_back(k);
        }
    }
    return out;
}

Spectrum observed_squeezing(const Spectrum& quantum, const Spectrum& model_unsqueezed) {
    quantum.validate();
    model_unsqueezed.validate();
    quantum.require_same_grid(model_unsqueezed);
    Spectrum out = quantum;
    out.label = "observed_squeezing";
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!(model_unsqueezed.values[k] > 0.0)) {
            throw std::domain_error("observed squeezing needs a positive unsqueezed model");
        }
        out.values[k] = quantum.values[k] / model_unsqueezed.values[k];
    }
    return out;
}

RelativeError RelativeError::scalar(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("relative error must be finite and non-negative");
    }
    RelativeError e;
    e.scalar_ = value;
    return e;
}

RelativeError RelativeError::per_bin(std::vector<double> values) {
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("relative error must be finite and non-negative");
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("per-bin relative error must not be empty");
    }
    RelativeError e;
    e.values_ = std::move(values);
    return e;
}

void RelativeError::require_size(std::size_t n) const {
    if (!values_.empty() && values_.size() != n) {
        throw std::invalid_argument("per-bin relative error has the wrong number of bins");
    }
}

UncertaintyBudget uncertainty_budget(const Spectrum& measured_squeezed,
                                     const Spectrum& measured_reference,
                                     const Spectrum& model_reference,
                                     const Spectrum& quantum, const BudgetInputs& in) {
    measured_squeezed.validate();
    measured_reference.validate();
    model_reference.validate();
    measured_squeezed.require_same_grid(measured_reference);
    measured_squeezed.require_same_grid(model_reference);
    measured_squeezed.require_same_grid(quantum);
    const std::size_t n = quantum.size();
    in.gain.require_size(n);
    in.model_reference.require_size(n);
    in.classical.require_size(n);
    in.stat_reference.require_size(n);
    in.stat_squeezed.require_size(n);
    in.nonstationarity.require_size(n);
    in.monitor.require_size(n);

    UncertaintyBudget out;
    out.total = quantum;
    out.total.label = "relative_uncertainty";
    out.amplification = quantum;
    out.amplification.label = "amplification";
    out.gain.resize(n);
    out.model_reference.resize(n);
    out.classical.resize(n);
    out.stat_reference.resize(n);
    out.stat_squeezed.resize(n);
    out.nonstationarity.resize(n);
    out.monitor.resize(n);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n; ++k) {
        const double q = quantum.values[k];
        const double dr = measured_reference.values[k];
        const double ds = measured_squeezed.values[k];
        const double mr = model_reference.values[k];
        if (q == 0.0 || !std::isfinite(q)) {
            out.undefined_bins.push_back(k);
            out.total.values[k] = nan;
            out.amplification.values[k] = nan;
            out.gain[k] = out.model_reference[k] = out.classical[k] = nan;
            out.stat_reference[k] = out.stat_squeezed[k] = nan;
            out.nonstationarity[k] = out.monitor[k] = nan;
            continue;
        }
        const double inv_q = 1.0 / std::abs(q);
        const double classical_level = dr - mr;
        out.gain[k] = in.gain.at(k);
        out.model_reference[k] = std::abs(mr) * in.model_reference.at(k) * inv_q;
        out.classical[k] = std::abs(dr - ds) * in.classical.at(k) * inv_q;
        out.stat_reference[k] = std::abs(dr) * in.stat_reference.at(k) * inv_q;
        out.stat_squeezed[k] = std::abs(ds) * in.stat_squeezed.at(k) * inv_q;
        out.nonstationarity[k] = std::abs(classical_level) * in.nonstationarity.at(k) * inv_q;
        out.monitor[k] = std::abs(classical_level) * in.monitor.at(k) * inv_q;
        out.total.values[k] = std::sqrt(
            out.gain[k] * out.gain[k] + out.model_reference[k] * out.model_reference[k] +
            out.classical[k] * out.classical[k] +
            out.stat_reference[k] * out.stat_reference[k] +
            out.stat_squeezed[k] * out.stat_squeezed[k] +
            out.nonstationarity[k] * out.nonstationarity[k] + out.monitor[k] * out.monitor[k]);
        out.amplification.values[k] = classical_level / q;
    }
    return out;
}

Spectrum stationarity_pair(const Spectrum& a, const Spectrum& b) {
    a.validate();
    b.validate();
    a.require_same_grid(b);
    Spectrum out = a;
    out.label = "pair_deviation";
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double sum = a.values[k] + b.values[k];
        if (sum == 0.0) {
            throw std::domain_error("pair deviation undefined where both spectra vanish");
        }
        out.values[k] = 2.0 * (a.values[k] - b.values[k]) / sum;
    }
    return out;
}

StationarityReport stationarity_check(const std::vector<Spectrum>& reference_periods,
                                      const std::vector<Spectrum>& squeezed_periods,
                                      double per_period_rel) {
    require_triplet(reference_periods, "reference");
    require_triplet(squeezed_periods, "squeezed");
    if (!(per_period_rel > 0.0) || !std::isfinite(per_period_rel)) {
        throw std::invalid_argument("per-period relative error must be positive");
    }
    for (const auto& s : reference_periods) {
        reference_periods.front().require_same_grid(s);
    }
    for (const auto& s : squeezed_periods) {
        reference_periods.front().require_same_grid(s);
    }

    StationarityReport report;
    report.per_period_rel = per_period_rel;
    report.expected_combined = 2.0 * per_period_rel * per_period_rel;
    report.combined_2sigma_bound =
        0.5 * per_period_rel * per_period_rel * chi2_4_quantile_2sigma;
    report.statistical_floor = std::sqrt(2.0 / 3.0) * per_period_rel;

    auto add_pairs = [&](const std::vector<Spectrum>& group, std::size_t id_offset) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                report.pair_ids.emplace_back(id_offset + i, id_offset + j);
                report.pair_deviation.push_back(stationarity_pair(group[i], group[j]));
            }
        }
    };
    add_pairs(reference_periods, 0);
    add_pairs(squeezed_periods, 3);

    const std::size_t n = reference_periods.front().size();
    report.combined = reference_periods.front();
    report.combined.label = "combined_deviation";
    report.drift_error = reference_periods.front();
    report.drift_error.label = "drift_error";
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (const auto& pair : report.pair_deviation) {
            acc += pair.values[k] * pair.values[k];
        }
        report.combined.values[k] = acc / 6.0;
        report.drift_error.values[k] = std::sqrt(report.combined.values[k] / 3.0);
        if (report.combined.values[k] > report.combined_2sigma_bound) {
            report.flagged_bins.push_back(k);
        }
    }
    return report;
}

GainCalibration calibrate_gain(const TimeSeries& pd_a, const TimeSeries& pd_b,
                               const Spectrum& dark_psd, const Spectrum& sensing_model,
                               const EstimatorConfig& cfg, double f_lo_hz, double f_hi_hz) {
    if (pd_a.samples.size() != pd_b.samples.size() || pd_a.fs_hz != pd_b.fs_hz) {
        throw std::invalid_argument("gain calibration needs simultaneous photodiode records");
    }
    // Correlated components must cancel linearly, so the averaging statistic
    // is forced to the mean regardless of the caller's default.
    EstimatorConfig mean_cfg = cfg;
    mean_cfg.statistic = AverageStatistic::mean;

    TimeSeries half_sum;
    half_sum.fs_hz = pd_a.fs_hz;
    half_sum.samples.resize(pd_a.samples.size());
    for (std::size_t j = 0; j < half_sum.samples.size(); ++j) {
        half_sum.samples[j] = 0.5 * (pd_a.samples[j] + pd_b.samples[j]);
    }
    const Spectrum recombined = estimate_psd(half_sum, mean_cfg);
    const CrossSpectrum cross = estimate_csd(pd_a, pd_b, mean_cfg);
    dark_psd.require_same_grid(recombined);
    sensing_model.require_same_grid(recombined);

    GainCalibration out;
    out.sensing_observed = recombined;
    out.sensing_observed.label = "sensing_observed";
    for (std::size_t k = 0; k < recombined.size(); ++k) {
        out.sensing_observed.values[k] =
            recombined.values[k] - cross.values[k].real() - dark_psd.values[k];
    }

    const auto [lo, hi] = band_indices(recombined.grid, f_lo_hz, f_hi_hz);
    out.band_bins = hi - lo + 1;
    if (band_mean(out.sensing_observed, f_lo_hz, f_hi_hz) <= 0.0) {
        throw std::domain_error("gain calibration band has no net sensing power");
    }
    std::vector<double> ratios;
    ratios.reserve(out.band_bins);
    for (std::size_t k = lo; k <= hi; ++k) {
        if (!(sensing_model.values[k] > 0.0)) {
            throw std::domain_error("gain calibration needs a positive sensing model");
        }
        ratios.push_back(out.sensing_observed.values[k] / sensing_model.values[k]);
    }
    const std::size_t mid = ratios.size() / 2;
    std::nth_element(ratios.begin(), ratios.begin() + mid, ratios.end());
    double med = ratios[mid];
    if (ratios.size() % 2 == 0) {
        med = 0.5 * (med + *std::max_element(ratios.begin(), ratios.begin() + mid));
    }
    out.gain_squared = med;
    if (!(out.gain_squared > 0.0)) {
        throw std::domain_error("gain calibration produced a non-positive gain");
    }
    out.gain = std::sqrt(out.gain_squared);
    return out;
}

}  // namespace subsql
