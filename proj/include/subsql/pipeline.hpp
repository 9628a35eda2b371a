#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "subsql/spectral.hpp"
#include "subsql/spectrum.hpp"
#include "subsql/timeseries.hpp"

namespace subsql {

// --- Classical-noise subtraction ---------------------------------------------

// Infers the quantum noise in the squeezed measurement by removing the
// classical background measured in the reference state:
//   Q = D_sqz - (D_ref - M_ref),
// where M_ref is the modeled quantum noise of the reference state. Negative
// bins (statistical fluctuations through zero) are preserved and their indices
// reported, never clipped.
struct QuantumInference {
    Spectrum quantum;
    std::vector<std::size_t> negative_bins;
};
QuantumInference infer_quantum(const Spectrum& measured_squeezed,
                               const Spectrum& measured_reference,
                               const Spectrum& model_reference);

// Observed squeezing factor: the inferred quantum PSD over the modeled
// unsqueezed quantum PSD (dimensionless; < 1 means squeezing).
Spectrum observed_squeezing(const Spectrum& quantum, const Spectrum& model_unsqueezed);

// --- Uncertainty budget ------------------------------------------------------

// A relative (fractional) 1-sigma error, either one number for all bins or a
// per-bin vector.
class RelativeError {
  public:
    RelativeError() = default;
    static RelativeError scalar(double value);
    static RelativeError per_bin(std::vector<double> values);

    double at(std::size_t i) const { return values_.empty() ? scalar_ : values_[i]; }
    void require_size(std::size_t n) const;  // throws on per-bin size mismatch

  private:
    double scalar_ = 0.0;
    std::vector<double> values_;
};

// Relative errors of everything entering the subtraction. Stationarity terms
// apply to the measured classical background (D_ref - M_ref).
struct BudgetInputs {
    RelativeError gain;             // overall calibration
    RelativeError model_reference;  // modeled reference quantum noise
    RelativeError classical;        // classical-background model/transfer
    RelativeError stat_reference;   // statistical, reference estimate
    RelativeError stat_squeezed;    // statistical, squeezed estimate
    RelativeError nonstationarity;  // temporal drift between periods
    RelativeError monitor;          // drift seen by auxiliary monitors
};

// Propagated relative uncertainty on the inferred quantum PSD:
//   dQ^2 = dG^2 + (1/Q^2) [ M_r^2 dM^2 + (D_r - D_s)^2 dC^2
//          + D_r^2 dDr^2 + D_s^2 dDs^2 + (D_r - M_r)^2 (dNt^2 + dNm^2) ].
// Bins with vanishing or non-finite Q are flagged and carry NaN. The
// amplification factor V = (D_r - M_r)/Q measures how strongly the classical
// background leverages every error source.
struct UncertaintyBudget {
    Spectrum total;          // relative dQ/Q
    Spectrum amplification;  // V
    std::vector<std::size_t> undefined_bins;
    // Per-bin contributions, relative to Q, quadrature-summing to `total`.
    std::vector<double> gain;
    std::vector<double> model_reference;
    std::vector<double> classical;
    std::vector<double> stat_reference;
    std::vector<double> stat_squeezed;
    std::vector<double> nonstationarity;
    std::vector<double> monitor;
};
UncertaintyBudget uncertainty_budget(const Spectrum& measured_squeezed,
                                     const Spectrum& measured_reference,
                                     const Spectrum& model_reference,
                                     const Spectrum& quantum, const BudgetInputs& in);

// --- Stationarity diagnostics ------------------------------------------------

// Fractional deviation between two estimates of the same spectrum:
// N = 2 (a - b) / (a + b).
Spectrum stationarity_pair(const Spectrum& a, const Spectrum& b);

// Pairwise-deviation test over three reference and three squeezed observation
// periods. Under stationarity each within-kind pair deviation has variance
// 2 delta^2 (delta = per-period relative statistical error), and the combined
// statistic N_Sigma^2 = (1/6) sum over the six pairs of N_ij^2 follows
// (delta^2/2) chi^2_4, with mean 2 delta^2. Bins above the 95.45% quantile
// of that distribution are flagged.
struct StationarityReport {
    std::vector<std::pair<std::size_t, std::size_t>> pair_ids;  // indices 0-2 ref, 3-5 sqz
    std::vector<Spectrum> pair_deviation;
    Spectrum combined;        // N_Sigma^2
    Spectrum drift_error;     // sqrt(N_Sigma^2 / 3): nonstationarity error of the pooled mean
    double per_period_rel = 0.0;
    double expected_combined = 0.0;      // 2 delta^2
    double combined_2sigma_bound = 0.0;  // (delta^2/2) * chi^2_4 quantile at 95.45%
    double statistical_floor = 0.0;      // sqrt(2/3) * delta: drift_error level for stationary data
    std::vector<std::size_t> flagged_bins;
};
StationarityReport stationarity_check(const std::vector<Spectrum>& reference_periods,
                                      const std::vector<Spectrum>& squeezed_periods,
                                      double per_period_rel);

// --- Photodiode gain calibration ---------------------------------------------

// Extracts the readout gain from a dual-photodiode stretch: the half-sum PSD
// minus the real cross-spectrum removes everything common to both chains,
// leaving the per-readout sensing noise plus dark noise; after subtracting the
// known dark PSD, the band median of the ratio to the modeled sensing PSD is
// the squared gain. Mean averaging is used throughout so the correlated parts
// cancel linearly.
struct GainCalibration {
    double gain = 0.0;
    double gain_squared = 0.0;
    Spectrum sensing_observed;  // readout units^2 / Hz
    std::size_t band_bins = 0;
};
GainCalibration calibrate_gain(const TimeSeries& pd_a, const TimeSeries& pd_b,
                               const Spectrum& dark_psd, const Spectrum& sensing_model,
                               const EstimatorConfig& cfg, double f_lo_hz, double f_hi_hz);

}  // namespace subsql
