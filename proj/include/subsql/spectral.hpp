#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "subsql/spectrum.hpp"
#include "subsql/timeseries.hpp"

namespace subsql {

enum class AverageStatistic { median, mean };

// Segmented (Welch-style) spectral estimation: per-segment linear detrend,
// Hann window, one-sided density normalization, and either a bin-wise median
// across segments (scaled by 1/ln 2 to undo the chi^2_2 median bias) or the
// plain mean. The median path is robust against sparse transients at a
// sqrt(2) noise penalty.
struct EstimatorConfig {
    double segment_seconds = 2.0;
    double overlap_fraction = 0.5;
    AverageStatistic statistic = AverageStatistic::median;
    bool detrend = true;

    double bin_width_hz() const { return 1.0 / segment_seconds; }
};

struct SegmentLayout {
    std::size_t length = 0;  // samples per segment
    std::size_t hop = 0;     // samples between segment starts
    std::size_t count = 0;   // segments in the record
};

// Validates the config against a record (throws std::invalid_argument when the
// segment length is not a whole number of samples, the overlap is out of
// [0, 1), or the record is shorter than one segment).
SegmentLayout segment_layout(const EstimatorConfig& cfg, double fs_hz, std::size_t n_samples);

// One-sided PSD estimate. The DC bin is dropped (the grid excludes f = 0);
// bins run from bin_width to fs/2.
Spectrum estimate_psd(const TimeSeries& ts, const EstimatorConfig& cfg);

// Pooled estimate: segments gathered from several records of the same kind
// (equal sampling rate), then reduced with the configured statistic. This is
// how split observation periods combine into one lower-variance estimate.
Spectrum estimate_psd(const std::vector<TimeSeries>& records, const EstimatorConfig& cfg);

struct CrossSpectrum {
    FrequencyGrid grid;
    std::vector<std::complex<double>> values;
    double bin_width_hz = 0.0;
    int segment_count = 0;
    double duration_s = 0.0;
};

// Welch cross-spectral density between two simultaneous records. Always
// mean-averaged: a bin-wise median is ill-defined for complex averages, and
// the correlated parts must cancel linearly against PSD estimates.
CrossSpectrum estimate_csd(const TimeSeries& a, const TimeSeries& b,
                           const EstimatorConfig& cfg);

// Relative 1-sigma statistical uncertainty of a PSD estimate:
// (efficiency * duration * bin_width)^{-1/2}.
double statistical_uncertainty(double efficiency, double duration_s, double bin_width_hz);

// Monte-Carlo measurement of the estimator efficiency on white noise:
// E = 1 / (relative variance * duration * bin width), averaged over bins of
// [f_lo, f_hi].
struct EfficiencyEstimate {
    double efficiency = 0.0;
    double relative_variance = 0.0;
};
EfficiencyEstimate measure_efficiency(const EstimatorConfig& cfg, int trials,
                                      double duration_s, double fs_hz, std::uint64_t seed,
                                      double f_lo_hz, double f_hi_hz);

}  // namespace subsql
