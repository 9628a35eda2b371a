#include "subsql/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <stdexcept>

#include "subsql/constants.hpp"
#include "subsql/fft.hpp"
#include "subsql/rng.hpp"

namespace subsql {

namespace {

void check_config(const EstimatorConfig& cfg, double fs_hz) {
    if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) {
        throw std::invalid_argument("spectral: sampling rate must be positive");
    }
    if (!(cfg.segment_seconds > 0.0) || !std::isfinite(cfg.segment_seconds)) {
        throw std::invalid_argument("spectral: segment length must be positive");
    }
    if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0)) {
        throw std::invalid_argument("spectral: overlap fraction must lie in [0, 1)");
    }
}

// Periodic Hann window; sum of squares is 3L/8 exactly for even L.
std::vector<double> hann_window(std::size_t length) {
    std::vector<double> w(length);
    for (std::size_t j = 0; j < length; ++j) {
        w[j] = 0.5 * (1.0 - std::cos(2.0 * constants::pi *
                                     static_cast<double>(j) / static_cast<double>(length)));
    }
    return w;
}

// Removes the least-squares line a + b*t from a segment (in place). Centering
// the time index makes intercept and slope estimates independent.
void detrend_linear(std::vector<double>& seg) {
    const std::size_t n = seg.size();
    const double center = 0.5 * static_cast<double>(n - 1);
    double mean = 0.0;
    double cross = 0.0;
    double tvar = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) - center;
        mean += seg[j];
        cross += seg[j] * t;
        tvar += t * t;
    }
    mean /= static_cast<double>(n);
    const double slope = tvar > 0.0 ? cross / tvar : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) - center;
        seg[j] -= mean + slope * t;
    }
}

// Shared segmentation driver: windows each segment, transforms it, and hands
// the spectrum to `consume(segment_index, bins)`.
template <typename Consumer>
void for_each_segment(const TimeSeries& ts, const EstimatorConfig& cfg,
                      const SegmentLayout& layout, RealFft& fft,
                      const std::vector<double>& window, Consumer&& consume) {
    std::vector<double> seg(layout.length);
    std::vector<std::complex<double>> bins(layout.length / 2 + 1);
    for (std::size_t s = 0; s < layout.count; ++s) {
        const double* src = ts.samples.data() + s * layout.hop;
        std::copy(src, src + layout.length, seg.begin());
        if (cfg.detrend) {
            detrend_linear(seg);
        }
        for (std::size_t j = 0; j < layout.length; ++j) {
            seg[j] *= window[j];
        }
        fft.forward(seg, bins);
        consume(s, bins);
    }
}

// Gathers one-sided periodogram values per bin across segments (possibly from
// several records) and reduces them with the configured statistic.
class PsdAccumulator {
  public:
    PsdAccumulator(const EstimatorConfig& cfg, double fs_hz)
        : cfg_(cfg), fs_hz_(fs_hz) {
        check_config(cfg, fs_hz);
        const double samples = cfg.segment_seconds * fs_hz;
        length_ = static_cast<std::size_t>(std::llround(samples));
        if (length_ < 4 || std::abs(samples - static_cast<double>(length_)) > 1e-9 ||
            length_ % 2 != 0) {
            throw std::invalid_argument(
                "spectral: segment must span an even whole number of samples (>= 4)");
        }
        window_ = hann_window(length_);
        double sumw2 = 0.0;
        for (double w : window_) sumw2 += w * w;
        scale_ = 1.0 / (fs_hz * sumw2);
        fft_ = std::make_unique<RealFft>(length_);
        per_bin_.resize(length_ / 2);
    }

    SegmentLayout layout_for(std::size_t n_samples) const {
        const auto hop = static_cast<std::size_t>(
            std::llround(static_cast<double>(length_) * (1.0 - cfg_.overlap_fraction)));
        if (hop == 0) {
            throw std::invalid_argument("spectral: overlap leaves an empty hop");
        }
        if (n_samples < length_) {
            throw std::invalid_argument("spectral: record is shorter than one segment");
        }
        SegmentLayout layout;
        layout.length = length_;
        layout.hop = hop;
        layout.count = (n_samples - length_) / hop + 1;
        return layout;
    }

    void add(const TimeSeries& ts) {
        if (std::abs(ts.fs_hz - fs_hz_) > 1e-9 * fs_hz_) {
            throw std::invalid_argument("spectral: pooled records must share a sampling rate");
        }
        const SegmentLayout layout = layout_for(ts.samples.size());
        for (auto& bin : per_bin_) {
            bin.reserve(bin.size() + layout.count);
        }
        for_each_segment(ts, cfg_, layout, *fft_, window_,
                         [this](std::size_t, const std::vector<std::complex<double>>& bins) {
                             const std::size_t half = length_ / 2;
                             for (std::size_t k = 1; k <= half; ++k) {
                                 const double doubling = (k < half) ? 2.0 : 1.0;
                                 per_bin_[k - 1].push_back(doubling * scale_ * std::norm(bins[k]));
                             }
                         });
        duration_s_ += ts.duration_s();
        segment_count_ += static_cast<int>(layout.count);
    }

    Spectrum finalize() const {
        if (segment_count_ == 0) {
            throw std::invalid_argument("spectral: no records accumulated");
        }
        const std::size_t half = length_ / 2;
        Spectrum out;
        out.grid = FrequencyGrid::uniform_bins(cfg_.bin_width_hz(), 1, half);
        out.values.resize(half);
        out.bin_width_hz = cfg_.bin_width_hz();
        out.segment_count = segment_count_;
        out.duration_s = duration_s_;
        std::vector<double> scratch;
        for (std::size_t k = 0; k < half; ++k) {
            const auto& vals = per_bin_[k];
            if (cfg_.statistic == AverageStatistic::mean) {
                double sum = 0.0;
                for (double v : vals) sum += v;
                out.values[k] = sum / static_cast<double>(vals.size());
            } else {
                scratch = vals;
                const std::size_t n = scratch.size();
                const std::size_t mid = n / 2;
                std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
                double med = scratch[mid];
                if (n % 2 == 0) {
                    const double lower =
                        *std::max_element(scratch.begin(), scratch.begin() + mid);
                    med = 0.5 * (med + lower);
                }
                out.values[k] = med * constants::median_to_mean;
            }
        }
        return out;
    }

  private:
    EstimatorConfig cfg_;
    double fs_hz_;
    std::size_t length_ = 0;
    std::vector<double> window_;
    double scale_ = 0.0;
    std::unique_ptr<RealFft> fft_;
    std::vector<std::vector<double>> per_bin_;
    double duration_s_ = 0.0;
    int segment_count_ = 0;
};

}  // namespace

SegmentLayout segment_layout(const EstimatorConfig& cfg, double fs_hz, std::size_t n_samples) {
    PsdAccumulator acc(cfg, fs_hz);
    return acc.layout_for(n_samples);
}

Spectrum estimate_psd(const TimeSeries& ts, const EstimatorConfig& cfg) {
    PsdAccumulator acc(cfg, ts.fs_hz);
    acc.add(ts);
    Spectrum out = acc.finalize();
    out.label = ts.label;
    return out;
}

Spectrum estimate_psd(const std::vector<TimeSeries>& records, const EstimatorConfig& cfg) {
    if (records.empty()) {
        throw std::invalid_argument("spectral: no records to estimate");
    }
    PsdAccumulator acc(cfg, records.front().fs_hz);
    for (const auto& ts : records) {
        acc.add(ts);
    }
    Spectrum out = acc.finalize();
    out.label = records.front().label;
    return out;
}

CrossSpectrum estimate_csd(const TimeSeries& a, const TimeSeries& b,
                           const EstimatorConfig& cfg) {
    if (std::abs(a.fs_hz - b.fs_hz) > 1e-9 * a.fs_hz || a.samples.size() != b.samples.size()) {
        throw std::invalid_argument("spectral: cross-spectrum needs simultaneous records");
    }
    check_config(cfg, a.fs_hz);
    const double samples = cfg.segment_seconds * a.fs_hz;
    const auto length = static_cast<std::size_t>(std::llround(samples));
    if (length < 4 || std::abs(samples - static_cast<double>(length)) > 1e-9 || length % 2 != 0) {
        throw std::invalid_argument(
            "spectral: segment must span an even whole number of samples (>= 4)");
    }
    const auto hop = static_cast<std::size_t>(
        std::llround(static_cast<double>(length) * (1.0 - cfg.overlap_fraction)));
    if (hop == 0) {
        throw std::invalid_argument("spectral: overlap leaves an empty hop");
    }
    if (a.samples.size() < length) {
        throw std::invalid_argument("spectral: record is shorter than one segment");
    }
    SegmentLayout layout;
    layout.length = length;
    layout.hop = hop;
    layout.count = (a.samples.size() - length) / hop + 1;

    const std::vector<double> window = hann_window(length);
    double sumw2 = 0.0;
    for (double w : window) sumw2 += w * w;
    const double scale = 1.0 / (a.fs_hz * sumw2);

    RealFft fft(length);
    const std::size_t half = length / 2;
    std::vector<std::complex<double>> spec_a(layout.count * half);
    for_each_segment(a, cfg, layout, fft, window,
                     [&](std::size_t s, const std::vector<std::complex<double>>& bins) {
                         std::copy(bins.begin() + 1, bins.begin() + 1 + half,
                                   spec_a.begin() + s * half);
                     });
    std::vector<std::complex<double>> sums(half, {0.0, 0.0});
    for_each_segment(b, cfg, layout, fft, window,
                     [&](std::size_t s, const std::vector<std::complex<double>>& bins) {
                         for (std::size_t k = 1; k <= half; ++k) {
                             const double doubling = (k < half) ? 2.0 : 1.0;
                             sums[k - 1] += doubling * scale *
                                            std::conj(spec_a[s * half + (k - 1)]) * bins[k];
                         }
                     });

    CrossSpectrum out;
    out.grid = FrequencyGrid::uniform_bins(cfg.bin_width_hz(), 1, half);
    out.values.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        out.values[k] = sums[k] / static_cast<double>(layout.count);
    }
    out.bin_width_hz = cfg.bin_width_hz();
    out.segment_count = static_cast<int>(layout.count);
    out.duration_s = a.duration_s();
    return out;
}

double statistical_uncertainty(double efficiency, double duration_s, double bin_width_hz) {
    if (!(efficiency > 0.0) || !(duration_s > 0.0) || !(bin_width_hz > 0.0)) {
        throw std::invalid_argument(
            "spectral: uncertainty needs positive efficiency, duration, and bin width");
    }
    return 1.0 / std::sqrt(efficiency * duration_s * bin_width_hz);
}

EfficiencyEstimate measure_efficiency(const EstimatorConfig& cfg, int trials,
                                      double duration_s, double fs_hz, std::uint64_t seed,
                                      double f_lo_hz, double f_hi_hz) {
    if (trials < 2) {
        throw std::invalid_argument("spectral: efficiency measurement needs >= 2 trials");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs_hz));
    std::vector<Spectrum> estimates;
    estimates.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        auto engine = make_engine(seed, static_cast<std::uint64_t>(t));
        std::normal_distribution<double> gauss(0.0, 1.0);
        TimeSeries ts;
        ts.fs_hz = fs_hz;
        ts.samples.resize(n);
        for (auto& x : ts.samples) {
            x = gauss(engine);
        }
        estimates.push_back(estimate_psd(ts, cfg));
    }
    const auto [b_lo, b_hi] = band_indices(estimates.front().grid, f_lo_hz, f_hi_hz);
    double rel_var_sum = 0.0;
    for (std::size_t k = b_lo; k <= b_hi; ++k) {
        double mean = 0.0;
        for (const auto& est : estimates) mean += est.values[k];
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (const auto& est : estimates) {
            const double d = est.values[k] - mean;
            var += d * d;
        }
        var /= static_cast<double>(trials - 1);
        rel_var_sum += var / (mean * mean);
    }
    EfficiencyEstimate out;
    out.relative_variance = rel_var_sum / static_cast<double>(b_hi - b_lo + 1);
    out.efficiency =
        1.0 / (out.relative_variance * duration_s * estimates.front().bin_width_hz);
    return out;
}

}  // namespace subsql
