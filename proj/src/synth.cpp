#include "subsql/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "subsql/constants.hpp"
#include "subsql/fft.hpp"
#include "subsql/qnoise.hpp"
#include "subsql/rng.hpp"

namespace subsql {

namespace {

// Linear interpolation on the target grid, clamped to the edge values outside
// it. Clamping (rather than extrapolating a red power law to DC) keeps the
// synthetic record's sub-band power bounded, so window leakage cannot
// contaminate the analysis band.
class PsdInterpolator {
  public:
    explicit PsdInterpolator(const Spectrum& target) : target_(target) {
        target.validate();
        if (target.size() == 0) {
            throw std::invalid_argument("synth: target spectrum is empty");
        }
        for (double v : target.values) {
            if (v < 0.0) {
                throw std::domain_error("synth: target PSD must be non-negative");
            }
        }
    }

    double operator()(double f_hz) const {
        const auto& f = target_.grid.hz();
        const auto& v = target_.values;
        if (f_hz <= f.front()) return v.front();
        if (f_hz >= f.back()) return v.back();
        const auto it = std::upper_bound(f.begin(), f.end(), f_hz);
        const std::size_t hi = static_cast<std::size_t>(it - f.begin());
        const std::size_t lo = hi - 1;
        const double t = (f_hz - f[lo]) / (f[hi] - f[lo]);
        return v[lo] + t * (v[hi] - v[lo]);
    }

  private:
    const Spectrum& target_;
};

std::size_t sample_count(double duration_s, double fs_hz) {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw std::invalid_argument("synth: duration must be positive");
    }
    if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) {
        throw std::invalid_argument("synth: sampling rate must be positive");
    }
    const double samples = duration_s * fs_hz;
    const auto n = static_cast<std::size_t>(std::llround(samples));
    if (n < 4 || std::abs(samples - static_cast<double>(n)) > 1e-9 || n % 2 != 0) {
        throw std::invalid_argument(
            "synth: duration must span an even whole number of samples (>= 4)");
    }
    return n;
}

}  // namespace

double ClassicalNoiseConfig::evaluate(double f_hz) const {
    if (!(f_hz > 0.0) || !std::isfinite(f_hz)) {
        throw std::domain_error("classical noise model needs a positive frequency");
    }
    double s = amplitude_m2_hz * std::pow(ref_freq_hz / f_hz, power_law) + floor_m2_hz;
    if (bump_amplitude_m2_hz > 0.0) {
        const double d = (f_hz - bump_freq_hz) / bump_width_hz;
        s += bump_amplitude_m2_hz * std::exp(-0.5 * d * d);
    }
    return s;
}

Spectrum ClassicalNoiseConfig::evaluate(const FrequencyGrid& grid) const {
    Spectrum out;
    out.grid = grid;
    out.values.reserve(grid.size());
    for (double f : grid.hz()) {
        out.values.push_back(evaluate(f));
    }
    out.label = "classical";
    return out;
}

void ClassicalNoiseConfig::validate() const {
    if (!(amplitude_m2_hz >= 0.0) || !(floor_m2_hz >= 0.0) || !(bump_amplitude_m2_hz >= 0.0)) {
        throw std::invalid_argument("classical noise model needs non-negative levels");
    }
    if (!(ref_freq_hz > 0.0)) {
        throw std::invalid_argument("classical noise model needs a positive reference frequency");
    }
    if (!(std::isfinite(power_law)) || std::abs(power_law) > 8.0) {
        throw std::invalid_argument("classical noise power law out of range");
    }
    if (bump_amplitude_m2_hz > 0.0 && !(bump_width_hz > 0.0 && bump_freq_hz > 0.0)) {
        throw std::invalid_argument("classical noise bump needs positive frequency and width");
    }
}

TimeSeries colorize(const Spectrum& target, double duration_s, double fs_hz,
                    std::uint64_t seed) {
    const std::size_t n = sample_count(duration_s, fs_hz);
    const PsdInterpolator psd(target);

    auto engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::size_t half = n / 2;
    std::vector<std::complex<double>> bins(half + 1);
    bins[0] = 0.0;  // detrended analysis never uses the DC term
    const double df = fs_hz / static_cast<double>(n);
    for (std::size_t k = 1; k < half; ++k) {
        // One-sided density S at f_k -> E|X_k|^2 = n * fs * S / 2 for the
        // unnormalized transform, split evenly over the two quadratures.
        const double sigma = std::sqrt(static_cast<double>(n) * fs_hz *
                                       psd(df * static_cast<double>(k)) / 4.0);
        bins[k] = {sigma * gauss(engine), sigma * gauss(engine)};
    }
    const double sigma_nyq =
        std::sqrt(static_cast<double>(n) * fs_hz * psd(fs_hz / 2.0) / 2.0);
    bins[half] = {sigma_nyq * gauss(engine), 0.0};

    RealFft fft(n);
    TimeSeries ts;
    ts.fs_hz = fs_hz;
    ts.samples.resize(n);
    fft.inverse(bins, ts.samples);
    const double norm = 1.0 / static_cast<double>(n);
    for (auto& x : ts.samples) {
        x *= norm;
    }
    return ts;
}

void GlitchConfig::validate(double fs_hz) const {
    if (!(rate_hz >= 0.0)) {
        throw std::invalid_argument("glitch rate must be non-negative");
    }
    if (!(amplitude_scale >= 0.0)) {
        throw std::invalid_argument("glitch amplitude scale must be non-negative");
    }
    if (!(center_freq_hz > 0.0) || center_freq_hz >= fs_hz / 2.0) {
        throw std::invalid_argument("glitch center frequency must lie below Nyquist");
    }
    if (!(q_factor > 0.5)) {
        throw std::invalid_argument("glitch quality factor must exceed 0.5");
    }
}

GlitchInjection inject_glitches(const TimeSeries& clean, const GlitchConfig& cfg,
                                std::uint64_t seed) {
    cfg.validate(clean.fs_hz);
    const double duration = clean.duration_s();

    double rms = 0.0;
    for (double x : clean.samples) rms += x * x;
    rms = std::sqrt(rms / static_cast<double>(clean.samples.size()));

    auto engine = make_engine(seed);
    std::poisson_distribution<int> pois(cfg.rate_hz * duration);
    std::uniform_real_distribution<double> uni(0.0, duration);

    GlitchInjection out;
    out.series = clean;
    out.count = pois(engine);
    const double tau = cfg.q_factor / (std::sqrt(2.0) * constants::pi * cfg.center_freq_hz);
    const double amp = cfg.amplitude_scale * rms;
    for (int g = 0; g < out.count; ++g) {
        const double t0 = uni(engine);
        // Truncate the Gaussian envelope at six sigma; the residual tail is
        // below 2e-8 of the peak.
        const auto j_lo = static_cast<std::size_t>(
            std::max(0.0, std::floor((t0 - 6.0 * tau) * clean.fs_hz)));
        const auto j_hi = static_cast<std::size_t>(std::min(
            static_cast<double>(clean.samples.size()),
            std::ceil((t0 + 6.0 * tau) * clean.fs_hz)));
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const double t = static_cast<double>(j) / clean.fs_hz - t0;
            out.series.samples[j] += amp * std::exp(-t * t / (2.0 * tau * tau)) *
                                     std::sin(2.0 * constants::pi * cfg.center_freq_hz * t);
        }
    }
    return out;
}

void DualReadoutConfig::validate() const {
    if (!(gain > 0.0) || !std::isfinite(gain)) {
        throw std::invalid_argument("dual readout gain must be positive");
    }
    if (!(dark_noise_fraction >= 0.0 && dark_noise_fraction < 1.0)) {
        throw std::invalid_argument("dual readout dark fraction must lie in [0, 1)");
    }
}

DualReadout simulate_dual_readout(const TimeSeries& common_displacement,
                                  const Spectrum& sensing_psd,
                                  const DualReadoutConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const double duration = common_displacement.duration_s();
    const double fs = common_displacement.fs_hz;

    // Per-chain sensing noise carries twice the single-readout PSD so the
    // half-sum of the two chains recovers it.
    Spectrum per_chain = sensing_psd;
    for (auto& v : per_chain.values) {
        v *= 2.0;
    }
    Spectrum dark = per_chain;
    for (auto& v : dark.values) {
        v *= cfg.dark_noise_fraction;
    }

    DualReadout out;
    TimeSeries* chains[2] = {&out.a, &out.b};
    for (int c = 0; c < 2; ++c) {
        const auto chain_idx = static_cast<std::uint64_t>(c);
        TimeSeries shot = colorize(per_chain, duration, fs, derive_seed(seed, chain_idx, 0));
        TimeSeries dk;
        if (cfg.dark_noise_fraction > 0.0) {
            dk = colorize(dark, duration, fs, derive_seed(seed, chain_idx, 1));
        }
        TimeSeries& pd = *chains[c];
        pd.fs_hz = fs;
        pd.samples.resize(common_displacement.samples.size());
        for (std::size_t j = 0; j < pd.samples.size(); ++j) {
            const double dark_x = cfg.dark_noise_fraction > 0.0 ? dk.samples[j] : 0.0;
            pd.samples[j] =
                cfg.gain * (common_displacement.samples[j] + shot.samples[j] + dark_x);
        }
    }
    out.a.label = "pd_a";
    out.b.label = "pd_b";
    return out;
}

double SegmentPlan::total_duration_s() const {
    double total = 0.0;
    for (const auto& e : entries) {
        total += e.duration_s;
    }
    return total;
}

SegmentPlan SegmentPlan::desk_default() {
    SegmentPlan plan;
    const double working_angle = 35.0 * constants::pi / 180.0;
    for (int pair = 0; pair < 3; ++pair) {
        plan.entries.push_back({PlanEntry::Mode::reference, 0.0, 120.0, 1.0});
        plan.entries.push_back({PlanEntry::Mode::squeezed, working_angle, 120.0, 1.0});
    }
    const double sweep_deg[] = {-50.0, -35.0, -20.0, -5.0, 7.0, 24.0, 46.0, 65.0, 80.0};
    for (double deg : sweep_deg) {
        plan.entries.push_back(
            {PlanEntry::Mode::squeezed, deg * constants::pi / 180.0, 40.0, 1.0});
    }
    plan.entries.push_back({PlanEntry::Mode::reference, 0.0, 120.0, 1.0});
    return plan;
}

ExperimentData run_experiment(const InterferometerParams& params, double squeeze_db,
                              const ClassicalNoiseConfig& classical,
                              const SegmentPlan& plan, double fs_hz, std::uint64_t seed) {
    params.validate();
    classical.validate();
    if (plan.entries.empty()) {
        throw std::invalid_argument("synth: observing plan is empty");
    }

    // Model evaluation grid for synthesis: fine enough that linear
    // interpolation error is negligible, starting low enough that the clamp
    // below the first point cannot bias the analysis band.
    const double df_model = 0.25;
    const auto k_hi = static_cast<std::size_t>(std::floor(fs_hz / 2.0 / df_model));
    const FrequencyGrid model_grid = FrequencyGrid::uniform_bins(
        df_model, static_cast<std::size_t>(std::llround(5.0 / df_model)), k_hi);
    const Spectrum classical_base = classical.evaluate(model_grid);

    ExperimentData data;
    data.fs_hz = fs_hz;
    data.records.reserve(plan.entries.size());
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const PlanEntry& entry = plan.entries[i];
        SqueezerParams sqz;
        if (entry.mode == PlanEntry::Mode::squeezed) {
            sqz = SqueezerParams::from_db(squeeze_db, entry.angle_rad);
        } else {
            sqz = SqueezerParams{0.0, 0.0};
        }
        Spectrum target = lossy_displacement_psd(params, sqz, model_grid);
        for (std::size_t k = 0; k < target.values.size(); ++k) {
            target.values[k] += entry.classical_scale * classical_base.values[k];
        }
        SynthRecord rec;
        rec.entry = entry;
        rec.series = colorize(target, entry.duration_s, fs_hz,
                              derive_seed(seed, static_cast<std::uint64_t>(i)));
        rec.series.label = entry.mode == PlanEntry::Mode::squeezed ? "squeezed" : "reference";
        data.records.push_back(std::move(rec));
    }
    return data;
}

}  // namespace subsql
