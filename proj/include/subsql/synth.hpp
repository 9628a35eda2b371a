#pragma once

#include <cstdint>
#include <vector>

#include "subsql/params.hpp"
#include "subsql/spectrum.hpp"
#include "subsql/timeseries.hpp"

namespace subsql {

// Smooth parametric model of the classical (force + sensing) noise background:
// a power law pinned at a reference frequency, plus a flat floor, plus an
// optional Gaussian bump. Defaults put the classical background near seven
// times the squeezed quantum level at the quantum-noise dip, matching the
// regime the subtraction pipeline is designed for.
struct ClassicalNoiseConfig {
    double amplitude_m2_hz = 1.1e-39;  // level of the power-law term at ref_freq_hz
    double ref_freq_hz = 38.8;
    double power_law = 2.0;  // S ~ (ref_freq / f)^power_law
    double floor_m2_hz = 1e-42;
    double bump_amplitude_m2_hz = 0.0;
    double bump_freq_hz = 120.0;
    double bump_width_hz = 5.0;

    double evaluate(double f_hz) const;
    Spectrum evaluate(const FrequencyGrid& grid) const;
    void validate() const;
};

// Draws a Gaussian time series whose one-sided PSD matches `target`
// (linearly interpolated on its grid; clamped to the edge values outside it,
// so a target starting at a few hertz keeps the synthetic record free of
// divergent sub-band power). Deterministic for a fixed seed.
TimeSeries colorize(const Spectrum& target, double duration_s, double fs_hz,
                    std::uint64_t seed);

// Sine-Gaussian burst population: count ~ Poisson(rate * duration), arrival
// times uniform, each burst amplitude_scale times the clean-record RMS at
// center_freq_hz with quality factor q (envelope sigma = q / (sqrt(2) pi f0)).
struct GlitchConfig {
    double rate_hz = 0.05;
    double amplitude_scale = 10.0;
    double center_freq_hz = 60.0;
    double q_factor = 8.0;

    void validate(double fs_hz) const;
};

struct GlitchInjection {
    TimeSeries series;
    int count = 0;
};

GlitchInjection inject_glitches(const TimeSeries& clean, const GlitchConfig& cfg,
                                std::uint64_t seed);

// Split-readout model: both photodiode chains see the same gain-scaled
// displacement, plus independent sensing noise at twice the target
// single-readout PSD (so the half-sum recombination recovers it), plus
// independent dark noise at a fixed fraction of the per-chain sensing noise.
struct DualReadoutConfig {
    double gain = 1.0;                 // readout units per meter
    double dark_noise_fraction = 0.01; // per-chain dark PSD / per-chain sensing PSD

    void validate() const;
};

struct DualReadout {
    TimeSeries a;
    TimeSeries b;
};

DualReadout simulate_dual_readout(const TimeSeries& common_displacement,
                                  const Spectrum& sensing_psd,
                                  const DualReadoutConfig& cfg, std::uint64_t seed);

// One contiguous stretch of synthetic observation: either a reference stretch
// (no injected squeezing, angle ignored) or a squeezed stretch at a fixed
// injection angle. classical_scale lets drift scenarios rescale the classical
// background for that stretch only.
struct PlanEntry {
    enum class Mode { reference, squeezed };
    Mode mode = Mode::reference;
    double angle_rad = 0.0;
    double duration_s = 120.0;
    double classical_scale = 1.0;
};

struct SegmentPlan {
    std::vector<PlanEntry> entries;

    double total_duration_s() const;
    // Desk-scale observing plan: three interleaved reference/squeezed pairs at
    // the working angle, a nine-angle sweep for the model fit, and a closing
    // reference stretch.
    static SegmentPlan desk_default();
};

struct SynthRecord {
    PlanEntry entry;
    TimeSeries series;
};

struct ExperimentData {
    double fs_hz = 0.0;
    std::vector<SynthRecord> records;
};

// Synthesizes every stretch of the plan from the physical model: quantum
// displacement PSD for the stretch's mode and angle, plus the (possibly
// rescaled) classical background. Each stretch draws from an independent
// seed stream derived from the master seed.
ExperimentData run_experiment(const InterferometerParams& params, double squeeze_db,
                              const ClassicalNoiseConfig& classical,
                              const SegmentPlan& plan, double fs_hz, std::uint64_t seed);

}  // namespace subsql
