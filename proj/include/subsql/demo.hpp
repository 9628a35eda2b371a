#pragma once

#include <cstdint>
#include <string>

#include "subsql/io.hpp"

namespace subsql {

// End-to-end synthetic run: synthesize interleaved reference/squeezed periods,
// estimate their spectra, subtract the classical background, and score the
// inferred quantum noise against the model.
struct DemoOptions {
    std::uint64_t seed = 7;
    double fs_hz = 1024.0;
    double period_seconds = 2400.0;  // per stretch; three of each kind
    int periods = 3;
    double f_lo_hz = 20.0;  // analysis band
    double f_hi_hz = 100.0;
    double dip_halfwidth_hz = 5.0;  // averaging half-width for the dip ratio

    // Configured systematic 1-sigma relative errors entering the budget.
    double gain_rel = 0.01;
    double model_rel = 0.01;
    double classical_rel = 0.02;
    double monitor_rel = 0.005;

    // Efficiency of the median spectral estimator relative to ideal averaging
    // (measured by the estimator test bench; enters the statistical errors).
    double estimator_efficiency = 0.93;

    std::string out_dir;        // empty: compute only, write nothing
    std::string config_label;   // recorded in the manifest
};

struct DemoChecks {
    bool dip_in_window = false;    // model dip frequency inside [35, 45] Hz
    bool ratio_in_window = false;  // measured dip amplitude ratio inside [0.60, 0.75]
    bool coverage_ok = false;      // >= 95% of band bins inside the 2-sigma budget
    bool pass = false;
};

struct DemoSummary {
    double model_dip_hz = 0.0;          // root of theta*(f) = readout angle
    double model_min_ratio = 0.0;       // min over f of sqrt(model quantum / SQL)
    double model_dip_band_ratio = 0.0;  // same score as below, from the model
    double measured_dip_ratio = 0.0;    // sqrt of band-averaged pointwise Q/SQL at the dip
    double measured_dip_ratio_rel_unc = 0.0;  // 1-sigma relative, from the budget
    double amplification_at_dip = 0.0;        // V = (D_ref - M_ref)/Q, expected
    double coverage = 0.0;  // fraction of band bins with |Q - model| <= 2 sigma
    DemoChecks checks;
};

// Runs the full chain. When opts.out_dir is non-empty, writes the pooled and
// inferred spectra, the uncertainty budget, the stationarity report, a summary
// JSON, and a run manifest into that directory.
DemoSummary run_demo(const LoadedConfig& cfg, const DemoOptions& opts);

}  // namespace subsql
