#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsql/params.hpp"
#include "subsql/pipeline.hpp"
#include "subsql/spectral.hpp"
#include "subsql/spectrum.hpp"
#include "subsql/synth.hpp"
#include "subsql/timeseries.hpp"

namespace subsql {

inline constexpr const char* tool_version = "subsql 1.0.0";

// Everything a run needs from the parameter file: the interferometer operating
// point in internal units, the squeezer setting, and the optional classical /
// estimator sections (defaults when absent).
struct LoadedConfig {
    InterferometerParams interferometer;
    double squeeze_db = 0.0;
    double squeeze_angle_rad = 0.0;
    ClassicalNoiseConfig classical;
    EstimatorConfig estimator;
};

// Strict parameter-file loader: the ten physics keys are required, unknown
// top-level keys are rejected (typo protection), units are converted on load
// (bandwidth Hz -> rad/s, losses -> efficiencies, mrad -> rad, degrees ->
// radians). Throws file_error when the file cannot be opened and
// std::runtime_error flavors on malformed content.
LoadedConfig load_config(const std::string& path);
LoadedConfig parse_config(const std::string& json_text);

// The nominal operating point; the shipped data/default_config.json holds the
// same values for runs that want an explicit file.
LoadedConfig default_config();

// Spectrum CSV: header `f_hz,<value_header>,n_segments`, one row per bin,
// full round-trip precision. Dimensionless spectra (squeezing factors) pass
// their own value header.
void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const std::string& value_header = "psd_m2_hz");
Spectrum read_spectrum_csv(const std::string& path);

// Stationarity report as a CSV: the six pair deviations, the combined
// statistic with its expectation and 2-sigma bound, the pooled drift error,
// and the flag column.
void write_stationarity_csv(const std::string& path, const StationarityReport& report);

// General numeric CSV with named columns (first column is the frequency).
void write_table_csv(const std::string& path, const std::vector<std::string>& headers,
                     const std::vector<std::vector<double>>& columns);

// Time series on disk: raw little-endian float64 samples at `stem`.f64 plus a
// JSON sidecar `stem`.json holding {fs_hz, n_samples, label}.
void write_timeseries(const std::string& stem, const TimeSeries& ts);
// Accepts a stem, a .f64 path, or a two-column `t,value` CSV.
TimeSeries read_timeseries(const std::string& path);

// Reproducible run timestamp: honors SOURCE_DATE_EPOCH, otherwise a fixed
// epoch, so identical runs produce byte-identical manifests.
std::string manifest_timestamp();

struct RunManifest {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace subsql
