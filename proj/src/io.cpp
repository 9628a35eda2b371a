#include "subsql/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "subsql/constants.hpp"
#include "subsql/errors.hpp"

namespace subsql {

namespace {

using nlohmann::json;

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(what + ": " + e.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw file_error("cannot open file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), "malformed JSON in " + path);
}

double require_number(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) {
        throw std::runtime_error("missing key '" + key + "' in " + context);
    }
    if (!j.at(key).is_number()) {
        throw std::runtime_error("key '" + key + "' in " + context + " must be a number");
    }
    return j.at(key).get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& context) {
    for (const auto& item : j.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            throw std::runtime_error("unknown key '" + item.key() + "' in " + context);
        }
    }
}

// Full round-trip precision; %.17g keeps the shortest exact-enough form stable
// across runs, which the byte-identical determinism guarantee relies on.
std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string strip_suffix(const std::string& path, const std::string& suffix) {
    if (path.size() >= suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

bool has_suffix(const std::string& path, const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
}

TimeSeries read_timeseries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw file_error("cannot open file: " + path);
    }
    TimeSeries ts;
    std::vector<double> times;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            // Header row (any non-numeric start) is skipped.
            if (!line.empty() && !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '+' ||
                                   line[0] == '.')) {
                continue;
            }
        }
        const char* p = line.c_str();
        char* end = nullptr;
        const double t = std::strtod(p, &end);
        if (end == p || *end != ',') {
            throw std::runtime_error("malformed time-series CSV row in " + path + ": " + line);
        }
        p = end + 1;
        const double v = std::strtod(p, &end);
        if (end == p) {
            throw std::runtime_error("malformed time-series CSV row in " + path + ": " + line);
        }
        times.push_back(t);
        ts.samples.push_back(v);
    }
    if (times.size() < 2) {
        throw std::runtime_error("time-series CSV needs at least two rows: " + path);
    }
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) {
        throw std::runtime_error("time column must increase: " + path);
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * dt) {
            throw std::runtime_error("time column must be uniformly sampled: " + path);
        }
    }
    ts.fs_hz = 1.0 / dt;
    return ts;
}

}  // namespace

LoadedConfig parse_config(const std::string& json_text) {
    const json j = parse_json_text(json_text, "malformed config JSON");
    const std::set<std::string> physics_keys{
        "arm_power_W",  "mirror_mass_kg", "arm_length_m",      "bandwidth_hz",
        "wavelength_m", "input_loss",     "output_loss",       "src_detuning_mrad",
        "squeeze_db",   "squeeze_angle_deg"};
    std::set<std::string> allowed = physics_keys;
    allowed.insert("classical");
    allowed.insert("estimator");
    reject_unknown(j, allowed, "config");

    LoadedConfig cfg;
    InterferometerParams& p = cfg.interferometer;
    p.arm_power_w = require_number(j, "arm_power_W", "config");
    p.mirror_mass_kg = require_number(j, "mirror_mass_kg", "config");
    p.arm_length_m = require_number(j, "arm_length_m", "config");
    p.bandwidth_rad_s = 2.0 * constants::pi * require_number(j, "bandwidth_hz", "config");
    p.wavelength_m = require_number(j, "wavelength_m", "config");
    p.input_efficiency = 1.0 - require_number(j, "input_loss", "config");
    p.output_efficiency = 1.0 - require_number(j, "output_loss", "config");
    p.src_detuning_rad = 1e-3 * require_number(j, "src_detuning_mrad", "config");
    cfg.squeeze_db = require_number(j, "squeeze_db", "config");
    cfg.squeeze_angle_rad =
        require_number(j, "squeeze_angle_deg", "config") * constants::pi / 180.0;
    try {
        p.validate();
        SqueezerParams::from_db(cfg.squeeze_db, cfg.squeeze_angle_rad).validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("config out of domain: ") + e.what());
    }

    if (j.contains("classical")) {
        const json& c = j.at("classical");
        const std::set<std::string> keys{"amplitude_m2_hz",      "ref_freq_hz",
                                         "power_law",            "floor_m2_hz",
                                         "bump_amplitude_m2_hz", "bump_freq_hz",
                                         "bump_width_hz"};
        reject_unknown(c, keys, "config.classical");
        ClassicalNoiseConfig& cl = cfg.classical;
        if (c.contains("amplitude_m2_hz")) cl.amplitude_m2_hz = c["amplitude_m2_hz"];
        if (c.contains("ref_freq_hz")) cl.ref_freq_hz = c["ref_freq_hz"];
        if (c.contains("power_law")) cl.power_law = c["power_law"];
        if (c.contains("floor_m2_hz")) cl.floor_m2_hz = c["floor_m2_hz"];
        if (c.contains("bump_amplitude_m2_hz"))
            cl.bump_amplitude_m2_hz = c["bump_amplitude_m2_hz"];
        if (c.contains("bump_freq_hz")) cl.bump_freq_hz = c["bump_freq_hz"];
        if (c.contains("bump_width_hz")) cl.bump_width_hz = c["bump_width_hz"];
        try {
            cl.validate();
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("config.classical out of domain: ") + e.what());
        }
    }

    if (j.contains("estimator")) {
        const json& e = j.at("estimator");
        const std::set<std::string> keys{"segment_seconds", "overlap_fraction", "statistic",
                                         "detrend"};
        reject_unknown(e, keys, "config.estimator");
        EstimatorConfig& est = cfg.estimator;
        if (e.contains("segment_seconds")) est.segment_seconds = e["segment_seconds"];
        if (e.contains("overlap_fraction")) est.overlap_fraction = e["overlap_fraction"];
        if (e.contains("detrend")) est.detrend = e["detrend"];
        if (e.contains("statistic")) {
            const std::string stat = e["statistic"];
            if (stat == "median") {
                est.statistic = AverageStatistic::median;
            } else if (stat == "mean") {
                est.statistic = AverageStatistic::mean;
            } else {
                throw std::runtime_error("config.estimator.statistic must be median or mean");
            }
        }
    }
    return cfg;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw file_error("cannot open config file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

LoadedConfig default_config() {
    LoadedConfig cfg;
    cfg.squeeze_db = 9.8;
    cfg.squeeze_angle_rad = 35.0 * constants::pi / 180.0;
    return cfg;
}

void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const std::string& value_header) {
    s.validate();
    std::ofstream out(path);
    if (!out) {
        throw file_error("cannot write file: " + path);
    }
    out << "f_hz," << value_header << ",n_segments\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << format_double(s.grid[k]) << ',' << format_double(s.values[k]) << ','
            << s.segment_count << '\n';
    }
}

Spectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw file_error("cannot open file: " + path);
    }
    std::string header;
    if (!std::getline(in, header) || header.rfind("f_hz,", 0) != 0) {
        throw std::runtime_error("not a spectrum CSV (missing f_hz header): " + path);
    }
    std::vector<double> f;
    std::vector<double> v;
    int segments = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        const double fv = std::strtod(p, &end);
        if (end == p || *end != ',') {
            throw std::runtime_error("malformed spectrum CSV row in " + path + ": " + line);
        }
        p = end + 1;
        const double vv = std::strtod(p, &end);
        if (end == p) {
            throw std::runtime_error("malformed spectrum CSV row in " + path + ": " + line);
        }
        if (*end == ',') {
            segments = static_cast<int>(std::strtol(end + 1, nullptr, 10));
        }
        f.push_back(fv);
        v.push_back(vv);
    }
    if (f.empty()) {
        throw std::runtime_error("spectrum CSV has no data rows: " + path);
    }
    Spectrum s;
    s.grid = FrequencyGrid(std::move(f));
    s.values = std::move(v);
    s.segment_count = segments;
    if (s.grid.size() >= 2) {
        s.bin_width_hz = s.grid[1] - s.grid[0];
    }
    s.label = path;
    return s;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& headers,
                     const std::vector<std::vector<double>>& columns) {
    if (headers.size() != columns.size() || columns.empty()) {
        throw std::invalid_argument("table CSV needs one header per column");
    }
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) {
            throw std::invalid_argument("table CSV columns must have equal length");
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw file_error("cannot write file: " + path);
    }
    for (std::size_t c = 0; c < headers.size(); ++c) {
        out << headers[c] << (c + 1 < headers.size() ? ',' : '\n');
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << format_double(columns[c][r]) << (c + 1 < columns.size() ? ',' : '\n');
        }
    }
}

void write_timeseries(const std::string& stem, const TimeSeries& ts) {
    std::ofstream raw(stem + ".f64", std::ios::binary);
    if (!raw) {
        throw file_error("cannot write file: " + stem + ".f64");
    }
    // Raw host-order float64; the toolchain targets little-endian platforms.
    raw.write(reinterpret_cast<const char*>(ts.samples.data()),
              static_cast<std::streamsize>(ts.samples.size() * sizeof(double)));

    json sidecar;
    sidecar["fs_hz"] = ts.fs_hz;
    sidecar["n_samples"] = ts.samples.size();
    sidecar["label"] = ts.label;
    std::ofstream meta(stem + ".json");
    if (!meta) {
        throw file_error("cannot write file: " + stem + ".json");
    }
    meta << sidecar.dump(2) << '\n';
}

TimeSeries read_timeseries(const std::string& path) {
    if (has_suffix(path, ".csv")) {
        return read_timeseries_csv(path);
    }
    const std::string stem = strip_suffix(strip_suffix(path, ".f64"), ".json");
    const json sidecar = load_json_file(stem + ".json");
    TimeSeries ts;
    ts.fs_hz = require_number(sidecar, "fs_hz", stem + ".json");
    const auto n = static_cast<std::size_t>(require_number(sidecar, "n_samples", stem + ".json"));
    if (sidecar.contains("label")) {
        ts.label = sidecar["label"];
    }
    std::ifstream raw(stem + ".f64", std::ios::binary);
    if (!raw) {
        throw file_error("cannot open file: " + stem + ".f64");
    }
    ts.samples.resize(n);
    raw.read(reinterpret_cast<char*>(ts.samples.data()),
             static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<std::size_t>(raw.gcount()) != n * sizeof(double)) {
        throw std::runtime_error("time-series file shorter than its sidecar claims: " + stem +
                                 ".f64");
    }
    return ts;
}

void write_stationarity_csv(const std::string& path, const StationarityReport& report) {
    std::vector<std::string> headers{"f_hz"};
    std::vector<std::vector<double>> cols{report.combined.grid.hz()};
    for (std::size_t k = 0; k < report.pair_ids.size(); ++k) {
        headers.push_back("pair_" + std::to_string(report.pair_ids[k].first) + "_" +
                          std::to_string(report.pair_ids[k].second));
        cols.push_back(report.pair_deviation[k].values);
    }
    const std::size_t n = report.combined.size();
    headers.insert(headers.end(),
                   {"combined_n2", "expected_n2", "bound_2sigma_n2", "drift_rel", "flagged"});
    cols.push_back(report.combined.values);
    cols.push_back(std::vector<double>(n, report.expected_combined));
    cols.push_back(std::vector<double>(n, report.combined_2sigma_bound));
    cols.push_back(report.drift_error.values);
    std::vector<double> flagged(n, 0.0);
    for (const std::size_t i : report.flagged_bins) flagged[i] = 1.0;
    cols.push_back(std::move(flagged));
    write_table_csv(path, headers, cols);
}

std::string manifest_timestamp() {
    std::time_t epoch = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) {
            epoch = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&epoch, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["config"] = m.config_path;
    j["seed"] = m.seed;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["tool_version"] = tool_version;
    j["timestamp"] = manifest_timestamp();
    std::ofstream out(path);
    if (!out) {
        throw file_error("cannot write file: " + path);
    }
    out << j.dump(2) << '\n';
}

}  // namespace subsql
