#pragma once

#include <string>
#include <vector>

namespace subsql {

struct TimeSeries {
    double fs_hz = 0.0;
    std::vector<double> samples;
    std::string label;

    double duration_s() const {
        return fs_hz > 0 ? static_cast<double>(samples.size()) / fs_hz : 0.0;
    }
    std::size_t size() const { return samples.size(); }
};

}  // namespace subsql
