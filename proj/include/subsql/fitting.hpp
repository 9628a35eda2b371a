#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "subsql/grid.hpp"
#include "subsql/params.hpp"

namespace subsql {

// Observed squeezing factors at several nominal readout angles, with inverse
// variance weights per point.
struct FitDataset {
    FrequencyGrid grid;
    std::vector<double> angles_rad;
    std::vector<std::vector<double>> s_obs;    // [angle][bin]
    std::vector<std::vector<double>> weights;  // [angle][bin], 1/sigma^2

    void validate() const;  // throws std::invalid_argument on shape mismatch
};

// Free parameters of the squeezing model. Everything else (power, mass,
// bandwidth, output efficiency) is carried by InterferometerParams.
struct FitParams {
    double r = 0.0;          // squeeze parameter
    double psi_rad = 0.0;    // full high-frequency rotation from cavity detuning
    double dphi_rad = 0.0;   // common offset of the nominal readout angles
    double eta_input = 1.0;  // injection efficiency
};

// Box bounds; setting lo == hi freezes that parameter at the shared value.
struct FitBounds {
    double r_lo = 0.0;
    double r_hi = 3.0;
    double psi_lo = -0.5;
    double psi_hi = 0.5;
    double dphi_lo = -0.1745;  // ten degrees
    double dphi_hi = 0.1745;
    double eta_lo = 0.55;
    double eta_hi = 1.0;
};

struct FitResult {
    FitParams params;
    // Covariance of (r, psi, dphi, eta); zero rows/columns for frozen params.
    std::array<std::array<double, 4>, 4> covariance{};
    double chi2 = 0.0;
    std::size_t dof = 0;
    double chi2_per_dof = 0.0;
    std::vector<std::vector<double>> residuals;  // (obs - model) * sqrt(weight)
    std::size_t evaluations = 0;
};

// Model prediction S*(f) at one readout angle for a parameter vector.
std::vector<double> predict_squeezing(const InterferometerParams& interferometer,
                                      const FitParams& fit, const FrequencyGrid& grid,
                                      double angle_rad);

// Weighted least squares over the dataset: a coarse parameter grid seeds a
// Nelder-Mead refinement inside the box bounds. Throws unidentifiable_error
// when fewer than two distinct readout angles are present; the angle sweep is
// what separates the squeeze level from the efficiency.
FitResult fit_squeezing_model(const InterferometerParams& interferometer,
                              const FitDataset& data, const FitBounds& bounds = {});

}  // namespace subsql
