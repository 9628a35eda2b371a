#include "subsql/fitting.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "subsql/constants.hpp"
#include "subsql/errors.hpp"
#include "subsql/qnoise.hpp"
#include "subsql/rng.hpp"

using namespace subsql;

namespace {

std::vector<double> sweep_angles() {
    std::vector<double> deg{-50.0, -35.0, -20.0, -5.0, 7.0, 24.0, 35.0, 46.0, 65.0, 80.0};
    std::vector<double> rad;
    for (double d : deg) rad.push_back(d * constants::pi / 180.0);
    return rad;
}

FitDataset make_dataset(const InterferometerParams& params, const FitParams& truth,
                        double sigma, std::uint64_t seed) {
    FitDataset data;
    data.grid = FrequencyGrid::uniform_bins(0.5, 40, 400);  // 20 .. 200 Hz
    data.angles_rad = sweep_angles();
    auto engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double angle : data.angles_rad) {
        std::vector<double> row = predict_squeezing(params, truth, data.grid, angle);
        std::vector<double> w(row.size(), sigma > 0.0 ? 1.0 / (sigma * sigma) : 1.0);
        if (sigma > 0.0) {
            for (auto& v : row) v += sigma * gauss(engine);
        }
        data.s_obs.push_back(std::move(row));
        data.weights.push_back(std::move(w));
    }
    return data;
}

const FitParams truth{SqueezerParams::r_from_db(9.8), 0.1605, 0.5 * constants::pi / 180.0,
                      0.828};

}  // namespace

TEST_CASE("fit model prediction agrees with the physics spectrum") {
    InterferometerParams params;
    const FrequencyGrid grid = FrequencyGrid::uniform_bins(0.5, 20, 400);
    const double angle = 35.0 * constants::pi / 180.0;
    const SqueezerParams sq{1.05, angle};
    const FitParams fp{1.05, params.src_rotation_rad(), 0.0, params.input_efficiency};
    const std::vector<double> predicted = predict_squeezing(params, fp, grid, angle);
    const Spectrum s_star = lossy_squeezing_spectrum(params, sq, grid);
    REQUIRE(predicted.size() == s_star.size());
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        CHECK(predicted[k] == doctest::Approx(s_star.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("noiseless data is recovered essentially exactly") {
    InterferometerParams params;
    const FitDataset data = make_dataset(params, truth, 0.0, 0);
    const FitResult fit = fit_squeezing_model(params, data);
    CHECK(fit.chi2 < 1e-10);
    CHECK(fit.params.r == doctest::Approx(truth.r).epsilon(1e-3));
    CHECK(fit.params.psi_rad == doctest::Approx(truth.psi_rad).epsilon(5e-3));
    CHECK(std::abs(fit.params.dphi_rad - truth.dphi_rad) < 2e-4);
    CHECK(fit.params.eta_input == doctest::Approx(truth.eta_input).epsilon(1e-3));
    CHECK(fit.dof == data.angles_rad.size() * data.grid.size() - 4);
    CHECK(fit.evaluations > 1000);
}

TEST_CASE("noisy data is recovered within the advertised tolerances") {
    InterferometerParams params;
    const double sigma = 0.02;
    const FitDataset data = make_dataset(params, truth, sigma, 0xF17D47AULL);
    const FitResult fit = fit_squeezing_model(params, data);

    CHECK(std::abs(fit.params.r - truth.r) < 0.05);
    CHECK(std::abs(fit.params.psi_rad - truth.psi_rad) < 1.0 * constants::pi / 180.0);
    CHECK(std::abs(fit.params.dphi_rad - truth.dphi_rad) < 1.0 * constants::pi / 180.0);
    CHECK(std::abs(fit.params.eta_input - truth.eta_input) < 0.02);
    CHECK(fit.chi2_per_dof > 0.8);
    CHECK(fit.chi2_per_dof < 1.2);

    // Covariance diagonal is positive and consistent with the actual errors.
    for (int i = 0; i < 4; ++i) {
        CHECK(fit.covariance[i][i] > 0.0);
    }
    CHECK(std::abs(fit.params.r - truth.r) < 4.0 * std::sqrt(fit.covariance[0][0]));
    CHECK(std::abs(fit.params.psi_rad - truth.psi_rad) <
          4.0 * std::sqrt(fit.covariance[1][1]));
    CHECK(std::abs(fit.params.dphi_rad - truth.dphi_rad) <
          4.0 * std::sqrt(fit.covariance[2][2]));
    CHECK(std::abs(fit.params.eta_input - truth.eta_input) <
          4.0 * std::sqrt(fit.covariance[3][3]));
}

TEST_CASE("scaling all weights by a positive constant keeps the argmin") {
    InterferometerParams params;
    const FitDataset data = make_dataset(params, truth, 0.02, 0xF17D47AULL);
    FitDataset scaled = data;
    for (auto& row : scaled.weights) {
        for (auto& w : row) w *= 5.0;
    }
    const FitResult a = fit_squeezing_model(params, data);
    const FitResult b = fit_squeezing_model(params, scaled);
    CHECK(b.params.r == doctest::Approx(a.params.r).epsilon(1e-10));
    CHECK(b.params.psi_rad == doctest::Approx(a.params.psi_rad).epsilon(1e-10));
    CHECK(std::abs(b.params.dphi_rad - a.params.dphi_rad) < 1e-12);
    CHECK(b.params.eta_input == doctest::Approx(a.params.eta_input).epsilon(1e-10));
    CHECK(b.chi2 == doctest::Approx(5.0 * a.chi2).epsilon(1e-10));
    CHECK(b.covariance[0][0] == doctest::Approx(a.covariance[0][0] / 5.0).epsilon(1e-6));
}

TEST_CASE("a single readout angle is unidentifiable") {
    InterferometerParams params;
    FitDataset data = make_dataset(params, truth, 0.01, 1);
    FitDataset one_angle;
    one_angle.grid = data.grid;
    one_angle.angles_rad = {data.angles_rad[0]};
    one_angle.s_obs = {data.s_obs[0]};
    one_angle.weights = {data.weights[0]};
    CHECK_THROWS_AS(fit_squeezing_model(params, one_angle), unidentifiable_error);

    FitDataset repeated = one_angle;
    repeated.angles_rad.push_back(one_angle.angles_rad[0]);
    repeated.s_obs.push_back(one_angle.s_obs[0]);
    repeated.weights.push_back(one_angle.weights[0]);
    CHECK_THROWS_AS(fit_squeezing_model(params, repeated), unidentifiable_error);

    FitDataset two = repeated;
    two.angles_rad[1] = two.angles_rad[0] + 0.5;
    const FitParams flat_truth{truth.r, truth.psi_rad, truth.dphi_rad, truth.eta_input};
    two.s_obs[1] = predict_squeezing(params, flat_truth, two.grid, two.angles_rad[1]);
    CHECK_NOTHROW(fit_squeezing_model(params, two));
}

TEST_CASE("freezing the cavity rotation leaves structured residuals") {
    InterferometerParams params;
    const double sigma = 0.02;
    const FitDataset data = make_dataset(params, truth, sigma, 0x0D2A57ULL);

    const FitResult free_fit = fit_squeezing_model(params, data);
    FitBounds frozen;
    frozen.psi_lo = frozen.psi_hi = 0.0;
    const FitResult frozen_fit = fit_squeezing_model(params, data, frozen);

    // Removing the rotation degree of freedom costs far more than one unit of
    // chi-squared: the high-frequency rotation is really in the data.
    CHECK(frozen_fit.chi2 - free_fit.chi2 > 25.0);
    CHECK(frozen_fit.covariance[1][1] == 0.0);
    CHECK(frozen_fit.params.psi_rad == 0.0);
    CHECK(frozen_fit.dof == free_fit.dof + 1);

    // The misfit concentrates where the rotation acts: the top of the band.
    auto band_mean_resid = [&](const FitResult& fit) {
        double acc = 0.0;
        std::size_t n = 0;
        for (std::size_t a = 0; a < data.angles_rad.size(); ++a) {
            for (std::size_t k = 0; k < data.grid.size(); ++k) {
                if (data.grid[k] >= 150.0) {
                    acc += std::abs(fit.residuals[a][k]);
                    ++n;
                }
            }
        }
        return acc / static_cast<double>(n);
    };
    CHECK(band_mean_resid(frozen_fit) > 1.05 * band_mean_resid(free_fit));
}

TEST_CASE("fit dataset validation rejects malformed shapes") {
    InterferometerParams params;
    FitDataset data = make_dataset(params, truth, 0.0, 0);
    FitDataset bad = data;
    bad.s_obs.pop_back();
    CHECK_THROWS_AS(fit_squeezing_model(params, bad), std::invalid_argument);
    bad = data;
    bad.weights[2].pop_back();
    CHECK_THROWS_AS(fit_squeezing_model(params, bad), std::invalid_argument);
    bad = data;
    bad.weights[1][5] = -1.0;
    CHECK_THROWS_AS(fit_squeezing_model(params, bad), std::invalid_argument);
    bad = data;
    bad.s_obs[0][0] = std::nan("");
    CHECK_THROWS_AS(fit_squeezing_model(params, bad), std::invalid_argument);

    FitBounds inverted;
    inverted.r_lo = 2.0;
    inverted.r_hi = 1.0;
    CHECK_THROWS_AS(fit_squeezing_model(params, data, inverted), std::invalid_argument);
}
