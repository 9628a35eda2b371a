#include "subsql/qnoise.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subsql/constants.hpp"
#include "subsql/core_physics.hpp"
#include "subsql/errors.hpp"

using namespace subsql;

namespace {
constexpr double kPi = constants::pi;
constexpr double kDeg = kPi / 180.0;

InterferometerParams nominal() {
    InterferometerParams p;
    p.validate();
    return p;
}

SqueezerParams nominal_sq(double angle_deg = 35.0) {
    return SqueezerParams::from_db(9.8, angle_deg * kDeg);
}
}  // namespace

TEST_CASE("squeeze parameter dB convention") {
    const auto sq = nominal_sq();
    CHECK(sq.r == doctest::Approx(1.1282666955670826).epsilon(1e-14));
    CHECK(std::exp(-2.0 * sq.r) == doctest::Approx(0.1047128548050899).epsilon(1e-13));
    // Round trip dB -> r -> dB.
    CHECK(sq.squeeze_db() == doctest::Approx(9.8).epsilon(1e-13));
    CHECK(SqueezerParams::r_from_db(SqueezerParams{0.7, 0.0}.squeeze_db()) ==
          doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("squeeze angle normalization and guards") {
    CHECK(SqueezerParams{0.5, 100.0 * kDeg}.normalized_angle() ==
          doctest::Approx(-80.0 * kDeg).epsilon(1e-12));
    CHECK(SqueezerParams{0.5, -100.0 * kDeg}.normalized_angle() ==
          doctest::Approx(80.0 * kDeg).epsilon(1e-12));
    CHECK(SqueezerParams{0.5, 90.0 * kDeg}.normalized_angle() ==
          doctest::Approx(90.0 * kDeg).epsilon(1e-12));
    CHECK(SqueezerParams{0.5, -90.0 * kDeg}.normalized_angle() ==
          doctest::Approx(90.0 * kDeg).epsilon(1e-12));

    CHECK_THROWS_AS((SqueezerParams{-0.1, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SqueezerParams{25.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SqueezerParams{0.5, std::nan("")}.validate()), std::invalid_argument);
}

TEST_CASE("squeezing factor: aligned, orthogonal, and bounds") {
    const double r = nominal_sq().r;
    CHECK(squeezing_factor(r, 0.3, 0.3) == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-13));
    CHECK(squeezing_factor(r, 0.3 + kPi / 2.0, 0.3) ==
          doctest::Approx(std::exp(2.0 * r)).epsilon(1e-13));
    // r = 0 is the vacuum: S = 1 at every relative angle.
    for (double d = -1.5; d <= 1.5; d += 0.1)
        CHECK(squeezing_factor(0.0, d, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // e^{-2r} <= S <= e^{2r}.
    for (double d = -1.5; d <= 1.5; d += 0.05) {
        const double s = squeezing_factor(r, d, 0.0);
        CHECK(s >= std::exp(-2.0 * r) - 1e-15);
        CHECK(s <= std::exp(2.0 * r) + 1e-15);
    }
}

TEST_CASE("standard quantum limit: frozen value and scaling") {
    const auto p = nominal();
    CHECK(std::sqrt(sql_psd(p, 40.0)) ==
          doctest::Approx(1.8273141555152986e-20).epsilon(1e-12));
    // 1/m and 1/f^2 scaling.
    auto heavy = p;
    heavy.mirror_mass_kg *= 4.0;
    CHECK(sql_psd(heavy, 40.0) == doctest::Approx(sql_psd(p, 40.0) / 4.0).epsilon(1e-14));
    CHECK(sql_psd(p, 80.0) == doctest::Approx(sql_psd(p, 40.0) / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(sql_psd(p, 0.0), std::domain_error);
}

TEST_CASE("ideal model: frozen value and closed-form identity") {
    const auto p = nominal();
    const SqueezerParams vac{0.0, 0.0};
    CHECK(std::sqrt(ideal_displacement_psd(p, vac, 40.0)) ==
          doctest::Approx(1.9074033834987922e-20).epsilon(1e-12));
    // ideal_unsqueezed = SQL * (1 + K^2) / (2K) at every frequency.
    for (double f : {10.0, 32.0, 40.0, 100.0, 300.0}) {
        const double k = ponderomotive_gain(p, f);
        CHECK(ideal_displacement_psd(p, vac, f) ==
              doctest::Approx(sql_psd(p, f) * (1.0 + k * k) / (2.0 * k)).epsilon(1e-12));
    }
}

TEST_CASE("power optimality: the SQL is the minimum over circulating power") {
    const auto p = nominal();
    const SqueezerParams vac{0.0, 0.0};
    for (double f : {15.0, 40.0, 90.0}) {
        auto psd_at_log_power = [&](double log10_p) {
            auto q = p;
            q.arm_power_w = std::pow(10.0, log10_p);
            return ideal_displacement_psd(q, vac, f);
        };
        const double lp = oracle::golden_min(psd_at_log_power, 3.0, 8.0);
        auto q = p;
        q.arm_power_w = std::pow(10.0, lp);
        CHECK(ideal_displacement_psd(q, vac, f) ==
              doctest::Approx(sql_psd(p, f)).epsilon(1e-9));
        CHECK(ponderomotive_gain(q, f) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("augmented model reduces to the ideal one without loss or detuning") {
    auto p = nominal();
    p.input_efficiency = 1.0;
    p.output_efficiency = 1.0;
    p.src_detuning_rad = 0.0;
    for (double angle : {0.0, 20.0, 35.0, 60.0}) {
        const auto sq = nominal_sq(angle);
        for (double f : {10.0, 40.0, 150.0}) {
            CHECK(lossy_displacement_psd(p, sq, f) ==
                  doctest::Approx(ideal_displacement_psd(p, sq, f)).epsilon(1e-12));
        }
    }
}

TEST_CASE("without squeezing the lossy model never beats the SQL") {
    const SqueezerParams vac{0.0, 0.0};
    auto check_params = [&](const InterferometerParams& p) {
        for (double f = 5.0; f <= 500.0; f *= 1.17)
            CHECK(lossy_displacement_psd(p, vac, f) >= sql_psd(p, f) * (1.0 - 1e-12));
    };
    check_params(nominal());
    auto lossless = nominal();
    lossless.input_efficiency = 1.0;
    lossless.output_efficiency = 1.0;
    check_params(lossless);
    auto lossy = nominal();
    lossy.input_efficiency = 0.7;
    lossy.output_efficiency = 0.65;
    check_params(lossy);
}

TEST_CASE("high-frequency squeezing floor under losses") {
    const auto p = nominal();
    const auto sq = nominal_sq();
    // At 5 kHz the ponderomotive gain is negligible; with the readout aligned
    // to the rotated ellipse the floor is eta_e e^{-2r} + (1 - eta_e).
    const double f = 5000.0;
    const double theta = rotation_angle(p, f, true);
    const double eta = effective_efficiency(p, f);
    const double s_star = lossy_squeezing_factor(sq.r, theta, theta, eta);
    CHECK(s_star == doctest::Approx(0.4144822070425106).epsilon(1e-12));
    CHECK(10.0 * std::log10(s_star) == doctest::Approx(-3.8249410817550062).epsilon(1e-9));
    // The detuning angle itself is the asymptotic rotation, so phi = psi lands
    // within a whisker of the floor.
    const double at_psi = lossy_squeezing_factor(sq.r, p.src_rotation_rad(), theta, eta);
    CHECK(at_psi == doctest::Approx(0.41449247473342665).epsilon(1e-10));
}

TEST_CASE("S* never falls below its loss-set floor") {
    const auto p = nominal();
    const auto sq = nominal_sq();
    const auto g = FrequencyGrid::linear(5.0, 500.0, 200);
    const auto s = lossy_squeezing_spectrum(p, sq, g);
    const auto eta = effective_efficiency(p, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double floor = eta[i] * std::exp(-2.0 * sq.r) + (1.0 - eta[i]);
        CHECK(s.values[i] >= floor * (1.0 - 1e-12));
    }
}

TEST_CASE("noise decomposition: parts sum to the total") {
    const auto g = FrequencyGrid::linear(5.0, 500.0, 150);

    // Lossless: the radiation-pressure share at 40 Hz is K^2/(1+K^2).
    auto lossless = nominal();
    lossless.input_efficiency = 1.0;
    lossless.output_efficiency = 1.0;
    const auto d0 = decompose(lossless, FrequencyGrid(std::vector<double>{40.0}));
    CHECK(d0.qrpn.values[0] / d0.total.values[0] ==
          doctest::Approx(0.30146209236342114).epsilon(1e-12));

    for (const auto& p : {nominal(), lossless}) {
        const auto d = decompose(p, g);
        const auto unsq = lossy_displacement_psd(p, SqueezerParams{0.0, 0.0}, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(d.shot.values[i] + d.qrpn.values[i] ==
                  doctest::Approx(d.total.values[i]).epsilon(1e-15));
            CHECK(d.total.values[i] == doctest::Approx(unsq.values[i]).epsilon(1e-12));
            CHECK(d.shot.values[i] > 0.0);
            CHECK(d.qrpn.values[i] > 0.0);
        }
    }
}

TEST_CASE("dip frequency: root property, frozen values, and ordering") {
    const auto p = nominal();
    const auto sq = nominal_sq(35.0);
    const double f_dip = dip_frequency(p, sq);
    CHECK(f_dip == doctest::Approx(38.80222901114506).epsilon(5e-5));
    // Root property to bisection precision.
    CHECK(std::abs(rotation_angle(p, f_dip, true) - sq.normalized_angle()) < 1e-7);

    // Independent brute-force root: dense scan of |theta*(f) - phi|.
    const double scan = oracle::dense_argmin(
        [&](double f) { return std::abs(rotation_angle(p, f, true) - sq.normalized_angle()); },
        5.0, 150.0, 1e-3);
    CHECK(std::abs(scan - f_dip) < 2e-3);

    // Larger readout angles align deeper in the rotation, i.e. at lower f.
    const double f10 = dip_frequency(p, nominal_sq(10.0));
    const double f20 = dip_frequency(p, nominal_sq(20.0));
    const double f30 = dip_frequency(p, nominal_sq(30.0));
    const double f40 = dip_frequency(p, nominal_sq(40.0));
    CHECK(f10 == doctest::Approx(77.44125720628604).epsilon(2e-4));
    CHECK(f20 == doctest::Approx(53.75914379571898).epsilon(2e-4));
    CHECK(f30 == doctest::Approx(42.71558357791789).epsilon(2e-4));
    CHECK(f40 == doctest::Approx(35.45801729008645).epsilon(2e-4));
    CHECK(f10 > f20);
    CHECK(f20 > f30);
    CHECK(f30 > f40);
}

TEST_CASE("dip frequency sits at the S* minimum up to the efficiency drift") {
    const auto p = nominal();
    const auto sq = nominal_sq(35.0);
    const double f_dip = dip_frequency(p, sq);
    auto s_star_at = [&](double f) {
        return lossy_squeezing_factor(sq.r, sq.normalized_angle(), rotation_angle(p, f, true),
                                      effective_efficiency(p, f));
    };
    const double f_min = oracle::dense_argmin(s_star_at, 10.0, 120.0, 0.01);
    CHECK(std::abs(f_min - f_dip) < 1.0);
    CHECK(s_star_at(f_dip) <= s_star_at(f_min) * 1.005);
}

TEST_CASE("dip frequency error cases") {
    const auto p = nominal();
    // A vanishing readout angle is never reached: theta* stays above it.
    CHECK_THROWS_AS(dip_frequency(p, SqueezerParams{1.0, 0.0}), no_root_error);
    CHECK_THROWS_AS(dip_frequency(p, nominal_sq(0.5)), no_root_error);
    // Band excludes the crossing.
    CHECK_THROWS_AS(dip_frequency(p, nominal_sq(60.0), 30.0, 200.0), no_root_error);
    // Bad band.
    CHECK_THROWS_AS(dip_frequency(p, nominal_sq(35.0), 50.0, 10.0), std::invalid_argument);
}

TEST_CASE("squeezing contour matches the single-angle spectrum") {
    const auto p = nominal();
    const double r = nominal_sq().r;
    const auto g = FrequencyGrid::linear(10.0, 200.0, 96);
    const std::vector<double> angles = {-50.0 * kDeg, 0.0 * kDeg, 35.0 * kDeg, 80.0 * kDeg};
    const auto c = squeezing_contour(p, r, angles, g);
    REQUIRE(c.s_star.size() == angles.size());
    for (std::size_t a = 0; a < angles.size(); ++a) {
        const auto ref = lossy_squeezing_spectrum(p, SqueezerParams{r, angles[a]}, g);
        REQUIRE(c.s_star[a].size() == g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(c.s_star[a][i] == doctest::Approx(ref.values[i]).epsilon(1e-14));
    }
}

TEST_CASE("amplitude ratio to the SQL dips into the sub-SQL window") {
    const auto p = nominal();
    const auto sq = nominal_sq(35.0);
    auto ratio = [&](double f) {
        return std::sqrt(lossy_displacement_psd(p, sq, f) / sql_psd(p, f));
    };
    const double f_min = oracle::dense_argmin(ratio, 15.0, 100.0, 0.01);
    CHECK(ratio(f_min) == doctest::Approx(0.6578294015797428).epsilon(1e-6));
    CHECK(f_min == doctest::Approx(37.529).epsilon(2e-3));
    const double f_dip = dip_frequency(p, sq);
    CHECK(ratio(f_dip) == doctest::Approx(0.6647306391997507).epsilon(1e-5));
}
