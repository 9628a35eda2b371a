#include "subsql/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "subsql/core_physics.hpp"
#include "subsql/errors.hpp"

namespace subsql {

namespace {

constexpr std::size_t n_params = 4;

FitParams from_array(const std::array<double, n_params>& a) {
    return {a[0], a[1], a[2], a[3]};
}

struct Bounds {
    std::array<double, n_params> lo;
    std::array<double, n_params> hi;
    std::array<bool, n_params> active;

    explicit Bounds(const FitBounds& b)
        : lo{b.r_lo, b.psi_lo, b.dphi_lo, b.eta_lo},
          hi{b.r_hi, b.psi_hi, b.dphi_hi, b.eta_hi} {
        for (std::size_t i = 0; i < n_params; ++i) {
            if (lo[i] > hi[i]) {
                throw std::invalid_argument("fit bounds must have lo <= hi");
            }
            active[i] = hi[i] > lo[i];
        }
    }

    bool inside(const std::array<double, n_params>& x) const {
        for (std::size_t i = 0; i < n_params; ++i) {
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        }
        return true;
    }
};

// Frequency-dependent pieces that do not change during the fit.
struct ModelTables {
    std::vector<double> atan_k;       // ellipse rotation without detuning
    std::vector<double> rotation;     // Omega^2 / (gamma^2 + Omega^2)
    std::vector<double> output_loss;  // (1 - eta_out) / (1 + K^2)

    ModelTables(const InterferometerParams& p, const FrequencyGrid& grid) {
        atan_k.reserve(grid.size());
        rotation.reserve(grid.size());
        output_loss.reserve(grid.size());
        for (double f : grid) {
            const double k = ponderomotive_gain(p, f);
            const double omega = 2.0 * constants::pi * f;
            atan_k.push_back(std::atan(k));
            rotation.push_back(omega * omega /
                               (p.bandwidth_rad_s * p.bandwidth_rad_s + omega * omega));
            output_loss.push_back((1.0 - p.output_efficiency) / (1.0 + k * k));
        }
    }

    double model(const FitParams& fp, std::size_t k, double angle_rad) const {
        const double theta = atan_k[k] + fp.psi_rad * rotation[k];
        const double phi = angle_rad + fp.dphi_rad;
        const double c = std::cos(phi - theta);
        const double s = std::sin(phi - theta);
        const double factor =
            std::exp(-2.0 * fp.r) * c * c + std::exp(2.0 * fp.r) * s * s;
        const double eta_e = fp.eta_input - output_loss[k];
        return eta_e * factor + (1.0 - eta_e);
    }
};

class Objective {
  public:
    Objective(const ModelTables& tables, const FitDataset& data)
        : tables_(tables), data_(data) {}

    double operator()(const std::array<double, n_params>& x) const {
        ++evaluations_;
        const FitParams fp = from_array(x);
        double chi2 = 0.0;
        for (std::size_t a = 0; a < data_.angles_rad.size(); ++a) {
            for (std::size_t k = 0; k < data_.grid.size(); ++k) {
                const double m = tables_.model(fp, k, data_.angles_rad[a]);
                const double d = data_.s_obs[a][k] - m;
                chi2 += data_.weights[a][k] * d * d;
            }
        }
        return chi2;
    }

    std::size_t evaluations() const { return evaluations_; }

  private:
    const ModelTables& tables_;
    const FitDataset& data_;
    mutable std::size_t evaluations_ = 0;
};

// Nelder-Mead over the active parameters with an infinite-barrier box.
std::array<double, n_params> nelder_mead(const Objective& objective, const Bounds& bounds,
                                         std::array<double, n_params> start) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < n_params; ++i) {
        if (bounds.active[i]) act.push_back(i);
    }
    const std::size_t dim = act.size();

    auto barrier = [&](const std::array<double, n_params>& x) {
        return bounds.inside(x) ? objective(x) : std::numeric_limits<double>::infinity();
    };

    // Initial simplex: start plus one vertex per active direction, stepping a
    // few percent of the box width (flipped when that would leave the box).
    std::vector<std::array<double, n_params>> simplex(dim + 1, start);
    for (std::size_t v = 0; v < dim; ++v) {
        const std::size_t i = act[v];
        double step = 0.05 * (bounds.hi[i] - bounds.lo[i]);
        if (start[i] + step > bounds.hi[i]) step = -step;
        simplex[v + 1][i] += step;
    }
    std::vector<double> value(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) value[v] = barrier(simplex[v]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    for (int iter = 0; iter < 1200; ++iter) {
        std::vector<std::size_t> order(dim + 1);
        for (std::size_t v = 0; v <= dim; ++v) order[v] = v;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t best = order.front(), worst = order.back();
        if (value[worst] - value[best] <
            1e-12 * (1.0 + std::abs(value[best]) + std::abs(value[worst]))) {
            break;
        }

        std::array<double, n_params> centroid = start;
        for (std::size_t i : act) {
            double acc = 0.0;
            for (std::size_t v = 0; v <= dim; ++v) {
                if (v != worst) acc += simplex[v][i];
            }
            centroid[i] = acc / static_cast<double>(dim);
        }
        auto blend = [&](double t) {
            std::array<double, n_params> x = centroid;
            for (std::size_t i : act) {
                x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
            }
            return x;
        };

        const auto reflected = blend(-alpha);
        const double fr = barrier(reflected);
        if (fr < value[order[0]]) {
            const auto expanded = blend(-alpha * gamma);
            const double fe = barrier(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                value[worst] = fe;
            } else {
                simplex[worst] = reflected;
                value[worst] = fr;
            }
        } else if (fr < value[order[dim - 1]]) {
            simplex[worst] = reflected;
            value[worst] = fr;
        } else {
            const auto contracted = blend(fr < value[worst] ? -rho : rho);
            const double fc = barrier(contracted);
            if (fc < std::min(fr, value[worst])) {
                simplex[worst] = contracted;
                value[worst] = fc;
            } else {
                for (std::size_t v = 0; v <= dim; ++v) {
                    if (v == best) continue;
                    for (std::size_t i : act) {
                        simplex[v][i] =
                            simplex[best][i] + sigma * (simplex[v][i] - simplex[best][i]);
                    }
                    value[v] = barrier(simplex[v]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t v = 1; v <= dim; ++v) {
        if (value[v] < value[best]) best = v;
    }
    return simplex[best];
}

// Solves H x = b for a small symmetric system by Gaussian elimination with
// partial pivoting. Returns false when the system is singular.
bool solve_linear(std::vector<std::vector<double>> h, std::vector<double> b,
                  std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(h[row][col]) > std::abs(h[pivot][col])) pivot = row;
        }
        if (std::abs(h[pivot][col]) < 1e-300) return false;
        std::swap(h[pivot], h[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double m = h[row][col] / h[col][col];
            for (std::size_t c2 = col; c2 < n; ++c2) h[row][c2] -= m * h[col][c2];
            b[row] -= m * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (std::size_t c2 = row + 1; c2 < n; ++c2) acc -= h[row][c2] * x[c2];
        x[row] = acc / h[row][row];
    }
    return true;
}

}  // namespace

void FitDataset::validate() const {
    if (grid.empty() || angles_rad.empty()) {
        throw std::invalid_argument("fit dataset is empty");
    }
    if (s_obs.size() != angles_rad.size() || weights.size() != angles_rad.size()) {
        throw std::invalid_argument("fit dataset angle count mismatch");
    }
    for (std::size_t a = 0; a < angles_rad.size(); ++a) {
        if (s_obs[a].size() != grid.size() || weights[a].size() != grid.size()) {
            throw std::invalid_argument("fit dataset bin count mismatch");
        }
        for (double w : weights[a]) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("fit weights must be finite and non-negative");
            }
        }
        for (double s : s_obs[a]) {
            if (!std::isfinite(s)) {
                throw std::invalid_argument("fit observations must be finite");
            }
        }
    }
}

std::vector<double> predict_squeezing(const InterferometerParams& interferometer,
                                      const FitParams& fit, const FrequencyGrid& grid,
                                      double angle_rad) {
    interferometer.validate();
    const ModelTables tables(interferometer, grid);
    std::vector<double> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out.push_back(tables.model(fit, k, angle_rad));
    }
    return out;
}

FitResult fit_squeezing_model(const InterferometerParams& interferometer,
                              const FitDataset& data, const FitBounds& fit_bounds) {
    interferometer.validate();
    data.validate();
    const Bounds bounds(fit_bounds);

    // The angle sweep is the lever arm of the fit: with a single readout angle
    // the squeeze level, the efficiency, and the angle offset trade against
    // each other freely.
    std::vector<double> distinct;
    for (double a : data.angles_rad) {
        bool seen = false;
        for (double d : distinct) {
            if (std::abs(a - d) < 1e-9) seen = true;
        }
        if (!seen) distinct.push_back(a);
    }
    if (distinct.size() < 2) {
        throw unidentifiable_error(
            "squeezing fit needs at least two distinct readout angles");
    }

    const ModelTables tables(interferometer, data.grid);
    const Objective objective(tables, data);

    // Coarse grid seed over the active box.
    auto levels = [&](std::size_t i, int n) {
        std::vector<double> v;
        if (!bounds.active[i]) {
            v.push_back(bounds.lo[i]);
            return v;
        }
        for (int s = 0; s < n; ++s) {
            const double t = (static_cast<double>(s) + 0.5) / static_cast<double>(n);
            v.push_back(bounds.lo[i] + t * (bounds.hi[i] - bounds.lo[i]));
        }
        return v;
    };
    std::array<double, n_params> best{};
    double best_value = std::numeric_limits<double>::infinity();
    for (double r : levels(0, 7)) {
        for (double psi : levels(1, 7)) {
            for (double dphi : levels(2, 5)) {
                for (double eta : levels(3, 5)) {
                    const std::array<double, n_params> x{r, psi, dphi, eta};
                    const double v = objective(x);
                    if (v < best_value) {
                        best_value = v;
                        best = x;
                    }
                }
            }
        }
    }

    const std::array<double, n_params> optimum = nelder_mead(objective, bounds, best);

    FitResult result;
    result.params = from_array(optimum);
    result.chi2 = objective(optimum);

    std::size_t n_active = 0;
    for (std::size_t i = 0; i < n_params; ++i) {
        if (bounds.active[i]) ++n_active;
    }
    const std::size_t n_points = data.angles_rad.size() * data.grid.size();
    result.dof = n_points > n_active ? n_points - n_active : 0;
    result.chi2_per_dof =
        result.dof > 0 ? result.chi2 / static_cast<double>(result.dof) : 0.0;

    result.residuals.resize(data.angles_rad.size());
    for (std::size_t a = 0; a < data.angles_rad.size(); ++a) {
        result.residuals[a].resize(data.grid.size());
        for (std::size_t k = 0; k < data.grid.size(); ++k) {
            const double m = tables.model(result.params, k, data.angles_rad[a]);
            result.residuals[a][k] =
                (data.s_obs[a][k] - m) * std::sqrt(data.weights[a][k]);
        }
    }

    // Covariance from the finite-difference Hessian of chi^2: cov = 2 H^{-1}.
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < n_params; ++i) {
        if (bounds.active[i]) act.push_back(i);
    }
    const std::size_t dim = act.size();
    if (dim > 0) {
        std::vector<double> step(dim);
        for (std::size_t v = 0; v < dim; ++v) {
            step[v] = 1e-4 * (bounds.hi[act[v]] - bounds.lo[act[v]]);
        }
        auto shifted = [&](std::size_t v, double dv, std::size_t w, double dw) {
            std::array<double, n_params> x = optimum;
            x[act[v]] += dv;
            if (w < dim) x[act[w]] += dw;
            return objective(x);
        };
        std::vector<std::vector<double>> hessian(dim, std::vector<double>(dim, 0.0));
        const double f0 = result.chi2;
        for (std::size_t v = 0; v < dim; ++v) {
            hessian[v][v] = (shifted(v, step[v], dim, 0.0) + shifted(v, -step[v], dim, 0.0) -
                             2.0 * f0) /
                            (step[v] * step[v]);
            for (std::size_t w = v + 1; w < dim; ++w) {
                const double fpp = shifted(v, step[v], w, step[w]);
                const double fpm = shifted(v, step[v], w, -step[w]);
                const double fmp = shifted(v, -step[v], w, step[w]);
                const double fmm = shifted(v, -step[v], w, -step[w]);
                hessian[v][w] = hessian[w][v] =
                    (fpp - fpm - fmp + fmm) / (4.0 * step[v] * step[w]);
            }
        }
        for (std::size_t col = 0; col < dim; ++col) {
            std::vector<double> unit(dim, 0.0);
            unit[col] = 2.0;  // cov = 2 H^{-1}
            std::vector<double> x;
            if (solve_linear(hessian, unit, x)) {
                for (std::size_t row = 0; row < dim; ++row) {
                    result.covariance[act[row]][act[col]] = x[row];
                }
            }
        }
    }

    result.evaluations = objective.evaluations();
    return result;
}

}  // namespace subsql
