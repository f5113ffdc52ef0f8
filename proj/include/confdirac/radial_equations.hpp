#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "confdirac/errors.hpp"

namespace confdirac {

using RadialFunction = std::function<double(double)>;

enum class Spacing { linear, logarithmic };

/// Radial mesh. Logarithmic meshes are uniform in x = ln r, linear ones in r.
struct RadialGrid {
  double r_min = 1e-6;
  double r_max = 50.0;
  std::size_t count = 20000;
  Spacing spacing = Spacing::logarithmic;

  void validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
      throw DomainError("RadialGrid: need 0 < r_min < r_max");
    }
    if (count < 5) throw DomainError("RadialGrid: need at least 5 nodes");
  }

  /// Step in the uniform variable (ln r or r).
  double step() const {
    return spacing == Spacing::logarithmic
               ? std::log(r_max / r_min) / static_cast<double>(count - 1)
               : (r_max - r_min) / static_cast<double>(count - 1);
  }

  double uniform_variable(double r) const {
    return spacing == Spacing::logarithmic ? std::log(r) : r;
  }

  double radius(double t) const { return spacing == Spacing::logarithmic ? std::exp(t) : t; }

  /// dr/dt for the uniform variable t.
  double jacobian(double r) const { return spacing == Spacing::logarithmic ? r : 1.0; }

  std::vector<double> nodes() const {
    validate();
    std::vector<double> r(count);
    const double t0 = uniform_variable(r_min);
    const double h = step();
    for (std::size_t i = 0; i < count; ++i) r[i] = radius(t0 + h * static_cast<double>(i));
    r.front() = r_min;
    r.back() = r_max;
    return r;
  }
};

/// Radially symmetric potentials of H = alpha.p + beta m + v0 + beta v1 + v2.
///
/// v0 and v2 are time-like, v1 is scalar. Near the origin v0 may behave as
/// -coulomb_strength/r; the other pieces must stay finite there.
/// Empty functions count as zero.
struct PotentialSpec {
  RadialFunction v0;
  RadialFunction v1;
  RadialFunction v2;
  double coulomb_strength = 0.0;

  double time_like(double r) const { return (v0 ? v0(r) : 0.0) + (v2 ? v2(r) : 0.0); }
  double scalar(double r) const { return v1 ? v1(r) : 0.0; }

  static PotentialSpec coulomb(double lambda) {
    return {[lambda](double r) { return -lambda / r; }, {}, {}, lambda};
  }

  /// -lambda/r + beta mu r + nu r
  static PotentialSpec coulomb_linear(double lambda, double mu, double nu) {
    return {[lambda](double r) { return -lambda / r; }, [mu](double r) { return mu * r; },
            [nu](double r) { return nu * r; }, lambda};
  }
};

/// Sampled upper/lower radial functions together with their r-derivatives.
struct RadialState {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> df;
  std::vector<double> dg;

  std::size_t size() const { return r.size(); }
};

/// Local defects of the two coupled radial equations
///   f' + (kappa+1) f/r = (E + m - V0 - V2 + V1) g
///  -g' + (kappa-1) g/r = (E - m - V0 - V2 - V1) f
/// at one radius. Each defect is divided by max(|f|,|g|) times the sum of the
/// coefficient magnitudes, i.e. measured relative to the size of the terms
/// that have to cancel. Returns 0 where the state vanishes.
inline double dirac_defect(const PotentialSpec& potential, int kappa, double energy, double m,
                           double r, double f, double g, double df, double dg) {
  const double vt = potential.time_like(r);
  const double vs = potential.scalar(r);
  const double d1 = df + (kappa + 1.0) * f / r - (energy + m - vt + vs) * g;
  const double d2 = -dg + (kappa - 1.0) * g / r - (energy - m - vt - vs) * f;
  const double magnitude = std::max(std::abs(f), std::abs(g));
  if (!(magnitude > 0.0)) return 0.0;
  const double coefficients = std::abs(energy) + m + std::abs(potential.v0 ? potential.v0(r) : 0.0) +
                              std::abs(vs) + std::abs(potential.v2 ? potential.v2(r) : 0.0) +
                              (std::abs(kappa) + 1.0) / r;
  return std::max(std::abs(d1), std::abs(d2)) / (magnitude * coefficients);
}

/// Maximum of dirac_defect over all samples whose magnitude exceeds
/// `relative_cutoff` times the peak magnitude.
inline double dirac_residual(const PotentialSpec& potential, int kappa, double energy, double m,
                             const RadialState& state, double relative_cutoff = 0.0) {
  double peak = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    peak = std::max({peak, std::abs(state.f[i]), std::abs(state.g[i])});
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (std::max(std::abs(state.f[i]), std::abs(state.g[i])) < relative_cutoff * peak) continue;
    worst = std::max(worst, dirac_defect(potential, kappa, energy, m, state.r[i], state.f[i],
                                         state.g[i], state.df[i], state.dg[i]));
  }
  return worst;
}

/// Fourth-order central differences in the grid's uniform variable
/// (one-sided five-point stencils at both ends), converted to d/dr.
inline std::vector<double> differentiate(const RadialGrid& grid, std::span<const double> r,
                                         std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 5 || r.size() != n) throw DomainError("differentiate: need >= 5 matching samples");
  const double h = grid.step();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dt;
    if (i >= 2 && i + 2 < n) {
      dt = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    } else if (i < 2) {
      // one-sided quartic stencils at the inner end
      dt = (i == 0) ? (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h)
                    : (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    } else {
      const auto c = y.subspan(n - 5);
      dt = (i == n - 1) ? (3.0 * c[0] - 16.0 * c[1] + 36.0 * c[2] - 48.0 * c[3] + 25.0 * c[4]) / (12.0 * h)
                        : (-c[0] + 6.0 * c[1] - 18.0 * c[2] + 10.0 * c[3] + 3.0 * c[4]) / (12.0 * h);
    }
    d[i] = dt / grid.jacobian(r[i]);
  }
  return d;
}

/// Trapezoid rule over the grid's uniform variable for int integrand(r) dr.
inline double integrate_on_grid(const RadialGrid& grid, std::span<const double> r,
                                std::span<const double> integrand) {
  const double h = grid.step();
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double w = (i == 0 || i + 1 == r.size()) ? 0.5 : 1.0;
    sum += w * integrand[i] * grid.jacobian(r[i]);
  }
  return sum * h;
}

/// int (f^2 + g^2) r^2 dr on the grid.
inline double norm_on_grid(const RadialGrid& grid, const RadialState& state) {
  std::vector<double> w(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    w[i] = (state.f[i] * state.f[i] + state.g[i] * state.g[i]) * state.r[i] * state.r[i];
  }
  return integrate_on_grid(grid, state.r, w);
}

inline void scale_state(RadialState& state, double factor) {
  for (auto* v : {&state.f, &state.g, &state.df, &state.dg}) {
    for (auto& x : *v) x *= factor;
  }
}

}  // namespace confdirac
