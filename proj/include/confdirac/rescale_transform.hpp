#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "confdirac/coulomb_reference.hpp"
#include "confdirac/errors.hpp"
#include "confdirac/exact_ansatz.hpp"
#include "confdirac/radial_equations.hpp"
#include "confdirac/radial_solver.hpp"

namespace confdirac {

/// Sign in h' = +-sqrt(V1^2 - V2^2). `minus` is the decaying branch for V1 > 0.
enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

/// h(r) with h(r_min) = 0 on the nodes of a grid, together with h' = branch * sqrt(V1^2 - V2^2).
struct RescaleProfile {
  RadialGrid grid;
  std::vector<double> r;
  std::vector<double> h;
  std::vector<double> dh;
  Branch branch = Branch::minus;
  RadialFunction v1;
  RadialFunction v2;
};

namespace detail {

// sqrt(V1^2 - V2^2) without squaring large potentials; NaN if V2^2 exceeds V1^2.
inline double rescale_rate(double v1, double v2) {
  const double a = std::abs(v1);
  const double b = std::abs(v2);
  if (a == 0.0 && b == 0.0) return 0.0;
  if (b > a) {
    // tolerate rounding in exactly tuned V2 = +-V1
    if (b - a <= 8.0 * std::numeric_limits<double>::epsilon() * b) return 0.0;
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double q = b / a;
  return a * std::sqrt((1.0 - q) * (1.0 + q));
}

inline constexpr std::array<double, 5> gl5_nodes = {
    -0.906179845938663992797626878299393, -0.538469310105683091036314420700208, 0.0,
    0.538469310105683091036314420700208, 0.906179845938663992797626878299393};
inline constexpr std::array<double, 5> gl5_weights = {
    0.236926885056189087514264040719918, 0.478628670499366468041291514835638,
    0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
    0.236926885056189087514264040719918};

}  // namespace detail

/// h(r) = branch * int_{r_min}^r sqrt(V1^2 - V2^2) dr, five-point Gauss-Legendre
/// on every grid interval (in the grid's uniform variable).
inline RescaleProfile h_profile(const RadialFunction& v1, const RadialFunction& v2,
                                const RadialGrid& grid, Branch branch) {
  grid.validate();
  auto v1_at = [&](double r) { return v1 ? v1(r) : 0.0; };
  auto v2_at = [&](double r) { return v2 ? v2(r) : 0.0; };
  auto rate = [&](double r) {
    const double w = detail::rescale_rate(v1_at(r), v2_at(r));
    if (std::isnan(w)) {
      throw ConditionViolation("h_profile: V1^2 < V2^2 at r = " + std::to_string(r), r);
    }
    return w;
  };
  const double sign = branch_sign(branch);
  RescaleProfile p;
  p.grid = grid;
  p.r = grid.nodes();
  p.branch = branch;
  p.v1 = v1;
  p.v2 = v2;
  const std::size_t n = p.r.size();
  p.h.assign(n, 0.0);
  p.dh.resize(n);
  const double t0 = grid.uniform_variable(grid.r_min);
  const double step = grid.step();
  for (std::size_t i = 0; i < n; ++i) p.dh[i] = sign * rate(p.r[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mid = t0 + step * (static_cast<double>(i) + 0.5);
    double sum = 0.0;
    for (std::size_t q = 0; q < 5; ++q) {
      const double r = grid.radius(mid + 0.5 * step * detail::gl5_nodes[q]);
      sum += detail::gl5_weights[q] * rate(r) * grid.jacobian(r);
    }
    p.h[i + 1] = p.h[i] + sign * 0.5 * step * sum;
  }
  return p;
}

/// Outcome of comparing g0/f0 with the ratio a rescaling can support.
struct RatioReport {
  /// max |g0/f0 - h'/(V1 - V2)| over unmasked nodes.
  double max_ratio_deviation = 0.0;
  /// (max - min)/max|.| of g0/f0 over unmasked nodes; 0 for a constant ratio.
  double constancy_defect = 0.0;
  /// true where the node was used; false near zeros of f0 or where V1 = V2.
  std::vector<bool> mask;
  std::size_t masked = 0;
};

/// A rescaling e^h can only solve the perturbed equations if g0/f0 equals
/// h'/(V1 - V2) = branch sqrt((V1 + V2)/(V1 - V2)) everywhere, which in turn
/// forces g0/f0 to be a constant.
inline RatioReport check_ratio_condition(std::span<const double> f0, std::span<const double> g0,
                                         const RadialFunction& v1, const RadialFunction& v2,
                                         std::span<const double> r, Branch branch,
                                         double mask_threshold = 1e-6) {
  if (f0.size() != r.size() || g0.size() != r.size() || r.empty()) {
    throw DomainError("check_ratio_condition: sample sizes differ");
  }
  double peak = 0.0;
  for (double x : f0) peak = std::max(peak, std::abs(x));
  if (!(peak > 0.0)) throw DomainError("check_ratio_condition: f0 vanishes identically");
  RatioReport out;
  out.mask.assign(r.size(), false);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double largest = 0.0;
  const double sign = branch_sign(branch);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(f0[i]) < mask_threshold * peak) {
      ++out.masked;
      continue;
    }
    const double a = v1 ? v1(r[i]) : 0.0;
    const double b = v2 ? v2(r[i]) : 0.0;
    const double w = detail::rescale_rate(a, b);
    if (std::isnan(w)) throw ConditionViolation("check_ratio_condition: V1^2 < V2^2", r[i]);
    const double ratio = g0[i] / f0[i];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    largest = std::max(largest, std::abs(ratio));
    if (a == b) {
      // V1 = V2: no constraint from the ratio equation at this node
      ++out.masked;
      continue;
    }
    out.mask[i] = true;
    out.max_ratio_deviation =
        std::max(out.max_ratio_deviation, std::abs(ratio - sign * w / (a - b)));
  }
  if (largest > 0.0) out.constancy_defect = (hi - lo) / largest;
  return out;
}

/// V2 = -[(1 - gamma^2)/(1 + gamma^2)] V1.
inline RadialFunction fine_tune_v2(const RadialFunction& v1, double gamma) {
  if (!std::isfinite(gamma)) throw DomainError("fine_tune_v2: gamma must be finite");
  const double factor = -(1.0 - gamma * gamma) / (1.0 + gamma * gamma);
  return [v1, factor](double r) { return factor * v1(r); };
}

/// E/m = (1 - gamma^2)/(1 + gamma^2).
inline double gamma_energy_relation(double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("gamma_energy_relation: gamma must be >= 0");
  return (1.0 - gamma * gamma) / (1.0 + gamma * gamma);
}

/// e^h f0, e^h g0 with derivatives e^h (f0' + h' f0), renormalized on the
/// profile's grid. Throws NonNormalizableError when e^h does not let the
/// state decay by the end of the grid.
inline RadialState build_rescaled_state(const RadialState& base, const RescaleProfile& profile) {
  if (base.size() != profile.r.size()) {
    throw DomainError("build_rescaled_state: state and profile sizes differ");
  }
  const double h_ref = *std::max_element(profile.h.begin(), profile.h.end());
  if (h_ref > 700.0) {
    throw NonNormalizableError("build_rescaled_state: e^h overflows (h = " +
                               std::to_string(h_ref) + ")");
  }
  RadialState s;
  s.r = base.r;
  for (auto* v : {&s.f, &s.g, &s.df, &s.dg}) v->resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double e = std::exp(profile.h[i]);
    s.f[i] = e * base.f[i];
    s.g[i] = e * base.g[i];
    s.df[i] = e * (base.df[i] + profile.dh[i] * base.f[i]);
    s.dg[i] = e * (base.dg[i] + profile.dh[i] * base.g[i]);
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    peak = std::max(peak, (s.f[i] * s.f[i] + s.g[i] * s.g[i]) * s.r[i] * s.r[i]);
  }
  const std::size_t last = s.size() - 1;
  const double edge = (s.f[last] * s.f[last] + s.g[last] * s.g[last]) * s.r[last] * s.r[last];
  if (!(peak > 0.0) || !std::isfinite(peak) || edge > 1e-8 * peak) {
    throw NonNormalizableError(
        "build_rescaled_state: density at r_max is not negligible; e^h does not decay");
  }
  scale_state(s, 1.0 / std::sqrt(norm_on_grid(profile.grid, s)));
  return s;
}

/// int (e^{2h}) (f0^2 + g0^2) r^2 dr on the profile's grid, without renormalization.
inline double rescaled_norm_integral(const RadialState& base, const RescaleProfile& profile) {
  std::vector<double> w(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double e = std::exp(2.0 * profile.h[i]);
    w[i] = e * (base.f[i] * base.f[i] + base.g[i] * base.g[i]) * base.r[i] * base.r[i];
  }
  return integrate_on_grid(profile.grid, base.r, w);
}

/// Power-law wall V1 = A (r/r0)^M, V2 = -sqrt(1 - lambda^2/kappa0^2) V1 around
/// the nodeless Coulomb level; large M approaches a hard wall at r0.
struct BagModelResult {
  RadialFunction v1;
  RadialFunction v2;
  /// Dirac-Coulomb energy of the reference level, which the wall leaves unchanged.
  double energy = 0.0;
  /// Relative defect of the rescaled state in the full radial equations.
  double residual = 0.0;
  RescaleProfile profile;
  RadialState state;
  /// max |e^h - 1| over r < 0.97 r0: departure from a sharp cutoff inside the wall.
  double interior_deviation = 0.0;
};

/// (r/r0)^M evaluated as exp(M ln(r/r0)).
inline RadialFunction power_wall(double A, double r0, double M) {
  return [A, r0, M](double r) { return A * std::exp(M * std::log(r / r0)); };
}

inline BagModelResult bag_model_case(double A, double r0, double M, double lambda, int kappa0,
                                     double m, std::size_t count = 20000) {
  if (!(A > 0.0)) {
    throw DomainError("bag_model_case: A must be positive (A <= 0 makes e^h grow outward)");
  }
  if (!(r0 > 0.0)) throw DomainError("bag_model_case: r0 must be positive");
  if (!(M >= 0.0)) throw DomainError("bag_model_case: M must be >= 0");
  const auto coulomb = build_ansatz(lambda, 0.0, kappa0, m);
  const double tune = coulomb.energy / m;

  BagModelResult out;
  out.energy = coulomb.energy;
  out.v1 = power_wall(A, r0, M);
  out.v2 = [v1 = out.v1, tune](double r) { return -tune * v1(r); };

  // ln f of the walled state: ln f0 + h with h = -c A r0 ((r/r0)^{M+1})/(M+1).
  const double c = std::sqrt(1.0 - tune * tune);
  auto log_f = [&](double r) {
    return (coulomb.b - 1.0) * std::log(r) - coulomb.a * r -
           c * A * r0 * std::exp((M + 1.0) * std::log(r / r0)) / (M + 1.0);
  };
  const double r_cap = M > 0.0 ? r0 * std::exp(600.0 / M) : std::numeric_limits<double>::max();
  const double r_start = 1.0 / (lambda * m);
  double reference = log_f(r_start);
  double r = r_start;
  while (true) {
    reference = std::max(reference, log_f(r));
    if (log_f(r) - reference < std::log(1e-13)) break;
    r *= 1.001;
    if (r > r_cap) {
      throw NumericError("bag_model_case: state has not decayed before (r/r0)^M leaves double "
                         "range; lower M or increase A so the wall confines inside r0 exp(600/M)");
    }
  }
  const RadialGrid grid{1e-6 / (lambda * m), r, count, Spacing::logarithmic};
  out.profile = h_profile(out.v1, out.v2, grid, Branch::minus);
  out.state = build_rescaled_state(sample_ansatz(coulomb, out.profile.r), out.profile);
  PotentialSpec potential{[lambda](double x) { return -lambda / x; }, out.v1, out.v2, lambda};
  out.residual = dirac_residual(potential, kappa0, coulomb.energy, m, out.state);
  for (std::size_t i = 0; i < out.profile.r.size() && out.profile.r[i] < 0.97 * r0; ++i) {
    out.interior_deviation = std::max(out.interior_deviation, std::abs(std::expm1(out.profile.h[i])));
  }
  return out;
}

}  // namespace confdirac
