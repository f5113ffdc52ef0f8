#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "confdirac/coulomb_reference.hpp"
#include "confdirac/errors.hpp"
#include "confdirac/exact_ansatz.hpp"
#include "confdirac/fw_effective.hpp"
#include "confdirac/quantum_numbers.hpp"
#include "confdirac/radial_equations.hpp"

namespace confdirac {

/// Converged eigenpair of the radial Dirac equations. f and g are normalized to
/// int (f^2 + g^2) r^2 dr = 1 with f > 0 next to the origin.
struct BoundState {
  double energy = 0.0;
  int kappa = -1;
  RadialGrid grid;
  RadialState state;
  int nodes_f = 0;
  bool converged = false;
  /// Largest relative defect of both radial equations, derivatives by finite differences.
  double residual = 0.0;
  std::size_t match_index = 0;
};

/// Potential of a single-component radial Schrodinger problem; v ~ -coulomb_strength/r near 0.
struct SchrodingerPotential {
  RadialFunction v;
  double coulomb_strength = 0.0;
};

/// Eigenpair of -u''/(2m) + [v + l(l+1)/(2 m r^2)] u = (E - m) u, with int u^2 dr = 1.
/// `energy` includes the rest mass.
struct SchrodingerState {
  double energy = 0.0;
  int ell = 0;
  RadialGrid grid;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  int nodes = 0;
  bool converged = false;
  double residual = 0.0;
};

enum class Direction { outward, inward };

/// Unnormalized solution of the radial Dirac equations at a fixed trial energy.
struct RadialTrajectory {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> g;
  /// f'/f at node i, evaluated from the first radial equation.
  std::vector<double> log_derivative_f;
};

struct EnergyBracket {
  double lo;
  double hi;
};

namespace detail {

struct Mat2 {
  double a11, a12, a21, a22;
};

/// A linear 2x2 radial system y' = M(r; E) y with boundary data at both ends.
/// The phase theta = atan2(y1, y2) crosses multiples of pi upwards whenever
/// M.a12 > 0, and M grows with E in the sense that a12 and -a21 both increase;
/// together this makes the matching phase monotone in E.
struct ShootingSystem {
  std::function<Mat2(double r, double energy)> matrix;
  std::function<std::array<double, 2>(double r, double energy)> origin;
  std::function<std::array<double, 2>(double r, double energy)> tail;
  /// > 0 in classically forbidden regions.
  std::function<double(double r, double energy)> local_k2;
};

inline double phase_rate(const Mat2& a, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return a.a12 * c * c - a.a21 * s * s + (a.a11 - a.a22) * s * c;
}

inline double stiffness(const Mat2& a) {
  return std::abs(a.a11) + std::abs(a.a12) + std::abs(a.a21) + std::abs(a.a22);
}

// RK4 sub-steps needed so that |h * lambda_max| stays inside the stability region.
inline int substeps(const RadialGrid& grid, const ShootingSystem& sys, double r0, double r1,
                    double energy, double h) {
  const double k = std::max(grid.jacobian(r0) * stiffness(sys.matrix(r0, energy)),
                            grid.jacobian(r1) * stiffness(sys.matrix(r1, energy)));
  const double n = std::ceil(std::abs(h) * k / 1.5);
  if (!std::isfinite(n) || n > 1e6) {
    throw NumericError("radial integration: potential too steep for the grid near r = " +
                       std::to_string(r1));
  }
  return std::max(1, static_cast<int>(n));
}

/// theta(t_end) from theta(t_start), integrating d theta/dt = J(r) * rate.
inline double advance_phase(const RadialGrid& grid, const ShootingSystem& sys, double energy,
                            double t0, double t1, double theta) {
  const double r0 = grid.radius(t0);
  const double r1 = grid.radius(t1);
  const int n = substeps(grid, sys, r0, r1, energy, t1 - t0);
  const double h = (t1 - t0) / n;
  auto rhs = [&](double t, double th) {
    const double r = grid.radius(t);
    return grid.jacobian(r) * phase_rate(sys.matrix(r, energy), th);
  };
  double t = t0;
  for (int i = 0; i < n; ++i) {
    const double k1 = rhs(t, theta);
    const double k2 = rhs(t + 0.5 * h, theta + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, theta + 0.5 * h * k2);
    const double k4 = rhs(t + h, theta + h * k3);
    theta += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    t += h;
  }
  return theta;
}

inline std::array<double, 2> advance_linear(const RadialGrid& grid, const ShootingSystem& sys,
                                            double energy, double t0, double t1,
                                            std::array<double, 2> y) {
  const double r0 = grid.radius(t0);
  const double r1 = grid.radius(t1);
  const int n = substeps(grid, sys, r0, r1, energy, t1 - t0);
  const double h = (t1 - t0) / n;
  auto rhs = [&](double t, const std::array<double, 2>& v) {
    const double r = grid.radius(t);
    const double j = grid.jacobian(r);
    const auto a = sys.matrix(r, energy);
    return std::array<double, 2>{j * (a.a11 * v[0] + a.a12 * v[1]),
                                 j * (a.a21 * v[0] + a.a22 * v[1])};
  };
  auto axpy = [](const std::array<double, 2>& v, double s, const std::array<double, 2>& d) {
    return std::array<double, 2>{v[0] + s * d[0], v[1] + s * d[1]};
  };
  double t = t0;
  for (int i = 0; i < n; ++i) {
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const auto k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const auto k4 = rhs(t + h, axpy(y, h, k3));
    for (int c = 0; c < 2; ++c) y[c] += h * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]) / 6.0;
    t += h;
  }
  return y;
}

inline double initial_phase(const std::array<double, 2>& y) { return std::atan2(y[0], y[1]); }

/// Outer classical turning point for this energy (last allowed node);
/// falls back to the node where the system is closest to allowed.
inline std::size_t matching_index(const ShootingSystem& sys, const std::vector<double>& r,
                                  double energy) {
  std::optional<std::size_t> last_allowed;
  std::size_t best = 0;
  double best_k2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double k2 = sys.local_k2(r[i], energy);
    if (k2 < 0.0) last_allowed = i;
    if (k2 < best_k2) {
      best_k2 = k2;
      best = i;
    }
  }
  const std::size_t i = last_allowed.value_or(best);
  return std::clamp<std::size_t>(i, 2, r.size() - 3);
}

/// theta_out(r_m) - theta_in(r_m) - nodes*pi. Negative below the eigenvalue
/// with `nodes` nodes, positive above it, independent of the matching node.
inline double phase_mismatch(const ShootingSystem& sys, const RadialGrid& grid,
                             const std::vector<double>& r, double energy, int nodes,
                             std::size_t match) {
  const double t0 = grid.uniform_variable(grid.r_min);
  const double h = grid.step();
  auto t_at = [&](std::size_t i) { return t0 + h * static_cast<double>(i); };
  double theta_out = initial_phase(sys.origin(r.front(), energy));
  for (std::size_t i = 0; i < match; ++i) {
    theta_out = advance_phase(grid, sys, energy, t_at(i), t_at(i + 1), theta_out);
  }
  double theta_in = initial_phase(sys.tail(r.back(), energy));
  if (theta_in < 0.0) theta_in += std::numbers::pi;  // start in (0, pi): y1 > 0
  for (std::size_t i = r.size() - 1; i > match; --i) {
    theta_in = advance_phase(grid, sys, energy, t_at(i), t_at(i - 1), theta_in);
  }
  return theta_out - theta_in - nodes * std::numbers::pi;
}

struct Eigenvalue {
  double energy;
  std::size_t match;
  bool converged;
};

/// Bisection on the phase mismatch down to `tolerance`, followed by a
/// bracketed secant polish at a frozen matching node.
inline Eigenvalue solve_eigenvalue(const ShootingSystem& sys, const RadialGrid& grid,
                                   const std::vector<double>& r, EnergyBracket bracket,
                                   int nodes, double tolerance) {
  if (!(bracket.hi > bracket.lo)) throw BracketError("energy bracket must satisfy lo < hi");
  auto mismatch = [&](double e) {
    return phase_mismatch(sys, grid, r, e, nodes, matching_index(sys, r, e));
  };
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double f_lo = mismatch(lo);
  const double f_hi = mismatch(hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw BracketError("no sign change of the matching defect in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] for " + std::to_string(nodes) +
                       " nodes (defects " + std::to_string(f_lo) + ", " +
                       std::to_string(f_hi) + ")");
  }
  std::optional<std::size_t> frozen;
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!frozen && hi - lo < 1e-4 * std::max(1.0, std::abs(mid))) {
      frozen = matching_index(sys, r, mid);
    }
    const std::size_t match = frozen.value_or(matching_index(sys, r, mid));
    if (phase_mismatch(sys, grid, r, mid, nodes, match) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const std::size_t match = frozen.value_or(matching_index(sys, r, 0.5 * (lo + hi)));
  double g_lo = phase_mismatch(sys, grid, r, lo, nodes, match);
  double g_hi = phase_mismatch(sys, grid, r, hi, nodes, match);
  double energy = 0.5 * (lo + hi);
  // Regula falsi with the Illinois modification; the bracket only shrinks.
  int side = 0;
  for (int it = 0; it < 8 && g_lo < 0.0 && g_hi > 0.0; ++it) {
    const double e = hi - g_hi * (hi - lo) / (g_hi - g_lo);
    if (!(e > lo && e < hi)) break;
    energy = e;
    const double g = phase_mismatch(sys, grid, r, e, nodes, match);
    if (g == 0.0) break;
    if (g < 0.0) {
      lo = e;
      g_lo = g;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    } else {
      hi = e;
      g_hi = g;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    }
    if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * std::abs(energy)) break;
  }
  return {energy, match, hi - lo <= tolerance};
}

/// y at every node: outward solution up to `match`, inward solution scaled to
/// agree with it at `match`.
inline std::vector<std::array<double, 2>> eigenvector(const ShootingSystem& sys,
                                                      const RadialGrid& grid,
                                                      const std::vector<double>& r, double energy,
                                                      std::size_t match) {
  constexpr double big = 1e150;
  const double t0 = grid.uniform_variable(grid.r_min);
  const double h = grid.step();
  auto t_at = [&](std::size_t i) { return t0 + h * static_cast<double>(i); };
  std::vector<std::array<double, 2>> y(r.size());
  auto rescale_if_needed = [&](std::size_t from, std::size_t to, std::size_t current) {
    const double size = std::max(std::abs(y[current][0]), std::abs(y[current][1]));
    if (size > big) {
      for (std::size_t k = std::min(from, to); k <= std::max(from, to); ++k) {
        y[k][0] /= size;
        y[k][1] /= size;
      }
    }
  };
  y.front() = sys.origin(r.front(), energy);
  for (std::size_t i = 0; i < match; ++i) {
    y[i + 1] = advance_linear(grid, sys, energy, t_at(i), t_at(i + 1), y[i]);
    rescale_if_needed(0, i + 1, i + 1);
  }
  const auto at_match = y[match];
  std::vector<std::array<double, 2>> in(r.size());
  in.back() = sys.tail(r.back(), energy);
  for (std::size_t i = r.size() - 1; i > match; --i) {
    in[i - 1] = advance_linear(grid, sys, energy, t_at(i), t_at(i - 1), in[i]);
    const double size = std::max(std::abs(in[i - 1][0]), std::abs(in[i - 1][1]));
    if (size > big) {
      for (std::size_t k = i - 1; k < r.size(); ++k) {
        in[k][0] /= size;
        in[k][1] /= size;
      }
    }
  }
  const int c = std::abs(at_match[0]) >= std::abs(at_match[1]) ? 0 : 1;
  const double scale = at_match[c] / in[match][c];
  for (std::size_t i = match + 1; i < r.size(); ++i) {
    y[i][0] = in[i][0] * scale;
    y[i][1] = in[i][1] * scale;
  }
  return y;
}

inline int count_sign_changes(const std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  int changes = 0;
  double last = 0.0;
  for (double x : v) {
    if (std::abs(x) <= 1e-12 * peak) continue;
    if (last != 0.0 && (x > 0.0) != (last > 0.0)) ++changes;
    last = x;
  }
  return changes;
}

inline double coulomb_exponent(int kappa, double strength) {
  const double s2 = static_cast<double>(kappa) * kappa - strength * strength;
  if (!(s2 > 0.0)) throw DomainError("radial solver: need coulomb strength < |kappa|");
  return std::sqrt(s2);
}

inline ShootingSystem dirac_system(const PotentialSpec& potential, int kappa, double m) {
  ShootingSystem sys;
  sys.matrix = [potential, kappa, m](double r, double e) {
    const double vt = potential.time_like(r);
    const double vs = potential.scalar(r);
    return Mat2{-kappa / r, e + m - vt + vs, -(e - m - vt - vs), kappa / r};
  };
  const double lambda = potential.coulomb_strength;
  const double s = coulomb_exponent(kappa, lambda);
  // Leading behaviour P ~ r^s with Q/P fixed by the 1/r terms; both forms of
  // the ratio agree because s^2 = kappa^2 - lambda^2.
  sys.origin = [kappa, lambda, s](double, double) {
    if (kappa < 0) return std::array<double, 2>{1.0, -lambda / (s - kappa)};
    return std::array<double, 2>{lambda / (s + kappa), 1.0};
  };
  sys.tail = [potential, kappa, m](double r, double e) {
    const double vt = potential.time_like(r);
    const double vs = potential.scalar(r);
    const double a = e + m - vt + vs;
    const double k = std::sqrt(std::max(0.0, (m + vs) * (m + vs) - (e - vt) * (e - vt)));
    return std::array<double, 2>{1.0, (kappa / r - k) / a};
  };
  sys.local_k2 = [potential, kappa, m](double r, double e) {
    const double vt = potential.time_like(r);
    const double vs = potential.scalar(r);
    return (m + vs) * (m + vs) - (e - vt) * (e - vt) + kappa * (kappa + 1.0) / (r * r);
  };
  return sys;
}

inline ShootingSystem schrodinger_system(const SchrodingerPotential& potential, int ell, double m,
                                         double length) {
  ShootingSystem sys;
  const double centrifugal = ell * (ell + 1.0);
  auto k2 = [potential, centrifugal, m](double r, double e) {
    return 2.0 * m * (potential.v(r) - (e - m)) + centrifugal / (r * r);
  };
  sys.matrix = [k2, length](double r, double e) {
    return Mat2{0.0, 1.0 / length, length * k2(r, e), 0.0};
  };
  const double c = -m * potential.coulomb_strength / (ell + 1.0);
  sys.origin = [ell, c, length](double r, double) {
    // u = r^{l+1} (1 + c r), divided by r^l
    return std::array<double, 2>{r * (1.0 + c * r), length * ((ell + 1.0) + c * (ell + 2.0) * r)};
  };
  sys.tail = [k2, length](double r, double e) {
    return std::array<double, 2>{1.0, -length * std::sqrt(std::max(0.0, k2(r, e)))};
  };
  sys.local_k2 = k2;
  return sys;
}

/// Smallest radius beyond the last classically allowed region where the WKB
/// decay exponent int k dr has accumulated `decay` (35 ~ a 1e-15 amplitude drop).
inline double tail_radius(const std::function<double(double)>& local_k2, double r_start,
                          double decay = 35.0, double r_cap = 1e8) {
  double r = r_start;
  double integral = 0.0;
  while (r < r_cap) {
    const double r_next = r * 1.001;
    const double k2 = local_k2(0.5 * (r + r_next));
    if (std::isnan(k2) || std::isinf(k2)) return r_next;
    if (k2 <= 0.0) {
      integral = 0.0;
    } else {
      integral += std::sqrt(k2) * (r_next - r);
      if (integral >= decay) return r_next;
    }
    r = r_next;
  }
  throw NumericError("tail_radius: no decaying tail below r = " + std::to_string(r_cap));
}

}  // namespace detail

/// Log grid for the Dirac problem: r_min = 1e-6 times the natural length
/// (1/(lambda m) for Coulomb binding, 1/m otherwise), r_max where the tail of
/// a state at `energy_estimate` has decayed by ~1e-15.
inline RadialGrid dirac_grid(const PotentialSpec& potential, int kappa, double m,
                             double energy_estimate, std::size_t count = 20000) {
  const double length = potential.coulomb_strength > 0.0 ? 1.0 / (potential.coulomb_strength * m)
                                                         : 1.0 / m;
  const auto sys = detail::dirac_system(potential, kappa, m);
  const double r_max = detail::tail_radius(
      [&](double r) { return sys.local_k2(r, energy_estimate); }, length);
  return {1e-6 * length, r_max, count, Spacing::logarithmic};
}

inline RadialGrid schrodinger_grid(const SchrodingerPotential& potential, int ell, double m,
                                   double energy_estimate, double length,
                                   std::size_t count = 20000) {
  const auto sys = detail::schrodinger_system(potential, ell, m, length);
  const double r_max = detail::tail_radius(
      [&](double r) { return sys.local_k2(r, energy_estimate); }, length);
  return {1e-6 * length, r_max, count, Spacing::logarithmic};
}

/// Fourth-order (RK4) integration of the radial Dirac equations across the
/// whole grid at a fixed trial energy, started from the regular power law at
/// r_min (outward) or the local WKB decay at r_max (inward).
inline RadialTrajectory integrate_radial(const PotentialSpec& potential, int kappa, double energy,
                                         double m, const RadialGrid& grid, Direction direction) {
  grid.validate();
  const auto sys = detail::dirac_system(potential, kappa, m);
  const auto r = grid.nodes();
  const std::size_t n = r.size();
  const double t0 = grid.uniform_variable(grid.r_min);
  const double h = grid.step();
  auto t_at = [&](std::size_t i) { return t0 + h * static_cast<double>(i); };
  std::vector<std::array<double, 2>> y(n);
  auto renormalize = [&](std::size_t i) {
    const double size = std::max(std::abs(y[i][0]), std::abs(y[i][1]));
    if (size > 1e150) {
      for (auto& v : y) {
        v[0] /= size;
        v[1] /= size;
      }
    }
  };
  if (direction == Direction::outward) {
    y[0] = sys.origin(r[0], energy);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      y[i + 1] = detail::advance_linear(grid, sys, energy, t_at(i), t_at(i + 1), y[i]);
      renormalize(i + 1);
    }
  } else {
    y[n - 1] = sys.tail(r[n - 1], energy);
    for (std::size_t i = n - 1; i > 0; --i) {
      y[i - 1] = detail::advance_linear(grid, sys, energy, t_at(i), t_at(i - 1), y[i]);
      renormalize(i - 1);
    }
  }
  RadialTrajectory out;
  out.r = r;
  out.f.resize(n);
  out.g.resize(n);
  out.log_derivative_f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.f[i] = y[i][0] / r[i];
    out.g[i] = y[i][1] / r[i];
    const auto a = sys.matrix(r[i], energy);
    // f = P/r: f'/f = P'/P - 1/r
    out.log_derivative_f[i] = (a.a11 + a.a12 * y[i][1] / y[i][0]) - 1.0 / r[i];
  }
  return out;
}

/// Shooting-and-matching eigenvalue search for the radial Dirac equations with
/// arbitrary V0 + beta V1 + V2. `target_nodes` counts the nodes of f
/// (n - ell - 1 for Coulomb-like labelling). The bracket must enclose the
/// eigenvalue with that node count.
inline BoundState find_bound_state(const PotentialSpec& potential, int kappa, double m,
                                   const RadialGrid& grid, EnergyBracket bracket,
                                   int target_nodes) {
  grid.validate();
  if (kappa == 0) throw DomainError("find_bound_state: kappa must be nonzero");
  if (target_nodes < 0) throw DomainError("find_bound_state: target_nodes must be >= 0");
  const auto sys = detail::dirac_system(potential, kappa, m);
  const auto r = grid.nodes();
  const auto eig =
      detail::solve_eigenvalue(sys, grid, r, bracket, target_nodes, 1e-12 * m);
  // The decaying tail condition only means something in a forbidden region.
  const double vt = potential.time_like(r.back());
  const double vs = potential.scalar(r.back());
  if (!((m + vs) * (m + vs) > (eig.energy - vt) * (eig.energy - vt))) {
    throw NumericError("find_bound_state: r_max = " + std::to_string(r.back()) +
                       " is classically allowed at E = " + std::to_string(eig.energy) +
                       "; enlarge the grid");
  }
  const auto y = detail::eigenvector(sys, grid, r, eig.energy, eig.match);

  BoundState out;
  out.energy = eig.energy;
  out.kappa = kappa;
  out.grid = grid;
  out.match_index = eig.match;
  auto& s = out.state;
  s.r = r;
  for (auto* v : {&s.f, &s.g, &s.df, &s.dg}) v->resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto a = sys.matrix(r[i], eig.energy);
    const double dp = a.a11 * y[i][0] + a.a12 * y[i][1];
    const double dq = a.a21 * y[i][0] + a.a22 * y[i][1];
    s.f[i] = y[i][0] / r[i];
    s.g[i] = y[i][1] / r[i];
    s.df[i] = (dp - s.f[i]) / r[i];
    s.dg[i] = (dq - s.g[i]) / r[i];
  }
  const double norm = std::sqrt(norm_on_grid(grid, s));
  scale_state(s, (s.f.front() < 0.0 ? -1.0 : 1.0) / norm);
  out.nodes_f = detail::count_sign_changes(s.f);
  if (out.nodes_f != target_nodes) {
    throw WrongStateError("find_bound_state: converged state has " +
                              std::to_string(out.nodes_f) + " nodes, expected " +
                              std::to_string(target_nodes),
                          target_nodes, out.nodes_f);
  }
  out.converged = eig.converged;

  // Independent residual: finite-difference derivatives instead of the ODE right-hand side.
  RadialState check = s;
  check.df = differentiate(grid, s.r, s.f);
  check.dg = differentiate(grid, s.r, s.g);
  out.residual = dirac_residual(potential, kappa, eig.energy, m, check, 1e-10);
  return out;
}

namespace detail {

template <class Mismatch>
EnergyBracket expand_bracket(const Mismatch& mismatch, double guess, double width, double floor) {
  double lo = guess - width;
  double hi = guess + width;
  double step = width;
  for (int it = 0; it < 80 && mismatch(lo) >= 0.0; ++it) {
    hi = lo;
    step *= 2.0;
    lo = std::max(floor, lo - step);
    if (lo == floor && mismatch(lo) >= 0.0) throw BracketError("expand_bracket: hit lower floor");
  }
  step = width;
  for (int it = 0; it < 80 && mismatch(hi) <= 0.0; ++it) {
    lo = hi;
    step *= 2.0;
    hi += step;
  }
  if (!(mismatch(lo) < 0.0 && mismatch(hi) > 0.0)) {
    throw BracketError("expand_bracket: could not enclose the requested state");
  }
  return {lo, hi};
}

}  // namespace detail

/// Bracket search around `guess` (the phase mismatch is monotone in E, so the
/// interval is widened geometrically until it changes sign), then find_bound_state.
inline BoundState find_bound_state_near(const PotentialSpec& potential, int kappa, double m,
                                        const RadialGrid& grid, double guess, int target_nodes,
                                        double width) {
  const auto sys = detail::dirac_system(potential, kappa, m);
  const auto r = grid.nodes();
  auto mismatch = [&](double e) {
    return detail::phase_mismatch(sys, grid, r, e, target_nodes, detail::matching_index(sys, r, e));
  };
  const auto bracket = detail::expand_bracket(mismatch, guess, width, -m + 1e-9 * m);
  return find_bound_state(potential, kappa, m, grid, bracket, target_nodes);
}

/// Radial Schrodinger eigenproblem solved with the same shooting machinery.
/// `E_bracket` refers to the total energy m + epsilon.
inline SchrodingerState solve_schrodinger_radial(const SchrodingerPotential& potential, int ell,
                                                 double m, const RadialGrid& grid,
                                                 EnergyBracket bracket, int target_nodes) {
  grid.validate();
  if (ell < 0) throw DomainError("solve_schrodinger_radial: ell must be >= 0");
  if (target_nodes < 0) throw DomainError("solve_schrodinger_radial: target_nodes must be >= 0");
  if (!potential.v) throw DomainError("solve_schrodinger_radial: potential is empty");
  const double eps_scale =
      std::max({std::abs(bracket.lo - m), std::abs(bracket.hi - m), 1e-300});
  const double length = 1.0 / std::sqrt(2.0 * m * eps_scale);
  const auto sys = detail::schrodinger_system(potential, ell, m, length);
  const auto r = grid.nodes();
  const auto eig = detail::solve_eigenvalue(sys, grid, r, bracket, target_nodes,
                                            1e-13 * std::max(m, eps_scale));
  if (!(sys.local_k2(r.back(), eig.energy) > 0.0)) {
    throw NumericError("solve_schrodinger_radial: r_max = " + std::to_string(r.back()) +
                       " is classically allowed at E = " + std::to_string(eig.energy) +
                       "; enlarge the grid");
  }
  const auto y = detail::eigenvector(sys, grid, r, eig.energy, eig.match);

  SchrodingerState out;
  out.energy = eig.energy;
  out.ell = ell;
  out.grid = grid;
  out.r = r;
  out.u.resize(r.size());
  out.du.resize(r.size());
  std::vector<double> weight(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.u[i] = y[i][0];
    out.du[i] = y[i][1] / length;
    weight[i] = out.u[i] * out.u[i];
  }
  const double norm = std::sqrt(integrate_on_grid(grid, r, weight));
  const double sign = out.u.front() < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.u[i] *= sign / norm;
    out.du[i] *= sign / norm;
  }
  out.nodes = detail::count_sign_changes(out.u);
  if (out.nodes != target_nodes) {
    throw WrongStateError("solve_schrodinger_radial: converged state has " +
                              std::to_string(out.nodes) + " nodes, expected " +
                              std::to_string(target_nodes),
                          target_nodes, out.nodes);
  }
  out.converged = eig.converged;
  // u'' by finite differences against 2m (V_eff - epsilon) u.
  const auto d2u = differentiate(grid, r, out.du);
  double peak = 0.0;
  for (double x : out.u) peak = std::max(peak, std::abs(x));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(out.u[i]) < 1e-10 * peak) continue;
    const double k2 = sys.local_k2(r[i], eig.energy);
    const double scale = std::abs(out.u[i]) *
                         (std::abs(k2) + 2.0 * m * std::abs(eig.energy - m) +
                          2.0 * m * std::abs(potential.v(r[i])) + (ell + 1.0) * (ell + 1.0) / (r[i] * r[i]));
    out.residual = std::max(out.residual, std::abs(d2u[i] - k2 * out.u[i]) / scale);
  }
  return out;
}

inline SchrodingerState solve_schrodinger_radial_near(const SchrodingerPotential& potential,
                                                      int ell, double m, const RadialGrid& grid,
                                                      double guess, int target_nodes,
                                                      double width) {
  const double eps_scale = std::max(std::abs(guess - m), width);
  const double length = 1.0 / std::sqrt(2.0 * m * eps_scale);
  const auto sys = detail::schrodinger_system(potential, ell, m, length);
  const auto r = grid.nodes();
  auto mismatch = [&](double e) {
    return detail::phase_mismatch(sys, grid, r, e, target_nodes, detail::matching_index(sys, r, e));
  };
  const double floor = -std::numeric_limits<double>::max();
  const auto bracket = detail::expand_bracket(mismatch, guess, width, floor);
  return solve_schrodinger_radial(potential, ell, m, grid, bracket, target_nodes);
}

struct ShiftRow {
  double mu = 0.0;
  double nu = 0.0;
  double energy = 0.0;
  double delta_e = 0.0;
  /// delta_e / mu
  double slope = 0.0;
  /// 2 slope(mu) - slope(2 mu): first Richardson step for a halving sequence; NaN in the first row.
  double richardson = 0.0;
};

/// Numerical confinement shifts of the Coulomb level (n, kappa) with the
/// time-like slope tuned to the kappa0 reference, compared with the
/// first-order law.
struct ShiftStudy {
  int n = 1;
  int kappa = -1;
  int kappa0 = -1;
  double lambda = 0.0;
  double mass = 1.0;
  double reference_energy = 0.0;
  std::vector<ShiftRow> rows;
  /// Richardson-extrapolated d E/d mu at mu = 0.
  double limit_slope = 0.0;
  /// first_order_shift(...).total / mu
  double predicted_slope = 0.0;
};

/// mu_sequence must be strictly positive (confining scalar slope) and
/// decreasing by a constant factor; Richardson steps assume halvings unless
/// the sequence says otherwise.
inline ShiftStudy shift_convergence_study(int n, int kappa, int kappa0, double lambda, double m,
                                          const std::vector<double>& mu_sequence,
                                          std::size_t count = 20000) {
  if (mu_sequence.size() < 2) throw DomainError("shift_convergence_study: need >= 2 mu values");
  for (double mu : mu_sequence) {
    if (!(mu > 0.0)) throw DomainError("shift_convergence_study: mu values must be positive");
  }
  const double q = mu_sequence[0] / mu_sequence[1];
  for (std::size_t i = 1; i < mu_sequence.size(); ++i) {
    if (std::abs(mu_sequence[i - 1] / mu_sequence[i] - q) > 1e-9 * q || !(q > 1.0)) {
      throw DomainError("shift_convergence_study: mu_sequence must be geometric and decreasing");
    }
  }
  const auto level = HydrogenicState::make(n, kappa);
  const int nodes = n - level.angular.ell - 1;
  ShiftStudy out;
  out.n = n;
  out.kappa = kappa;
  out.kappa0 = kappa0;
  out.lambda = lambda;
  out.mass = m;
  out.predicted_slope = first_order_shift(n, kappa, kappa0, lambda, 1.0, m).total;

  const double e0 = dirac_coulomb_energy(n, kappa, lambda, m);
  const auto coulomb = PotentialSpec::coulomb(lambda);
  // One grid for every mu so that discretization errors cancel in the differences.
  const RadialGrid grid = dirac_grid(coulomb, kappa, m, e0, count);
  const double width = 1e-6 * lambda * lambda * m;
  out.reference_energy = find_bound_state_near(coulomb, kappa, m, grid, e0, nodes, width).energy;
  for (double mu : mu_sequence) {
    ShiftRow row;
    row.mu = mu;
    row.nu = nu_fine_tuned(mu, lambda, kappa0);
    const auto potential = PotentialSpec::coulomb_linear(lambda, mu, row.nu);
    const double guess = out.reference_energy + mu * out.predicted_slope;
    const double w = std::max(width, 0.1 * mu * std::abs(out.predicted_slope));
    row.energy = find_bound_state_near(potential, kappa, m, grid, guess, nodes, w).energy;
    row.delta_e = row.energy - out.reference_energy;
    row.slope = row.delta_e / mu;
    row.richardson = out.rows.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : (q * row.slope - out.rows.back().slope) / (q - 1.0);
    out.rows.push_back(row);
  }
  out.limit_slope = out.rows.back().richardson;
  return out;
}

}  // namespace confdirac
