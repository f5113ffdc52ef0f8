#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "confdirac/errors.hpp"

namespace confdirac {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule, nodes on [0, 1] of the half interval.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod_segment(const F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kronrod_weights[i] * pair;
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi].
///
/// An infinite upper limit is mapped onto [0, 1) through x = lo + u/(1-u).
/// Subdivision stops once the summed error estimate is below
/// max(tol, rel_tol*|value|). Exceeding `max_segments` raises
/// ConvergenceError carrying the partial result.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double lo, double hi, double tol,
                                    double rel_tol = 0.0, std::size_t max_segments = 4000) {
  if (!(hi > lo)) {
    if (hi == lo) return {0.0, 0.0, 1};
    throw DomainError("integrate_adaptive: need hi >= lo");
  }
  long evaluations = 0;
  const bool infinite = std::isinf(hi);
  auto integrand = [&](double t) {
    ++evaluations;
    if (!infinite) return f(t);
    const double one_minus = 1.0 - t;
    const double value = f(lo + t / one_minus) / (one_minus * one_minus);
    return std::isfinite(value) ? value : 0.0;
  };
  const double a = infinite ? 0.0 : lo;
  const double b = infinite ? 1.0 : hi;

  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod_segment(integrand, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);

  const double floor = 50.0 * std::numeric_limits<double>::epsilon();
  while (error > std::max({tol, rel_tol * std::abs(total), floor * std::abs(total)})) {
    if (heap.size() >= max_segments) {
      throw ConvergenceError("integrate_adaptive: no convergence after " +
                                 std::to_string(max_segments) + " segments",
                             total, error);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw ConvergenceError("integrate_adaptive: segment cannot be subdivided further", total,
                             error);
    }
    heap.pop();
    const auto left = detail::kronrod_segment(integrand, worst.lo, mid);
    const auto right = detail::kronrod_segment(integrand, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to drop the rounding drift of the incremental updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error, evaluations};
}

/// Gamma function for x > 0 (Lanczos, g = 7, nine coefficients).
inline double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma_fn: argument must be positive and finite");
  }
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double xm = x - 1.0;
  double sum = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) sum += p[i] / (xm + static_cast<double>(i));
  const double t = xm + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm + 0.5) * std::exp(-t) * sum;
}

/// Kummer's confluent hypergeometric function U(a, b, z) for a > 0, z > 0.
///
/// Uses U = z^{-a}/Gamma(a) * int_0^inf e^{-s} s^{a-1} (1 + s/z)^{b-a-1} ds,
/// i.e. the standard integral representation with t = s/z, which keeps the
/// integrand O(1) even when z is large.
inline double kummer_U(double a, double b, double z) {
  if (!(a > 0.0) || !(z > 0.0)) throw DomainError("kummer_U: need a > 0 and z > 0");
  const double c = b - a - 1.0;
  auto integrand = [=](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(-s + (a - 1.0) * std::log(s) + c * std::log1p(s / z));
  };
  const auto q = integrate_adaptive(integrand, 0.0, std::numeric_limits<double>::infinity(),
                                    0.0, 1e-13);
  return std::exp(-a * std::log(z)) * q.value / gamma_fn(a);
}

namespace detail {

// Maclaurin series, |x| <= 8. Long double absorbs the cancellation between the two series.
inline double airy_ai_series(double x) {
  constexpr long double ai0 = 0.355028053887817239260063186004183L;
  constexpr long double mdai0 = 0.258819403792806798405183560189203L;
  const long double x3 = static_cast<long double>(x) * x * x;
  long double f_term = 1.0L, g_term = x;
  long double f_sum = f_term, g_sum = g_term;
  for (int k = 1; k < 200; ++k) {
    f_term *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    g_term *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f_sum += f_term;
    g_sum += g_term;
    if (std::abs(f_term) + std::abs(g_term) < 1e-24L * (std::abs(f_sum) + std::abs(g_sum))) {
      break;
    }
  }
  return static_cast<double>(ai0 * f_sum - mdai0 * g_sum);
}

// Asymptotic coefficients u_k of the Airy expansions.
inline double airy_u(int k) {
  double u = 1.0;
  for (int i = 1; i <= k; ++i) {
    u *= (6.0 * i - 5.0) * (6.0 * i - 3.0) * (6.0 * i - 1.0) / ((2.0 * i - 1.0) * 216.0 * i);
  }
  return u;
}

// Ai(-y) for y > 8 from the oscillatory asymptotic expansion.
inline double airy_ai_negative_asymptotic(double y) {
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  double p = 0.0, q = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    const double term = airy_u(k) * std::pow(zeta, -k);
    if (term > last) break;  // asymptotic series: stop at the smallest term
    last = term;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (term < 1e-18) break;
  }
  const double phase = zeta - std::numbers::pi / 4.0;
  return (std::cos(phase) * p + std::sin(phase) * q) /
         (std::sqrt(std::numbers::pi) * std::pow(y, 0.25));
}

inline double airy_ai_positive_asymptotic(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    const double term = airy_u(k) * std::pow(zeta, -k);
    if (term > last) break;
    last = term;
    sum += (k % 2 == 0 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::exp(-zeta) * sum / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25));
}

}  // namespace detail

/// Airy function Ai(x): power series on |x| <= 8, asymptotic expansions beyond.
inline double airy_ai(double x) {
  if (std::abs(x) <= 8.0) return detail::airy_ai_series(x);
  if (x < 0.0) return detail::airy_ai_negative_asymptotic(-x);
  return detail::airy_ai_positive_asymptotic(x);
}

/// First k zeros of Ai on the negative axis (returned as negative numbers), 1 <= k <= 20.
inline std::vector<double> airy_negative_zeros(int k) {
  if (k < 1 || k > 20) throw DomainError("airy_negative_zeros: need 1 <= k <= 20");
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    // Leading asymptotic estimate, accurate to better than 1e-3 even for j = 1.
    const double t = 3.0 * std::numbers::pi * (4.0 * j - 1.0) / 8.0;
    const double t2 = 1.0 / (t * t);
    const double guess = -std::pow(t, 2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * 5.0 / 36.0));
    double lo = guess - 0.1;
    double hi = guess + 0.1;
    double f_lo = airy_ai(lo);
    if (f_lo * airy_ai(hi) > 0.0) {
      throw NumericError("airy_negative_zeros: failed to bracket zero " + std::to_string(j));
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::abs(lo); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = airy_ai(mid);
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(0.5 * (lo + hi));
  }
  return zeros;
}

}  // namespace confdirac
