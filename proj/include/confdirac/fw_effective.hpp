#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "confdirac/coulomb_reference.hpp"
#include "confdirac/errors.hpp"
#include "confdirac/quantum_numbers.hpp"
#include "confdirac/special_functions.hpp"

namespace confdirac {

/// First-order confinement shift of a Coulomb level and its three operator pieces:
/// mu [ lambda^2 r/(2 kappa0^2) - (sigma.L + 1)/(2 m^2 r) - {p^2, r}/(4 m^2) ].
struct EffectiveShift {
  double total = 0.0;
  double term_linear = 0.0;
  double term_spin_orbit = 0.0;
  double term_kinetic = 0.0;
};

namespace detail {

inline void require_shift_args(int n, int kappa, int kappa0, double lambda, const char* where) {
  if (n < 1) throw DomainError(std::string(where) + ": n must be >= 1");
  if (kappa == 0 || std::abs(kappa) > n) {
    throw DomainError(std::string(where) + ": need 0 < |kappa| <= n");
  }
  if (kappa0 == 0) throw DomainError(std::string(where) + ": kappa0 must be nonzero");
  if (!(lambda > 0.0)) throw DomainError(std::string(where) + ": lambda must be positive");
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw NumericError("integer overflow in exact scan");
  return out;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw NumericError("integer overflow in exact scan");
  return out;
}

}  // namespace detail

/// Closed form (mu lambda/4m) [(3n^2 - kappa(kappa+1))/kappa0^2 - (n^2 + kappa(kappa-1))/n^2]
/// with each piece written as its own rational function of n and kappa.
inline EffectiveShift first_order_shift(int n, int kappa, int kappa0, double lambda, double mu,
                                        double m) {
  detail::require_shift_args(n, kappa, kappa0, lambda, "first_order_shift");
  if (!(m > 0.0)) throw DomainError("first_order_shift: mass must be positive");
  const double nn = static_cast<double>(n) * n;
  const double k = kappa;
  const double k02 = static_cast<double>(kappa0) * kappa0;
  const double scale = mu * lambda / (4.0 * m);
  EffectiveShift s;
  s.total = scale * ((3.0 * nn - k * (k + 1.0)) / k02 - (nn + k * (k - 1.0)) / nn);
  s.term_linear = scale * (3.0 * nn - k * (k + 1.0)) / k02;
  s.term_spin_orbit = scale * 2.0 * k / nn;
  s.term_kinetic = -scale * (nn + k * (k + 1.0)) / nn;
  return s;
}

/// The same shift built from Coulomb expectation values: <r>, <1/r>, the
/// (sigma.L + 1) eigenvalue on the upper component and <{p^2, r}>.
inline EffectiveShift shift_terms_from_expectations(int n, int kappa, int kappa0, double lambda,
                                                    double mu, double m) {
  detail::require_shift_args(n, kappa, kappa0, lambda, "shift_from_expectations");
  if (!(m > 0.0)) throw DomainError("shift_from_expectations: mass must be positive");
  const double k02 = static_cast<double>(kappa0) * kappa0;
  const double so = sigma_dot_L_plus_one_eigenvalue(kappa, Component::upper);
  EffectiveShift s;
  s.term_linear = mu * lambda * lambda * expectation_r(n, kappa, lambda, m) / (2.0 * k02);
  s.term_spin_orbit = -mu * so * expectation_inv_r(n, lambda, m) / (2.0 * m * m);
  s.term_kinetic = -mu * expectation_anticomm_p2_r(n, kappa, lambda, m) / (4.0 * m * m);
  s.total = s.term_linear + s.term_spin_orbit + s.term_kinetic;
  return s;
}

inline double shift_from_expectations(int n, int kappa, int kappa0, double lambda, double mu,
                                      double m) {
  return shift_terms_from_expectations(n, kappa, kappa0, lambda, mu, m).total;
}

struct ReferenceCancellation {
  double energy = 0.0;
  /// (n0 - kappa0)(n0 + kappa0)(3 n0^2 + kappa0(kappa0 - 1)), exact.
  std::int64_t numerator = 0;
  /// false for kappa0 = +n0, which has no bound state.
  bool physical = true;
};

/// Shift of the reference level itself, kappa = kappa0 with |kappa0| = n0.
inline ReferenceCancellation reference_cancellation(int n0, int kappa0, double lambda, double mu,
                                                    double m) {
  if (n0 < 1) throw DomainError("reference_cancellation: n0 must be >= 1");
  if (std::abs(kappa0) != n0) throw DomainError("reference_cancellation: need |kappa0| = n0");
  using detail::checked_add;
  using detail::checked_mul;
  const std::int64_t n = n0;
  const std::int64_t k = kappa0;
  ReferenceCancellation out;
  out.numerator = checked_mul(checked_mul(n - k, n + k),
                              checked_add(checked_mul(3 * n, n), checked_mul(k, k - 1)));
  out.physical = kappa0 < 0;
  out.energy = mu * lambda / (4.0 * m) * static_cast<double>(out.numerator) /
               (static_cast<double>(k * k) * static_cast<double>(n * n));
  return out;
}

inline ReferenceCancellation reference_cancellation(int n0, double lambda, double mu, double m) {
  return reference_cancellation(n0, -n0, lambda, mu, m);
}

struct ScanSolution {
  int n;
  int kappa;
  int N;
  bool physical;

  friend bool operator==(const ScanSolution&, const ScanSolution&) = default;
};

/// Integer solutions of 3n^2 - kappa(kappa+1) = N^2 (n^2 + kappa(kappa-1)).
struct UniquenessReport {
  int n_max = 0;
  int N_max = 0;
  std::vector<ScanSolution> solutions;
  std::vector<ScanSolution> physical_solutions;
  std::int64_t points_checked = 0;
  /// Points with N >= 2 where (N^2-3)n^2 > 0 and kappa((N^2-1) - (N^2+1)kappa) < 0 failed.
  std::int64_t sign_violations = 0;

  /// True when the solutions are exactly (n, -n, 1) and (n, +n, 1) for every n
  /// and the sign opposition held at every N >= 2 point.
  bool matches_claim() const {
    if (sign_violations != 0) return false;
    if (solutions.size() != 2 * static_cast<std::size_t>(n_max)) return false;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      const int n = static_cast<int>(i / 2) + 1;
      const ScanSolution expected{n, i % 2 == 0 ? -n : n, 1, i % 2 == 0};
      if (!(solutions[i] == expected)) return false;
    }
    return physical_solutions.size() == static_cast<std::size_t>(n_max);
  }
};

/// Exhaustive scan over 1 <= n <= n_max, 0 < |kappa| <= n, 1 <= N <= N_max in
/// overflow-checked 64-bit arithmetic. Solutions are sorted by (n, kappa, N).
inline UniquenessReport preservation_scan(int n_max, int N_max) {
  if (n_max < 1) throw DomainError("preservation_scan: n_max must be >= 1");
  if (N_max < 2) throw DomainError("preservation_scan: N_max must be >= 2");
  using detail::checked_add;
  using detail::checked_mul;
  UniquenessReport report;
  report.n_max = n_max;
  report.N_max = N_max;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::int64_t n2 = checked_mul(n, n);
    for (std::int64_t k = -n; k <= n; ++k) {
      if (k == 0) continue;
      const std::int64_t lhs = checked_add(checked_mul(3, n2), -checked_mul(k, k + 1));
      const std::int64_t denominator = checked_add(n2, checked_mul(k, k - 1));
      for (std::int64_t N = 1; N <= N_max; ++N) {
        const std::int64_t N2 = checked_mul(N, N);
        ++report.points_checked;
        if (lhs == checked_mul(N2, denominator)) {
          const ScanSolution s{static_cast<int>(n), static_cast<int>(k), static_cast<int>(N),
                               k == -n};
          report.solutions.push_back(s);
          if (s.physical) report.physical_solutions.push_back(s);
        }
        if (N >= 2) {
          const std::int64_t left = checked_mul(N2 - 3, n2);
          const std::int64_t right = checked_mul(k, checked_add(N2 - 1, -checked_mul(N2 + 1, k)));
          if (!(left > 0 && right < 0)) ++report.sign_violations;
        }
      }
    }
  }
  return report;
}

/// Leading pieces of the effective antiparticle Hamiltonian
///   m + p^2/2m + lambda/r + (2 mu - mu lambda^2/(2 kappa0^2)) r - mu {p^2, r}/(4 m^2).
struct AntiparticleEffective {
  double mass = 1.0;
  /// Coefficient of +lambda/r (repulsive for antiparticles).
  double coulomb = 0.0;
  double linear_slope = 0.0;
  double leading_slope = 0.0;
  /// Coefficient c of c {p^2, r}.
  double kinetic_coefficient = 0.0;
  /// Bound states require a confining slope.
  bool confining = false;
};

inline AntiparticleEffective antiparticle_effective(double mu, double lambda, int kappa0, double m) {
  if (kappa0 == 0) throw DomainError("antiparticle_effective: kappa0 must be nonzero");
  if (!(m > 0.0)) throw DomainError("antiparticle_effective: mass must be positive");
  if (lambda < 0.0) throw DomainError("antiparticle_effective: lambda must be >= 0");
  const double k02 = static_cast<double>(kappa0) * kappa0;
  AntiparticleEffective out;
  out.mass = m;
  out.coulomb = lambda;
  out.leading_slope = 2.0 * mu;
  out.linear_slope = 2.0 * mu - mu * lambda * lambda / (2.0 * k02);
  out.kinetic_coefficient = -mu / (4.0 * m * m);
  out.confining = mu > 0.0;
  return out;
}

/// s-wave levels of p^2/2m + 2 mu r: E_k = m + |a_k| ((2 mu)^2/(2m))^{1/3}, a_k the Airy zeros.
inline std::vector<double> antiparticle_spectrum_airy(double mu, double m, int count) {
  if (!(mu > 0.0)) throw DomainError("antiparticle_spectrum_airy: mu must be positive");
  if (!(m > 0.0)) throw DomainError("antiparticle_spectrum_airy: mass must be positive");
  const auto zeros = airy_negative_zeros(count);
  const double scale = std::cbrt(4.0 * mu * mu / (2.0 * m));
  std::vector<double> out;
  out.reserve(zeros.size());
  for (double a : zeros) out.push_back(m + std::abs(a) * scale);
  return out;
}

}  // namespace confdirac
