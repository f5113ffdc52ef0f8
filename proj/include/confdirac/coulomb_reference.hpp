#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "confdirac/errors.hpp"
#include "confdirac/quantum_numbers.hpp"

namespace confdirac {

/// Physical parameters in natural units (hbar = c = 1).
///
/// `mass` is the particle mass m, `lambda` the Coulomb coupling of -lambda/r,
/// `mu` the slope of the scalar (beta-coupled) confinement mu*r and `nu` the
/// slope of the time-like confinement nu*r.
struct CouplingSet {
  double mass = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// A Coulomb reference level |n kappa>, with kappa in {-n, ..., n-1} \ {0}.
struct HydrogenicState {
  int n = 1;
  AngularState angular{};

  static HydrogenicState make(int n, int kappa) {
    if (n < 1) throw DomainError("HydrogenicState: n must be >= 1");
    if (kappa == 0 || kappa < -n || kappa > n - 1) {
      throw DomainError("HydrogenicState: kappa = " + std::to_string(kappa) +
                        " not allowed for n = " + std::to_string(n));
    }
    return {n, AngularState::from_kappa(kappa)};
  }
};

namespace detail {

inline void require_level(int n, int kappa, const char* where) {
  if (n < 1) throw DomainError(std::string(where) + ": n must be >= 1");
  if (kappa == 0 || std::abs(kappa) > n) {
    throw DomainError(std::string(where) + ": need 0 < |kappa| <= n");
  }
}

}  // namespace detail

/// Sommerfeld fine-structure formula for the Dirac-Coulomb level (n, kappa).
inline double dirac_coulomb_energy(int n, int kappa, double lambda, double m) {
  detail::require_level(n, kappa, "dirac_coulomb_energy");
  if (kappa == n) throw DomainError("dirac_coulomb_energy: kappa = +n does not exist");
  const double k = std::abs(kappa);
  if (lambda < 0.0 || lambda >= k) {
    throw DomainError("dirac_coulomb_energy: need 0 <= lambda < |kappa|");
  }
  if (n == std::abs(kappa)) {
    // Nodeless level: the closed form m*sqrt(1 - lambda^2/kappa^2).
    return m * std::sqrt(1.0 - lambda * lambda / (k * k));
  }
  const double ratio = lambda / (n - k + std::sqrt(k * k - lambda * lambda));
  return m / std::sqrt(1.0 + ratio * ratio);
}

/// m - lambda^2 m / (2 n^2)
inline double schrodinger_energy(int n, double lambda, double m) {
  if (n < 1) throw DomainError("schrodinger_energy: n must be >= 1");
  return m - lambda * lambda * m / (2.0 * n * n);
}

/// <r> in the Schrodinger-Coulomb level; depends on kappa only through ell(ell+1) = kappa(kappa+1).
inline double expectation_r(int n, int kappa, double lambda, double m) {
  detail::require_level(n, kappa, "expectation_r");
  if (!(lambda > 0.0)) throw DomainError("expectation_r: lambda must be positive (bound state)");
  return (3.0 * n * n - static_cast<double>(kappa) * (kappa + 1)) / (2.0 * lambda * m);
}

inline double expectation_inv_r(int n, double lambda, double m) {
  if (n < 1) throw DomainError("expectation_inv_r: n must be >= 1");
  return lambda * m / (static_cast<double>(n) * n);
}

/// <{p^2, r}> = 4m (E_b <r> + lambda) on a bound Schrodinger-Coulomb level.
///
/// Follows from p^2 |nl> = 2m (E_b + lambda/r) |nl> with E_b = -lambda^2 m/(2n^2),
/// applied once to the bra and once to the ket.
inline double expectation_anticomm_p2_r(int n, int kappa, double lambda, double m) {
  const double binding = -lambda * lambda * m / (2.0 * n * n);
  return 4.0 * m * (binding * expectation_r(n, kappa, lambda, m) + lambda);
}

/// Generalised Laguerre polynomial L_k^{(alpha)}(x) by upward recurrence.
inline double associated_laguerre(int k, double alpha, double x) {
  if (k < 0) throw DomainError("associated_laguerre: degree must be >= 0");
  double prev = 1.0;
  if (k == 0) return prev;
  double curr = 1.0 + alpha - x;
  for (int i = 1; i < k; ++i) {
    const double next = ((2.0 * i + 1.0 + alpha - x) * curr - (i + alpha) * prev) / (i + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Normalized hydrogenic radial function R_{n ell}(r) with Bohr scale 1/(lambda m):
/// int_0^inf R^2 r^2 dr = 1.
inline double radial_wavefunction(int n, int ell, double lambda, double m, double r) {
  if (n < 1 || ell < 0 || ell >= n) throw DomainError("radial_wavefunction: need 0 <= ell < n");
  if (!(lambda > 0.0) || !(m > 0.0)) {
    throw DomainError("radial_wavefunction: lambda and m must be positive");
  }
  if (r < 0.0) throw DomainError("radial_wavefunction: r must be >= 0");
  const double scale = 2.0 * lambda * m / n;
  // (n-ell-1)!/(n+ell)! as a product of 2 ell + 1 factors.
  double factorial_ratio = 1.0;
  for (int i = n - ell; i <= n + ell; ++i) factorial_ratio /= i;
  const double norm = std::sqrt(scale * scale * scale * factorial_ratio / (2.0 * n));
  const double rho = scale * r;
  return norm * std::pow(rho, ell) * std::exp(-0.5 * rho) *
         associated_laguerre(n - ell - 1, 2.0 * ell + 1.0, rho);
}

}  // namespace confdirac
