#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "confdirac/errors.hpp"

namespace confdirac {

/// Which spin-angular function of the bispinor an operator acts on:
/// the upper component carries chi_{kappa}, the lower one chi_{-kappa}.
enum class Component { upper, lower };

struct OrbitalTotal {
  int ell;
  int j_twice;

  friend bool operator==(const OrbitalTotal&, const OrbitalTotal&) = default;
};

/// Dirac angular quantum numbers. Half-integers j and M are stored doubled.
/// M never enters a matrix element; it is carried so that a state is fully labelled.
struct AngularState {
  int kappa = -1;
  int ell = 0;
  int j_twice = 1;
  int magnetic_twice = 1;

  static AngularState from_kappa(int kappa, int magnetic_twice);
  static AngularState from_kappa(int kappa) { return from_kappa(kappa, std::abs(kappa) * 2 - 1); }

  friend bool operator==(const AngularState&, const AngularState&) = default;
};

/// kappa = -(ell+1) for j = ell + 1/2 and kappa = +ell for j = ell - 1/2.
inline int kappa_from_lj(int ell, int j_twice) {
  if (ell < 0 || j_twice < 1) {
    throw DomainError("kappa_from_lj: need ell >= 0 and 2j >= 1");
  }
  if (j_twice == 2 * ell + 1) return -(ell + 1);
  if (j_twice == 2 * ell - 1) return ell;
  throw DomainError("kappa_from_lj: 2j = " + std::to_string(j_twice) +
                    " is not 2*ell +- 1 for ell = " + std::to_string(ell));
}

/// ell = |kappa + 1/2| - 1/2, j = |kappa| - 1/2.
inline OrbitalTotal decompose_kappa(int kappa) {
  if (kappa == 0) throw DomainError("decompose_kappa: kappa must be nonzero");
  // |2 kappa + 1| - 1 = 2 ell
  const int ell = (std::abs(2 * kappa + 1) - 1) / 2;
  return {ell, 2 * std::abs(kappa) - 1};
}

inline AngularState AngularState::from_kappa(int kappa, int magnetic_twice) {
  const auto lj = decompose_kappa(kappa);
  if (std::abs(magnetic_twice) > lj.j_twice || (magnetic_twice - lj.j_twice) % 2 != 0) {
    throw DomainError("AngularState: 2M must satisfy |2M| <= 2j with the parity of 2j");
  }
  return {kappa, lj.ell, lj.j_twice, magnetic_twice};
}

/// Eigenvalue of (sigma.L + 1) on chi_{kappa} (upper) or chi_{-kappa} (lower).
/// sigma.L itself is -kappa-1 on the upper component, so S states give zero.
inline int sigma_dot_L_plus_one_eigenvalue(int kappa, Component which) {
  if (kappa == 0) throw DomainError("sigma_dot_L_plus_one_eigenvalue: kappa must be nonzero");
  return which == Component::upper ? -kappa : kappa;
}

/// All kappa allowed for principal quantum number n: -n, ..., n-1 without zero.
inline std::vector<int> enumerate_kappa(int n) {
  if (n < 1) throw DomainError("enumerate_kappa: n must be >= 1");
  std::vector<int> out;
  out.reserve(2 * static_cast<std::size_t>(n) - 1);
  for (int k = -n; k <= n - 1; ++k) {
    if (k != 0) out.push_back(k);
  }
  return out;
}

}  // namespace confdirac
