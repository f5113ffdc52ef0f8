#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "confdirac/coulomb_reference.hpp"
#include "confdirac/errors.hpp"
#include "confdirac/radial_equations.hpp"
#include "confdirac/special_functions.hpp"

namespace confdirac {

namespace detail {

inline void require_subcritical(double lambda, int kappa0, const char* where) {
  if (kappa0 == 0) throw DomainError(std::string(where) + ": kappa0 must be nonzero");
  if (std::abs(lambda) >= std::abs(kappa0)) {
    throw DomainError(std::string(where) + ": need |lambda| < |kappa0|");
  }
}

}  // namespace detail

/// Time-like slope that preserves the nodeless level: nu = -mu sqrt(1 - lambda^2/kappa0^2).
inline double nu_fine_tuned(double mu, double lambda, int kappa0) {
  detail::require_subcritical(lambda, kappa0, "nu_fine_tuned");
  return -mu * std::sqrt(1.0 - lambda * lambda / (static_cast<double>(kappa0) * kappa0));
}

/// nu_fine_tuned expanded through second order in lambda: -mu + mu lambda^2/(2 kappa0^2).
inline double nu_expanded(double mu, double lambda, int kappa0) {
  detail::require_subcritical(lambda, kappa0, "nu_expanded");
  return -mu + mu * lambda * lambda / (2.0 * kappa0 * kappa0);
}

/// Value and r-derivative of the closed-form radial spinor at one radius.
struct SpinorSample {
  double f;
  double g;
  double df;
  double dg;
};

/// Closed-form eigenstate of -lambda/r + beta mu r + nu r with n0 = -kappa0:
///
///   f = N r^{b-1} exp(-a r - alpha2 r^2 / 2),   g = -gamma f,
///
/// with b = sqrt(kappa0^2 - lambda^2), a = m lambda/|kappa0|,
/// alpha2 = mu lambda/|kappa0| and gamma = (|kappa0| - b)/lambda.
/// The energy is the Dirac-Coulomb value m sqrt(1 - lambda^2/kappa0^2).
struct AnsatzParams {
  CouplingSet couplings;
  int kappa0 = -1;
  double b = 1.0;
  double a = 0.0;
  double alpha2 = 0.0;
  double gamma = 0.0;
  double energy = 0.0;
  double norm = 0.0;

  double nu() const { return couplings.nu; }
  bool pure_coulomb() const { return couplings.mu == 0.0; }

  /// Same wave function, different time-like slope. Used to probe how
  /// sharply the radial equations respond to leaving the fine-tuned nu.
  AnsatzParams with_nu(double nu) const {
    AnsatzParams copy = *this;
    copy.couplings.nu = nu;
    return copy;
  }

  /// gamma as given by each of the six closed-form relations, in the order
  /// a/(m+E), (|k0|-b)/lambda, alpha2/(mu-nu), (m-E)/a, lambda/(|k0|+b), (mu+nu)/alpha2.
  /// The two confinement relations are NaN in the pure Coulomb limit.
  std::array<double, 6> gamma_expressions() const {
    const double m = couplings.mass;
    const double lam = couplings.lambda;
    const double mu = couplings.mu;
    const double nu = couplings.nu;
    const double k = std::abs(kappa0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {a / (m + energy),
            (k - b) / lam,
            pure_coulomb() ? nan : alpha2 / (mu - nu),
            (m - energy) / a,
            lam / (k + b),
            pure_coulomb() ? nan : (mu + nu) / alpha2};
  }

  /// |expression - gamma| / gamma for each of gamma_expressions().
  std::array<double, 6> consistency_deviations() const {
    auto e = gamma_expressions();
    for (auto& x : e) x = std::abs(x - gamma) / gamma;
    return e;
  }
};

/// Closed-form normalization constant N for given exponent data.
inline double ansatz_norm(double a, double b, double alpha2, double gamma) {
  if (alpha2 == 0.0) {
    // int r^{2b} e^{-2ar} dr = Gamma(2b+1)/(2a)^{2b+1}
    const double log_integral = std::log(gamma_fn(2.0 * b + 1.0)) - (2.0 * b + 1.0) * std::log(2.0 * a);
    return std::exp(-0.5 * (std::log1p(gamma * gamma) + log_integral));
  }
  const double log_inverse_square = -2.0 * b * std::log(2.0) + std::log(a) + std::log(b) +
                                    std::log1p(gamma * gamma) - (1.0 + b) * std::log(alpha2) +
                                    std::log(gamma_fn(2.0 * b)) +
                                    std::log(kummer_U(1.0 + b, 1.5, a * a / alpha2));
  return std::exp(-0.5 * log_inverse_square);
}

inline AnsatzParams build_ansatz(double lambda, double mu, int kappa0, double m) {
  if (kappa0 >= 0) throw DomainError("build_ansatz: kappa0 must be negative (n0 = -kappa0)");
  if (!(m > 0.0)) throw DomainError("build_ansatz: mass must be positive");
  if (!(lambda > 0.0) || lambda >= -kappa0) {
    throw DomainError("build_ansatz: need 0 < lambda < |kappa0|");
  }
  if (mu < 0.0) {
    throw DomainError(
        "build_ansatz: mu < 0 makes the Gaussian factor exp(-alpha2 r^2/2) grow "
        "(alpha2 = mu lambda/|kappa0|); the state is not normalizable");
  }
  const double k = -kappa0;
  AnsatzParams p;
  p.kappa0 = kappa0;
  p.couplings = {m, lambda, mu, nu_fine_tuned(mu, lambda, kappa0)};
  p.b = std::sqrt(k * k - lambda * lambda);
  p.a = m * lambda / k;
  p.alpha2 = mu * lambda / k;
  p.gamma = (k - p.b) / lambda;
  p.energy = m * std::sqrt(1.0 - lambda * lambda / (k * k));
  p.norm = ansatz_norm(p.a, p.b, p.alpha2, p.gamma);
  return p;
}

inline SpinorSample evaluate_spinor(const AnsatzParams& p, double r) {
  if (!(r > 0.0)) throw DomainError("evaluate_spinor: r must be positive");
  const double f = p.norm * std::exp((p.b - 1.0) * std::log(r) - p.a * r - 0.5 * p.alpha2 * r * r);
  const double df = f * ((p.b - 1.0) / r - p.a - p.alpha2 * r);
  return {f, -p.gamma * f, df, -p.gamma * df};
}

inline RadialState sample_ansatz(const AnsatzParams& p, std::span<const double> r) {
  RadialState s;
  s.r.assign(r.begin(), r.end());
  for (auto* v : {&s.f, &s.g, &s.df, &s.dg}) v->resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto x = evaluate_spinor(p, r[i]);
    s.f[i] = x.f;
    s.g[i] = x.g;
    s.df[i] = x.df;
    s.dg[i] = x.dg;
  }
  return s;
}

/// Log grid from 1e-6/(lambda m) out to where f has dropped below 1e-12 of its peak.
inline RadialGrid ansatz_grid(const AnsatzParams& p, std::size_t count = 20000) {
  const double lm = p.couplings.lambda * p.couplings.mass;
  auto log_f = [&](double r) { return (p.b - 1.0) * std::log(r) - p.a * r - 0.5 * p.alpha2 * r * r; };
  // f is maximal where (b-1)/r = a + alpha2 r; the positive root, or the origin when b < 1.
  const double r_peak =
      p.b > 1.0 ? 2.0 * (p.b - 1.0) / (p.a + std::sqrt(p.a * p.a + 4.0 * p.alpha2 * (p.b - 1.0)))
                : 1.0 / lm;
  const double reference = std::max(log_f(r_peak), log_f(1.0 / lm));
  double r = std::max(r_peak, 1.0 / lm);
  while (log_f(r) - reference > std::log(1e-12)) r *= 1.01;
  return {1e-6 / lm, r, count, Spacing::logarithmic};
}

/// Largest relative defect of the radial equations for the closed-form state
/// with potentials -lambda/r, mu r (scalar) and nu r (time-like), using
/// analytic derivatives.
inline double radial_residual(const AnsatzParams& p, const RadialGrid& grid) {
  const auto& c = p.couplings;
  const auto potential = PotentialSpec::coulomb_linear(c.lambda, c.mu, c.nu);
  const auto r = grid.nodes();
  return dirac_residual(potential, p.kappa0, p.energy, c.mass, sample_ansatz(p, r));
}

/// int (f^2 + g^2) r^2 dr of the closed-form state by adaptive quadrature.
inline QuadratureResult normalization_integral(const AnsatzParams& p) {
  const double n2 = p.norm * p.norm * (1.0 + p.gamma * p.gamma);
  const double scale = 1.0 / p.a;
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double r = s * scale;
    return n2 * scale * std::exp(2.0 * p.b * std::log(r) - 2.0 * p.a * r - p.alpha2 * r * r);
  };
  return integrate_adaptive(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-14, 1e-13);
}

}  // namespace confdirac
