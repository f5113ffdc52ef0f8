#include <gtest/gtest.h>

#include <cmath>

#include "confdirac/fw_effective.hpp"
#include "oracles.hpp"

using namespace confdirac;

TEST(FirstOrderShift, Examples) {
  const double lam = 0.37, mu = 2e-5;
  EXPECT_EQ(first_order_shift(1, -1, -1, lam, mu, 1.0).total, 0.0);
  EXPECT_NEAR(first_order_shift(2, -1, -1, lam, mu, 1.0).total / (mu * lam), 2.625, 1e-13);
  EXPECT_NEAR(first_order_shift(2, 1, -1, lam, mu, 1.0).total / (mu * lam), 2.25, 1e-13);
}

TEST(FirstOrderShift, TermsAddUp) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = -n; k <= n; ++k) {
      if (k == 0) continue;
      for (int k0 : {-1, -2, -3}) {
        const auto s = first_order_shift(n, k, k0, 0.3, 1e-4, 1.0);
        const double sum = s.term_linear + s.term_spin_orbit + s.term_kinetic;
        EXPECT_NEAR(sum, s.total, 1e-12 * std::max(std::abs(s.total), std::abs(s.term_linear)));
      }
    }
  }
}

TEST(FirstOrderShift, MatchesExpectationAssembly) {
  for (int n = 1; n <= 6; ++n) {
    for (int k : enumerate_kappa(n)) {
      for (int k0 : {-1, -2, -3}) {
        for (double m : {1.0, 2.5}) {
          const auto closed = first_order_shift(n, k, k0, 0.3, 1e-4, m);
          const auto terms = shift_terms_from_expectations(n, k, k0, 0.3, 1e-4, m);
          const double scale = std::abs(terms.term_linear) + std::abs(terms.term_kinetic);
          EXPECT_NEAR(closed.total, terms.total, 1e-12 * scale) << n << k << k0;
          EXPECT_NEAR(closed.term_linear, terms.term_linear, 1e-12 * scale);
          EXPECT_NEAR(closed.term_spin_orbit, terms.term_spin_orbit, 1e-12 * scale);
          EXPECT_NEAR(closed.term_kinetic, terms.term_kinetic, 1e-12 * scale);
          if (closed.total != 0.0) {
            EXPECT_NEAR(shift_from_expectations(n, k, k0, 0.3, 1e-4, m) / closed.total, 1.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(FirstOrderShift, ExpectationValuesFromQuadrature) {
  // Rebuild the three terms with <r>, <1/r>, <{p^2,r}> from wave-function quadrature.
  const double lam = 0.6, mu = 1e-3, m = 1.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k : enumerate_kappa(n)) {
      const int ell = decompose_kappa(k).ell;
      const int k0 = -1;
      const double r = oracle::hydrogen_moment(n, ell, lam, m, 1);
      const double inv_r = oracle::hydrogen_moment(n, ell, lam, m, -1);
      const double anti = oracle::hydrogen_anticommutator(n, ell, lam, m);
      const double total = mu * lam * lam * r / (2.0 * k0 * k0) - mu * (-k) * inv_r / (2.0 * m * m) -
                           mu * anti / (4.0 * m * m);
      EXPECT_NEAR(total, first_order_shift(n, k, k0, lam, mu, m).total, 1e-8 * mu) << n << k;
    }
  }
}

TEST(FirstOrderShift, PreservedLevelVanishesWithNonzeroTerms) {
  for (int n = 1; n <= 20; ++n) {
    const auto s = first_order_shift(n, -n, -n, 0.4, 1e-3, 1.0);
    EXPECT_EQ(s.total, 0.0) << n;
    const auto t = shift_terms_from_expectations(n, -n, -n, 0.4, 1e-3, 1.0);
    EXPECT_NE(t.term_linear, 0.0);
    EXPECT_NE(t.term_kinetic, 0.0);
    EXPECT_NEAR(t.total, 0.0, 1e-15);
  }
}

TEST(FirstOrderShift, LinearInMuLambda) {
  for (double lam : {0.05, 0.2, 0.7}) {
    EXPECT_NEAR(first_order_shift(3, 2, -2, lam, 1e-5, 1.0).total / (1e-5 * lam),
                first_order_shift(3, 2, -2, 0.1, 1e-5, 1.0).total / (1e-6), 1e-12);
  }
}

TEST(FirstOrderShift, Domain) {
  EXPECT_THROW(first_order_shift(1, 0, -1, 0.3, 1e-4, 1.0), DomainError);
  EXPECT_THROW(first_order_shift(1, -2, -1, 0.3, 1e-4, 1.0), DomainError);
  EXPECT_THROW(first_order_shift(1, -1, -1, 0.0, 1e-4, 1.0), DomainError);
  EXPECT_THROW(first_order_shift(1, -1, 0, 0.3, 1e-4, 1.0), DomainError);
  EXPECT_THROW(shift_from_expectations(2, 3, -1, 0.3, 1e-4, 1.0), DomainError);
}

TEST(ReferenceCancellation, NumeratorIsExactlyZero) {
  for (int n0 = 1; n0 <= 50; ++n0) {
    const auto c = reference_cancellation(n0, 0.5, 1e-4, 1.0);
    EXPECT_EQ(c.numerator, 0);
    EXPECT_EQ(c.energy, 0.0);
    EXPECT_TRUE(c.physical);
    const auto flipped = reference_cancellation(n0, n0, 0.5, 1e-4, 1.0);
    EXPECT_EQ(flipped.numerator, 0);
    EXPECT_FALSE(flipped.physical);
  }
  EXPECT_THROW(reference_cancellation(0, 0.5, 1e-4, 1.0), DomainError);
  EXPECT_THROW(reference_cancellation(3, -2, 0.5, 1e-4, 1.0), DomainError);
}

TEST(PreservationScan, OnlyTrivialFamily) {
  const auto r = preservation_scan(50, 10);
  EXPECT_TRUE(r.matches_claim());
  EXPECT_EQ(r.sign_violations, 0);
  ASSERT_EQ(r.solutions.size(), 100u);
  for (const auto& s : r.solutions) {
    EXPECT_EQ(s.N, 1);
    EXPECT_EQ(std::abs(s.kappa), s.n);
    EXPECT_EQ(s.physical, s.kappa == -s.n);
  }
  EXPECT_EQ(r.physical_solutions.size(), 50u);
  // sum over n of 2n kappa values times 10 N values
  EXPECT_EQ(r.points_checked, 10 * 50 * 51);
}

TEST(PreservationScan, SmallCases) {
  const auto one = preservation_scan(1, 2);
  ASSERT_EQ(one.solutions.size(), 2u);
  EXPECT_EQ(one.solutions[0], (ScanSolution{1, -1, 1, true}));
  EXPECT_EQ(one.solutions[1], (ScanSolution{1, 1, 1, false}));
  const auto two = preservation_scan(2, 2);
  EXPECT_EQ(two.solutions[2], (ScanSolution{2, -2, 1, true}));
  EXPECT_EQ(two.solutions[3], (ScanSolution{2, 2, 1, false}));
  EXPECT_THROW(preservation_scan(0, 10), DomainError);
  EXPECT_THROW(preservation_scan(5, 1), DomainError);
}

TEST(PreservationScan, SignOppositionAtOnePoint) {
  // N = 2, n = 3, kappa = -3
  const int N2 = 4, n = 3, k = -3;
  EXPECT_EQ((N2 - 3) * n * n, 9);
  EXPECT_EQ(k * ((N2 - 1) - (N2 + 1) * k), -54);
}

TEST(Antiparticle, EffectivePotential) {
  const auto e = antiparticle_effective(0.2, 0.3, -1, 1.0);
  EXPECT_DOUBLE_EQ(e.leading_slope, 0.4);
  EXPECT_DOUBLE_EQ(e.coulomb, 0.3);
  EXPECT_NEAR(e.linear_slope, 0.4 - 0.2 * 0.09 / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(e.kinetic_coefficient, -0.05);
  EXPECT_TRUE(e.confining);
  const auto coulomb_only = antiparticle_effective(0.0, 0.3, -1, 1.0);
  EXPECT_FALSE(coulomb_only.confining);
  EXPECT_EQ(coulomb_only.linear_slope, 0.0);
  const auto linear_only = antiparticle_effective(0.2, 0.0, -1, 1.0);
  EXPECT_EQ(linear_only.coulomb, 0.0);
  EXPECT_DOUBLE_EQ(linear_only.linear_slope, 0.4);
}

TEST(Antiparticle, AiryLevels) {
  const auto e = antiparticle_spectrum_airy(0.5, 1.0, 5);
  EXPECT_NEAR(e[0] - 1.0, 1.8557570815, 1e-6);
  EXPECT_LT(e[2] - e[1], e[1] - e[0]);
  const auto scaled = antiparticle_spectrum_airy(4.0, 1.0, 5);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR((scaled[k] - 1.0) / (e[k] - 1.0), std::pow(8.0, 2.0 / 3.0), 1e-12);
  }
  EXPECT_THROW(antiparticle_spectrum_airy(0.0, 1.0, 3), DomainError);
  EXPECT_THROW(antiparticle_spectrum_airy(0.5, 1.0, 21), DomainError);
}
