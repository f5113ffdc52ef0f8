#include <gtest/gtest.h>

#include "confdirac/quantum_numbers.hpp"

using namespace confdirac;

TEST(KappaFromLj, NamedLevels) {
  EXPECT_EQ(kappa_from_lj(0, 1), -1);  // S1/2
  EXPECT_EQ(kappa_from_lj(1, 1), 1);   // P1/2
  EXPECT_EQ(kappa_from_lj(2, 5), -3);  // D5/2
  EXPECT_EQ(kappa_from_lj(2, 3), 2);   // D3/2
}

TEST(KappaFromLj, RejectsInconsistentPairs) {
  EXPECT_THROW(kappa_from_lj(0, 3), DomainError);
  EXPECT_THROW(kappa_from_lj(2, 1), DomainError);
  EXPECT_THROW(kappa_from_lj(-1, 1), DomainError);
  EXPECT_THROW(kappa_from_lj(1, 0), DomainError);
}

TEST(DecomposeKappa, Examples) {
  EXPECT_EQ(decompose_kappa(-1), (OrbitalTotal{0, 1}));
  EXPECT_EQ(decompose_kappa(2), (OrbitalTotal{2, 3}));
  EXPECT_EQ(decompose_kappa(-2), (OrbitalTotal{1, 3}));
  EXPECT_THROW(decompose_kappa(0), DomainError);
}

TEST(DecomposeKappa, RoundTripAndCentrifugalIdentity) {
  for (int k = -50; k <= 50; ++k) {
    if (k == 0) continue;
    const auto lj = decompose_kappa(k);
    EXPECT_EQ(kappa_from_lj(lj.ell, lj.j_twice), k);
    EXPECT_EQ(k * (k + 1), lj.ell * (lj.ell + 1));
    EXPECT_EQ(lj.j_twice, 2 * std::abs(k) - 1);
  }
}

TEST(SigmaDotL, Eigenvalues) {
  EXPECT_EQ(sigma_dot_L_plus_one_eigenvalue(-1, Component::upper), 1);
  EXPECT_EQ(sigma_dot_L_plus_one_eigenvalue(-2, Component::upper), 2);
  EXPECT_EQ(sigma_dot_L_plus_one_eigenvalue(1, Component::lower), 1);
  for (int k = -20; k <= 20; ++k) {
    if (k == 0) continue;
    EXPECT_EQ(sigma_dot_L_plus_one_eigenvalue(k, Component::upper),
              -sigma_dot_L_plus_one_eigenvalue(-k, Component::upper));
  }
  EXPECT_THROW(sigma_dot_L_plus_one_eigenvalue(0, Component::upper), DomainError);
}

TEST(EnumerateKappa, Examples) {
  EXPECT_EQ(enumerate_kappa(1), (std::vector<int>{-1}));
  EXPECT_EQ(enumerate_kappa(2), (std::vector<int>{-2, -1, 1}));
  EXPECT_EQ(enumerate_kappa(3), (std::vector<int>{-3, -2, -1, 1, 2}));
  for (int n = 1; n <= 50; ++n) EXPECT_EQ(enumerate_kappa(n).size(), 2u * n - 1);
  EXPECT_THROW(enumerate_kappa(0), DomainError);
}

TEST(AngularState, MagneticQuantumNumber) {
  const auto s = AngularState::from_kappa(-2, -3);
  EXPECT_EQ(s.ell, 1);
  EXPECT_EQ(s.j_twice, 3);
  EXPECT_EQ(s.magnetic_twice, -3);
  EXPECT_THROW(AngularState::from_kappa(-2, 5), DomainError);
  EXPECT_THROW(AngularState::from_kappa(-2, 2), DomainError);
  EXPECT_EQ(AngularState::from_kappa(3).magnetic_twice, 5);
}
