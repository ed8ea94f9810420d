#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hypocert/decay_certificate.hpp"
#include "hypocert/lyapunov_ansatz.hpp"
#include "hypocert/operator_assembly.hpp"

using namespace hypocert;

namespace {

const double kPi = std::acos(-1.0);

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Leading principal minors by explicit Gaussian elimination with partial
// pivoting restricted to the j x j block, independent of principal_minors.
double brute_det(const CMatrix& D, int j, bool trailing) {
  CMatrix A = trailing ? CMatrix(D.bottomRightCorner(j, j)) : CMatrix(D.topLeftCorner(j, j));
  cdouble det = 1.0;
  for (int c = 0; c < j; ++c) {
    int p = c;
    for (int r = c + 1; r < j; ++r)
      if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
    if (std::abs(A(p, c)) == 0.0) return 0.0;
    if (p != c) {
      A.row(p).swap(A.row(c));
      det = -det;
    }
    det *= A(c, c);
    for (int r = c + 1; r < j; ++r) A.row(r) -= (A(r, c) / A(c, c)) * A.row(c);
  }
  return det.real();
}

const RationalFactor& factor(const std::vector<RationalFactor>& fs, const std::string& name) {
  for (const auto& f : fs)
    if (f.name == name) return f;
  throw std::runtime_error("no factor " + name);
}

}  // namespace

TEST(Poly, EvaluationDerivativeRoots) {
  Poly p{{6.0, -5.0, 1.0}};  // (x - 2)(x - 3)
  EXPECT_DOUBLE_EQ(p(2.0), 0.0);
  EXPECT_DOUBLE_EQ(p(0.0), 6.0);
  Poly dp = p.derivative();
  EXPECT_DOUBLE_EQ(dp(2.5), 0.0);
  auto r = p.real_roots();
  std::sort(r.begin(), r.end());
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 2.0, 1e-12);
  EXPECT_NEAR(r[1], 3.0, 1e-12);
  Poly q{{1.0, 0.0, 1.0}};  // no real roots
  EXPECT_TRUE(q.real_roots().empty());
  Poly s = p + q * 2.0;
  EXPECT_DOUBLE_EQ(s(1.0), p(1.0) + 2.0 * q(1.0));
}

TEST(Minors1D, Examples) {
  auto z = minors_1d(1.3, 0.0, 1.0);
  EXPECT_EQ(z.delta.size(), 5u);
  EXPECT_NEAR(z.delta[2], 0.0, 1e-15);
  auto t = minors_1d(1.0, 0.1, 1.0);
  EXPECT_NEAR(t.delta[1], 2.8, 1e-14);
  EXPECT_TRUE(minors_trailing(1));
  EXPECT_FALSE(minors_trailing(2));
}

TEST(Minors2D3D, ClosedFormEntries) {
  for (double ell : {0.5, 1.0, 2.0})
    for (double kappa : {1.0, 2.5})
      for (double a : {0.05, 0.15}) {
        auto m2 = minors_2d(kappa, a, ell);
        ASSERT_EQ(m2.delta.size(), 11u);
        EXPECT_NEAR(rel(m2.delta[3], 44 * std::pow(ell * a, 4)), 0.0, 1e-12);
        auto m3 = minors_3d(kappa, a, ell);
        ASSERT_EQ(m3.delta.size(), 21u);
        EXPECT_NEAR(rel(m3.delta[1], 4 * (std::sqrt(2.0) - 1) * std::pow(ell * a, 2)), 0.0, 1e-12);
        EXPECT_NEAR(rel(m3.delta[4], 80.0 / 3.0 * (std::sqrt(2.0) - 1) * std::pow(ell * a, 5)), 0.0, 1e-12);
      }
  EXPECT_EQ(minor_count(1), 5);
  EXPECT_EQ(minor_count(2), 11);
  EXPECT_EQ(minor_count(3), 21);
}

TEST(DBlock, ExplicitTableMatchesOperators) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uk(1.0, 10.0), ul(0.2, 5.0), u01(0.02, 0.98);
  for (int d = 1; d <= 3; ++d)
    for (int s = 0; s < 10; ++s) {
      const double kappa = uk(rng), ell = ul(rng);
      const double a = u01(rng) * alpha_plus(d, ell).value;
      CMatrix D = assemble_D_block(d, kappa, a, ell);
      CMatrix E = D_block_from_operators(d, kappa, a, ell);
      ASSERT_EQ(D.rows(), minor_count(d));
      EXPECT_LT((D - E).cwiseAbs().maxCoeff(), 1e-12) << "d=" << d;
      EXPECT_LT((D - D.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(DBlock, DeviationIsConfinedToTheBlock) {
  // C^*P + PC equals 2 I outside the leading block in every dimension.
  for (int d = 1; d <= 3; ++d) {
    const int n = minor_count(d), N = n + 15;
    const double kappa = 1.7, a = 0.1, ell = 0.8;
    auto pair = OperatorPair::bgk(d, d == 1 ? Variant::tensor : Variant::energy, N, 2 * kPi / ell);
    CMatrix C = modal_generator(pair, kappa).C;
    CMatrix P = bgk_P(d, kappa, a, N);
    CMatrix M = C.adjoint() * P + P * C;
    CMatrix R = M - 2.0 * CMatrix::Identity(N, N);
    R.topLeftCorner(n, n).setZero();
    // The last row/column feels the truncation of L1 only through P = I, so
    // the identity holds up to the edge.
    EXPECT_LT(R.cwiseAbs().maxCoeff(), 1e-13) << d;
    EXPECT_LT((M.topLeftCorner(n, n) - assemble_D_block(d, kappa, a, ell)).cwiseAbs().maxCoeff(), 1e-12) << d;
  }
}

TEST(DBlock, TraceIdentities) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> uk(1.0, 10.0), ua(0.0, 0.2), ul(0.2, 5.0);
  for (int s = 0; s < 20; ++s) {
    const double kappa = uk(rng), a = ua(rng), ell = ul(rng);
    CMatrix D1 = assemble_D_block(1, kappa, a, ell);
    EXPECT_NEAR(D1.bottomRightCorner(3, 3).trace().real(), 4 * (1 - ell * a), 1e-12);
    EXPECT_NEAR(assemble_D_block(2, kappa, a, ell).trace().real(), 14.0, 1e-12);
    EXPECT_NEAR(assemble_D_block(3, kappa, a, ell).trace().real(), 32.0, 1e-12);
  }
}

TEST(Minors, MatchDeterminants) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uk(1.0, 10.0), ul(0.2, 5.0), u01(0.01, 0.99);
  for (int d = 1; d <= 3; ++d)
    for (int s = 0; s < 20; ++s) {
      const double kappa = uk(rng), ell = ul(rng);
      const double a = u01(rng) * alpha_plus(d, ell).value;
      auto t = minors(d, kappa, a, ell);
      CMatrix D = D_block_from_operators(d, kappa, a, ell);
      auto lu = principal_minors(D, minors_trailing(d));
      for (int j = 1; j <= minor_count(d); ++j) {
        const double bd = brute_det(D, j, minors_trailing(d));
        EXPECT_LT(rel(t.delta[j - 1], bd), 1e-9) << "d=" << d << " j=" << j;
        EXPECT_LT(rel(lu[j - 1], bd), 1e-10) << "d=" << d << " j=" << j;
      }
    }
}

TEST(Minors, PositiveBelowAlphaPlus) {
  for (int d = 1; d <= 3; ++d)
    for (double ell : {0.3, 1.0, 3.0}) {
      const double ap = alpha_plus(d, ell).value;
      for (double frac : {0.1, 0.5, 0.99})
        for (double kappa : {1.0, 1.5, 4.0, 30.0}) {
          auto t = minors(d, kappa, frac * ap, ell);
          for (double v : t.delta) EXPECT_GT(v, 0.0) << d << " " << ell << " " << frac << " " << kappa;
        }
    }
}

TEST(AlphaPlus, IsTheSmallestThreshold) {
  for (int d = 1; d <= 3; ++d) {
    auto ap = alpha_plus(d, 1.0);
    ASSERT_FALSE(ap.thresholds.empty());
    double m = 1e300;
    for (const auto& t : ap.thresholds) m = std::min(m, t.alpha);
    EXPECT_DOUBLE_EQ(ap.value, m);
    EXPECT_LE(ap.value, 1.0 / p_spread(d) + 1e-15);
  }
  // Just above alpha_+ the chain at kappa = 1 loses positivity or P does.
  for (int d = 1; d <= 3; ++d) {
    const double a = alpha_plus(d, 1.0).value * 1.001;
    auto t = minors(d, 1.0, a, 1.0);
    const bool all_pos = std::all_of(t.delta.begin(), t.delta.end(), [](double v) { return v > 0; });
    EXPECT_FALSE(all_pos && bgk_P_positive(d, 1.0, a)) << d;
  }
}

TEST(Alpha3, ClosedFormAndLimits) {
  EXPECT_NEAR(alpha3_1d(2 * kPi), (9 - std::sqrt(17.0)) / 24, 1e-15);
  // ell = 2 pi / L; large ell: about 1/(3 ell); small ell: about 4 ell / 3.
  EXPECT_NEAR(alpha3_1d(2 * kPi / 1e4) * 3e4, 1.0, 1e-3);
  EXPECT_NEAR(alpha3_1d(2 * kPi / 1e-4) / (4e-4 / 3), 1.0, 1e-3);
  EXPECT_EQ(alpha_plus(1, 1.0).value, alpha3_1d(2 * kPi));
}

TEST(RationalMonotone, Examples) {
  // p0 = -4 alpha, p1 = alpha.
  EXPECT_TRUE(rational_monotone_check(Poly{{0, -4}}, Poly{{0, 1}}, Poly{{7, 3, -2}}, 1.0));
  // p1 = alpha - 0.5 is negative on [0, 0.5).
  EXPECT_FALSE(rational_monotone_check(Poly{{0, -4}}, Poly{{-0.5, 1}}, Poly{{1}}, 1.0));
  // p0 + 2 p1 = alpha - 0.3 becomes positive.
  EXPECT_FALSE(rational_monotone_check(Poly{{-0.3, -1}}, Poly{{0, 1}}, Poly{{1}}, 1.0));
}

TEST(RationalMonotone, TwoDimensionalP7) {
  const double ell = 1.0;
  auto fs = minor_factors(2, ell);
  const auto& p7 = factor(fs, "p7");
  double abar = 1e300;
  for (const auto& t : alpha_plus(2, ell).thresholds)
    if (t.factor == "p7" && t.kind == "root") abar = t.alpha;
  ASSERT_LT(abar, 1.0);
  EXPECT_TRUE(rational_monotone_check(p7.p0, p7.p1, p7.p2, abar));
  for (int i = 1; i <= 50; ++i) {
    const double a = abar * i / 50.0;
    double mn = 1e300;
    for (int k = 1; k <= 20; ++k) mn = std::min(mn, p7(k, a));
    EXPECT_NEAR(mn, p7(1.0, a), 1e-12 * std::max(1.0, std::abs(mn)));
  }
}

TEST(RationalMonotone, AllFactorsBelowAlphaPlus) {
  for (int d = 1; d <= 3; ++d)
    for (double ell : {0.5, 1.0, 2.0}) {
      const double ap = alpha_plus(d, ell).value;
      for (const auto& f : minor_factors(d, ell))
        EXPECT_TRUE(rational_monotone_check(f.p0, f.p1, f.p2, ap)) << d << " " << f.name << " " << ell;
    }
}

TEST(Certify, OneDimensional) {
  auto c = certify(1, 2 * kPi);
  EXPECT_TRUE(c.valid);
  EXPECT_NEAR(c.mu, 0.041812, 1e-5);
  EXPECT_NEAR(c.mu, 0.041812356348392, 1e-12);
  EXPECT_NEAR(c.alpha_plus, (9 - std::sqrt(17.0)) / 24, 1e-15);
  EXPECT_GT(c.alpha_star, 0.0);
  EXPECT_LT(c.alpha_star, c.alpha_plus);
  EXPECT_DOUBLE_EQ(c.lambda, 2 * c.mu);
  EXPECT_EQ(c.verified.size(), 50u);
}

TEST(Certify, TwoAndThreeDimensionalReferenceValues) {
  // Reference digits from an independent 50-digit evaluation of the
  // determinant chain built from the operators.
  auto c2 = certify(2, 2 * kPi);
  EXPECT_TRUE(c2.valid);
  EXPECT_NEAR(c2.alpha_plus, 0.21023801412882542, 1e-13);
  EXPECT_NEAR(c2.alpha_star, 0.1453311384, 1e-6);
  EXPECT_LT(rel(c2.mu, 0.003013362132284741), 1e-10);

  auto c3 = certify(3, 2 * kPi);
  EXPECT_TRUE(c3.valid);
  EXPECT_NEAR(c3.alpha_plus, 0.21428787448140494, 1e-13);
  EXPECT_NEAR(c3.alpha_star, 0.1644256115, 1e-6);
  EXPECT_LT(rel(c3.mu, 0.00017745409542420), 1e-10);
  EXPECT_GE(2 * c3.mu, 1.0 / 2820);
}

TEST(Certify, ObjectiveIsMaximisedAtAlphaStar) {
  for (int d = 1; d <= 3; ++d) {
    auto c = certify(d, 2 * kPi, 0);
    EXPECT_NEAR(certificate_objective(d, 1.0, c.alpha_star), c.mu, 1e-15);
    for (double h : {1e-3, 1e-2}) {
      EXPECT_LE(certificate_objective(d, 1.0, c.alpha_star - h), c.mu + 1e-15);
      EXPECT_LE(certificate_objective(d, 1.0, c.alpha_star + h), c.mu + 1e-15);
    }
  }
}

TEST(Certify, MatrixInequalityOnModuli) {
  for (int d = 1; d <= 3; ++d) {
    auto c = certify(d, 2 * kPi);
    ASSERT_EQ(c.verified.size(), 50u);
    for (const auto& v : c.verified) EXPECT_GE(v.min_eig, -1e-9) << d << " kappa=" << v.kappa;
    // Norm-equivalence constants of P at alpha_star.
    EXPECT_NEAR(c.C_d, 1 / (1 - p_spread(d) * c.alpha_star), 1e-14);
    EXPECT_NEAR(c.c_d, 1 / (1 + p_spread(d) * c.alpha_star), 1e-14);
  }
}

TEST(Certify, RateDecreasesWithL) {
  double prev = 1e300;
  for (int i = 0; i <= 40; ++i) {
    const double L = 0.1 * std::pow(500.0, i / 40.0);
    auto c = certify(1, L, 0);
    EXPECT_LT(c.mu, prev) << "L=" << L;
    prev = c.mu;
  }
  // alpha_+ tends to zero at both ends in 2D and 3D.
  for (int d = 2; d <= 3; ++d) {
    const double mid = certify(d, 2 * kPi, 0).alpha_plus;
    EXPECT_LT(certify(d, 0.01, 0).alpha_plus, 0.1 * mid);
    EXPECT_LT(certify(d, 1000.0, 0).alpha_plus, 0.1 * mid);
  }
}

TEST(Certify, SmallLLimits) {
  auto m = mu_limits_1d(1e-3);
  const double r13 = std::sqrt(13.0);
  EXPECT_NEAR(m.mu_limit, 0.06391670961, 1e-8);
  EXPECT_NEAR(m.mu_probe, m.mu_limit, 1e-4);
  EXPECT_NEAR(m.alpha_ratio, (4 - r13) / (6 * kPi), 1e-15);
  EXPECT_NEAR(m.alpha_ratio_probe, m.alpha_ratio, 1e-4);
}

TEST(Certify, JsonFields) {
  auto j = to_json(certify(1, 2 * kPi, 5));
  for (const char* k : {"d", "L", "alpha_plus", "alpha_star", "mu", "lambda", "valid", "thresholds", "verified"})
    EXPECT_TRUE(j.contains(k)) << k;
  auto t = to_json(minors(2, 1.0, 0.1, 1.0));
  EXPECT_EQ(t["delta"].size(), 11u);
}
