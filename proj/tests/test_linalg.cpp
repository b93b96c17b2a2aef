#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/qr.hpp"
#include "hsired/linalg/randomized.hpp"
#include "hsired/linalg/svd.hpp"
#include "hsired/linalg/synthetic.hpp"
#include "oracles.hpp"

using namespace hsired;

namespace {

DenseMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return DenseMatrix::gaussian(m, n, rng);
}

double residual_norm(const DenseMatrix& a, const DenseMatrix& q) {
  return frobenius_norm(subtract(a, matmul(q, matmul_tn(q, a))));
}

double rank_k_residual(const DenseMatrix& a, const SvdResult& svd) {
  return frobenius_norm(subtract(a, reconstruct(svd)));
}

}  // namespace

TEST(DenseMatrix, RejectsNonFiniteAndBadLength) {
  EXPECT_THROW(DenseMatrix(2, 2, {1, 2, 3}), Error);
  try {
    DenseMatrix(1, 2, {1.0, std::nan("")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99), c(100);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(99).next(), c.next());
}

TEST(Rng, NormalMomentsAreStandard) {
  Rng rng(7);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

// --- QR --------------------------------------------------------------------

TEST(HouseholderQr, IdentityIsItsOwnFactorization) {
  const QrResult qr = householder_qr(DenseMatrix::identity(2));
  EXPECT_EQ(qr.q, DenseMatrix::identity(2));
  EXPECT_EQ(qr.r, DenseMatrix::identity(2));
}

TEST(HouseholderQr, SingleReflectionClosedForm) {
  const QrResult qr = householder_qr(DenseMatrix::from_rows({{3, 0}, {4, 0}}));
  EXPECT_NEAR(std::abs(qr.q(0, 0)), 0.6, 1e-15);
  EXPECT_NEAR(std::abs(qr.q(1, 0)), 0.8, 1e-15);
  EXPECT_NEAR(std::abs(qr.r(0, 0)), 5.0, 1e-14);
  // Rank-deficient second column: zero row in R, Q still orthonormal.
  EXPECT_EQ(qr.r(1, 1), 0.0);
  EXPECT_LT(column_orthonormality_error(qr.q), 1e-15);
}

TEST(HouseholderQr, Random20x5) {
  const DenseMatrix a = random_matrix(20, 5, 11);
  const QrResult qr = householder_qr(a);
  EXPECT_LT(column_orthonormality_error(qr.q), 1e-12);
  EXPECT_LT(max_abs(subtract(matmul(qr.q, qr.r), a)), 1e-12);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(qr.r(i, j), 0.0);
}

TEST(HouseholderQr, WideInputIsDimensionError) {
  try {
    householder_qr(DenseMatrix(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dimension);
  }
}

TEST(HouseholderQr, ReconstructionProperty) {
  Rng shapes(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + shapes.below(8);
    const std::size_t m = n + shapes.below(12);
    DenseMatrix a = random_matrix(m, n, 1000 + trial);
    const double scale = std::pow(10.0, static_cast<double>(shapes.below(9)) - 4.0);
    a = scaled(a, scale);
    if (trial % 7 == 0 && n > 1)  // duplicate a column to force rank deficiency
      for (std::size_t i = 0; i < m; ++i) a(i, n - 1) = a(i, 0);
    const QrResult qr = householder_qr(a);
    EXPECT_LE(max_abs(subtract(matmul(qr.q, qr.r), a)), 1e-10 * std::max(1.0, max_abs(a))) << "trial " << trial;
    EXPECT_LT(column_orthonormality_error(qr.q), 1e-10);
  }
}

// --- exact SVD -------------------------------------------------------------

TEST(ExactSvd, DiagonalMatrix) {
  const SvdResult svd = exact_svd(DenseMatrix::from_rows({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}), 3);
  ASSERT_EQ(svd.s.size(), 3u);
  EXPECT_NEAR(svd.s[0], 3.0, 1e-14);
  EXPECT_NEAR(svd.s[1], 2.0, 1e-14);
  EXPECT_NEAR(svd.s[2], 1.0, 1e-14);
}

TEST(ExactSvd, ZeroMatrixHasZeroSpectrumAndOrthonormalFactors) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 3}, {3, 5}}) {
    const std::size_t k = std::min(m, n);
    const SvdResult svd = exact_svd(DenseMatrix(m, n), k);
    for (double s : svd.s) EXPECT_EQ(s, 0.0);
    EXPECT_LT(column_orthonormality_error(svd.u), 1e-12);
    EXPECT_LT(row_orthonormality_error(svd.vt), 1e-12);
  }
}

TEST(ExactSvd, RecoversConstructedSpectrum) {
  const std::vector<double> sigma{5, 3, 1, 0.5};
  const DenseMatrix a = matrix_with_spectrum(6, 4, sigma, 21);
  const SvdResult svd = exact_svd(a, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(svd.s[i], sigma[i], 1e-8);
}

TEST(ExactSvd, MatchesGramEigenvaluesAndReconstructs) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{30, 8}, {8, 30}, {12, 12}}) {
    const DenseMatrix a = random_matrix(m, n, 31 + m);
    const std::size_t k = std::min(m, n);
    const SvdResult svd = exact_svd(a, k);
    const DenseMatrix at = m >= n ? a : transpose(a);
    auto ev = oracle::symmetric_eigenvalues(
        oracle::gram(std::vector<double>(at.data().begin(), at.data().end()), at.rows(), at.cols()));
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(svd.s[i], std::sqrt(ev[i]), 1e-8 * svd.s[i]);
    EXPECT_LE(frobenius_norm(subtract(reconstruct(svd), a)), 1e-8 * frobenius_norm(a));
    EXPECT_LT(column_orthonormality_error(svd.u), 1e-10);
    EXPECT_LT(row_orthonormality_error(svd.vt), 1e-10);
    for (std::size_t i = 0; i + 1 < k; ++i) EXPECT_GE(svd.s[i], svd.s[i + 1]);
  }
}

TEST(ExactSvd, SignConventionLargestUEntryPositive) {
  const SvdResult svd = exact_svd(random_matrix(15, 6, 3), 6);
  for (std::size_t c = 0; c < 6; ++c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 15; ++i)
      if (std::abs(svd.u(i, c)) > std::abs(svd.u(best, c))) best = i;
    EXPECT_GT(svd.u(best, c), 0.0);
  }
}

TEST(ExactSvd, InvalidRank) {
  EXPECT_THROW(exact_svd(DenseMatrix(3, 2), 0), Error);
  EXPECT_THROW(exact_svd(DenseMatrix(3, 2), 3), Error);
}

TEST(ExactSvd, SweepCapSurfacesAsConvergenceError) {
  JacobiOptions opts;
  opts.max_sweeps = 1;
  try {
    exact_svd(random_matrix(20, 10, 8), 10, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Convergence);
  }
}

// --- randomized ------------------------------------------------------------

TEST(RandomizedRangeFinder, CapturesExactRank) {
  const DenseMatrix a = matrix_with_spectrum(40, 25, {7.0, 2.0}, 4);
  const DenseMatrix q = randomized_range_finder(a, 2, 0, 17);
  EXPECT_LE(residual_norm(a, q), 1e-8 * frobenius_norm(a));
}

TEST(RandomizedRangeFinder, DeterministicForSeed) {
  const DenseMatrix a = random_matrix(30, 20, 2);
  EXPECT_EQ(randomized_range_finder(a, 5, 2, 123), randomized_range_finder(a, 5, 2, 123));
  EXPECT_NE(randomized_range_finder(a, 5, 2, 123), randomized_range_finder(a, 5, 2, 124));
}

TEST(RandomizedRangeFinder, NearOptimalResidualOnDecayingSpectrum) {
  const auto sigma = geometric_spectrum(60, 10.0, 0.5);
  const DenseMatrix a = matrix_with_spectrum(100, 60, sigma, 9);
  // Optimal rank-12 residual from the exact SVD of the same matrix.
  const SvdResult exact = exact_svd(a, 60);
  double tail = 0.0;
  for (std::size_t i = 12; i < 60; ++i) tail += exact.s[i] * exact.s[i];
  const double optimal = std::sqrt(tail);
  const DenseMatrix q = randomized_range_finder(a, 12, 2, 5);
  EXPECT_LT(column_orthonormality_error(q), 1e-12);
  EXPECT_LE(residual_norm(a, q), 10.0 * optimal);
}

TEST(RandomizedRangeFinder, InvalidWidth) {
  EXPECT_THROW(randomized_range_finder(DenseMatrix(5, 4), 0, 0, 1), Error);
  EXPECT_THROW(randomized_range_finder(DenseMatrix(5, 4), 5, 0, 1), Error);
}

TEST(RandomizedSvd, ExactRankMatchesExactSvd) {
  const DenseMatrix a = matrix_with_spectrum(50, 30, {9.0, 4.0, 1.5}, 12);
  const SvdResult exact = exact_svd(a, 3);
  const SvdResult approx = randomized_svd(a, {3, 5, 1, 77});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(approx.s[i], exact.s[i], 1e-6 * exact.s[i]);
  EXPECT_LT(column_orthonormality_error(approx.u), 1e-8);
  EXPECT_LT(row_orthonormality_error(approx.vt), 1e-8);
}

TEST(RandomizedSvd, Deterministic) {
  const DenseMatrix a = random_matrix(40, 30, 14);
  const SvdResult x = randomized_svd(a, {5, 5, 2, 8});
  const SvdResult y = randomized_svd(a, {5, 5, 2, 8});
  EXPECT_EQ(x.u, y.u);
  EXPECT_EQ(x.s, y.s);
  EXPECT_EQ(x.vt, y.vt);
}

TEST(RandomizedSvd, PolynomialSpectrumTop30WithinOnePercent) {
  std::vector<double> sigma(200);
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = 100.0 / std::pow(static_cast<double>(i + 1), 2.0);
  const DenseMatrix a = matrix_with_spectrum(500, 200, sigma, 42);
  const SvdResult exact = exact_svd(a, 30);
  const SvdResult approx = randomized_svd(a, {30, 10, 2, 1});
  for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(approx.s[i], exact.s[i], 0.01 * exact.s[i]) << i;
}

TEST(RandomizedSvd, ParamsValidatedAgainstShape) {
  EXPECT_THROW(randomized_svd(DenseMatrix(10, 8), {5, 4, 0, 0}), Error);
  EXPECT_THROW(randomized_svd(DenseMatrix(10, 8), {0, 2, 0, 0}), Error);
}

TEST(RandomizedSvd, PropertiesOverRandomMatrices) {
  Rng shapes(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + shapes.below(20);
    const std::size_t m = n + shapes.below(30);
    const double ratio = 0.5 + 0.4 * shapes.uniform();
    const DenseMatrix a = matrix_with_spectrum(m, n, geometric_spectrum(n, 5.0, ratio), 500 + trial);
    const std::size_t k = 1 + shapes.below(5);
    const std::size_t p = std::min<std::size_t>(5, n - k);
    const SvdResult exact = exact_svd(a, k);
    const SvdResult q0 = randomized_svd(a, {k, p, 0, static_cast<std::uint64_t>(trial)});
    const SvdResult q2 = randomized_svd(a, {k, p, 2, static_cast<std::uint64_t>(trial)});
    for (std::size_t i = 0; i < k; ++i) {
      // Interlacing: sketch singular values never exceed the true ones.
      EXPECT_LE(q0.s[i], exact.s[i] * (1 + 1e-6));
      EXPECT_LE(q2.s[i], exact.s[i] * (1 + 1e-6));
      if (i + 1 < k) {
        EXPECT_GE(q2.s[i], q2.s[i + 1]);
      }
    }
    EXPECT_LE(rank_k_residual(a, q2), rank_k_residual(a, q0) + 1e-9) << "trial " << trial;
  }
}

TEST(PrincipalAngles, IdenticalAndOrthogonalSubspaces) {
  const DenseMatrix a = DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}});
  const DenseMatrix b = DenseMatrix::from_rows({{0, 1, 0}, {0, 0, 1}});
  const auto same = principal_angles(a, a);
  EXPECT_NEAR(same[0], 0.0, 1e-15);
  EXPECT_NEAR(same[1], 0.0, 1e-15);
  const auto mixed = principal_angles(a, b);
  EXPECT_NEAR(mixed[0], 0.0, 1e-15);
  EXPECT_NEAR(mixed[1], std::numbers::pi / 2, 1e-15);
}
