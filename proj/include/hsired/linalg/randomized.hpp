#pragma once

#include <cstdint>

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/qr.hpp"
#include "hsired/linalg/svd.hpp"
#include "hsired/random.hpp"

namespace hsired {

struct RandomizedSvdParams {
  std::size_t k = 1;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 2;
  std::uint64_t seed = 0;

  bool operator==(const RandomizedSvdParams&) const = default;
};

inline void validate(const RandomizedSvdParams& p, std::size_t rows, std::size_t cols) {
  const std::size_t min_dim = std::min(rows, cols);
  require(p.k >= 1, ErrorKind::Dimension, "randomized SVD target rank must be >= 1");
  require(p.k + p.oversampling <= min_dim, ErrorKind::Dimension,
          "k + oversampling = " + std::to_string(p.k + p.oversampling) + " exceeds min(rows, cols) = " +
              std::to_string(min_dim));
}

/// Orthonormal basis Q (m×l) for the approximate range of A.
///
/// Ω (n×l) is drawn row-major from Rng(seed); Y = AΩ is orthonormalized, then
/// each power iteration applies Aᵀ and A with a QR after every product.
inline DenseMatrix randomized_range_finder(const DenseMatrix& a, std::size_t l, std::size_t power_iterations,
                                           std::uint64_t seed) {
  const std::size_t min_dim = std::min(a.rows(), a.cols());
  require(l >= 1 && l <= min_dim, ErrorKind::Dimension,
          "range finder width " + std::to_string(l) + " outside [1, " + std::to_string(min_dim) + "]");
  Rng rng(seed);
  const DenseMatrix omega = DenseMatrix::gaussian(a.cols(), l, rng);
  DenseMatrix q = householder_qr(matmul(a, omega)).q;
  for (std::size_t it = 0; it < power_iterations; ++it) {
    const DenseMatrix z = householder_qr(matmul_tn(a, q)).q;
    q = householder_qr(matmul(a, z)).q;
  }
  return q;
}

/// Rank-k SVD from a (k+p)-wide randomized sketch: B = QᵀA is factored
/// exactly and lifted back with U = Q·U_B.
inline SvdResult randomized_svd(const DenseMatrix& a, const RandomizedSvdParams& params) {
  validate(params, a.rows(), a.cols());
  const std::size_t l = params.k + params.oversampling;
  const DenseMatrix q = randomized_range_finder(a, l, params.power_iterations, params.seed);
  const DenseMatrix b = matmul_tn(q, a);
  SvdResult small = exact_svd(b, l);

  SvdResult out;
  out.u = left_columns(matmul(q, small.u), params.k);
  out.s.assign(small.s.begin(), small.s.begin() + static_cast<std::ptrdiff_t>(params.k));
  out.vt = top_rows(small.vt, params.k);
  detail::normalize_signs(out.u, out.vt);
  return out;
}

/// Principal angles (radians, ascending) between the row spaces of two
/// matrices with orthonormal rows. Computed as atan2(sin, cos) so small
/// angles keep full relative precision.
inline std::vector<double> principal_angles(const DenseMatrix& a_rows, const DenseMatrix& b_rows) {
  require(a_rows.cols() == b_rows.cols(), ErrorKind::Dimension, "principal_angles ambient dimensions differ");
  require(a_rows.rows() == b_rows.rows(), ErrorKind::Dimension, "principal_angles subspace dimensions differ");
  const std::size_t k = a_rows.rows();
  const DenseMatrix cross = matmul_nt(b_rows, a_rows);               // k×k
  const DenseMatrix residual = subtract(b_rows, matmul(cross, a_rows));  // B − (BAᵀ)A
  const std::vector<double> cosines = exact_svd(cross, k).s;          // descending
  const std::vector<double> sines = exact_svd(transpose(residual), k).s;  // descending
  std::vector<double> angles(k);
  for (std::size_t i = 0; i < k; ++i) angles[i] = std::atan2(sines[k - 1 - i], cosines[i]);
  return angles;
}

}  // namespace hsired
