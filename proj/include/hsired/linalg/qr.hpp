#pragma once

#include <cmath>
#include <vector>

#include "hsired/linalg/matrix.hpp"

namespace hsired {

struct QrResult {
  DenseMatrix q;  // m×n, orthonormal columns
  DenseMatrix r;  // n×n, upper triangular, non-negative diagonal
};

/// Thin Householder QR of a tall (m ≥ n) matrix. A zero pivot column is
/// skipped rather than rejected, so rank-deficient input yields zero rows in R
/// while Q stays orthonormal.
inline QrResult householder_qr(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  require(m >= n, ErrorKind::Dimension,
          "householder_qr needs rows >= cols, got " + std::to_string(m) + "x" + std::to_string(n));

  // Column-major working copy: cols[j] is column j of A, contiguous.
  std::vector<std::vector<double>> cols(n, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = a(i, j);

  std::vector<std::vector<double>> reflectors(n);  // unit vectors on rows j..m-1, empty when skipped
  DenseMatrix r(n, n);

  for (std::size_t j = 0; j < n; ++j) {
    auto& x = cols[j];
    double norm_sq = 0.0;
    for (std::size_t i = j; i < m; ++i) norm_sq += x[i] * x[i];
    const double norm = std::sqrt(norm_sq);
    for (std::size_t i = 0; i < j; ++i) r(i, j) = x[i];
    if (norm == 0.0) continue;

    const double alpha = x[j] > 0.0 ? -norm : norm;
    std::vector<double> v(x.begin() + static_cast<std::ptrdiff_t>(j), x.end());
    v[0] -= alpha;
    double vnorm_sq = 0.0;
    for (double e : v) vnorm_sq += e * e;
    const double vnorm = std::sqrt(vnorm_sq);
    for (double& e : v) e /= vnorm;

    r(j, j) = alpha;
    for (std::size_t k = j + 1; k < n; ++k) {
      auto& col = cols[k];
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * col[j + i];
      dot *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) col[j + i] -= dot * v[i];
    }
    reflectors[j] = std::move(v);
  }

  // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of the identity.
  std::vector<std::vector<double>> qcols(n, std::vector<double>(m, 0.0));
  for (std::size_t c = 0; c < n; ++c) qcols[c][c] = 1.0;
  for (std::size_t jj = n; jj-- > 0;) {
    const auto& v = reflectors[jj];
    if (v.empty()) continue;
    for (std::size_t c = 0; c < n; ++c) {
      auto& col = qcols[c];
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * col[jj + i];
      if (dot == 0.0) continue;
      dot *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) col[jj + i] -= dot * v[i];
    }
  }

  DenseMatrix q(m, n);
  for (std::size_t c = 0; c < n; ++c) {
    const double sign = r(c, c) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) q(i, c) = sign * qcols[c][i];
    if (sign < 0.0)
      for (std::size_t k = c; k < n; ++k) r(c, k) = -r(c, k);
  }
  return {std::move(q), std::move(r)};
}

}  // namespace hsired
