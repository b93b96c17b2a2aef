#pragma once

#include <cstdint>
#include <vector>

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/qr.hpp"
#include "hsired/random.hpp"

namespace hsired {

/// m×k matrix with orthonormal columns: Q factor of a Gaussian matrix.
inline DenseMatrix random_orthonormal(std::size_t m, std::size_t k, Rng& rng) {
  return householder_qr(DenseMatrix::gaussian(m, k, rng)).q;
}

/// U·diag(sigma)·Vᵀ with random orthonormal U (m×r) and V (n×r), r = sigma.size().
inline DenseMatrix matrix_with_spectrum(std::size_t m, std::size_t n, const std::vector<double>& sigma, std::uint64_t seed) {
  Rng rng(seed);
  const DenseMatrix u = random_orthonormal(m, sigma.size(), rng);
  const DenseMatrix v = random_orthonormal(n, sigma.size(), rng);
  DenseMatrix us = u;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < sigma.size(); ++j) us(i, j) *= sigma[j];
  return matmul_nt(us, v);
}

/// σ_i = scale · ratioⁱ, i = 0..count−1
inline std::vector<double> geometric_spectrum(std::size_t count, double scale, double ratio) {
  std::vector<double> s(count);
  double v = scale;
  for (auto& e : s) {
    e = v;
    v *= ratio;
  }
  return s;
}

}  // namespace hsired
