#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/qr.hpp"

namespace hsired {

struct SvdResult {
  DenseMatrix u;          // m×r, orthonormal columns
  std::vector<double> s;  // non-increasing, non-negative
  DenseMatrix vt;         // r×n, orthonormal rows

  std::size_t rank() const noexcept { return s.size(); }
};

struct JacobiOptions {
  int max_sweeps = 100;
  double relative_tolerance = 1e-15;
};

namespace detail {

/// Gram-Schmidt completion: fills the columns flagged in `missing` with unit
/// vectors orthogonal to every other column. Columns are stored contiguously.
inline void complete_orthonormal_columns(std::vector<std::vector<double>>& cols, const std::vector<bool>& missing) {
  const std::size_t dim = cols.empty() ? 0 : cols.front().size();
  std::size_t next_basis = 0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!missing[c]) continue;
    for (; next_basis < dim; ++next_basis) {
      std::vector<double> cand(dim, 0.0);
      cand[next_basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t o = 0; o < cols.size(); ++o) {
          if (o == c || (missing[o] && o > c)) continue;
          double dot = 0.0;
          for (std::size_t i = 0; i < dim; ++i) dot += cols[o][i] * cand[i];
          for (std::size_t i = 0; i < dim; ++i) cand[i] -= dot * cols[o][i];
        }
      }
      double norm = 0.0;
      for (double e : cand) norm += e * e;
      norm = std::sqrt(norm);
      if (norm > 0.5) {
        for (double& e : cand) e /= norm;
        cols[c] = std::move(cand);
        ++next_basis;
        break;
      }
    }
  }
}

/// Flip each singular pair so the largest-magnitude entry of the U column is
/// positive (first occurrence wins ties).
inline void normalize_signs(DenseMatrix& u, DenseMatrix& vt) {
  for (std::size_t c = 0; c < u.cols(); ++c) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
      if (std::abs(u(i, c)) > best_abs) {
        best_abs = std::abs(u(i, c));
        best = i;
      }
    }
    if (u.rows() > 0 && u(best, c) < 0.0) {
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) = -u(i, c);
      for (double& v : vt.row(c)) v = -v;
    }
  }
}

/// One-sided (Hestenes) Jacobi on a square matrix: cyclic Jacobi rotations of
/// the Gram matrix WᵀW, applied implicitly to the columns of W so the Gram
/// matrix is never formed. Returns the full SVD sorted by singular value.
inline SvdResult jacobi_svd_square(const DenseMatrix& a, double frobenius, const JacobiOptions& opts) {
  const std::size_t n = a.cols();
  std::vector<std::vector<double>> w(n, std::vector<double>(a.rows()));
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double absolute_floor = (eps * frobenius) * (eps * frobenius);
  bool converged = n < 2;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto& wi = w[i];
        auto& wj = w[j];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < wi.size(); ++k) {
          alpha += wi[k] * wi[k];
          beta += wj[k] * wj[k];
          gamma += wi[k] * wj[k];
        }
        if (std::abs(gamma) <= absolute_floor) continue;
        if (std::abs(gamma) <= opts.relative_tolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < wi.size(); ++k) {
          const double x = wi[k], y = wj[k];
          wi[k] = c * x - s * y;
          wj[k] = s * x + c * y;
        }
        auto& vi = v[i];
        auto& vj = v[j];
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vi[k], y = vj[k];
          vi[k] = c * x - s * y;
          vj[k] = s * x + c * y;
        }
      }
    }
    converged = !rotated;
  }
  require(converged, ErrorKind::Convergence,
          "Jacobi SVD did not converge within " + std::to_string(opts.max_sweeps) + " sweeps");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (double e : w[j]) s += e * e;
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  // Columns whose norm is at rounding level carry no direction information.
  const double cutoff = sigma.empty() ? 0.0 : eps * static_cast<double>(n) * std::max(frobenius, sigma[order[0]]);
  std::vector<std::vector<double>> ucols(n);
  std::vector<bool> missing(n, false);
  SvdResult out{DenseMatrix(a.rows(), n), std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order[r];
    out.s[r] = sigma[j];
    if (sigma[j] <= cutoff) {
      missing[r] = true;
      ucols[r].assign(a.rows(), 0.0);
    } else {
      ucols[r] = w[j];
      for (double& e : ucols[r]) e /= sigma[j];
    }
    for (std::size_t k = 0; k < n; ++k) out.vt(r, k) = v[j][k];
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) complete_orthonormal_columns(ucols, missing);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < a.rows(); ++i) out.u(i, r) = ucols[r][i];
  return out;
}

}  // namespace detail

/// Top-k singular triplets of A.
///
/// Tall input is first reduced by Householder QR (A = QR), the n×n factor R is
/// diagonalized by one-sided cyclic Jacobi, and U = Q·U_R. Wide input is
/// handled through Aᵀ. Singular vectors follow the sign convention of
/// detail::normalize_signs so results are comparable across algorithms.
inline SvdResult exact_svd(const DenseMatrix& a, std::size_t k, const JacobiOptions& opts = {}) {
  const std::size_t min_dim = std::min(a.rows(), a.cols());
  require(k >= 1 && k <= min_dim, ErrorKind::Dimension,
          "exact_svd rank " + std::to_string(k) + " outside [1, " + std::to_string(min_dim) + "]");

  const bool wide = a.rows() < a.cols();
  const DenseMatrix tall = wide ? transpose(a) : a;
  const double frob = frobenius_norm(tall);

  QrResult qr = householder_qr(tall);
  SvdResult core = detail::jacobi_svd_square(qr.r, frob, opts);
  DenseMatrix u_full = matmul(qr.q, core.u);

  SvdResult out;
  out.s.assign(core.s.begin(), core.s.begin() + static_cast<std::ptrdiff_t>(k));
  DenseMatrix left = left_columns(u_full, k);
  DenseMatrix right_t = top_rows(core.vt, k);
  if (wide) {
    // A = (U Σ Vᵀ)ᵀ of the transpose: roles of the two factors swap.
    out.u = transpose(right_t);
    out.vt = transpose(left);
  } else {
    out.u = std::move(left);
    out.vt = std::move(right_t);
  }
  detail::normalize_signs(out.u, out.vt);
  return out;
}

/// U·diag(s)·Vᵀ
inline DenseMatrix reconstruct(const SvdResult& svd) {
  DenseMatrix us = svd.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= svd.s[j];
  return matmul(us, svd.vt);
}

}  // namespace hsired
