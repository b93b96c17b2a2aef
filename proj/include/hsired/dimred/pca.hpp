#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/randomized.hpp"
#include "hsired/linalg/svd.hpp"

namespace hsired {

enum class PcaMethod { Exact, Randomized };

/// Fitted reduction. `components` rows are orthonormal principal axes in
/// band space; `randomized` is set only for Randomized fits and records the
/// sketch parameters used (its k equals components.rows()).
struct PcaModel {
  std::vector<double> mean;
  DenseMatrix components;
  std::vector<double> explained_variance;
  PcaMethod method = PcaMethod::Exact;
  std::optional<RandomizedSvdParams> randomized;
  std::size_t n_fit_samples = 0;

  std::size_t num_components() const noexcept { return components.rows(); }
  std::size_t num_features() const noexcept { return mean.size(); }

  bool operator==(const PcaModel&) const = default;
};

inline std::vector<double> column_means(const DenseMatrix& x) {
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(x.rows());
  return mean;
}

inline DenseMatrix center(const DenseMatrix& x, const std::vector<double>& mean) {
  require(x.cols() == mean.size(), ErrorKind::Dimension,
          "expected " + std::to_string(mean.size()) + " features, got " + std::to_string(x.cols()));
  DenseMatrix c = x;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto row = c.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] -= mean[j];
  }
  return c;
}

/// Trace of the sample covariance (n−1 denominator).
inline double total_variance(const DenseMatrix& x) {
  require(x.rows() >= 2, ErrorKind::Degenerate, "total variance needs at least 2 samples");
  const DenseMatrix c = center(x, column_means(x));
  const double f = frobenius_norm(c);
  return f * f / static_cast<double>(x.rows() - 1);
}

namespace detail {

inline void check_pca_shape(const DenseMatrix& x, std::size_t k) {
  require(x.rows() >= 2, ErrorKind::Degenerate, "PCA needs at least 2 samples");
  const std::size_t limit = std::min(x.rows(), x.cols());
  require(k >= 1 && k <= limit, ErrorKind::Dimension,
          "PCA components " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
}

inline PcaModel model_from_svd(std::vector<double> mean, const SvdResult& svd, std::size_t n) {
  PcaModel m;
  m.mean = std::move(mean);
  m.components = svd.vt;
  m.explained_variance.reserve(svd.s.size());
  for (double s : svd.s) m.explained_variance.push_back(s * s / static_cast<double>(n - 1));
  m.n_fit_samples = n;
  // Orient each axis so its largest loading is positive; fits of the same data
  // by different routes then agree in sign as well as span.
  for (std::size_t r = 0; r < m.components.rows(); ++r) {
    auto row = m.components.row(r);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (std::abs(row[j]) > std::abs(row[best])) best = j;
    if (row[best] < 0.0)
      for (double& v : row) v = -v;
  }
  return m;
}

}  // namespace detail

inline PcaModel fit_pca(const DenseMatrix& x, std::size_t k) {
  detail::check_pca_shape(x, k);
  std::vector<double> mean = column_means(x);
  const SvdResult svd = exact_svd(center(x, mean), k);
  return detail::model_from_svd(std::move(mean), svd, x.rows());
}

/// PCA with the factorization done by randomized_svd; params.k is overridden by k.
inline PcaModel fit_rpca(const DenseMatrix& x, std::size_t k, RandomizedSvdParams params) {
  detail::check_pca_shape(x, k);
  params.k = k;
  validate(params, x.rows(), x.cols());
  std::vector<double> mean = column_means(x);
  const SvdResult svd = randomized_svd(center(x, mean), params);
  PcaModel m = detail::model_from_svd(std::move(mean), svd, x.rows());
  m.method = PcaMethod::Randomized;
  m.randomized = params;
  return m;
}

/// (x − mean)·componentsᵀ
inline DenseMatrix transform(const PcaModel& model, const DenseMatrix& x) {
  return matmul_nt(center(x, model.mean), model.components);
}

/// scores·components + mean, the rank-k reconstruction in band space.
inline DenseMatrix inverse_transform(const PcaModel& model, const DenseMatrix& scores) {
  require(scores.cols() == model.num_components(), ErrorKind::Dimension, "score width does not match model");
  DenseMatrix x = matmul(scores, model.components);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += model.mean[j];
  }
  return x;
}

inline std::vector<double> explained_variance_ratio(const PcaModel& model, double total) {
  require(total > 0.0, ErrorKind::Domain, "total variance must be positive");
  std::vector<double> ratio;
  ratio.reserve(model.explained_variance.size());
  for (double v : model.explained_variance) ratio.push_back(v / total);
  return ratio;
}

}  // namespace hsired
