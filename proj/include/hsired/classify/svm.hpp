#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <span>
#include <string>
#include <vector>

#include "hsired/hsi/samples.hpp"
#include "hsired/linalg/matrix.hpp"

namespace hsired {

struct SvmParams {
  double c = 600.0;
  double gamma = 0.5;
  double tolerance = 1e-3;  // stop when the maximal KKT violation m(α) − M(α) ≤ tolerance
  std::size_t max_iterations = 10'000'000;
  std::size_t cache_megabytes = 256;

  bool operator==(const SvmParams&) const = default;
};

inline void validate(const SvmParams& p) {
  require(p.c > 0.0, ErrorKind::Domain, "SVM C must be positive");
  require(p.gamma > 0.0, ErrorKind::Domain, "SVM gamma must be positive");
  require(p.tolerance > 0.0, ErrorKind::Domain, "SVM tolerance must be positive");
  require(p.max_iterations > 0, ErrorKind::Domain, "SVM iteration cap must be positive");
}

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - y[i];
    d += t * t;
  }
  return d;
}

/// exp(−γ‖x − y‖²)
inline double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  require(x.size() == y.size(), ErrorKind::Dimension, "rbf_kernel vectors differ in length");
  require(gamma > 0.0, ErrorKind::Domain, "rbf_kernel gamma must be positive");
  return std::exp(-gamma * squared_distance(x, y));
}

/// Per-band min/max scaling to [0, 1] fitted on training rows. Constant bands
/// map to 0.
struct FeatureScaling {
  std::vector<double> minimum;
  std::vector<double> range;

  static FeatureScaling fit(const DenseMatrix& x) {
    FeatureScaling s{std::vector<double>(x.cols(), std::numeric_limits<double>::infinity()),
                     std::vector<double>(x.cols(), -std::numeric_limits<double>::infinity())};
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto row = x.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) {
        s.minimum[j] = std::min(s.minimum[j], row[j]);
        s.range[j] = std::max(s.range[j], row[j]);
      }
    }
    for (std::size_t j = 0; j < x.cols(); ++j) s.range[j] -= s.minimum[j];
    return s;
  }

  DenseMatrix apply(const DenseMatrix& x) const {
    require(x.cols() == minimum.size(), ErrorKind::Dimension,
            "expected " + std::to_string(minimum.size()) + " features, got " + std::to_string(x.cols()));
    DenseMatrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
      auto row = out.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = range[j] > 0.0 ? (row[j] - minimum[j]) / range[j] : 0.0;
    }
    return out;
  }

  bool operator==(const FeatureScaling&) const = default;
};

struct BinarySmoResult {
  std::vector<double> alpha;  // 0 ≤ α_i ≤ C
  double bias = 0.0;          // decision(x) = Σ α_i y_i K(x_i, x) + bias
  std::size_t iterations = 0;
  double kkt_gap = 0.0;
  bool hit_iteration_cap = false;
};

namespace detail {

/// LRU cache of kernel rows K(x_i, ·) for one binary problem.
class KernelRowCache {
 public:
  KernelRowCache(const DenseMatrix& x, double gamma, std::size_t megabytes)
      : x_(x), gamma_(gamma), slots_(x.rows(), lru_.end()) {
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, megabytes * 1024 * 1024 / row_bytes);
  }

  std::span<const double> row(std::size_t i) {
    if (slots_[i] != lru_.end()) {
      lru_.splice(lru_.begin(), lru_, slots_[i]);
      return lru_.front().values;
    }
    if (lru_.size() >= capacity_) {
      slots_[lru_.back().index] = lru_.end();
      lru_.pop_back();
    }
    Entry e{i, std::vector<double>(x_.rows())};
    auto xi = x_.row(i);
    for (std::size_t t = 0; t < x_.rows(); ++t) e.values[t] = std::exp(-gamma_ * squared_distance(xi, x_.row(t)));
    lru_.push_front(std::move(e));
    slots_[i] = lru_.begin();
    return lru_.front().values;
  }

 private:
  struct Entry {
    std::size_t index;
    std::vector<double> values;
  };
  const DenseMatrix& x_;
  double gamma_;
  std::list<Entry> lru_;
  std::vector<std::list<Entry>::iterator> slots_;
  std::size_t capacity_ = 2;
};

}  // namespace detail

/// Binary C-SVM dual by SMO:
///   min ½ αᵀQα − eᵀα,  Q_ij = y_i y_j K(x_i, x_j),  0 ≤ α ≤ C,  yᵀα = 0.
/// The working pair is the maximal violating pair (first-order selection,
/// smallest index on ties); the two-variable subproblem is solved in closed
/// form and clipped to the box.
inline BinarySmoResult smo_solve(const DenseMatrix& x, std::span<const int> y, const SvmParams& params) {
  validate(params);
  const std::size_t n = x.rows();
  require(y.size() == n, ErrorKind::Dimension, "label count does not match rows");
  require(n >= 2, ErrorKind::Degenerate, "binary SVM needs at least 2 samples");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    require(v == 1 || v == -1, ErrorKind::Domain, "binary labels must be +1/-1");
    (v > 0 ? has_pos : has_neg) = true;
  }
  require(has_pos && has_neg, ErrorKind::Degenerate, "binary SVM needs both classes");

  const double c = params.c;
  constexpr double kTau = 1e-12;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  detail::KernelRowCache cache(x, params.gamma, params.cache_megabytes);

  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c); };

  BinarySmoResult res;
  for (;;) {
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low(t) && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    res.kkt_gap = (i == n || j == n) ? 0.0 : m_up - m_low;
    if (i == n || j == n || res.kkt_gap <= params.tolerance) break;
    if (res.iterations >= params.max_iterations) {
      res.hit_iteration_cap = true;
      break;
    }
    ++res.iterations;

    const auto ki = cache.row(i);
    const double kii = ki[i], kij = ki[j];
    const auto kj = cache.row(j);
    const double kjj = kj[j];
    const double old_ai = alpha[i], old_aj = alpha[j];

    if (y[i] != y[j]) {
      double quad = kii + kjj + 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = kii + kjj - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
    const auto ri = cache.row(i);
    const auto rj = cache.row(j);
    for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (y[i] * ri[t] * dai + y[j] * rj[t] * daj);
  }

  // ρ from free vectors, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
  res.bias = -rho;
  res.alpha = std::move(alpha);
  return res;
}

/// Σα − ½ Σ_ij α_i α_j y_i y_j K_ij, the quantity SMO maximizes.
inline double dual_objective(const DenseMatrix& x, std::span<const int> y, std::span<const double> alpha, double gamma) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j)
      quad += alpha[i] * alpha[j] * y[i] * y[j] * rbf_kernel(x.row(i), x.row(j), gamma);
  }
  return linear - 0.5 * quad;
}

/// One-vs-one machine for the pair (positive, negative), positive < negative.
struct BinaryMachine {
  Label positive = 0;
  Label negative = 0;
  DenseMatrix support_vectors;  // scaled feature rows
  std::vector<double> coef;     // α_i·y_i
  double bias = 0.0;
  std::size_t iterations = 0;
  double kkt_gap = 0.0;
  bool hit_iteration_cap = false;

  double decision(std::span<const double> x, double gamma) const {
    double f = bias;
    for (std::size_t s = 0; s < coef.size(); ++s) f += coef[s] * std::exp(-gamma * squared_distance(support_vectors.row(s), x));
    return f;
  }

  bool operator==(const BinaryMachine&) const = default;
};

struct SvmModel {
  SvmParams params;
  std::vector<Label> classes;  // ascending
  FeatureScaling scaling;
  std::vector<BinaryMachine> machines;  // pairs in lexicographic (positive, negative) order

  bool operator==(const SvmModel&) const = default;
};

inline std::vector<Label> distinct_classes(const std::vector<Label>& labels) {
  std::vector<Label> c(labels.begin(), labels.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline SvmModel svm_train(const SampleSet& train, const SvmParams& params = {}) {
  validate(params);
  require(train.size() > 0, ErrorKind::Degenerate, "empty training set");
  SvmModel model{params, distinct_classes(train.labels), FeatureScaling::fit(train.features), {}};
  require(model.classes.size() >= 2, ErrorKind::Degenerate, "SVM training needs at least 2 classes");
  const DenseMatrix scaled = model.scaling.apply(train.features);

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      const Label pos = model.classes[a], neg = model.classes[b];
      std::vector<std::size_t> rows;
      std::vector<int> y;
      for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.labels[i] == pos || train.labels[i] == neg) {
          rows.push_back(i);
          y.push_back(train.labels[i] == pos ? 1 : -1);
        }
      }
      DenseMatrix x(rows.size(), scaled.cols());
      for (std::size_t r = 0; r < rows.size(); ++r) std::copy(scaled.row(rows[r]).begin(), scaled.row(rows[r]).end(), x.row(r).begin());

      bool all_identical = true;
      for (std::size_t r = 1; r < x.rows() && all_identical; ++r)
        all_identical = std::equal(x.row(r).begin(), x.row(r).end(), x.row(0).begin());
      require(!all_identical, ErrorKind::Degenerate,
              "classes " + std::to_string(pos) + " and " + std::to_string(neg) +
                  " consist only of identical feature rows with conflicting labels");

      const BinarySmoResult r = smo_solve(x, y, params);
      BinaryMachine m{pos, neg, {}, {}, r.bias, r.iterations, r.kkt_gap, r.hit_iteration_cap};
      std::vector<std::size_t> sv;
      for (std::size_t t = 0; t < r.alpha.size(); ++t)
        if (r.alpha[t] > 0.0) sv.push_back(t);
      m.support_vectors = DenseMatrix(sv.size(), x.cols());
      for (std::size_t s = 0; s < sv.size(); ++s) {
        std::copy(x.row(sv[s]).begin(), x.row(sv[s]).end(), m.support_vectors.row(s).begin());
        m.coef.push_back(r.alpha[sv[s]] * y[sv[s]]);
      }
      model.machines.push_back(std::move(m));
    }
  }
  return model;
}

/// Majority vote over classes; ties go to the smallest class id. Each entry of
/// `votes` must be an index into `classes`.
inline Label vote(const std::vector<Label>& classes, const std::vector<std::size_t>& votes) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < votes.size(); ++k)
    if (votes[k] > votes[best]) best = k;
  return classes[best];
}

/// One-vs-one voting. A decision value of exactly 0 votes for the smaller id.
inline std::vector<Label> svm_predict(const SvmModel& model, const DenseMatrix& x) {
  const DenseMatrix scaled = model.scaling.apply(x);
  std::vector<std::size_t> class_index(65536, 0);
  for (std::size_t k = 0; k < model.classes.size(); ++k) class_index[model.classes[k]] = k;

  std::vector<Label> out(x.rows());
  std::vector<std::size_t> votes(model.classes.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& m : model.machines) {
      const double f = m.decision(scaled.row(i), model.params.gamma);
      ++votes[class_index[f >= 0.0 ? m.positive : m.negative]];
    }
    out[i] = vote(model.classes, votes);
  }
  return out;
}

}  // namespace hsired
