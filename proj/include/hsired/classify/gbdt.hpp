#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hsired/classify/svm.hpp"
#include "hsired/hsi/samples.hpp"
#include "hsired/random.hpp"

namespace hsired {

/// L2 penalty on leaf weights.
inline constexpr double kGbdtLambda = 1.0;

struct GbdtParams {
  std::size_t num_trees = 200;  // boosting rounds; each round grows one tree per class
  double learning_rate = 0.1;
  std::size_t max_leaves = 31;
  std::size_t min_samples_leaf = 20;
  std::size_t num_bins = 64;
  double goss_top_rate = 0.2;    // a: fraction kept by largest |gradient|
  double goss_other_rate = 0.1;  // b: fraction sampled from the rest
  std::uint64_t seed = 0;

  /// GOSS runs when 0 < a, 0 < b and a + b < 1; otherwise every row is used.
  bool goss_enabled() const noexcept {
    return goss_top_rate > 0.0 && goss_other_rate > 0.0 && goss_top_rate + goss_other_rate < 1.0;
  }

  bool operator==(const GbdtParams&) const = default;
};

inline void validate(const GbdtParams& p) {
  require(p.num_trees >= 1, ErrorKind::Domain, "num_trees must be >= 1");
  require(p.learning_rate > 0.0 && p.learning_rate <= 1.0, ErrorKind::Domain, "learning_rate must lie in (0, 1]");
  require(p.max_leaves >= 2, ErrorKind::Domain, "max_leaves must be >= 2");
  require(p.min_samples_leaf >= 1, ErrorKind::Domain, "min_samples_leaf must be >= 1");
  require(p.num_bins >= 2 && p.num_bins <= 256, ErrorKind::Domain, "num_bins must lie in [2, 256]");
  require(p.goss_top_rate >= 0.0 && p.goss_top_rate <= 1.0 && p.goss_other_rate >= 0.0 && p.goss_other_rate <= 1.0,
          ErrorKind::Domain, "GOSS rates must lie in [0, 1]");
  require(p.goss_top_rate + p.goss_other_rate <= 1.0, ErrorKind::Domain, "GOSS rates must satisfy a + b <= 1");
}

/// A node is a leaf when feature < 0. Internal nodes send x[feature] ≤ threshold left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const {
    std::size_t at = 0;
    while (!nodes[at].is_leaf())
      at = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[at].feature)] <= nodes[at].threshold ? nodes[at].left
                                                                                                          : nodes[at].right);
    return nodes[at].value;
  }

  std::size_t num_leaves() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
  }

  bool operator==(const Tree&) const = default;
};

/// Softmax boosting model: score_k(x) = priors[k] + Σ_t ensembles[k][t](x),
/// with k indexing `classes` (ascending ids).
struct GbdtModel {
  GbdtParams params;
  std::vector<Label> classes;
  std::vector<double> priors;
  std::vector<std::vector<Tree>> ensembles;

  std::size_t num_features = 0;

  bool operator==(const GbdtModel&) const = default;
};

// ---------------------------------------------------------------------------
// Loss

/// −log softmax(scores)[label_index]
inline double softmax_cross_entropy(std::span<const double> scores, std::size_t label_index) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - top);
  return top + std::log(sum) - scores[label_index];
}

/// Per-score gradient p_k − [k = label] and diagonal hessian p_k(1 − p_k).
inline void softmax_gradients(std::span<const double> scores, std::size_t label_index, std::span<double> grad,
                              std::span<double> hess) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    grad[k] = std::exp(scores[k] - top);
    sum += grad[k];
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double p = grad[k] / sum;
    grad[k] = p - (k == label_index ? 1.0 : 0.0);
    hess[k] = p * (1.0 - p);
  }
}

// ---------------------------------------------------------------------------
// Histogram binning

/// Per-feature quantile cut points. bin(x) counts the edges strictly below x,
/// so "bin ≤ t" is exactly "x ≤ edges[t]".
struct BinMapper {
  std::vector<std::vector<double>> edges;

  static BinMapper fit(const DenseMatrix& x, std::size_t num_bins) {
    BinMapper m;
    m.edges.resize(x.cols());
    std::vector<double> column(x.rows());
    const std::size_t n = x.rows();
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (std::size_t i = 0; i < n; ++i) column[i] = x(i, f);
      std::sort(column.begin(), column.end());
      auto& e = m.edges[f];
      for (std::size_t q = 1; q < num_bins && n > 0; ++q) {
        const std::size_t pos = q * n / num_bins;
        if (pos == 0) continue;
        const double edge = column[pos - 1];
        if (edge < column.back() && (e.empty() || edge > e.back())) e.push_back(edge);
      }
    }
    return m;
  }

  std::uint8_t bin(std::size_t feature, double value) const {
    const auto& e = edges[feature];
    return static_cast<std::uint8_t>(std::lower_bound(e.begin(), e.end(), value) - e.begin());
  }

  std::size_t num_bins(std::size_t feature) const { return edges[feature].size() + 1; }
};

// ---------------------------------------------------------------------------
// Gradient-based one-side sampling

/// Row weights for one boosting round (0 = row unused). The ⌊a·n⌋ rows with
/// the largest magnitude are kept with weight 1 (stable order on ties); ⌊b·n⌋
/// of the remaining rows are drawn uniformly without replacement and weighted
/// (1 − a)/b so gradient sums stay unbiased.
inline std::vector<double> goss_weights(std::span<const double> magnitude, double top_rate, double other_rate, Rng& rng) {
  const std::size_t n = magnitude.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return magnitude[x] > magnitude[y]; });
  const auto top_n = static_cast<std::size_t>(std::floor(top_rate * static_cast<double>(n)));
  const std::size_t rest = n - top_n;
  const std::size_t other_n =
      std::min(rest, static_cast<std::size_t>(std::floor(other_rate * static_cast<double>(n))));

  std::vector<double> w(n, 0.0);
  for (std::size_t r = 0; r < top_n; ++r) w[order[r]] = 1.0;
  const double amplify = (1.0 - top_rate) / other_rate;
  for (std::size_t r = 0; r < other_n; ++r) {
    const std::size_t pick = top_n + r + static_cast<std::size_t>(rng.below(rest - r));
    std::swap(order[top_n + r], order[pick]);
    w[order[top_n + r]] = amplify;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Training

struct SplitEvent {
  std::size_t round = 0;
  std::size_t class_index = 0;
  double chosen_gain = 0.0;
  std::vector<double> other_open_gains;  // best gains of the open leaves not chosen
};

struct GbdtTrace {
  std::vector<double> training_loss;  // mean cross-entropy; [0] is the prior-only loss
  std::vector<SplitEvent> splits;
};

namespace detail {

struct HistBin {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  std::size_t bin = 0;
};

struct OpenLeaf {
  std::size_t node = 0;
  std::vector<std::uint32_t> rows;
  std::vector<HistBin> hist;  // feature-major, stride = max bins
  HistBin total;
  SplitChoice best;
};

inline double leaf_score(double g, double h) { return g * g / (h + kGbdtLambda); }

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::uint8_t>& binned, std::size_t num_features, const BinMapper& mapper,
             const GbdtParams& params)
      : binned_(binned), features_(num_features), mapper_(mapper), params_(params) {
    for (std::size_t f = 0; f < features_; ++f) stride_ = std::max(stride_, mapper_.num_bins(f));
  }

  /// Grows one tree on rows with non-zero weight; g/h are already weighted.
  Tree grow(const std::vector<std::uint32_t>& rows, std::span<const double> g, std::span<const double> h,
            std::size_t round, std::size_t class_index, GbdtTrace* trace) {
    Tree tree;
    tree.nodes.push_back({});
    std::vector<OpenLeaf> open;
    open.push_back(make_leaf(0, rows, g, h));

    std::size_t leaves = 1;
    while (leaves < params_.max_leaves) {
      std::size_t pick = open.size();
      for (std::size_t l = 0; l < open.size(); ++l)
        if (open[l].best.gain > 0.0 && (pick == open.size() || open[l].best.gain > open[pick].best.gain)) pick = l;
      if (pick == open.size()) break;

      if (trace) {
        SplitEvent ev{round, class_index, open[pick].best.gain, {}};
        for (std::size_t l = 0; l < open.size(); ++l)
          if (l != pick) ev.other_open_gains.push_back(open[l].best.gain);
        trace->splits.push_back(std::move(ev));
      }

      OpenLeaf parent = std::move(open[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
      const auto f = static_cast<std::size_t>(parent.best.feature);
      const std::size_t t = parent.best.bin;

      std::vector<std::uint32_t> left_rows, right_rows;
      for (std::uint32_t r : parent.rows) (binned_[r * features_ + f] <= t ? left_rows : right_rows).push_back(r);

      const auto left_node = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      TreeNode& split = tree.nodes[parent.node];
      split.feature = static_cast<int>(f);
      split.threshold = mapper_.edges[f][t];
      split.left = left_node;
      split.right = left_node + 1;

      // Histogram subtraction: build the smaller child, derive the larger.
      const bool left_small = left_rows.size() <= right_rows.size();
      OpenLeaf small = make_leaf(static_cast<std::size_t>(left_small ? left_node : left_node + 1),
                                 left_small ? left_rows : right_rows, g, h);
      OpenLeaf large;
      large.node = static_cast<std::size_t>(left_small ? left_node + 1 : left_node);
      large.rows = left_small ? std::move(right_rows) : std::move(left_rows);
      large.hist = std::move(parent.hist);
      for (std::size_t b = 0; b < large.hist.size(); ++b) {
        large.hist[b].g -= small.hist[b].g;
        large.hist[b].h -= small.hist[b].h;
        large.hist[b].count -= small.hist[b].count;
      }
      large.total = {parent.total.g - small.total.g, parent.total.h - small.total.h, parent.total.count - small.total.count};
      large.best = best_split(large.hist, large.total);

      if (left_small) {
        open.push_back(std::move(small));
        open.push_back(std::move(large));
      } else {
        open.push_back(std::move(large));
        open.push_back(std::move(small));
      }
      ++leaves;
    }

    for (const auto& leaf : open) tree.nodes[leaf.node].value = -params_.learning_rate * leaf.total.g / (leaf.total.h + kGbdtLambda);
    return tree;
  }

  /// Best (feature, bin) for a histogram: largest gain, ties to the smallest
  /// feature then the smallest bin. Gain is zero when no split is admissible.
  SplitChoice best_split(const std::vector<HistBin>& hist, const HistBin& total) const {
    SplitChoice best;
    const double parent = leaf_score(total.g, total.h);
    for (std::size_t f = 0; f < features_; ++f) {
      HistBin left;
      const std::size_t bins = mapper_.num_bins(f);
      for (std::size_t b = 0; b + 1 < bins; ++b) {
        const HistBin& cell = hist[f * stride_ + b];
        left.g += cell.g;
        left.h += cell.h;
        left.count += cell.count;
        const std::size_t right_count = total.count - left.count;
        if (left.count < params_.min_samples_leaf) continue;
        if (right_count < params_.min_samples_leaf) break;
        const double gain =
            0.5 * (leaf_score(left.g, left.h) + leaf_score(total.g - left.g, total.h - left.h) - parent);
        if (gain > best.gain) best = {gain, static_cast<int>(f), b};
      }
    }
    return best;
  }

 private:
  OpenLeaf make_leaf(std::size_t node, std::vector<std::uint32_t> rows, std::span<const double> g,
                     std::span<const double> h) const {
    OpenLeaf leaf;
    leaf.node = node;
    leaf.hist.assign(features_ * stride_, {});
    for (std::uint32_t r : rows) {
      const std::uint8_t* bins = &binned_[r * features_];
      for (std::size_t f = 0; f < features_; ++f) {
        HistBin& cell = leaf.hist[f * stride_ + bins[f]];
        cell.g += g[r];
        cell.h += h[r];
        ++cell.count;
      }
      leaf.total.g += g[r];
      leaf.total.h += h[r];
      ++leaf.total.count;
    }
    leaf.rows = std::move(rows);
    leaf.best = best_split(leaf.hist, leaf.total);
    return leaf;
  }

  const std::vector<std::uint8_t>& binned_;
  std::size_t features_;
  const BinMapper& mapper_;
  const GbdtParams& params_;
  std::size_t stride_ = 1;
};

inline double mean_cross_entropy(const std::vector<double>& scores, const std::vector<std::size_t>& label_index,
                                 std::size_t num_classes) {
  double total = 0.0;
  for (std::size_t i = 0; i < label_index.size(); ++i)
    total += softmax_cross_entropy(std::span<const double>(&scores[i * num_classes], num_classes), label_index[i]);
  return total / static_cast<double>(label_index.size());
}

}  // namespace detail

/// Multiclass softmax boosting with leaf-wise histogram trees.
///
/// Each round computes softmax cross-entropy gradients/hessians for every
/// (row, class), optionally subsamples rows by GOSS using Σ_k |g_ik| as the
/// magnitude, then grows one tree per class. Growth always splits the open
/// leaf with the largest gain until max_leaves or no positive gain remains.
/// Leaf weight is −η·G/(H + λ).
inline GbdtModel gbdt_train(const SampleSet& train, const GbdtParams& params = {}, GbdtTrace* trace = nullptr) {
  validate(params);
  require(train.size() > 0, ErrorKind::Degenerate, "empty training set");
  GbdtModel model{params, distinct_classes(train.labels), {}, {}, train.features.cols()};
  require(model.classes.size() >= 2, ErrorKind::Degenerate,
          "GBDT needs at least 2 classes; every gradient would be zero with a single class");
  require(train.size() < std::numeric_limits<std::uint32_t>::max(), ErrorKind::Resource, "too many training rows");

  const std::size_t n = train.size();
  const std::size_t num_classes = model.classes.size();
  const std::size_t nf = train.features.cols();

  std::vector<std::size_t> label_index(n);
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    label_index[i] = static_cast<std::size_t>(
        std::lower_bound(model.classes.begin(), model.classes.end(), train.labels[i]) - model.classes.begin());
    ++counts[label_index[i]];
  }
  for (std::size_t k = 0; k < num_classes; ++k)
    model.priors.push_back(std::log(static_cast<double>(counts[k]) / static_cast<double>(n)));
  model.ensembles.resize(num_classes);

  const BinMapper mapper = BinMapper::fit(train.features, params.num_bins);
  std::vector<std::uint8_t> binned(n * nf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < nf; ++f) binned[i * nf + f] = mapper.bin(f, train.features(i, f));

  std::vector<double> scores(n * num_classes);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(model.priors.begin(), model.priors.end(), scores.begin() + static_cast<std::ptrdiff_t>(i * num_classes));
  if (trace) trace->training_loss.push_back(detail::mean_cross_entropy(scores, label_index, num_classes));

  detail::TreeGrower grower(binned, nf, mapper, params);
  Rng rng(params.seed);
  std::vector<double> grad(n * num_classes), hess(n * num_classes);
  std::vector<double> g(n), h(n), magnitude(n);

  for (std::size_t round = 0; round < params.num_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t off = i * num_classes;
      softmax_gradients(std::span<const double>(&scores[off], num_classes), label_index[i],
                        std::span<double>(&grad[off], num_classes), std::span<double>(&hess[off], num_classes));
      magnitude[i] = 0.0;
      for (std::size_t k = 0; k < num_classes; ++k) magnitude[i] += std::abs(grad[off + k]);
    }
    if (round == 0) {
      const bool all_zero = std::all_of(magnitude.begin(), magnitude.end(), [](double m) { return m == 0.0; });
      require(!all_zero, ErrorKind::Degenerate, "all gradients are zero at the first round");
    }

    std::vector<double> weight = params.goss_enabled()
                                     ? goss_weights(magnitude, params.goss_top_rate, params.goss_other_rate, rng)
                                     : std::vector<double>(n, 1.0);
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (weight[i] > 0.0) rows.push_back(static_cast<std::uint32_t>(i));

    std::vector<Tree> round_trees;
    for (std::size_t k = 0; k < num_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = weight[i] * grad[i * num_classes + k];
        h[i] = weight[i] * hess[i * num_classes + k];
      }
      round_trees.push_back(grower.grow(rows, g, h, round, k, trace));
    }
    for (std::size_t k = 0; k < num_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) scores[i * num_classes + k] += round_trees[k].predict(train.features.row(i));
      model.ensembles[k].push_back(std::move(round_trees[k]));
    }
    if (trace) trace->training_loss.push_back(detail::mean_cross_entropy(scores, label_index, num_classes));
  }
  return model;
}

inline std::vector<double> gbdt_scores(const GbdtModel& model, std::span<const double> x) {
  std::vector<double> s = model.priors;
  for (std::size_t k = 0; k < s.size(); ++k)
    for (const Tree& t : model.ensembles[k]) s[k] += t.predict(x);
  return s;
}

/// Argmax of accumulated scores; ties go to the smallest class id.
inline std::vector<Label> gbdt_predict(const GbdtModel& model, const DenseMatrix& x) {
  require(x.cols() == model.num_features, ErrorKind::Dimension,
          "expected " + std::to_string(model.num_features) + " features, got " + std::to_string(x.cols()));
  std::vector<Label> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::vector<double> s = gbdt_scores(model, x.row(i));
    out[i] = model.classes[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())];
  }
  return out;
}

}  // namespace hsired
