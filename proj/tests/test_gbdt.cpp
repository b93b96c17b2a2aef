#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hsired/classify/gbdt.hpp"
#include "hsired/serialize.hpp"
#include "oracles.hpp"

using namespace hsired;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an hsired::Error";
  return ErrorKind::Usage;
}

/// Two classes drawn from unit Gaussians whose means are 6 apart.
SampleSet two_gaussians(std::size_t n, std::size_t dims, std::uint64_t seed) {
  Rng rng(seed);
  SampleSet s{DenseMatrix(n, dims), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const Label l = static_cast<Label>(1 + i % 2);
    for (std::size_t f = 0; f < dims; ++f) s.features(i, f) = rng.normal() + (l == 2 ? 6.0 / std::sqrt(static_cast<double>(dims)) : 0.0);
    s.labels.push_back(l);
    s.pixel_indices.push_back(i);
  }
  return s;
}

double accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

GbdtParams no_goss(GbdtParams p = {}) {
  p.goss_top_rate = 0.0;
  p.goss_other_rate = 0.0;
  return p;
}

}  // namespace

TEST(Softmax, GradientMatchesFiniteDifferences) {
  Rng rng(31);
  for (int point = 0; point < 20; ++point) {
    const std::size_t k = 2 + rng.below(5);
    std::vector<double> s(k);
    for (auto& v : s) v = 3.0 * rng.normal();
    const std::size_t label = rng.below(k);
    std::vector<double> g(k), h(k);
    softmax_gradients(s, label, g, h);
    auto loss = [&](const std::vector<double>& z) { return softmax_cross_entropy(z, label); };
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_NEAR(g[i], oracle::central_difference(loss, s, i, 1e-5), 1e-5);
      auto grad_i = [&](const std::vector<double>& z) {
        std::vector<double> gz(k), hz(k);
        softmax_gradients(z, label, gz, hz);
        return gz[i];
      };
      EXPECT_NEAR(h[i], oracle::central_difference(grad_i, s, i, 1e-5), 1e-5);
    }
  }
}

TEST(Softmax, StableForLargeScores) {
  const std::vector<double> s{1000.0, 0.0};
  EXPECT_NEAR(softmax_cross_entropy(s, 0), 0.0, 1e-12);
  EXPECT_NEAR(softmax_cross_entropy(s, 1), 1000.0, 1e-9);
}

TEST(BinMapper, EdgesAreQuantilesAndBinsCountEdgesBelow) {
  DenseMatrix x(100, 1);
  for (std::size_t i = 0; i < 100; ++i) x(i, 0) = static_cast<double>(i);
  const BinMapper m = BinMapper::fit(x, 4);
  EXPECT_EQ(m.edges[0], (std::vector<double>{24, 49, 74}));
  EXPECT_EQ(m.bin(0, 24.0), 0);
  EXPECT_EQ(m.bin(0, 24.5), 1);
  EXPECT_EQ(m.bin(0, 1e9), 3);
  EXPECT_EQ(m.num_bins(0), 4u);

  DenseMatrix constant(10, 1);
  EXPECT_EQ(BinMapper::fit(constant, 16).num_bins(0), 1u);
}

TEST(Gbdt, SingleClassIsDegenerate) {
  SampleSet s = two_gaussians(20, 2, 1);
  std::fill(s.labels.begin(), s.labels.end(), 1);
  EXPECT_EQ(kind_of([&] { gbdt_train(s); }), ErrorKind::Degenerate);
}

TEST(Gbdt, InvalidParams) {
  const SampleSet s = two_gaussians(20, 2, 1);
  GbdtParams p;
  p.num_trees = 0;
  EXPECT_EQ(kind_of([&] { gbdt_train(s, p); }), ErrorKind::Domain);
  p = {};
  p.num_bins = 300;
  EXPECT_EQ(kind_of([&] { gbdt_train(s, p); }), ErrorKind::Domain);
  p = {};
  p.goss_top_rate = 0.7;
  p.goss_other_rate = 0.5;
  EXPECT_EQ(kind_of([&] { gbdt_train(s, p); }), ErrorKind::Domain);
}

TEST(Gbdt, FirstSplitMatchesExhaustiveSearch) {
  // Class 1 for x ≤ 36 on feature 1; feature 0 is noise.
  Rng rng(3);
  SampleSet s{DenseMatrix(100, 2), {}, {}};
  for (std::size_t i = 0; i < 100; ++i) {
    s.features(i, 0) = rng.uniform();
    s.features(i, 1) = static_cast<double>(i);
    s.labels.push_back(i <= 36 ? 1 : 2);
    s.pixel_indices.push_back(i);
  }
  GbdtParams p = no_goss();
  p.num_trees = 1;
  p.max_leaves = 2;
  p.min_samples_leaf = 1;
  p.num_bins = 256;
  GbdtTrace trace;
  const GbdtModel m = gbdt_train(s, p, &trace);

  // Oracle: raw gradients at the prior, every "x ≤ v" threshold on every feature.
  const double p1 = 37.0 / 100.0;
  double best_gain = -1.0, best_threshold = 0.0;
  int best_feature = -1;
  for (int f = 0; f < 2; ++f) {
    for (std::size_t t = 0; t < 100; ++t) {
      const double v = s.features(t, static_cast<std::size_t>(f));
      double gl = 0, hl = 0, gr = 0, hr = 0;
      std::size_t nl = 0;
      for (std::size_t i = 0; i < 100; ++i) {
        const double g = p1 - (s.labels[i] == 1 ? 1.0 : 0.0);
        const double h = p1 * (1.0 - p1);
        if (s.features(i, static_cast<std::size_t>(f)) <= v) {
          gl += g;
          hl += h;
          ++nl;
        } else {
          gr += g;
          hr += h;
        }
      }
      if (nl == 0 || nl == 100) continue;
      const double gain = 0.5 * (gl * gl / (hl + 1) + gr * gr / (hr + 1) - (gl + gr) * (gl + gr) / (hl + hr + 1));
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_feature = f;
        best_threshold = v;
      }
    }
  }
  ASSERT_EQ(best_feature, 1);
  EXPECT_EQ(best_threshold, 36.0);
  const Tree& root = m.ensembles[0][0];
  EXPECT_EQ(root.nodes[0].feature, best_feature);
  EXPECT_EQ(root.nodes[0].threshold, best_threshold);
  ASSERT_FALSE(trace.splits.empty());
  EXPECT_NEAR(trace.splits[0].chosen_gain, best_gain, 1e-9 * best_gain);
  EXPECT_EQ(root.num_leaves(), 2u);
}

TEST(Gbdt, TwoGaussiansWithAndWithoutGoss) {
  const SampleSet train = two_gaussians(500, 5, 11), test = two_gaussians(500, 5, 12);
  GbdtParams p;
  p.num_trees = 50;
  const double with_goss = accuracy(gbdt_predict(gbdt_train(train, p), test.features), test.labels);
  const double without = accuracy(gbdt_predict(gbdt_train(train, no_goss(p)), test.features), test.labels);
  EXPECT_GE(with_goss, 0.95);
  EXPECT_GE(without, 0.95);
}

TEST(Gbdt, TrainingLossIsMonotoneWithoutGoss) {
  SampleSet s = two_gaussians(300, 4, 5);
  for (std::size_t i = 0; i < s.size(); i += 3) s.labels[i] = 3;
  GbdtParams p = no_goss();
  p.num_trees = 40;
  p.min_samples_leaf = 5;
  GbdtTrace trace;
  gbdt_train(s, p, &trace);
  ASSERT_EQ(trace.training_loss.size(), 41u);
  for (std::size_t t = 1; t < trace.training_loss.size(); ++t)
    EXPECT_LE(trace.training_loss[t], trace.training_loss[t - 1] + 1e-9) << "round " << t;
}

TEST(Gbdt, LeafWiseGrowthSplitsTheBestOpenLeaf) {
  const SampleSet s = two_gaussians(400, 6, 9);
  GbdtParams p;
  p.num_trees = 10;
  p.min_samples_leaf = 5;
  GbdtTrace trace;
  const GbdtModel m = gbdt_train(s, p, &trace);
  ASSERT_FALSE(trace.splits.empty());
  for (const auto& ev : trace.splits) {
    EXPECT_GT(ev.chosen_gain, 0.0);
    for (double other : ev.other_open_gains) EXPECT_GE(ev.chosen_gain, other);
  }
  for (const auto& ensemble : m.ensembles)
    for (const Tree& t : ensemble) EXPECT_LE(t.num_leaves(), p.max_leaves);
}

TEST(Gbdt, MinSamplesLeafIsRespected) {
  const SampleSet s = two_gaussians(200, 3, 2);
  GbdtParams p = no_goss();
  p.num_trees = 5;
  p.min_samples_leaf = 30;
  const GbdtModel m = gbdt_train(s, p);
  for (const auto& ensemble : m.ensembles)
    for (const Tree& t : ensemble) {
      std::vector<std::size_t> hits(t.nodes.size(), 0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t at = 0;
        while (!t.nodes[at].is_leaf())
          at = static_cast<std::size_t>(s.features(i, static_cast<std::size_t>(t.nodes[at].feature)) <= t.nodes[at].threshold
                                            ? t.nodes[at].left
                                            : t.nodes[at].right);
        ++hits[at];
      }
      for (std::size_t n = 0; n < t.nodes.size(); ++n)
        if (t.nodes[n].is_leaf()) {
          EXPECT_GE(hits[n], 30u);
        }
    }
}

TEST(Goss, KeepsTopRowsAndAmplifiesSample) {
  std::vector<double> mag(100);
  for (std::size_t i = 0; i < 100; ++i) mag[i] = static_cast<double>(i);
  Rng rng(1);
  const auto w = goss_weights(mag, 0.2, 0.1, rng);
  for (std::size_t i = 80; i < 100; ++i) EXPECT_EQ(w[i], 1.0);
  std::size_t sampled = 0;
  for (std::size_t i = 0; i < 80; ++i) {
    if (w[i] != 0.0) {
      EXPECT_DOUBLE_EQ(w[i], 8.0);
      ++sampled;
    }
  }
  EXPECT_EQ(sampled, 10u);
}

TEST(Goss, WeightedGradientSumIsUnbiased) {
  Rng data(8);
  const std::size_t n = 1000;
  std::vector<double> g(n), mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = data.normal() + 0.3;
    mag[i] = std::abs(g[i]);
  }
  const double truth = std::accumulate(g.begin(), g.end(), 0.0);
  std::vector<double> estimates;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto w = goss_weights(mag, 0.2, 0.1, rng);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * g[i];
    estimates.push_back(s);
  }
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / 200.0;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  const double stderr_mean = std::sqrt(var / 199.0) / std::sqrt(200.0);
  EXPECT_LE(std::abs(mean - truth), 3.0 * stderr_mean);
}

TEST(Goss, DisabledUnlessRatesAreProper) {
  GbdtParams p;
  EXPECT_TRUE(p.goss_enabled());
  p.goss_top_rate = 0.0;
  EXPECT_FALSE(p.goss_enabled());
  p.goss_top_rate = 0.5;
  p.goss_other_rate = 0.5;
  EXPECT_FALSE(p.goss_enabled());
}

TEST(GbdtPredict, PriorOnlyModelPredictsMajorityClass) {
  GbdtModel m;
  m.classes = {2, 4, 7};
  m.priors = {std::log(0.2), std::log(0.5), std::log(0.3)};
  m.ensembles.resize(3);
  m.num_features = 1;
  EXPECT_EQ(gbdt_predict(m, DenseMatrix::from_rows({{0.0}, {5.0}})), (std::vector<Label>{4, 4}));
  m.ensembles[2].push_back(Tree{{TreeNode{-1, 0.0, -1, -1, 10.0}}});
  EXPECT_EQ(gbdt_predict(m, DenseMatrix::from_rows({{0.0}}))[0], 7);
  EXPECT_EQ(kind_of([&] { gbdt_predict(m, DenseMatrix(1, 2)); }), ErrorKind::Dimension);
}

TEST(GbdtPredict, ScoreTiesGoToSmallestId) {
  GbdtModel m;
  m.classes = {3, 5};
  m.priors = {0.0, 0.0};
  m.ensembles.resize(2);
  m.num_features = 1;
  EXPECT_EQ(gbdt_predict(m, DenseMatrix::from_rows({{1.0}}))[0], 3);
}

TEST(GbdtModel, JsonRoundTripPredictsIdentically) {
  SampleSet train = two_gaussians(1000, 4, 21);
  for (std::size_t i = 0; i < train.size(); i += 4) train.labels[i] = 3;
  GbdtParams p;
  p.num_trees = 20;
  p.seed = 5;
  const GbdtModel m = gbdt_train(train, p);
  const GbdtModel back = gbdt_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(back, m);
  EXPECT_EQ(gbdt_predict(back, train.features), gbdt_predict(m, train.features));
}

TEST(Gbdt, DeterministicForSeed) {
  const SampleSet s = two_gaussians(200, 3, 4);
  GbdtParams p;
  p.num_trees = 10;
  p.seed = 3;
  EXPECT_EQ(gbdt_train(s, p), gbdt_train(s, p));
}
