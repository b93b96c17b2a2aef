#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsired/hsi/cube.hpp"
#include "hsired/linalg/matrix.hpp"
#include "hsired/random.hpp"

namespace hsired {

using Label = std::uint16_t;

/// Labeled pixels: row i of `features` is the spectrum of raster offset
/// pixel_indices[i], whose class is labels[i] (never 0).
struct SampleSet {
  DenseMatrix features;
  std::vector<Label> labels;
  std::vector<std::size_t> pixel_indices;

  std::size_t size() const noexcept { return labels.size(); }

  bool operator==(const SampleSet&) const = default;
};

/// Row subset in the given order.
inline SampleSet select(const SampleSet& s, const std::vector<std::size_t>& rows) {
  SampleSet out{DenseMatrix(rows.size(), s.features.cols()), {}, {}};
  out.labels.reserve(rows.size());
  out.pixel_indices.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto src = s.features.row(rows[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(s.labels[rows[r]]);
    out.pixel_indices.push_back(s.pixel_indices[rows[r]]);
  }
  return out;
}

inline SampleSet with_features(const SampleSet& s, DenseMatrix features) {
  require(features.rows() == s.size(), ErrorKind::Dimension, "feature rows do not match sample count");
  return {std::move(features), s.labels, s.pixel_indices};
}

/// Per-class sample counts, keyed by class id.
inline std::map<Label, std::size_t> class_counts(const std::vector<Label>& labels) {
  std::map<Label, std::size_t> counts;
  for (Label l : labels) ++counts[l];
  return counts;
}

/// Every labeled pixel in raster order.
inline SampleSet extract_labeled(const HsiCube& cube, const GroundTruth& gt) {
  require(cube.height == gt.height && cube.width == gt.width, ErrorKind::Dimension,
          "cube is " + std::to_string(cube.height) + "x" + std::to_string(cube.width) + " but ground truth is " +
              std::to_string(gt.height) + "x" + std::to_string(gt.width));
  std::vector<std::size_t> pixels;
  for (std::size_t p = 0; p < gt.pixels(); ++p)
    if (gt.labels[p] != 0) pixels.push_back(p);

  SampleSet s{DenseMatrix(pixels.size(), cube.bands), {}, pixels};
  s.labels.reserve(pixels.size());
  const std::size_t plane = cube.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    auto row = s.features.row(i);
    for (std::size_t b = 0; b < cube.bands; ++b) row[b] = cube.values[b * plane + pixels[i]];
    s.labels.push_back(gt.labels[pixels[i]]);
  }
  return s;
}

struct Split {
  SampleSet train;
  SampleSet test;
  std::vector<std::string> warnings;
};

/// round-half-up(fraction·n) clamped to [1, n−1]; a single-sample class goes
/// entirely to training.
inline std::size_t train_count_for(std::size_t n, double fraction) {
  if (n <= 1) return n;
  const auto rounded = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  return std::clamp<std::size_t>(rounded, 1, n - 1);
}

/// Stratified split: classes are visited in ascending id order, each class's
/// rows are shuffled by one shared Rng(seed) and the first train_count_for(n_c)
/// go to training. Both sides keep raster order.
inline Split stratified_split(const SampleSet& samples, double train_fraction, std::uint64_t seed) {
  require(train_fraction > 0.0 && train_fraction < 1.0, ErrorKind::Domain,
          "train fraction must lie in (0, 1), got " + std::to_string(train_fraction));
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples.labels[i]].push_back(i);

  Rng rng(seed);
  Split out;
  std::vector<std::size_t> train_rows, test_rows;
  for (auto& [label, rows] : by_class) {
    if (rows.size() == 1)
      out.warnings.push_back("class " + std::to_string(label) + " has a single sample; placed in training only");
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t n_train = train_count_for(rows.size(), train_fraction);
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  out.train = select(samples, train_rows);
  out.test = select(samples, test_rows);
  return out;
}

}  // namespace hsired
