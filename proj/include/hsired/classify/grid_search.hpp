#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsired/classify/svm.hpp"
#include "hsired/random.hpp"

namespace hsired {

struct CvCell {
  double c = 0.0;
  double gamma = 0.0;
  double accuracy = 0.0;

  bool operator==(const CvCell&) const = default;
};

struct GridSearchResult {
  double best_c = 0.0;
  double best_gamma = 0.0;
  std::vector<CvCell> table;  // c-major, in grid order
  std::size_t folds = 0;      // folds actually used
  std::vector<std::string> warnings;
};

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid{1, 10, 100, 600, 1000};
  return grid;
}

inline const std::vector<double>& default_gamma_grid() {
  static const std::vector<double> grid{0.01, 0.1, 0.5, 1, 2};
  return grid;
}

/// Fold id per sample. Within each class (ascending id) the rows are shuffled
/// by one shared Rng(seed) and dealt round-robin, so every fold sees every
/// class whenever n_c ≥ folds.
inline std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels, std::size_t folds, std::uint64_t seed) {
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> fold(labels.size(), 0);
  for (auto& [label, rows] : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t p = 0; p < rows.size(); ++p) fold[rows[p]] = p % folds;
  }
  return fold;
}

/// Stratified k-fold accuracy for every (C, γ) cell. The winner is the highest
/// pooled accuracy; ties go to the smaller C, then the smaller γ. When the
/// rarest class has fewer samples than `folds`, the fold count drops to that
/// size with a warning.
inline GridSearchResult grid_search_cv(const SampleSet& train, const std::vector<double>& c_grid,
                                       const std::vector<double>& gamma_grid, std::size_t folds, std::uint64_t seed,
                                       SvmParams base = {}) {
  require(!c_grid.empty() && !gamma_grid.empty(), ErrorKind::Usage, "grid search needs non-empty C and gamma grids");
  require(folds >= 2, ErrorKind::Usage, "grid search needs at least 2 folds");

  GridSearchResult res;
  std::size_t rarest = train.size();
  for (const auto& [label, n] : class_counts(train.labels)) rarest = std::min(rarest, n);
  require(rarest >= 2, ErrorKind::Degenerate, "a class has fewer than 2 samples; cross-validation impossible");
  if (rarest < folds) {
    res.warnings.push_back("rarest class has " + std::to_string(rarest) + " samples; reducing folds from " +
                           std::to_string(folds) + " to " + std::to_string(rarest));
    folds = rarest;
  }
  res.folds = folds;

  const std::vector<std::size_t> fold = stratified_folds(train.labels, folds, seed);
  std::vector<SampleSet> fit_sets, held_sets;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> fit_rows, held_rows;
    for (std::size_t i = 0; i < train.size(); ++i) (fold[i] == f ? held_rows : fit_rows).push_back(i);
    fit_sets.push_back(select(train, fit_rows));
    held_sets.push_back(select(train, held_rows));
  }

  bool have_best = false;
  CvCell best;
  for (double c : c_grid) {
    for (double gamma : gamma_grid) {
      SvmParams p = base;
      p.c = c;
      p.gamma = gamma;
      std::size_t correct = 0;
      for (std::size_t f = 0; f < folds; ++f) {
        const SvmModel m = svm_train(fit_sets[f], p);
        const std::vector<Label> pred = svm_predict(m, held_sets[f].features);
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == held_sets[f].labels[i];
      }
      const CvCell cell{c, gamma, static_cast<double>(correct) / static_cast<double>(train.size())};
      res.table.push_back(cell);
      const bool better = !have_best || cell.accuracy > best.accuracy ||
                          (cell.accuracy == best.accuracy &&
                           (cell.c < best.c || (cell.c == best.c && cell.gamma < best.gamma)));
      if (better) {
        best = cell;
        have_best = true;
      }
    }
  }
  res.best_c = best.c;
  res.best_gamma = best.gamma;
  return res;
}

}  // namespace hsired
