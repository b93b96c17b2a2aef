#pragma once

#include <cstdint>
#include <vector>

#include "hsired/hsi/samples.hpp"

namespace hsired {

struct EvalReport {
  std::vector<std::vector<std::size_t>> confusion;  // [true − 1][predicted − 1]
  double overall_accuracy = 0.0;
  std::vector<double> per_class_recall;  // 0 for classes absent from the truth
  std::size_t n_test = 0;

  bool operator==(const EvalReport&) const = default;
};

inline EvalReport evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth, std::size_t num_classes) {
  require(predicted.size() == truth.size(), ErrorKind::Dimension,
          "predictions (" + std::to_string(predicted.size()) + ") and truth (" + std::to_string(truth.size()) +
              ") differ in length");
  EvalReport r;
  r.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  r.n_test = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    require(truth[i] >= 1 && truth[i] <= num_classes, ErrorKind::Domain, "true label out of range");
    require(predicted[i] >= 1 && predicted[i] <= num_classes, ErrorKind::Domain, "predicted label out of range");
    ++r.confusion[truth[i] - 1][predicted[i] - 1];
  }
  std::size_t correct = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t support = 0;
    for (std::size_t p = 0; p < num_classes; ++p) support += r.confusion[c][p];
    correct += r.confusion[c][c];
    r.per_class_recall.push_back(support == 0 ? 0.0 : static_cast<double>(r.confusion[c][c]) / static_cast<double>(support));
  }
  r.overall_accuracy = r.n_test == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(r.n_test);
  return r;
}

}  // namespace hsired
