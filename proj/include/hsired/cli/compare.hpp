#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

#include "hsired/cli/run.hpp"
#include "hsired/eval/mcnemar.hpp"

namespace hsired {

struct Comparison {
  std::string method_a;
  std::string method_b;
  double accuracy_a = 0.0;
  double accuracy_b = 0.0;
  McNemarResult test;
};

/// Both runs must come from the same scene and split: same inputs, seed and
/// train fraction, and identical test pixels with identical truth.
inline void check_same_split(const RunRecord& a, const RunRecord& b) {
  auto mismatch = [](const std::string& what) { throw Error(ErrorKind::MismatchedSplit, what); };
  if (a.config.cube_path != b.config.cube_path || a.config.ground_truth_path != b.config.ground_truth_path)
    mismatch("runs use different input scenes");
  if (a.config.seed != b.config.seed) mismatch("runs use different split seeds");
  if (a.config.train_fraction != b.config.train_fraction) mismatch("runs use different train fractions");
  if (a.test_pixels != b.test_pixels) mismatch("runs have different test pixels");
  if (a.test_truth != b.test_truth) mismatch("runs disagree on test truth labels");
}

inline Comparison cmd_compare(const RunRecord& a, const RunRecord& b, McNemarMethod method = McNemarMethod::Auto) {
  check_same_split(a, b);
  return {method_label(a.config), method_label(b.config), a.report.overall_accuracy, b.report.overall_accuracy,
          mcnemar(a.test_predicted, b.test_predicted, a.test_truth, method)};
}

inline Comparison cmd_compare(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b,
                              McNemarMethod method = McNemarMethod::Auto) {
  return cmd_compare(load_run_record(dir_a), load_run_record(dir_b), method);
}

inline Json to_json(const Comparison& c) {
  return Json{{"method_a", c.method_a},
              {"accuracy_a", c.accuracy_a},
              {"method_b", c.method_b},
              {"accuracy_b", c.accuracy_b},
              {"mcnemar", to_json(c.test)}};
}

/// One results-table row: "method A | acc | method B | acc | χ² | p | significant".
inline std::string table_row(const Comparison& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-18s %.4f | %-18s %.4f | b=%zu c=%zu stat=%.4f p=%.4g (%s) | %s",
                c.method_a.c_str(), c.accuracy_a, c.method_b.c_str(), c.accuracy_b, c.test.b, c.test.c,
                c.test.statistic, c.test.p_value, to_string(c.test.method),
                c.test.significant_at_05 ? "significant at 0.05" : "not significant at 0.05");
  return buf;
}

}  // namespace hsired
