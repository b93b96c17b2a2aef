#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsired/classify/gbdt.hpp"
#include "hsired/classify/grid_search.hpp"
#include "hsired/classify/svm.hpp"
#include "hsired/serialize.hpp"

namespace hsired {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class ReductionKind { None, Pca, Rpca };

struct ReductionSpec {
  ReductionKind kind = ReductionKind::None;
  std::size_t components = 0;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 2;

  bool operator==(const ReductionSpec&) const = default;
};

struct SvmGridSpec {
  std::vector<double> c_grid;
  std::vector<double> gamma_grid;
  std::size_t folds = 5;

  bool operator==(const SvmGridSpec&) const = default;
};

enum class ClassifierKind { Svm, Gbdt };

/// GBDT seeds come from RunConfig::seed; gbdt.seed is ignored in runs.
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Svm;
  SvmParams svm;
  std::optional<SvmGridSpec> grid;
  GbdtParams gbdt;

  bool operator==(const ClassifierSpec&) const = default;
};

struct RunConfig {
  std::string cube_path;
  std::string ground_truth_path;
  ReductionSpec reduction;
  ClassifierSpec classifier;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::string output_dir;

  bool operator==(const RunConfig&) const = default;
};

inline void validate(const RunConfig& c) {
  require(!c.cube_path.empty(), ErrorKind::Usage, "config needs a cube path");
  require(!c.ground_truth_path.empty(), ErrorKind::Usage, "config needs a ground-truth path");
  require(!c.output_dir.empty(), ErrorKind::Usage, "config needs an output directory");
  require(c.train_fraction > 0.0 && c.train_fraction < 1.0, ErrorKind::Usage, "train_fraction must lie in (0, 1)");
  require(c.reduction.kind == ReductionKind::None || c.reduction.components >= 1, ErrorKind::Usage,
          "reduction needs at least one component");
  if (c.classifier.kind == ClassifierKind::Svm) {
    validate(c.classifier.svm);
    if (c.classifier.grid) {
      require(!c.classifier.grid->c_grid.empty() && !c.classifier.grid->gamma_grid.empty(), ErrorKind::Usage,
              "grid search needs non-empty grids");
      require(c.classifier.grid->folds >= 2, ErrorKind::Usage, "grid search needs at least 2 folds");
    }
  } else {
    validate(c.classifier.gbdt);
  }
}

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::None: return "none";
    case ReductionKind::Pca: return "pca";
    case ReductionKind::Rpca: return "rpca";
  }
  return "none";
}

inline ReductionKind reduction_kind_from(const std::string& s) {
  if (s == "none") return ReductionKind::None;
  if (s == "pca") return ReductionKind::Pca;
  if (s == "rpca") return ReductionKind::Rpca;
  throw Error(ErrorKind::Usage, "unknown reduction method " + s + " (expected none, pca or rpca)");
}

inline ClassifierKind classifier_kind_from(const std::string& s) {
  if (s == "svm") return ClassifierKind::Svm;
  if (s == "gbdt") return ClassifierKind::Gbdt;
  throw Error(ErrorKind::Usage, "unknown classifier " + s + " (expected svm or gbdt)");
}

/// Human label in the style of a results table column, e.g. "SVM / RPCA-20".
inline std::string method_label(const RunConfig& c) {
  std::string reduction = "Original";
  if (c.reduction.kind == ReductionKind::Pca) reduction = "PCA-" + std::to_string(c.reduction.components);
  if (c.reduction.kind == ReductionKind::Rpca) reduction = "RPCA-" + std::to_string(c.reduction.components);
  return std::string(c.classifier.kind == ClassifierKind::Svm ? "SVM" : "GBDT") + " / " + reduction;
}

inline Json to_json(const RunConfig& c) {
  Json reduction{{"method", to_string(c.reduction.kind)}};
  if (c.reduction.kind != ReductionKind::None) reduction["components"] = c.reduction.components;
  if (c.reduction.kind == ReductionKind::Rpca) {
    reduction["oversampling"] = c.reduction.oversampling;
    reduction["power_iterations"] = c.reduction.power_iterations;
  }
  Json classifier;
  if (c.classifier.kind == ClassifierKind::Svm) {
    classifier = to_json(c.classifier.svm);
    if (c.classifier.grid)
      classifier["grid"] = Json{{"c", c.classifier.grid->c_grid}, {"gamma", c.classifier.grid->gamma_grid}, {"folds", c.classifier.grid->folds}};
  } else {
    classifier = to_json(c.classifier.gbdt);
    classifier.erase("seed");
  }
  Json typed{{"type", c.classifier.kind == ClassifierKind::Svm ? "svm" : "gbdt"}};
  typed.update(classifier);
  return Json{{"cube", c.cube_path},
              {"ground_truth", c.ground_truth_path},
              {"reduction", std::move(reduction)},
              {"classifier", std::move(typed)},
              {"train_fraction", c.train_fraction},
              {"seed", c.seed},
              {"output_dir", c.output_dir}};
}

/// Missing fields take their defaults.
inline RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  c.cube_path = j.value("cube", std::string{});
  c.ground_truth_path = j.value("ground_truth", std::string{});
  c.train_fraction = j.value("train_fraction", c.train_fraction);
  c.seed = j.value("seed", c.seed);
  c.output_dir = j.value("output_dir", std::string{});
  if (j.contains("reduction")) {
    const Json& r = j.at("reduction");
    c.reduction.kind = reduction_kind_from(r.value("method", std::string("none")));
    c.reduction.components = r.value("components", c.reduction.components);
    c.reduction.oversampling = r.value("oversampling", c.reduction.oversampling);
    c.reduction.power_iterations = r.value("power_iterations", c.reduction.power_iterations);
  }
  if (j.contains("classifier")) {
    const Json& cl = j.at("classifier");
    c.classifier.kind = classifier_kind_from(cl.value("type", std::string("svm")));
    if (c.classifier.kind == ClassifierKind::Svm) {
      c.classifier.svm = svm_params_from_json(cl);
      if (cl.contains("grid")) {
        const Json& g = cl.at("grid");
        c.classifier.grid = SvmGridSpec{g.value("c", default_c_grid()), g.value("gamma", default_gamma_grid()),
                                        g.value("folds", std::size_t{5})};
      }
    } else {
      c.classifier.gbdt = gbdt_params_from_json(cl);
      c.classifier.gbdt.seed = 0;
    }
  }
  return c;
}

}  // namespace hsired
