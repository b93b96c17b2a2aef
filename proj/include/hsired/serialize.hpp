#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hsired/classify/gbdt.hpp"
#include "hsired/classify/svm.hpp"
#include "hsired/dimred/pca.hpp"
#include "hsired/eval/mcnemar.hpp"
#include "hsired/eval/metrics.hpp"

// JSON encodings of the toolkit's models and reports. nlohmann/json writes
// doubles in shortest round-trip form, so a dump/parse cycle is exact.

namespace hsired {

using Json = nlohmann::ordered_json;

inline constexpr int kModelSchemaVersion = 1;

inline Json matrix_to_json(const DenseMatrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

inline DenseMatrix matrix_from_json(const Json& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), j.at("data").get<std::vector<double>>());
}

// --- PCA -------------------------------------------------------------------

inline Json to_json(const RandomizedSvdParams& p) {
  return Json{{"k", p.k}, {"oversampling", p.oversampling}, {"power_iterations", p.power_iterations}, {"seed", p.seed}};
}

inline RandomizedSvdParams randomized_params_from_json(const Json& j) {
  return {j.at("k").get<std::size_t>(), j.at("oversampling").get<std::size_t>(), j.at("power_iterations").get<std::size_t>(),
          j.at("seed").get<std::uint64_t>()};
}

inline Json to_json(const PcaModel& m) {
  Json j{{"method", m.method == PcaMethod::Exact ? "exact" : "randomized"},
         {"n_fit_samples", m.n_fit_samples},
         {"mean", m.mean},
         {"components", matrix_to_json(m.components)},
         {"explained_variance", m.explained_variance}};
  if (m.randomized) j["randomized"] = to_json(*m.randomized);
  return j;
}

inline PcaModel pca_from_json(const Json& j) {
  PcaModel m;
  const std::string method = j.at("method").get<std::string>();
  require(method == "exact" || method == "randomized", ErrorKind::Parse, "unknown PCA method " + method);
  m.method = method == "exact" ? PcaMethod::Exact : PcaMethod::Randomized;
  m.n_fit_samples = j.at("n_fit_samples").get<std::size_t>();
  m.mean = j.at("mean").get<std::vector<double>>();
  m.components = matrix_from_json(j.at("components"));
  m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
  if (j.contains("randomized")) m.randomized = randomized_params_from_json(j.at("randomized"));
  return m;
}

// --- SVM -------------------------------------------------------------------

inline Json to_json(const SvmParams& p) {
  return Json{{"c", p.c},
              {"gamma", p.gamma},
              {"tolerance", p.tolerance},
              {"max_iterations", p.max_iterations},
              {"cache_megabytes", p.cache_megabytes}};
}

inline SvmParams svm_params_from_json(const Json& j) {
  SvmParams p;
  p.c = j.value("c", p.c);
  p.gamma = j.value("gamma", p.gamma);
  p.tolerance = j.value("tolerance", p.tolerance);
  p.max_iterations = j.value("max_iterations", p.max_iterations);
  p.cache_megabytes = j.value("cache_megabytes", p.cache_megabytes);
  return p;
}

inline Json to_json(const SvmModel& m) {
  Json machines = Json::array();
  for (const auto& bm : m.machines) {
    machines.push_back(Json{{"positive", bm.positive},
                            {"negative", bm.negative},
                            {"bias", bm.bias},
                            {"iterations", bm.iterations},
                            {"kkt_gap", bm.kkt_gap},
                            {"hit_iteration_cap", bm.hit_iteration_cap},
                            {"coef", bm.coef},
                            {"support_vectors", matrix_to_json(bm.support_vectors)}});
  }
  return Json{{"type", "svm"},
              {"schema_version", kModelSchemaVersion},
              {"params", to_json(m.params)},
              {"classes", m.classes},
              {"scaling", {{"minimum", m.scaling.minimum}, {"range", m.scaling.range}}},
              {"machines", std::move(machines)}};
}

inline SvmModel svm_from_json(const Json& j) {
  require(j.at("type").get<std::string>() == "svm", ErrorKind::Parse, "not an SVM model");
  require(j.at("schema_version").get<int>() == kModelSchemaVersion, ErrorKind::Parse, "unsupported model schema version");
  SvmModel m;
  m.params = svm_params_from_json(j.at("params"));
  m.classes = j.at("classes").get<std::vector<Label>>();
  m.scaling.minimum = j.at("scaling").at("minimum").get<std::vector<double>>();
  m.scaling.range = j.at("scaling").at("range").get<std::vector<double>>();
  for (const auto& bj : j.at("machines")) {
    BinaryMachine bm;
    bm.positive = bj.at("positive").get<Label>();
    bm.negative = bj.at("negative").get<Label>();
    bm.bias = bj.at("bias").get<double>();
    bm.iterations = bj.at("iterations").get<std::size_t>();
    bm.kkt_gap = bj.at("kkt_gap").get<double>();
    bm.hit_iteration_cap = bj.at("hit_iteration_cap").get<bool>();
    bm.coef = bj.at("coef").get<std::vector<double>>();
    bm.support_vectors = matrix_from_json(bj.at("support_vectors"));
    m.machines.push_back(std::move(bm));
  }
  return m;
}

// --- GBDT ------------------------------------------------------------------

inline Json to_json(const GbdtParams& p) {
  return Json{{"num_trees", p.num_trees},
              {"learning_rate", p.learning_rate},
              {"max_leaves", p.max_leaves},
              {"min_samples_leaf", p.min_samples_leaf},
              {"num_bins", p.num_bins},
              {"goss_top_rate", p.goss_top_rate},
              {"goss_other_rate", p.goss_other_rate},
              {"seed", p.seed}};
}

inline GbdtParams gbdt_params_from_json(const Json& j) {
  GbdtParams p;
  p.num_trees = j.value("num_trees", p.num_trees);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.max_leaves = j.value("max_leaves", p.max_leaves);
  p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
  p.num_bins = j.value("num_bins", p.num_bins);
  p.goss_top_rate = j.value("goss_top_rate", p.goss_top_rate);
  p.goss_other_rate = j.value("goss_other_rate", p.goss_other_rate);
  p.seed = j.value("seed", p.seed);
  return p;
}

inline Json to_json(const Tree& t) {
  // Node rows: [feature, threshold, left, right, value].
  Json nodes = Json::array();
  for (const auto& n : t.nodes) nodes.push_back(Json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  return nodes;
}

inline Tree tree_from_json(const Json& j) {
  Tree t;
  for (const auto& nj : j) {
    require(nj.is_array() && nj.size() == 5, ErrorKind::Parse, "malformed tree node");
    t.nodes.push_back({nj[0].get<int>(), nj[1].get<double>(), nj[2].get<int>(), nj[3].get<int>(), nj[4].get<double>()});
  }
  for (const auto& n : t.nodes) {
    if (n.is_leaf()) continue;
    require(n.left > 0 && n.right > 0 && static_cast<std::size_t>(n.left) < t.nodes.size() &&
                static_cast<std::size_t>(n.right) < t.nodes.size(),
            ErrorKind::Parse, "tree node child out of range");
  }
  require(!t.nodes.empty(), ErrorKind::Parse, "empty tree");
  return t;
}

inline Json to_json(const GbdtModel& m) {
  Json ensembles = Json::array();
  for (const auto& e : m.ensembles) {
    Json trees = Json::array();
    for (const auto& t : e) trees.push_back(to_json(t));
    ensembles.push_back(std::move(trees));
  }
  return Json{{"type", "gbdt"},
              {"schema_version", kModelSchemaVersion},
              {"params", to_json(m.params)},
              {"classes", m.classes},
              {"num_features", m.num_features},
              {"priors", m.priors},
              {"ensembles", std::move(ensembles)}};
}

inline GbdtModel gbdt_from_json(const Json& j) {
  require(j.at("type").get<std::string>() == "gbdt", ErrorKind::Parse, "not a GBDT model");
  require(j.at("schema_version").get<int>() == kModelSchemaVersion, ErrorKind::Parse, "unsupported model schema version");
  GbdtModel m;
  m.params = gbdt_params_from_json(j.at("params"));
  m.classes = j.at("classes").get<std::vector<Label>>();
  m.num_features = j.at("num_features").get<std::size_t>();
  m.priors = j.at("priors").get<std::vector<double>>();
  for (const auto& ej : j.at("ensembles")) {
    std::vector<Tree> trees;
    for (const auto& tj : ej) trees.push_back(tree_from_json(tj));
    m.ensembles.push_back(std::move(trees));
  }
  require(m.priors.size() == m.classes.size() && m.ensembles.size() == m.classes.size(), ErrorKind::Parse,
          "GBDT class count mismatch");
  return m;
}

// --- Reports ---------------------------------------------------------------

inline Json to_json(const EvalReport& r) {
  return Json{{"n_test", r.n_test},
              {"overall_accuracy", r.overall_accuracy},
              {"per_class_recall", r.per_class_recall},
              {"confusion", r.confusion}};
}

inline EvalReport eval_report_from_json(const Json& j) {
  EvalReport r;
  r.n_test = j.at("n_test").get<std::size_t>();
  r.overall_accuracy = j.at("overall_accuracy").get<double>();
  r.per_class_recall = j.at("per_class_recall").get<std::vector<double>>();
  r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
  return r;
}

inline const char* to_string(McNemarMethod m) {
  switch (m) {
    case McNemarMethod::Auto: return "auto";
    case McNemarMethod::ChiSquare: return "chi_square";
    case McNemarMethod::ExactBinomial: return "exact_binomial";
  }
  return "auto";
}

inline Json to_json(const McNemarResult& r) {
  return Json{{"b", r.b},
              {"c", r.c},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"significant_at_05", r.significant_at_05},
              {"method", to_string(r.method)}};
}

/// Wraps a parse of untrusted text so JSON library failures surface as Parse errors.
template <typename F>
auto parse_json_as(const std::string& text, const std::string& what, F&& decode) {
  try {
    return decode(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, what + ": " + e.what());
  }
}

}  // namespace hsired
