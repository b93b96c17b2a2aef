#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hsired/classify/gbdt.hpp"
#include "hsired/classify/grid_search.hpp"
#include "hsired/classify/svm.hpp"
#include "hsired/cli/config.hpp"
#include "hsired/dimred/pca.hpp"
#include "hsired/eval/class_map.hpp"
#include "hsired/eval/metrics.hpp"
#include "hsired/hsi/cube.hpp"
#include "hsired/hsi/samples.hpp"
#include "hsired/io.hpp"
#include "hsired/serialize.hpp"

namespace hsired {

struct RunTimings {
  double load_ms = 0.0;
  double reduce_ms = 0.0;
  double train_ms = 0.0;
  double predict_ms = 0.0;
};

/// Everything a run persists. On disk a record is its output directory:
///   config.json, report.json, predictions.csv, model.json, map.ppm, timings.json
/// Only timings.json varies between identical runs.
struct RunRecord {
  RunConfig config;
  std::string toolkit_version = kToolkitVersion;
  std::size_t train_size = 0;
  std::size_t feature_width = 0;  // classifier input width after reduction
  std::vector<std::size_t> test_pixels;
  std::vector<Label> test_truth;
  std::vector<Label> test_predicted;
  EvalReport report;
  std::optional<GridSearchResult> grid;
  std::vector<std::string> warnings;
  RunTimings timings;
};

inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kPredictionsFile = "predictions.csv";
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kMapFile = "map.ppm";
inline constexpr const char* kTimingsFile = "timings.json";

namespace detail {

/// Runs one pipeline stage, prefixing any toolkit error with the stage name.
template <typename F>
auto stage(const char* name, double& elapsed_ms, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      elapsed_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    } else {
      auto result = body();
      elapsed_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return result;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
  } catch (const std::bad_alloc&) {
    throw Error(ErrorKind::Resource, std::string("stage ") + name + ": out of memory");
  }
}

inline std::string predictions_csv(const RunRecord& r, std::size_t width) {
  std::ostringstream out;
  out << "pixel_index,row,col,truth,predicted\n";
  for (std::size_t i = 0; i < r.test_pixels.size(); ++i) {
    const std::size_t p = r.test_pixels[i];
    out << p << ',' << p / width << ',' << p % width << ',' << r.test_truth[i] << ',' << r.test_predicted[i] << '\n';
  }
  return out.str();
}

inline Json report_json(const RunRecord& r) {
  Json j{{"toolkit_version", r.toolkit_version},
         {"method", method_label(r.config)},
         {"train_size", r.train_size},
         {"test_size", r.test_pixels.size()},
         {"feature_width", r.feature_width},
         {"evaluation", to_json(r.report)},
         {"warnings", r.warnings}};
  if (r.grid) {
    Json table = Json::array();
    for (const auto& cell : r.grid->table) table.push_back(Json{{"c", cell.c}, {"gamma", cell.gamma}, {"accuracy", cell.accuracy}});
    j["grid_search"] = Json{{"best_c", r.grid->best_c}, {"best_gamma", r.grid->best_gamma}, {"folds", r.grid->folds}, {"table", table}};
  }
  return j;
}

inline Json timings_json(const RunTimings& t) {
  return Json{{"load_ms", t.load_ms}, {"reduce_ms", t.reduce_ms}, {"train_ms", t.train_ms}, {"predict_ms", t.predict_ms}};
}

}  // namespace detail

/// Full pipeline: load → extract → stratified split → reduction fitted on the
/// training rows → classifier → test predictions → evaluation → outputs.
/// Every stage computes in memory first; files are written only after all
/// stages succeed, each through write-then-rename.
inline RunRecord cmd_run(const RunConfig& config, const std::function<void(const std::string&)>& warn = {}) {
  validate(config);
  RunRecord rec;
  rec.config = config;

  HsiCube cube;
  GroundTruth gt;
  detail::stage("load", rec.timings.load_ms, [&] {
    cube = load_cube(config.cube_path);
    gt = load_ground_truth(config.ground_truth_path);
  });
  const Split split = detail::stage("split", rec.timings.load_ms, [&] {
    return stratified_split(extract_labeled(cube, gt), config.train_fraction, config.seed);
  });
  rec.warnings = split.warnings;
  rec.train_size = split.train.size();
  require(split.test.size() > 0, ErrorKind::Degenerate, "stage split: test set is empty");

  std::optional<PcaModel> pca;
  SampleSet train = split.train;
  SampleSet test = split.test;
  if (config.reduction.kind != ReductionKind::None) {
    detail::stage("reduce", rec.timings.reduce_ms, [&] {
      if (config.reduction.kind == ReductionKind::Pca) {
        pca = fit_pca(train.features, config.reduction.components);
      } else {
        pca = fit_rpca(train.features, config.reduction.components,
                       {config.reduction.components, config.reduction.oversampling, config.reduction.power_iterations, config.seed});
      }
      train = with_features(train, transform(*pca, train.features));
      test = with_features(test, transform(*pca, test.features));
    });
  }
  rec.feature_width = train.features.cols();

  std::optional<SvmModel> svm;
  std::optional<GbdtModel> gbdt;
  detail::stage("train", rec.timings.train_ms, [&] {
    if (config.classifier.kind == ClassifierKind::Svm) {
      SvmParams params = config.classifier.svm;
      if (config.classifier.grid) {
        rec.grid = grid_search_cv(train, config.classifier.grid->c_grid, config.classifier.grid->gamma_grid,
                                  config.classifier.grid->folds, config.seed, params);
        for (const auto& w : rec.grid->warnings) rec.warnings.push_back(w);
        params.c = rec.grid->best_c;
        params.gamma = rec.grid->best_gamma;
      }
      svm = svm_train(train, params);
      for (const auto& m : svm->machines)
        if (m.hit_iteration_cap)
          rec.warnings.push_back("SVM pair (" + std::to_string(m.positive) + ", " + std::to_string(m.negative) +
                                 ") stopped at the iteration cap");
    } else {
      GbdtParams params = config.classifier.gbdt;
      params.seed = config.seed;
      gbdt = gbdt_train(train, params);
    }
  });
  rec.test_predicted = detail::stage("predict", rec.timings.predict_ms, [&] {
    return svm ? svm_predict(*svm, test.features) : gbdt_predict(*gbdt, test.features);
  });
  Json classifier_json = svm ? to_json(*svm) : to_json(*gbdt);

  rec.test_pixels = test.pixel_indices;
  rec.test_truth = test.labels;
  const std::size_t num_classes = std::max<std::size_t>(gt.num_classes(), 1);
  double eval_ms = 0.0;
  rec.report = detail::stage("evaluate", eval_ms,
                             [&] { return evaluate(rec.test_predicted, rec.test_truth, num_classes); });
  const ClassMap map = render_map(gt, rec.test_predicted, rec.test_pixels);

  Json model_json{{"toolkit_version", kToolkitVersion},
                  {"schema_version", kModelSchemaVersion},
                  {"reduction", pca ? to_json(*pca) : Json(nullptr)},
                  {"classifier", std::move(classifier_json)}};

  const std::filesystem::path out(config.output_dir);
  double write_ms = 0.0;
  detail::stage("write", write_ms, [&] {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    require(!ec, ErrorKind::Io, "cannot create output directory " + out.string());
    write_file_atomic(out / kConfigFile, to_json(config).dump(2) + "\n");
    write_file_atomic(out / kModelFile, model_json.dump() + "\n");
    write_file_atomic(out / kPredictionsFile, detail::predictions_csv(rec, gt.width));
    write_file_atomic(out / kMapFile, encode_ppm(map));
    write_file_atomic(out / kReportFile, detail::report_json(rec).dump(2) + "\n");
  });
  write_file_atomic(out / kTimingsFile, detail::timings_json(rec.timings).dump(2) + "\n");
  if (warn)
    for (const auto& w : rec.warnings) warn(w);
  return rec;
}

/// Reads the comparison-relevant parts of a run directory back.
inline RunRecord load_run_record(const std::filesystem::path& dir) {
  RunRecord rec;
  rec.config = parse_json_as(read_file(dir / kConfigFile), (dir / kConfigFile).string(),
                             [](const Json& j) { return run_config_from_json(j); });
  parse_json_as(read_file(dir / kReportFile), (dir / kReportFile).string(), [&](const Json& j) {
    rec.toolkit_version = j.at("toolkit_version").get<std::string>();
    rec.train_size = j.at("train_size").get<std::size_t>();
    rec.feature_width = j.at("feature_width").get<std::size_t>();
    rec.report = eval_report_from_json(j.at("evaluation"));
    rec.warnings = j.at("warnings").get<std::vector<std::string>>();
    return 0;
  });

  std::istringstream csv(read_file(dir / kPredictionsFile));
  std::string line;
  std::getline(csv, line);
  require(line == "pixel_index,row,col,truth,predicted", ErrorKind::Parse, "unexpected predictions header");
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t pixel = 0, row = 0, col = 0, truth = 0, predicted = 0;
    char sep = 0;
    fields >> pixel >> sep >> row >> sep >> col >> sep >> truth >> sep >> predicted;
    require(static_cast<bool>(fields), ErrorKind::Parse, "malformed predictions line: " + line);
    rec.test_pixels.push_back(pixel);
    rec.test_truth.push_back(static_cast<Label>(truth));
    rec.test_predicted.push_back(static_cast<Label>(predicted));
  }
  require(rec.test_pixels.size() == rec.report.n_test, ErrorKind::Parse, "prediction count disagrees with the report");
  return rec;
}

}  // namespace hsired
