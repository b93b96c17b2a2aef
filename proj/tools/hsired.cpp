#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsired/hsired.hpp"

namespace {

using namespace hsired;

struct RunFlags {
  std::string config_path;
  std::string cube, gt, reduction, classifier, out;
  std::size_t components = 0, oversampling = 0, power_iterations = 0, folds = 5;
  double c = 0, gamma = 0, tolerance = 0, train_fraction = 0;
  std::vector<double> grid_c, grid_gamma;
  bool grid = false;
  std::size_t trees = 0, max_leaves = 0, min_samples_leaf = 0, bins = 0;
  double learning_rate = 0, goss_a = 0, goss_b = 0;
  std::uint64_t seed = 0;
};

void add_run(CLI::App& app, RunFlags& f, std::vector<CLI::Option*>& opts) {
  auto* run = app.add_subcommand("run", "Run the classification pipeline on one scene");
  opts = {
      run->add_option("--config", f.config_path, "JSON run configuration; flags override its values")->check(CLI::ExistingFile),
      run->add_option("--cube", f.cube, "Cube header (.hsih)"),
      run->add_option("--gt", f.gt, "Ground-truth header (.hsih)"),
      run->add_option("--reduction", f.reduction, "none | pca | rpca"),
      run->add_option("--components,-k", f.components, "Number of retained components"),
      run->add_option("--oversampling", f.oversampling, "Randomized SVD oversampling p"),
      run->add_option("--power-iterations", f.power_iterations, "Randomized SVD power iterations q"),
      run->add_option("--classifier", f.classifier, "svm | gbdt"),
      run->add_option("--c", f.c, "SVM regularization C"),
      run->add_option("--gamma", f.gamma, "RBF width gamma"),
      run->add_option("--tolerance", f.tolerance, "SMO KKT tolerance"),
      run->add_flag("--grid", f.grid, "Choose C and gamma by stratified cross-validation"),
      run->add_option("--grid-c", f.grid_c, "C values for the grid")->delimiter(','),
      run->add_option("--grid-gamma", f.grid_gamma, "gamma values for the grid")->delimiter(','),
      run->add_option("--folds", f.folds, "Cross-validation folds"),
      run->add_option("--trees", f.trees, "GBDT boosting rounds"),
      run->add_option("--learning-rate", f.learning_rate, "GBDT shrinkage"),
      run->add_option("--max-leaves", f.max_leaves, "GBDT leaves per tree"),
      run->add_option("--min-samples-leaf", f.min_samples_leaf, "GBDT minimum rows per leaf"),
      run->add_option("--bins", f.bins, "GBDT histogram bins"),
      run->add_option("--goss-a", f.goss_a, "GOSS top rate a"),
      run->add_option("--goss-b", f.goss_b, "GOSS other rate b"),
      run->add_option("--train-fraction", f.train_fraction, "Per-class training share"),
      run->add_option("--seed", f.seed, "Seed for split, sketch, folds and sampling"),
      run->add_option("--out,-o", f.out, "Output directory"),
  };
}

RunConfig build_config(const RunFlags& f, const std::vector<CLI::Option*>& o) {
  auto given = [&](std::size_t i) { return o[i]->count() > 0; };
  RunConfig c;
  if (given(0))
    c = parse_json_as(read_file(f.config_path), f.config_path, [](const Json& j) { return run_config_from_json(j); });
  if (given(1)) c.cube_path = f.cube;
  if (given(2)) c.ground_truth_path = f.gt;
  if (given(3)) c.reduction.kind = reduction_kind_from(f.reduction);
  if (given(4)) c.reduction.components = f.components;
  if (given(5)) c.reduction.oversampling = f.oversampling;
  if (given(6)) c.reduction.power_iterations = f.power_iterations;
  if (given(7)) c.classifier.kind = classifier_kind_from(f.classifier);
  if (given(8)) c.classifier.svm.c = f.c;
  if (given(9)) c.classifier.svm.gamma = f.gamma;
  if (given(10)) c.classifier.svm.tolerance = f.tolerance;
  if (given(11) || given(12) || given(13) || given(14)) {
    if (!c.classifier.grid) c.classifier.grid = SvmGridSpec{default_c_grid(), default_gamma_grid(), 5};
    if (given(12)) c.classifier.grid->c_grid = f.grid_c;
    if (given(13)) c.classifier.grid->gamma_grid = f.grid_gamma;
    if (given(14)) c.classifier.grid->folds = f.folds;
  }
  if (given(15)) c.classifier.gbdt.num_trees = f.trees;
  if (given(16)) c.classifier.gbdt.learning_rate = f.learning_rate;
  if (given(17)) c.classifier.gbdt.max_leaves = f.max_leaves;
  if (given(18)) c.classifier.gbdt.min_samples_leaf = f.min_samples_leaf;
  if (given(19)) c.classifier.gbdt.num_bins = f.bins;
  if (given(20)) c.classifier.gbdt.goss_top_rate = f.goss_a;
  if (given(21)) c.classifier.gbdt.goss_other_rate = f.goss_b;
  if (given(22)) c.train_fraction = f.train_fraction;
  if (given(23)) c.seed = f.seed;
  if (given(24)) c.output_dir = f.out;
  return c;
}

void warn(const std::string& w) { std::cerr << "warning: " << w << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperspectral classification with exact and randomized PCA"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  RunFlags rf;
  std::vector<CLI::Option*> run_opts;
  add_run(app, rf, run_opts);

  std::string cmp_a, cmp_b, cmp_method = "auto";
  bool cmp_json = false;
  auto* compare = app.add_subcommand("compare", "McNemar test between two runs on the same split");
  compare->add_option("run_a", cmp_a, "First run directory")->required()->check(CLI::ExistingDirectory);
  compare->add_option("run_b", cmp_b, "Second run directory")->required()->check(CLI::ExistingDirectory);
  compare->add_option("--method", cmp_method, "auto | chi2 | exact")->check(CLI::IsMember({"auto", "chi2", "exact"}));
  compare->add_flag("--json", cmp_json, "Emit JSON instead of a table row");

  BenchSpec bench_spec;
  auto* bench = app.add_subcommand("bench", "Time exact vs randomized SVD");
  bench->add_option("--rows,-m", bench_spec.rows, "Matrix rows");
  bench->add_option("--cols,-n", bench_spec.cols, "Matrix columns");
  bench->add_option("--ranks,-k", bench_spec.ranks, "Target ranks")->delimiter(',');
  bench->add_option("--seeds", bench_spec.seeds, "Matrix / sketch seeds")->delimiter(',');
  bench->add_option("--repeats", bench_spec.repeats, "Timed repetitions per cell (median reported)");
  bench->add_option("--oversampling", bench_spec.oversampling, "Randomized SVD oversampling p");
  bench->add_option("--power-iterations", bench_spec.power_iterations, "Randomized SVD power iterations q");

  std::string conv_raw, conv_dims, conv_out, conv_preset;
  auto* convert = app.add_subcommand("convert", "Convert a raw dump plus JSON sidecar into a container pair");
  convert->add_option("--raw", conv_raw, "Flat binary dump")->required()->check(CLI::ExistingFile);
  convert->add_option("--dims", conv_dims, "JSON sidecar describing the dump")->required()->check(CLI::ExistingFile);
  convert->add_option("--out,-o", conv_out, "Output header path (.hsih)")->required();
  convert->add_option("--preset", conv_preset, "indian_pines | pavia_university: supplies class names for label maps");

  std::vector<std::string> inspect_paths;
  auto* inspect = app.add_subcommand("inspect", "Summarize container files");
  inspect->add_option("headers", inspect_paths, "Container headers (.hsih)")->required()->check(CLI::ExistingFile);

  SyntheticSceneParams synth_params;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic labeled scene (<stem>.hsih and <stem>_gt.hsih)");
  synth->add_option("--out,-o", synth_out, "Output stem")->required();
  synth->add_option("--height", synth_params.height);
  synth->add_option("--width", synth_params.width);
  synth->add_option("--bands", synth_params.bands);
  synth->add_option("--classes", synth_params.classes);
  synth->add_option("--noise", synth_params.noise);
  synth->add_option("--unlabeled", synth_params.unlabeled_fraction, "Share of pixels left unlabeled");
  synth->add_option("--seed", synth_params.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*app.get_subcommand("run")) {
      const RunConfig config = build_config(rf, run_opts);
      const RunRecord rec = cmd_run(config, warn);
      std::printf("%s: overall accuracy %.4f on %zu test pixels (train %zu, features %zu) -> %s\n",
                  method_label(config).c_str(), rec.report.overall_accuracy, rec.report.n_test, rec.train_size,
                  rec.feature_width, config.output_dir.c_str());
    } else if (*compare) {
      const McNemarMethod m = cmp_method == "chi2"    ? McNemarMethod::ChiSquare
                              : cmp_method == "exact" ? McNemarMethod::ExactBinomial
                                                      : McNemarMethod::Auto;
      const Comparison c = cmd_compare(cmp_a, cmp_b, m);
      std::cout << (cmp_json ? to_json(c).dump(2) : table_row(c)) << "\n";
    } else if (*bench) {
      std::printf("rows,cols,k,seed,oversampling,exact_median_ms,randomized_median_ms,max_relative_sv_error\n");
      for (const BenchRow& r : cmd_bench(bench_spec))
        std::printf("%zu,%zu,%zu,%llu,%zu,%.3f,%.3f,%.3e\n", r.rows, r.cols, r.k, static_cast<unsigned long long>(r.seed),
                    r.oversampling, r.exact_ms, r.randomized_ms, r.max_relative_sv_error);
    } else if (*convert) {
      DumpLayout layout = parse_dump_layout(read_file(conv_dims));
      if (!conv_preset.empty()) {
        const ScenePreset* preset = find_preset(conv_preset);
        if (!preset) throw Error(ErrorKind::Usage, "unknown preset " + conv_preset);
        if (layout.kind == "labels" && layout.class_names.empty()) layout.class_names = preset->class_names();
      }
      const ConvertedScene scene = convert_dump(read_file(conv_raw), layout);
      if (scene.cube) save_cube(*scene.cube, conv_out);
      else save_ground_truth(*scene.ground_truth, conv_out);
      std::cout << format_summary(cmd_inspect(conv_out));
    } else if (*inspect) {
      for (const auto& p : inspect_paths) std::cout << p << "\n" << format_summary(cmd_inspect(p));
    } else if (*synth) {
      const SyntheticScene s = make_synthetic_scene(synth_params);
      save_cube(s.cube, synth_out + ".hsih");
      save_ground_truth(s.ground_truth, synth_out + "_gt.hsih");
      std::printf("wrote %s.hsih and %s_gt.hsih\n", synth_out.c_str(), synth_out.c_str());
    }
  } catch (const Error& e) {
    std::cerr << "hsired: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "hsired: out of memory\n";
    return exit_code_for(ErrorKind::Resource);
  } catch (const std::exception& e) {
    std::cerr << "hsired: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
