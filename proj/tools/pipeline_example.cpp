// Library usage without the CLI: synthetic scene → split → randomized PCA →
// SVM and GBDT → accuracy and a McNemar comparison.

#include <cstdio>

#include "hsired/hsired.hpp"

int main() {
  using namespace hsired;

  const SyntheticScene scene = make_synthetic_scene({40, 40, 60, 5, 0.08, 0.1, 7});
  const SampleSet labeled = extract_labeled(scene.cube, scene.ground_truth);
  const Split split = stratified_split(labeled, 0.7, 42);

  // The reduction is fitted on training pixels only, then applied to both sides.
  const PcaModel rpca = fit_rpca(split.train.features, 10, {10, 10, 2, 42});
  const SampleSet train = with_features(split.train, transform(rpca, split.train.features));
  const SampleSet test = with_features(split.test, transform(rpca, split.test.features));

  const SvmModel svm = svm_train(train, {100.0, 0.5});
  GbdtParams gp;
  gp.num_trees = 50;
  const GbdtModel gbdt = gbdt_train(train, gp);

  const std::vector<Label> svm_pred = svm_predict(svm, test.features);
  const std::vector<Label> gbdt_pred = gbdt_predict(gbdt, test.features);
  const std::size_t classes = scene.ground_truth.num_classes();
  std::printf("SVM  / RPCA-10 overall accuracy %.4f\n", evaluate(svm_pred, test.labels, classes).overall_accuracy);
  std::printf("GBDT / RPCA-10 overall accuracy %.4f\n", evaluate(gbdt_pred, test.labels, classes).overall_accuracy);

  const McNemarResult m = mcnemar(svm_pred, gbdt_pred, test.labels);
  std::printf("McNemar b=%zu c=%zu p=%.4g (%s)\n", m.b, m.c, m.p_value,
              m.significant_at_05 ? "significant at 0.05" : "not significant at 0.05");
}
