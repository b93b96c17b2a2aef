#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsired/hsi/cube.hpp"
#include "hsired/random.hpp"

namespace hsired {

struct SyntheticSceneParams {
  std::size_t height = 40;
  std::size_t width = 40;
  std::size_t bands = 60;
  std::size_t classes = 5;
  double noise = 0.05;             // per-band Gaussian noise σ
  double unlabeled_fraction = 0.0; // share of pixels left at label 0
  std::uint64_t seed = 1;
};

struct SyntheticScene {
  HsiCube cube;
  GroundTruth ground_truth;
};

/// Classes occupy horizontal stripes. Each class has a smooth mean spectrum
/// (a random walk in [0.1, 0.9]) and pixels add independent N(0, noise²) per
/// band, so class means sit many noise widths apart.
inline SyntheticScene make_synthetic_scene(const SyntheticSceneParams& p) {
  require(p.classes >= 1 && p.classes <= 65535, ErrorKind::Domain, "class count out of range");
  require(p.height >= 1 && p.width >= 1 && p.bands >= 1, ErrorKind::Domain, "scene dimensions must be positive");
  Rng rng(p.seed);

  std::vector<std::vector<double>> means(p.classes, std::vector<double>(p.bands));
  for (auto& mu : means) {
    double level = 0.1 + 0.8 * rng.uniform();
    for (auto& v : mu) {
      level = std::clamp(level + 0.15 * (rng.uniform() - 0.5), 0.1, 0.9);
      v = level;
    }
  }

  SyntheticScene s;
  s.cube = {p.height, p.width, p.bands, std::vector<float>(p.height * p.width * p.bands)};
  s.ground_truth = {p.height, p.width, std::vector<std::uint16_t>(p.height * p.width, 0), {}};
  for (std::size_t c = 0; c < p.classes; ++c) s.ground_truth.class_names.push_back("class-" + std::to_string(c + 1));

  const std::size_t plane = p.height * p.width;
  for (std::size_t r = 0; r < p.height; ++r) {
    const std::size_t cls = r * p.classes / p.height;
    for (std::size_t col = 0; col < p.width; ++col) {
      const std::size_t px = r * p.width + col;
      for (std::size_t b = 0; b < p.bands; ++b)
        s.cube.values[b * plane + px] = static_cast<float>(means[cls][b] + p.noise * rng.normal());
      const bool unlabeled = rng.uniform() < p.unlabeled_fraction;
      s.ground_truth.labels[px] = unlabeled ? 0 : static_cast<std::uint16_t>(cls + 1);
    }
  }
  return s;
}

}  // namespace hsired
