#pragma once

#include <string>
#include <vector>

namespace hsired {

/// Reference class tables of the two public benchmark scenes. Counts are the
/// labeled-pixel totals of the distributed ground truth.
struct SceneClass {
  const char* name;
  std::size_t samples;
};

struct ScenePreset {
  const char* key;
  std::size_t height;
  std::size_t width;
  std::size_t bands;  // after removal of water-absorption / noisy bands
  std::vector<SceneClass> classes;

  std::vector<std::string> class_names() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.emplace_back(c.name);
    return out;
  }

  std::size_t labeled_pixels() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.samples;
    return n;
  }
};

inline const ScenePreset& indian_pines() {
  static const ScenePreset p{"indian_pines",
                             145,
                             145,
                             200,
                             {{"Alfalfa", 46},
                              {"Corn-notill", 1428},
                              {"Corn-mintill", 830},
                              {"Corn", 237},
                              {"Grass-pasture", 483},
                              {"Grass-trees", 730},
                              {"Grass-pasture-mowed", 28},
                              {"Hay-windrowed", 478},
                              {"Oats", 20},
                              {"Soybean-notill", 972},
                              {"Soybean-mintill", 2455},
                              {"Soybean-clean", 593},
                              {"Wheat", 205},
                              {"Woods", 1265},
                              {"Buildings-Grass-Trees-Drives", 386},
                              {"Stone-Steel-Towers", 93}}};
  return p;
}

inline const ScenePreset& pavia_university() {
  static const ScenePreset p{"pavia_university",
                             610,
                             340,
                             103,
                             {{"Asphalt", 6631},
                              {"Meadows", 18649},
                              {"Gravel", 2099},
                              {"Trees", 3064},
                              {"Painted metal sheets", 1345},
                              {"Bare Soil", 5029},
                              {"Bitumen", 1330},
                              {"Self-Blocking Bricks", 3682},
                              {"Shadows", 947}}};
  return p;
}

inline const ScenePreset* find_preset(const std::string& key) {
  if (key == indian_pines().key) return &indian_pines();
  if (key == pavia_university().key) return &pavia_university();
  return nullptr;
}

}  // namespace hsired
