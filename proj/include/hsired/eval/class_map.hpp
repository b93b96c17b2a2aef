#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hsired/hsi/cube.hpp"
#include "hsired/hsi/samples.hpp"

namespace hsired {

struct Rgb {
  std::uint8_t r, g, b;
  bool operator==(const Rgb&) const = default;
};

/// Index 0 is the background; 1..16 are class colors. Class ids above 16 reuse
/// the class colors cyclically: palette[1 + (c − 1) mod 16].
inline constexpr std::array<Rgb, 17> kClassPalette{{
    {0, 0, 0},
    {230, 25, 75},
    {60, 180, 75},
    {255, 225, 25},
    {0, 130, 200},
    {245, 130, 48},
    {145, 30, 180},
    {70, 240, 240},
    {240, 50, 230},
    {210, 245, 60},
    {250, 190, 212},
    {0, 128, 128},
    {220, 190, 255},
    {170, 110, 40},
    {255, 250, 200},
    {128, 0, 0},
    {170, 255, 195},
}};

inline Rgb palette_color(Label c) {
  if (c == 0) return kClassPalette[0];
  return kClassPalette[1 + (static_cast<std::size_t>(c) - 1) % 16];
}

struct ClassMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Rgb> pixels;  // row-major

  bool operator==(const ClassMap&) const = default;
};

/// Paints each predicted pixel with its class color over a black raster the
/// size of the ground truth.
inline ClassMap render_map(const GroundTruth& gt, const std::vector<Label>& predictions,
                           const std::vector<std::size_t>& pixel_indices) {
  require(predictions.size() == pixel_indices.size(), ErrorKind::Dimension, "predictions and pixel indices differ in length");
  ClassMap map{gt.height, gt.width, std::vector<Rgb>(gt.pixels(), kClassPalette[0])};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    require(pixel_indices[i] < map.pixels.size(), ErrorKind::Dimension,
            "pixel index " + std::to_string(pixel_indices[i]) + " outside the raster");
    map.pixels[pixel_indices[i]] = palette_color(predictions[i]);
  }
  return map;
}

/// Binary PPM (P6), 8-bit RGB.
inline std::string encode_ppm(const ClassMap& map) {
  std::string out = "P6\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n255\n";
  out.reserve(out.size() + map.pixels.size() * 3);
  for (const Rgb& p : map.pixels) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

}  // namespace hsired
