#pragma once

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hsired/hsi/cube.hpp"

namespace hsired {

struct BandStats {
  double minimum = 0.0;
  double maximum = 0.0;
  double mean = 0.0;
};

struct ContainerSummary {
  std::string kind;  // "cube" or "ground_truth"
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;
  std::vector<BandStats> band_stats;                 // cubes
  std::size_t num_classes = 0;                       // ground truth
  std::size_t labeled_pixels = 0;                    // ground truth
  std::map<std::uint16_t, std::size_t> class_histogram;  // ground truth, label 0 excluded
  std::vector<std::string> class_names;
};

inline ContainerSummary cmd_inspect(const std::filesystem::path& header_path) {
  const ContainerHeader h = read_header(header_path);
  ContainerSummary s;
  s.height = h.height;
  s.width = h.width;
  s.bands = h.bands;
  if (h.dtype == "f32") {
    s.kind = "cube";
    const HsiCube cube = load_cube(header_path);
    const std::size_t plane = cube.pixels();
    for (std::size_t b = 0; b < cube.bands; ++b) {
      BandStats st{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
      for (std::size_t p = 0; p < plane; ++p) {
        const double v = cube.values[b * plane + p];
        st.minimum = std::min(st.minimum, v);
        st.maximum = std::max(st.maximum, v);
        st.mean += v;
      }
      if (plane > 0) st.mean /= static_cast<double>(plane);
      else st.minimum = st.maximum = 0.0;
      s.band_stats.push_back(st);
    }
  } else {
    s.kind = "ground_truth";
    const GroundTruth gt = load_ground_truth(header_path);
    for (auto l : gt.labels)
      if (l != 0) ++s.class_histogram[l];
    for (const auto& [label, n] : s.class_histogram) s.labeled_pixels += n;
    s.num_classes = gt.num_classes();
    s.class_names = gt.class_names;
  }
  return s;
}

inline std::string format_summary(const ContainerSummary& s) {
  std::ostringstream out;
  if (s.kind == "cube") {
    out << "cube: " << s.height << " x " << s.width << " pixels, " << s.bands << " bands\n";
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, mean = 0.0;
    for (const auto& b : s.band_stats) {
      lo = std::min(lo, b.minimum);
      hi = std::max(hi, b.maximum);
      mean += b.mean;
    }
    if (!s.band_stats.empty()) {
      mean /= static_cast<double>(s.band_stats.size());
      out << "values: min " << lo << ", max " << hi << ", mean " << mean << "\n";
    }
    out << "band  min  max  mean\n";
    for (std::size_t b = 0; b < s.band_stats.size(); ++b)
      out << b << "  " << s.band_stats[b].minimum << "  " << s.band_stats[b].maximum << "  " << s.band_stats[b].mean << "\n";
  } else {
    out << "ground truth: " << s.height << " x " << s.width << " pixels, " << s.num_classes << " classes, "
        << s.labeled_pixels << " labeled pixels\n";
    out << "class  samples  name\n";
    for (const auto& [label, n] : s.class_histogram) {
      out << label << "  " << n;
      if (label >= 1 && label <= s.class_names.size()) out << "  " << s.class_names[label - 1];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace hsired
