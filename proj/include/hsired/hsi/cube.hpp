#pragma once

#include <type_traits>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsired/error.hpp"
#include "hsired/io.hpp"

namespace hsired {

/// H×W×B raster, band-sequential: value(row, col, band) lives at
/// band·H·W + row·W + col.
struct HsiCube {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;
  std::vector<float> values;

  std::size_t pixels() const noexcept { return height * width; }
  float at(std::size_t row, std::size_t col, std::size_t band) const {
    return values[band * pixels() + row * width + col];
  }

  bool operator==(const HsiCube&) const = default;
};

/// Per-pixel class ids, row-major; 0 marks unlabeled.
struct GroundTruth {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint16_t> labels;
  std::vector<std::string> class_names;

  std::size_t pixels() const noexcept { return height * width; }

  /// C: the declared class count, or the largest label when no names are given.
  std::size_t num_classes() const {
    if (!class_names.empty()) return class_names.size();
    std::uint16_t m = 0;
    for (auto l : labels) m = std::max(m, l);
    return m;
  }

  bool operator==(const GroundTruth&) const = default;
};

inline void validate(const HsiCube& cube) {
  require(cube.values.size() == cube.height * cube.width * cube.bands, ErrorKind::SizeMismatch,
          "cube holds " + std::to_string(cube.values.size()) + " values, header implies " +
              std::to_string(cube.height * cube.width * cube.bands));
  for (float v : cube.values) require(std::isfinite(v), ErrorKind::NonFinite, "cube contains NaN or Inf");
}

inline void validate(const GroundTruth& gt) {
  require(gt.labels.size() == gt.height * gt.width, ErrorKind::SizeMismatch, "ground truth size does not match header");
  if (!gt.class_names.empty()) {
    for (auto l : gt.labels)
      require(l <= gt.class_names.size(), ErrorKind::Parse,
              "label " + std::to_string(l) + " exceeds declared class count " + std::to_string(gt.class_names.size()));
  }
}

/// `<stem>.hsih` header → `<stem>.hsir` payload.
inline std::filesystem::path payload_path(const std::filesystem::path& header) {
  std::filesystem::path p = header;
  p.replace_extension(".hsir");
  return p;
}

inline constexpr int kContainerVersion = 1;

struct ContainerHeader {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;
  std::string dtype;  // "f32" or "u16"
  std::vector<std::string> class_names;
};

namespace detail {

template <typename T>
std::string encode_le(const std::vector<T>& values) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 2);
  using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>;
  std::string bytes(values.size() * sizeof(T), '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    Bits b;
    std::memcpy(&b, &values[i], sizeof(T));
    for (std::size_t k = 0; k < sizeof(T); ++k)
      bytes[i * sizeof(T) + k] = static_cast<char>((b >> (8 * k)) & 0xFFu);
  }
  return bytes;
}

template <typename T>
std::vector<T> decode_le(const std::string& bytes) {
  using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>;
  std::vector<T> values(bytes.size() / sizeof(T));
  for (std::size_t i = 0; i < values.size(); ++i) {
    Bits b = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k)
      b |= static_cast<Bits>(static_cast<unsigned char>(bytes[i * sizeof(T) + k])) << (8 * k);
    std::memcpy(&values[i], &b, sizeof(T));
  }
  return values;
}

inline std::string header_text(const ContainerHeader& h) {
  nlohmann::ordered_json j;
  j["format"] = "hsired-container";
  j["version"] = kContainerVersion;
  j["height"] = h.height;
  j["width"] = h.width;
  j["bands"] = h.bands;
  j["dtype"] = h.dtype;
  j["interleave"] = "bsq";
  j["byteorder"] = "le";
  if (!h.class_names.empty()) j["class_names"] = h.class_names;
  return j.dump(2) + "\n";
}

}  // namespace detail

inline ContainerHeader read_header(const std::filesystem::path& header_path) {
  const std::string text = read_file(header_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, header_path.string() + ": " + e.what());
  }
  ContainerHeader h;
  try {
    require(j.is_object(), ErrorKind::Parse, "header is not an object");
    require(j.value("format", "") == "hsired-container", ErrorKind::Parse, "unknown container format");
    require(j.at("version").get<int>() == kContainerVersion, ErrorKind::Parse, "unsupported container version");
    h.height = j.at("height").get<std::size_t>();
    h.width = j.at("width").get<std::size_t>();
    h.bands = j.at("bands").get<std::size_t>();
    h.dtype = j.at("dtype").get<std::string>();
    require(j.at("interleave").get<std::string>() == "bsq", ErrorKind::Parse, "only bsq interleave is supported");
    require(j.at("byteorder").get<std::string>() == "le", ErrorKind::Parse, "only little-endian payloads are supported");
    if (j.contains("class_names")) h.class_names = j.at("class_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, header_path.string() + ": " + e.what());
  }
  require(h.dtype == "f32" || h.dtype == "u16", ErrorKind::Parse, "dtype must be f32 or u16, got " + h.dtype);
  return h;
}

namespace detail {

inline std::string read_payload(const std::filesystem::path& header_path, std::size_t expected_bytes) {
  const auto payload = payload_path(header_path);
  const std::string bytes = read_file(payload);
  require(bytes.size() == expected_bytes, ErrorKind::SizeMismatch,
          payload.string() + " holds " + std::to_string(bytes.size()) + " bytes, header implies " +
              std::to_string(expected_bytes));
  return bytes;
}

}  // namespace detail

inline HsiCube load_cube(const std::filesystem::path& header_path) {
  const ContainerHeader h = read_header(header_path);
  require(h.dtype == "f32", ErrorKind::Parse, header_path.string() + " is not an f32 cube");
  HsiCube cube{h.height, h.width, h.bands, {}};
  cube.values = detail::decode_le<float>(detail::read_payload(header_path, h.height * h.width * h.bands * 4));
  validate(cube);
  return cube;
}

inline GroundTruth load_ground_truth(const std::filesystem::path& header_path) {
  const ContainerHeader h = read_header(header_path);
  require(h.dtype == "u16" && h.bands == 1, ErrorKind::Parse, header_path.string() + " is not a u16 single-band map");
  GroundTruth gt{h.height, h.width, {}, h.class_names};
  gt.labels = detail::decode_le<std::uint16_t>(detail::read_payload(header_path, h.height * h.width * 2));
  validate(gt);
  return gt;
}

inline void save_cube(const HsiCube& cube, const std::filesystem::path& header_path) {
  validate(cube);
  write_file_atomic(payload_path(header_path), detail::encode_le(cube.values));
  write_file_atomic(header_path, detail::header_text({cube.height, cube.width, cube.bands, "f32", {}}));
}

inline void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& header_path) {
  validate(gt);
  write_file_atomic(payload_path(header_path), detail::encode_le(gt.labels));
  write_file_atomic(header_path, detail::header_text({gt.height, gt.width, 1, "u16", gt.class_names}));
}

}  // namespace hsired
