#pragma once

#include <cstdint>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsired/hsi/cube.hpp"
#include "hsired/io.hpp"

namespace hsired {

/// Sidecar describing a flat binary dump, e.g. one written by numpy's
/// `ndarray.tofile`:
///
///   {"kind": "cube" | "labels", "height": H, "width": W, "bands": B,
///    "dtype": "u8"|"u16"|"i16"|"i32"|"u32"|"f32"|"f64",
///    "interleave": "bip"|"bil"|"bsq", "byteorder": "le"|"be",
///    "class_names": [...]}
///
/// A C-ordered H×W×B array is "bip". Labels dumps have bands = 1 (may be omitted).
struct DumpLayout {
  std::string kind;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 1;
  std::string dtype;
  std::string interleave = "bip";
  std::string byteorder = "le";
  std::vector<std::string> class_names;
};

inline DumpLayout parse_dump_layout(const std::string& text) {
  DumpLayout d;
  try {
    const auto j = nlohmann::json::parse(text);
    d.kind = j.at("kind").get<std::string>();
    d.height = j.at("height").get<std::size_t>();
    d.width = j.at("width").get<std::size_t>();
    d.bands = j.value("bands", std::size_t{1});
    d.dtype = j.at("dtype").get<std::string>();
    d.interleave = j.value("interleave", d.interleave);
    d.byteorder = j.value("byteorder", d.byteorder);
    if (j.contains("class_names")) d.class_names = j.at("class_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("dump sidecar: ") + e.what());
  }
  require(d.kind == "cube" || d.kind == "labels", ErrorKind::Parse, "sidecar kind must be cube or labels");
  require(d.interleave == "bip" || d.interleave == "bil" || d.interleave == "bsq", ErrorKind::Parse, "unknown interleave " + d.interleave);
  require(d.byteorder == "le" || d.byteorder == "be", ErrorKind::Parse, "unknown byte order " + d.byteorder);
  require(d.kind == "cube" || d.bands == 1, ErrorKind::Parse, "labels dump must have a single band");
  return d;
}

namespace detail {

inline std::size_t dtype_size(const std::string& dtype) {
  if (dtype == "u8") return 1;
  if (dtype == "u16" || dtype == "i16") return 2;
  if (dtype == "u32" || dtype == "i32" || dtype == "f32") return 4;
  if (dtype == "f64") return 8;
  throw Error(ErrorKind::Parse, "unknown dtype " + dtype);
}

inline double decode_element(const unsigned char* p, const std::string& dtype, bool big_endian) {
  const std::size_t size = dtype_size(dtype);
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t src = big_endian ? size - 1 - k : k;
    bits |= static_cast<std::uint64_t>(p[src]) << (8 * k);
  }
  if (dtype == "u8" || dtype == "u16" || dtype == "u32") return static_cast<double>(bits);
  if (dtype == "i16") return static_cast<double>(static_cast<std::int16_t>(bits));
  if (dtype == "i32") return static_cast<double>(static_cast<std::int32_t>(bits));
  if (dtype == "f32") {
    const auto b32 = static_cast<std::uint32_t>(bits);
    float f;
    std::memcpy(&f, &b32, 4);
    return f;
  }
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

/// Element offset of (row, col, band) in the dump's interleave.
inline std::size_t dump_offset(const DumpLayout& d, std::size_t row, std::size_t col, std::size_t band) {
  if (d.interleave == "bip") return (row * d.width + col) * d.bands + band;
  if (d.interleave == "bil") return (row * d.bands + band) * d.width + col;
  return (band * d.height + row) * d.width + col;
}

}  // namespace detail

struct ConvertedScene {
  std::optional<HsiCube> cube;
  std::optional<GroundTruth> ground_truth;
};

/// Decodes a raw dump into a cube (f32, band-sequential) or a label map (u16).
inline ConvertedScene convert_dump(const std::string& raw, const DumpLayout& d) {
  const std::size_t esize = detail::dtype_size(d.dtype);
  const std::size_t count = d.height * d.width * d.bands;
  require(raw.size() == count * esize, ErrorKind::SizeMismatch,
          "dump holds " + std::to_string(raw.size()) + " bytes, sidecar implies " + std::to_string(count * esize));
  const bool be = d.byteorder == "be";
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());

  ConvertedScene out;
  if (d.kind == "cube") {
    HsiCube cube{d.height, d.width, d.bands, std::vector<float>(count)};
    const std::size_t plane = d.height * d.width;
    for (std::size_t r = 0; r < d.height; ++r)
      for (std::size_t c = 0; c < d.width; ++c)
        for (std::size_t b = 0; b < d.bands; ++b)
          cube.values[b * plane + r * d.width + c] =
              static_cast<float>(detail::decode_element(bytes + detail::dump_offset(d, r, c, b) * esize, d.dtype, be));
    validate(cube);
    out.cube = std::move(cube);
  } else {
    GroundTruth gt{d.height, d.width, std::vector<std::uint16_t>(count), d.class_names};
    for (std::size_t i = 0; i < count; ++i) {
      const double v = detail::decode_element(bytes + i * esize, d.dtype, be);
      require(v >= 0.0 && v <= 65535.0 && v == std::floor(v), ErrorKind::Parse, "label value is not a u16 integer");
      gt.labels[i] = static_cast<std::uint16_t>(v);
    }
    validate(gt);
    out.ground_truth = std::move(gt);
  }
  return out;
}

}  // namespace hsired
