#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <set>

#include <unistd.h>

#include "hsired/hsi/cube.hpp"
#include "hsired/hsi/datasets.hpp"
#include "hsired/hsi/interchange.hpp"
#include "hsired/hsi/samples.hpp"
#include "hsired/hsi/synthetic.hpp"

using namespace hsired;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("hsired_hsi_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an hsired::Error";
  return ErrorKind::Usage;
}

/// Ground truth whose per-class counts match a preset table, laid out in raster order.
GroundTruth ground_truth_for(const ScenePreset& p) {
  GroundTruth gt{p.height, p.width, std::vector<std::uint16_t>(p.height * p.width, 0), p.class_names()};
  std::size_t px = 0;
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    for (std::size_t i = 0; i < p.classes[c].samples; ++i) gt.labels[px++] = static_cast<std::uint16_t>(c + 1);
  return gt;
}

SampleSet labels_only(const std::vector<Label>& labels) {
  SampleSet s{DenseMatrix(labels.size(), 1), labels, {}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s.pixel_indices.push_back(i);
    s.features(i, 0) = static_cast<double>(i);
  }
  return s;
}

}  // namespace

TEST(Container, RoundTripIsByteExact) {
  TempDir dir;
  HsiCube cube{2, 2, 3, {0.f, 1.f, 2.f, 3.f, -1.5f, 1e-7f, 3.25f, 1e20f, 7.f, 8.f, 9.f, 10.f}};
  const fs::path h = dir.path() / "cube.hsih";
  save_cube(cube, h);
  EXPECT_EQ(fs::file_size(payload_path(h)), 2u * 2u * 3u * 4u);
  const HsiCube back = load_cube(h);
  ASSERT_EQ(back.values.size(), cube.values.size());
  EXPECT_EQ(std::memcmp(back.values.data(), cube.values.data(), cube.values.size() * 4), 0);
  EXPECT_EQ(back, cube);
  // band-sequential layout: second band of pixel (0,1) is element 4+1.
  EXPECT_EQ(back.at(0, 1, 1), 1e-7f);

  GroundTruth gt{2, 2, {0, 1, 2, 1}, {"a", "b"}};
  save_ground_truth(gt, dir.path() / "gt.hsih");
  EXPECT_EQ(load_ground_truth(dir.path() / "gt.hsih"), gt);
}

TEST(Container, PayloadIsLittleEndian) {
  TempDir dir;
  save_ground_truth({1, 2, {0x0102, 0x0304}, {}}, dir.path() / "g.hsih");
  const std::string bytes = read_file(dir.path() / "g.hsir");
  EXPECT_EQ(bytes, std::string("\x02\x01\x04\x03", 4));
}

TEST(Container, TruncatedPayloadIsSizeMismatch) {
  TempDir dir;
  const fs::path h = dir.path() / "c.hsih";
  save_cube({2, 2, 3, std::vector<float>(12, 1.f)}, h);
  std::string bytes = read_file(payload_path(h));
  bytes.resize(bytes.size() - 4);
  write_file_atomic(payload_path(h), bytes);
  EXPECT_EQ(kind_of([&] { load_cube(h); }), ErrorKind::SizeMismatch);
}

TEST(Container, MalformedHeadersAreParseErrors) {
  TempDir dir;
  const fs::path h = dir.path() / "bad.hsih";
  write_file_atomic(h, "{not json");
  EXPECT_EQ(kind_of([&] { read_header(h); }), ErrorKind::Parse);
  write_file_atomic(h, R"({"format":"other","version":1})");
  EXPECT_EQ(kind_of([&] { read_header(h); }), ErrorKind::Parse);
  write_file_atomic(h, R"({"format":"hsired-container","version":1,"height":1,"width":1,"bands":1,"dtype":"f64","interleave":"bsq","byteorder":"le"})");
  EXPECT_EQ(kind_of([&] { read_header(h); }), ErrorKind::Parse);
  write_file_atomic(h, R"({"format":"hsired-container","version":1,"height":1,"width":1,"bands":1,"dtype":"f32","interleave":"bip","byteorder":"le"})");
  EXPECT_EQ(kind_of([&] { read_header(h); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { read_header(dir.path() / "missing.hsih"); }), ErrorKind::Io);
}

TEST(Container, NonFiniteValuesRejected) {
  HsiCube cube{1, 1, 1, {std::numeric_limits<float>::quiet_NaN()}};
  EXPECT_EQ(kind_of([&] { validate(cube); }), ErrorKind::NonFinite);
}

TEST(Container, LabelAboveClassCountRejected) {
  TempDir dir;
  GroundTruth gt{1, 2, {1, 3}, {"a", "b"}};
  EXPECT_EQ(kind_of([&] { save_ground_truth(gt, dir.path() / "g.hsih"); }), ErrorKind::Parse);
}

TEST(ExtractLabeled, AllUnlabeledGivesEmptySet) {
  const HsiCube cube{2, 2, 3, std::vector<float>(12, 1.f)};
  const SampleSet s = extract_labeled(cube, {2, 2, {0, 0, 0, 0}, {}});
  EXPECT_EQ(s.size(), 0u);
  EXPECT_EQ(s.features.rows(), 0u);
  EXPECT_EQ(s.features.cols(), 3u);
}

TEST(ExtractLabeled, RasterOrderAndSpectra) {
  HsiCube cube{2, 2, 2, {1, 2, 3, 4, 10, 20, 30, 40}};
  const SampleSet s = extract_labeled(cube, {2, 2, {0, 2, 1, 0}, {}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.pixel_indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.labels, (std::vector<Label>{2, 1}));
  EXPECT_EQ(s.features(0, 0), 2.0);
  EXPECT_EQ(s.features(0, 1), 20.0);
  EXPECT_EQ(s.features(1, 1), 30.0);
}

TEST(ExtractLabeled, ShapeMismatchIsDimensionError) {
  const HsiCube cube{2, 2, 1, std::vector<float>(4)};
  EXPECT_EQ(kind_of([&] { extract_labeled(cube, {2, 3, std::vector<std::uint16_t>(6), {}}); }), ErrorKind::Dimension);
}

TEST(Presets, LabeledCountsMatchReferenceTables) {
  for (const ScenePreset* p : {&indian_pines(), &pavia_university()}) {
    const GroundTruth gt = ground_truth_for(*p);
    const HsiCube cube{p->height, p->width, 1, std::vector<float>(p->height * p->width)};
    const SampleSet s = extract_labeled(cube, gt);
    EXPECT_EQ(s.size(), p->labeled_pixels());
    const auto counts = class_counts(s.labels);
    for (std::size_t c = 0; c < p->classes.size(); ++c) EXPECT_EQ(counts.at(static_cast<Label>(c + 1)), p->classes[c].samples);
  }
  EXPECT_EQ(indian_pines().labeled_pixels(), 10249u);
  EXPECT_EQ(pavia_university().labeled_pixels(), 42776u);
  EXPECT_EQ(indian_pines().classes.size(), 16u);
  EXPECT_EQ(pavia_university().classes.size(), 9u);
  EXPECT_EQ(find_preset("pavia_university"), &pavia_university());
  EXPECT_EQ(find_preset("salinas"), nullptr);
}

TEST(StratifiedSplit, TenSamplesSevenThree) {
  const Split s = stratified_split(labels_only(std::vector<Label>(10, 1)), 0.7, 0);
  EXPECT_EQ(s.train.size(), 7u);
  EXPECT_EQ(s.test.size(), 3u);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(StratifiedSplit, SmallClassRounding) {
  EXPECT_EQ(train_count_for(20, 0.7), 14u);
  EXPECT_EQ(train_count_for(46, 0.7), 32u);  // 32.2
  EXPECT_EQ(train_count_for(5, 0.7), 4u);    // 3.5 rounds up
  EXPECT_EQ(train_count_for(2, 0.01), 1u);
  EXPECT_EQ(train_count_for(2, 0.99), 1u);
  EXPECT_EQ(train_count_for(1, 0.5), 1u);
  const auto ip = ground_truth_for(indian_pines());
  const SampleSet all = extract_labeled({145, 145, 1, std::vector<float>(145 * 145)}, ip);
  const Split s = stratified_split(all, 0.7, 3);
  EXPECT_EQ(class_counts(s.train.labels).at(9), 14u);
  EXPECT_EQ(class_counts(s.test.labels).at(9), 6u);
}

TEST(StratifiedSplit, DeterministicAndSeedSensitive) {
  const SampleSet s = labels_only({1, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3});
  EXPECT_EQ(stratified_split(s, 0.5, 9).train, stratified_split(s, 0.5, 9).train);
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 10 && !differs; ++seed)
    differs = stratified_split(s, 0.5, seed).train.pixel_indices != stratified_split(s, 0.5, 9).train.pixel_indices;
  EXPECT_TRUE(differs);
}

TEST(StratifiedSplit, SingleSampleClassGoesToTraining) {
  const Split s = stratified_split(labels_only({1, 1, 1, 1, 2}), 0.7, 0);
  EXPECT_EQ(class_counts(s.train.labels).count(2), 1u);
  EXPECT_EQ(class_counts(s.test.labels).count(2), 0u);
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("class 2"), std::string::npos);
}

TEST(StratifiedSplit, FractionOutsideOpenIntervalIsDomainError) {
  const SampleSet s = labels_only({1, 1, 1});
  for (double f : {0.0, 1.0, -0.2, 1.5}) EXPECT_EQ(kind_of([&] { stratified_split(s, f, 0); }), ErrorKind::Domain);
}

TEST(StratifiedSplit, PartitionProperties) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(80);
    const std::size_t classes = 1 + rng.below(6);
    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(1 + rng.below(classes));
    const double fraction = 0.05 + 0.9 * rng.uniform();
    const SampleSet all = labels_only(labels);
    const Split s = stratified_split(all, fraction, rng.next());

    std::set<std::size_t> seen;
    for (auto p : s.train.pixel_indices) EXPECT_TRUE(seen.insert(p).second);
    for (auto p : s.test.pixel_indices) EXPECT_TRUE(seen.insert(p).second);
    EXPECT_EQ(seen.size(), n);
    EXPECT_TRUE(std::is_sorted(s.train.pixel_indices.begin(), s.train.pixel_indices.end()));
    EXPECT_TRUE(std::is_sorted(s.test.pixel_indices.begin(), s.test.pixel_indices.end()));

    const auto total = class_counts(labels);
    const auto train = class_counts(s.train.labels);
    for (const auto& [label, count] : total) {
      const std::size_t got = train.count(label) ? train.at(label) : 0;
      EXPECT_EQ(got, train_count_for(count, fraction));
      EXPECT_GE(got, 1u);
      if (count >= 2) {
        EXPECT_LE(got, count - 1);
      }
    }
    for (std::size_t i = 0; i < s.train.size(); ++i)
      EXPECT_EQ(s.train.features(i, 0), static_cast<double>(s.train.pixel_indices[i]));
  }
}

TEST(Synthetic, SceneShapeAndLabels) {
  const SyntheticScene s = make_synthetic_scene({});
  EXPECT_EQ(s.cube.values.size(), 40u * 40u * 60u);
  EXPECT_EQ(s.ground_truth.num_classes(), 5u);
  const auto counts = class_counts(extract_labeled(s.cube, s.ground_truth).labels);
  EXPECT_EQ(counts.size(), 5u);
  for (const auto& [label, n] : counts) EXPECT_EQ(n, 320u);
  EXPECT_EQ(make_synthetic_scene({}).cube, s.cube);
}

TEST(Convert, BandInterleavedByPixelBigEndian) {
  // 1×2 pixels, 2 bands of u16 stored big-endian in pixel order.
  const std::string raw("\x00\x01\x00\x02\x01\x00\x02\x00", 8);
  const DumpLayout d = parse_dump_layout(R"({"kind":"cube","height":1,"width":2,"bands":2,"dtype":"u16","interleave":"bip","byteorder":"be"})");
  const ConvertedScene out = convert_dump(raw, d);
  ASSERT_TRUE(out.cube.has_value());
  EXPECT_EQ(out.cube->at(0, 0, 0), 1.f);
  EXPECT_EQ(out.cube->at(0, 0, 1), 2.f);
  EXPECT_EQ(out.cube->at(0, 1, 0), 256.f);
  EXPECT_EQ(out.cube->at(0, 1, 1), 512.f);
}

TEST(Convert, InterleavesAgree) {
  // Same 2×3×2 cube in all three orders.
  const std::size_t h = 2, w = 3, b = 2;
  auto value = [](std::size_t r, std::size_t c, std::size_t k) { return static_cast<float>(100 * r + 10 * c + k); };
  std::optional<HsiCube> reference;
  for (const std::string il : {"bip", "bil", "bsq"}) {
    DumpLayout d{"cube", h, w, b, "f32", il, "le", {}};
    std::vector<float> flat(h * w * b);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        for (std::size_t k = 0; k < b; ++k) flat[detail::dump_offset(d, r, c, k)] = value(r, c, k);
    const ConvertedScene out = convert_dump(detail::encode_le(flat), d);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        for (std::size_t k = 0; k < b; ++k) EXPECT_EQ(out.cube->at(r, c, k), value(r, c, k)) << il;
    if (reference) {
      EXPECT_EQ(*out.cube, *reference);
    }
    reference = out.cube;
  }
}

TEST(Convert, LabelsAndErrors) {
  const DumpLayout d = parse_dump_layout(R"({"kind":"labels","height":1,"width":3,"dtype":"u8","class_names":["a","b"]})");
  const ConvertedScene out = convert_dump(std::string("\x00\x01\x02", 3), d);
  ASSERT_TRUE(out.ground_truth.has_value());
  EXPECT_EQ(out.ground_truth->labels, (std::vector<std::uint16_t>{0, 1, 2}));
  EXPECT_EQ(kind_of([&] { convert_dump(std::string("\x00\x01", 2), d); }), ErrorKind::SizeMismatch);
  const DumpLayout neg = parse_dump_layout(R"({"kind":"labels","height":1,"width":1,"dtype":"i16"})");
  EXPECT_EQ(kind_of([&] { convert_dump(std::string("\xff\xff", 2), neg); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { parse_dump_layout(R"({"kind":"cube","height":1,"width":1,"dtype":"f32","interleave":"xyz"})"); }),
            ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { parse_dump_layout(R"({"kind":"labels","height":1,"width":1,"bands":2,"dtype":"u8"})"); }),
            ErrorKind::Parse);
}
