#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "hsired/linalg/randomized.hpp"
#include "hsired/linalg/svd.hpp"
#include "hsired/random.hpp"
#include "hsired/serialize.hpp"

namespace hsired {

struct BenchSpec {
  std::size_t rows = 1000;
  std::size_t cols = 200;
  std::vector<std::size_t> ranks;
  std::vector<std::uint64_t> seeds{0};
  std::size_t repeats = 5;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 2;
};

struct BenchRow {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t oversampling = 0;  // clamped so k + p ≤ min(rows, cols)
  double exact_ms = 0.0;         // median
  double randomized_ms = 0.0;    // median
  double max_relative_sv_error = 0.0;
};

namespace detail {

template <typename F>
double median_ms(std::size_t repeats, F&& body) {
  std::vector<double> t;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    body();
    t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t.size() % 2 ? t[t.size() / 2] : 0.5 * (t[t.size() / 2 - 1] + t[t.size() / 2]);
}

}  // namespace detail

/// Median wall-clock of exact_svd vs randomized_svd on Gaussian test matrices.
/// Reporting only: nothing is asserted about which is faster.
inline std::vector<BenchRow> cmd_bench(const BenchSpec& spec) {
  require(!spec.ranks.empty(), ErrorKind::Usage, "bench needs at least one rank");
  require(!spec.seeds.empty(), ErrorKind::Usage, "bench needs at least one seed");
  require(spec.repeats >= 1, ErrorKind::Usage, "bench needs at least one repeat");
  const std::size_t min_dim = std::min(spec.rows, spec.cols);
  require(min_dim >= 1, ErrorKind::Usage, "bench shape must be non-empty");
  for (std::size_t k : spec.ranks)
    require(k >= 1 && k <= min_dim, ErrorKind::Usage, "rank " + std::to_string(k) + " outside [1, " + std::to_string(min_dim) + "]");

  std::vector<BenchRow> rows;
  for (std::uint64_t seed : spec.seeds) {
    DenseMatrix a;
    try {
      Rng rng(seed);
      a = DenseMatrix::gaussian(spec.rows, spec.cols, rng);
    } catch (const std::bad_alloc&) {
      throw Error(ErrorKind::Resource, "cannot allocate a " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) + " matrix");
    }
    for (std::size_t k : spec.ranks) {
      BenchRow row{spec.rows, spec.cols, k, seed, std::min(spec.oversampling, min_dim - k)};
      SvdResult exact, approx;
      row.exact_ms = detail::median_ms(spec.repeats, [&] { exact = exact_svd(a, k); });
      const RandomizedSvdParams p{k, row.oversampling, spec.power_iterations, seed};
      row.randomized_ms = detail::median_ms(spec.repeats, [&] { approx = randomized_svd(a, p); });
      for (std::size_t i = 0; i < k; ++i)
        if (exact.s[i] > 0.0)
          row.max_relative_sv_error = std::max(row.max_relative_sv_error, std::abs(approx.s[i] - exact.s[i]) / exact.s[i]);
      rows.push_back(row);
    }
  }
  return rows;
}

inline Json to_json(const BenchRow& r) {
  return Json{{"rows", r.rows},
              {"cols", r.cols},
              {"k", r.k},
              {"seed", r.seed},
              {"oversampling", r.oversampling},
              {"exact_median_ms", r.exact_ms},
              {"randomized_median_ms", r.randomized_ms},
              {"max_relative_sv_error", r.max_relative_sv_error}};
}

}  // namespace hsired
