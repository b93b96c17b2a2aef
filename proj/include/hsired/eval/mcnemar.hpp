#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hsired/hsi/samples.hpp"

namespace hsired {

enum class McNemarMethod { Auto, ChiSquare, ExactBinomial };

/// Below this many discordant pairs the Auto method uses the exact binomial test.
inline constexpr std::size_t kMcNemarExactBelow = 25;

struct McNemarResult {
  std::size_t b = 0;  // A correct, B wrong
  std::size_t c = 0;  // A wrong, B correct
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant_at_05 = false;
  McNemarMethod method = McNemarMethod::ChiSquare;  // path actually used

  bool operator==(const McNemarResult&) const = default;
};

/// P(X ≥ x) for X ~ χ²(1), via erfc(√(x/2)).
inline double chi_square1_survival(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

/// Two-sided exact p-value for min(b, c) successes out of b + c fair trials.
inline double exact_binomial_two_sided(std::size_t b, std::size_t c) {
  const std::size_t n = b + c;
  if (n == 0) return 1.0;
  const std::size_t k = std::min(b, c);
  double tail = 0.0;
  if (n <= 60) {
    // Exact integer binomial coefficients; C(60, 30) fits in 64 bits.
    std::uint64_t coeff = 1;
    std::uint64_t sum = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      coeff = coeff * (n - i + 1) / i;
      sum += coeff;
    }
    tail = std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
  } else {
    for (std::size_t i = 0; i <= k; ++i)
      tail += std::exp(std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
                       std::lgamma(static_cast<double>(n - i) + 1.0) - static_cast<double>(n) * std::log(2.0));
  }
  return std::min(1.0, 2.0 * tail);
}

/// Continuity-corrected statistic max(|b − c| − 1, 0)² / (b + c); 0 when b + c = 0.
inline double mcnemar_statistic(std::size_t b, std::size_t c) {
  if (b + c == 0) return 0.0;
  const double diff = std::max(std::abs(static_cast<double>(b) - static_cast<double>(c)) - 1.0, 0.0);
  return diff * diff / static_cast<double>(b + c);
}

inline McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c, McNemarMethod method = McNemarMethod::Auto) {
  McNemarResult r;
  r.b = b;
  r.c = c;
  r.statistic = mcnemar_statistic(b, c);
  r.method = method == McNemarMethod::Auto ? (b + c < kMcNemarExactBelow ? McNemarMethod::ExactBinomial : McNemarMethod::ChiSquare)
                                           : method;
  if (b + c == 0) r.p_value = 1.0;
  else r.p_value = r.method == McNemarMethod::ExactBinomial ? exact_binomial_two_sided(b, c) : chi_square1_survival(r.statistic);
  r.significant_at_05 = r.p_value < 0.05;
  return r;
}

/// Paired test on the discordant predictions of classifiers A and B.
inline McNemarResult mcnemar(const std::vector<Label>& pred_a, const std::vector<Label>& pred_b,
                             const std::vector<Label>& truth, McNemarMethod method = McNemarMethod::Auto) {
  require(pred_a.size() == truth.size() && pred_b.size() == truth.size(), ErrorKind::Dimension,
          "McNemar inputs differ in length");
  std::size_t b = 0, c = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = pred_a[i] == truth[i];
    const bool b_ok = pred_b[i] == truth[i];
    if (a_ok && !b_ok) ++b;
    else if (!a_ok && b_ok) ++c;
  }
  return mcnemar_from_counts(b, c, method);
}

}  // namespace hsired
