#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "priming/corpus.hpp"

namespace priming {

inline constexpr double kRateEpsilon = 1e-12;

// P(X >= n) for X ~ Binomial(N, p). Throws std::invalid_argument when n > N
// or p is outside [0, 1].
double binomial_upper_tail(std::uint64_t n, std::uint64_t N, double p);

// Burst probability of observing n occurrences out of N at the expected
// rate p_e: P(X < n) = 1 - binomial_upper_tail(n, N, p_e), evaluated
// directly so values close to 1 keep full precision. Zero when n = 0 and
// non-decreasing in n.
double burst_probability(std::uint64_t n, std::uint64_t N, double p_e);

// Overall occurrence rate of feature f, clamped to [eps, 1 - eps].
// Throws std::out_of_range for an unknown or absent feature.
double expected_rate(const WindowedCorpus& corpus, std::size_t f);
double expected_rate(const WindowedCorpus& corpus, std::string_view feature);

struct BurstOptions {
  double threshold = 0.9;
  // Re-estimate p_e after excluding each feature's first-pass bursty windows.
  bool pe_exclude_bursty = false;
  unsigned threads = 1;
};

class BurstMatrix {
 public:
  BurstMatrix() = default;

  // Builds a matrix from explicit probability rows; bursty windows use the
  // >= threshold rule. Expected rates are left at zero.
  static BurstMatrix from_probabilities(std::vector<std::string> features,
                                        const std::vector<std::vector<double>>& rows, double threshold);

  std::size_t feature_count() const noexcept { return features_.size(); }
  std::size_t window_count() const noexcept { return windows_; }
  double threshold() const noexcept { return threshold_; }

  const std::vector<std::string>& features() const noexcept { return features_; }
  std::optional<std::size_t> find_feature(std::string_view name) const;

  double probability(std::size_t f, std::size_t w) const { return p_[f * windows_ + w]; }
  std::span<const double> series(std::size_t f) const {
    return std::span<const double>(p_).subspan(f * windows_, windows_);
  }
  double expected_rate(std::size_t f) const { return expected_rate_.at(f); }
  const std::vector<std::size_t>& bursty_windows(std::size_t f) const { return bursty_.at(f); }

  friend BurstMatrix burst_series(const WindowedCorpus& corpus, const BurstOptions& options);

 private:
  void rebuild_bursty();

  std::vector<std::string> features_;
  std::size_t windows_ = 0;
  double threshold_ = 0.9;
  std::vector<double> p_;
  std::vector<double> expected_rate_;
  std::vector<std::vector<std::size_t>> bursty_;
};

// Computes p(f, w) for every corpus feature (feature ids match the corpus).
// Throws std::invalid_argument for an empty corpus or a threshold outside [0, 1].
BurstMatrix burst_series(const WindowedCorpus& corpus, const BurstOptions& options = {});

}  // namespace priming
