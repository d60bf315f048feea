#include "priming/burst.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>

#include "priming/parallel.hpp"

namespace priming {

namespace {

void check_tail_args(std::uint64_t n, std::uint64_t N, double p) {
  if (n > N) throw std::invalid_argument(fmt::format("binomial tail: n = {} exceeds N = {}", n, N));
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial tail: probability outside [0, 1]");
}

double rate(std::uint64_t count, std::uint64_t total) {
  const double r = static_cast<double>(count) / static_cast<double>(total);
  return std::clamp(r, kRateEpsilon, 1.0 - kRateEpsilon);
}

}  // namespace

// For 1 <= n <= N, P(X >= n) = I_p(n, N - n + 1) (regularized incomplete beta).
double binomial_upper_tail(std::uint64_t n, std::uint64_t N, double p) {
  check_tail_args(n, N, p);
  if (n == 0 || p == 1.0) return 1.0;
  if (p == 0.0) return 0.0;
  return boost::math::ibeta(static_cast<double>(n), static_cast<double>(N - n + 1), p);
}

double burst_probability(std::uint64_t n, std::uint64_t N, double p_e) {
  check_tail_args(n, N, p_e);
  if (n == 0 || p_e == 1.0) return 0.0;
  if (p_e == 0.0) return 1.0;
  return boost::math::ibetac(static_cast<double>(n), static_cast<double>(N - n + 1), p_e);
}

double expected_rate(const WindowedCorpus& corpus, std::size_t f) {
  if (f >= corpus.feature_count()) throw std::out_of_range("expected_rate: unknown feature");
  const std::uint64_t count = corpus.feature_total(f);
  if (count == 0 || corpus.grand_total() == 0) throw std::out_of_range("expected_rate: feature never occurs");
  return rate(count, corpus.grand_total());
}

double expected_rate(const WindowedCorpus& corpus, std::string_view feature) {
  const auto f = corpus.find_feature(feature);
  if (!f) throw std::out_of_range(fmt::format("expected_rate: unknown feature \"{}\"", feature));
  return expected_rate(corpus, *f);
}

std::optional<std::size_t> BurstMatrix::find_feature(std::string_view name) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), name);
  if (it != features_.end() && *it == name) return static_cast<std::size_t>(it - features_.begin());
  // Matrices built from explicit rows need not be sorted.
  for (std::size_t f = 0; f < features_.size(); ++f) {
    if (features_[f] == name) return f;
  }
  return std::nullopt;
}

void BurstMatrix::rebuild_bursty() {
  bursty_.assign(features_.size(), {});
  for (std::size_t f = 0; f < features_.size(); ++f) {
    for (std::size_t w = 0; w < windows_; ++w) {
      if (p_[f * windows_ + w] >= threshold_) bursty_[f].push_back(w);
    }
  }
}

BurstMatrix BurstMatrix::from_probabilities(std::vector<std::string> features,
                                            const std::vector<std::vector<double>>& rows, double threshold) {
  if (features.size() != rows.size()) throw std::invalid_argument("burst matrix: feature/row count mismatch");
  BurstMatrix m;
  m.features_ = std::move(features);
  m.windows_ = rows.empty() ? 0 : rows.front().size();
  m.threshold_ = threshold;
  for (const auto& row : rows) {
    if (row.size() != m.windows_) throw std::invalid_argument("burst matrix: ragged rows");
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("burst matrix: probability outside [0, 1]");
    }
    m.p_.insert(m.p_.end(), row.begin(), row.end());
  }
  m.expected_rate_.assign(m.features_.size(), 0.0);
  m.rebuild_bursty();
  return m;
}

BurstMatrix burst_series(const WindowedCorpus& corpus, const BurstOptions& options) {
  if (corpus.feature_count() == 0 || corpus.grand_total() == 0) {
    throw std::invalid_argument("burst_series: empty corpus");
  }
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw std::invalid_argument("burst_series: threshold outside [0, 1]");
  }
  const std::size_t F = corpus.feature_count();
  const std::size_t W = corpus.window_count();

  BurstMatrix m;
  m.features_ = corpus.features();
  m.windows_ = W;
  m.threshold_ = options.threshold;
  m.p_.assign(F * W, 0.0);
  m.expected_rate_.assign(F, 0.0);

  parallel_for(F, options.threads, [&](std::size_t f) {
    double pe = expected_rate(corpus, f);
    auto fill = [&](double rate_value) {
      for (std::size_t w = 0; w < W; ++w) {
        m.p_[f * W + w] = burst_probability(corpus.count(f, w), corpus.window_total(w), rate_value);
      }
    };
    fill(pe);
    if (options.pe_exclude_bursty) {
      std::uint64_t count = 0;
      std::uint64_t total = 0;
      for (std::size_t w = 0; w < W; ++w) {
        if (m.p_[f * W + w] >= options.threshold) continue;
        count += corpus.count(f, w);
        total += corpus.window_total(w);
      }
      if (count > 0 && total > 0) {
        pe = rate(count, total);
        fill(pe);
      }
    }
    m.expected_rate_[f] = pe;
  });
  m.rebuild_bursty();
  return m;
}

}  // namespace priming
