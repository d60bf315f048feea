#include "priming/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace priming {

std::vector<double> log_returns(std::span<const double> index) {
  std::vector<double> returns(index.size(), 0.0);
  for (std::size_t w = 0; w < index.size(); ++w) {
    if (!(index[w] > 0.0)) {
      throw std::invalid_argument(fmt::format("log_returns: index value at window {} is not positive", w));
    }
    if (w > 0) returns[w] = std::log(index[w] / index[w - 1]);
  }
  return returns;
}

VolatilitySeries volatility_series(std::span<const double> returns, std::size_t horizon) {
  if (horizon < 2) throw std::invalid_argument("volatility_series: horizon must be at least 2");
  if (returns.size() < 2) throw std::invalid_argument("volatility_series: at least two windows are required");
  VolatilitySeries out;
  out.horizon = horizon;
  out.vi.assign(returns.size(), 0.0);
  for (std::size_t w = 1; w < returns.size(); ++w) {
    const std::size_t first = w + 1 >= horizon ? w + 1 - horizon : 0;
    const auto slice = returns.subspan(first, w - first + 1);
    double mean = 0.0;
    for (double r : slice) mean += r;
    mean /= static_cast<double>(slice.size());
    double ss = 0.0;
    for (double r : slice) ss += (r - mean) * (r - mean);
    out.vi[w] = std::sqrt(ss / static_cast<double>(slice.size()));
  }
  out.vi[0] = out.vi[1];
  return out;
}

LogisticFit fit_logistic(std::span<const double> vi) {
  if (vi.size() < 2) throw std::invalid_argument("fit_logistic: need at least two values");
  double mean = 0.0;
  for (double v : vi) mean += v;
  mean /= static_cast<double>(vi.size());
  double var = 0.0;
  for (double v : vi) var += (v - mean) * (v - mean);
  var /= static_cast<double>(vi.size());
  const auto [lo, hi] = std::minmax_element(vi.begin(), vi.end());
  if (*lo == *hi || !(var > 0.0)) throw std::invalid_argument("fit_logistic: constant series");
  return {mean, std::sqrt(3.0 * var) / std::numbers::pi};
}

double logistic_cdf(double x, const LogisticFit& fit) {
  return 1.0 / (1.0 + std::exp(-(x - fit.mu) / fit.s));
}

double logistic_quantile(double u, const LogisticFit& fit) {
  return fit.mu + fit.s * std::log(u / (1.0 - u));
}

PviMode parse_pvi_mode(std::string_view text) {
  if (text == "quantized") return PviMode::quantized;
  if (text == "continuous") return PviMode::continuous;
  throw std::invalid_argument(fmt::format("unknown pvi mode \"{}\"", text));
}

std::string_view to_string(PviMode mode) {
  return mode == PviMode::quantized ? "quantized" : "continuous";
}

ProbVolatility probabilize(std::span<const double> vi, const LogisticFit& fit, std::size_t bins, PviMode mode) {
  if (bins < 2) throw std::invalid_argument("probabilize: at least two bins are required");
  if (!(fit.s > 0.0)) throw std::invalid_argument("probabilize: logistic scale must be positive");
  ProbVolatility out;
  out.fit = fit;
  out.bins = bins;
  out.mode = mode;
  const double A = static_cast<double>(bins);
  for (std::size_t i = 1; i < bins; ++i) out.edges.push_back(logistic_quantile(static_cast<double>(i) / A, fit));
  out.pvi.reserve(vi.size());
  for (double v : vi) {
    const double u = logistic_cdf(v, fit);
    if (mode == PviMode::continuous) {
      out.pvi.push_back(u);
      continue;
    }
    // Bin index from the quantile edges keeps the snapping exact at boundaries.
    const auto bin = static_cast<std::size_t>(std::upper_bound(out.edges.begin(), out.edges.end(), v) -
                                              out.edges.begin());
    // A value sitting on an edge belongs to the lower bin (ceil(u * A)).
    const bool on_edge = bin > 0 && v == out.edges[bin - 1];
    const std::size_t upper = on_edge ? bin : bin + 1;
    out.pvi.push_back(static_cast<double>(upper) / A);
  }
  return out;
}

}  // namespace priming
