#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace priming {

// Continuously compounded returns R_w = ln(I_w / I_{w-1}), with R_0 = 0.
// Throws std::invalid_argument for a non-positive index value.
std::vector<double> log_returns(std::span<const double> index);

struct VolatilitySeries {
  std::vector<double> vi;
  std::size_t horizon = 0;
};

// Rolling population standard deviation of the trailing `horizon` returns
// (equal weights). Early windows use every available return; vi[0] = vi[1].
VolatilitySeries volatility_series(std::span<const double> returns, std::size_t horizon);

struct LogisticFit {
  double mu = 0.0;
  double s = 1.0;
};

// Method-of-moments fit: mu = mean, s = sqrt(3 var) / pi.
// Throws std::invalid_argument when the series is constant.
LogisticFit fit_logistic(std::span<const double> vi);

double logistic_cdf(double x, const LogisticFit& fit);
double logistic_quantile(double u, const LogisticFit& fit);

enum class PviMode { quantized, continuous };

PviMode parse_pvi_mode(std::string_view text);
std::string_view to_string(PviMode mode);

struct ProbVolatility {
  std::vector<double> pvi;
  LogisticFit fit;
  std::size_t bins = 0;
  PviMode mode = PviMode::quantized;
  // Logistic quantiles at i / bins for i = 1 .. bins - 1.
  std::vector<double> edges;
};

// Maps each volatility value through the fitted logistic CDF. Quantized
// mode snaps to the upper boundary of one of `bins` equal-probability bins.
ProbVolatility probabilize(std::span<const double> vi, const LogisticFit& fit, std::size_t bins,
                           PviMode mode = PviMode::quantized);

}  // namespace priming
