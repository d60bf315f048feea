#include <doctest.h>

#include <numbers>
#include <random>
#include <stdexcept>
#include <set>

#include "priming/volatility.hpp"

using namespace priming;

TEST_SUITE("volatility") {

TEST_CASE("log returns") {
  const std::vector<double> constant{5, 5, 5, 5};
  for (double r : log_returns(constant)) CHECK(r == 0.0);
  const auto r = log_returns(std::vector<double>{100.0, 100.0 * std::numbers::e});
  CHECK(r[0] == 0.0);
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(log_returns(std::vector<double>{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(log_returns(std::vector<double>{-1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("rolling volatility") {
  const auto flat = volatility_series(std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1}, 3);
  for (double v : flat.vi) CHECK(v == doctest::Approx(0.0));
  const auto vs = volatility_series(std::vector<double>{0.0, 0.0, 1.0, -1.0}, 2);
  CHECK(vs.vi[2] == doctest::Approx(0.5));
  CHECK(vs.vi[3] == doctest::Approx(1.0));
  CHECK(vs.vi[0] == vs.vi[1]);
  CHECK_THROWS_AS(volatility_series(std::vector<double>{0.0, 1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(volatility_series(std::vector<double>{0.0}, 2), std::invalid_argument);
}

TEST_CASE("early windows use all available returns") {
  const std::vector<double> r{0.0, 2.0, 4.0, 6.0, 8.0};
  const auto vs = volatility_series(r, 4);
  // Window 2 sees {0, 2, 4}: population std sqrt(8/3).
  CHECK(vs.vi[2] == doctest::Approx(std::sqrt(8.0 / 3.0)));
  // Window 4 sees {2, 4, 6, 8}: population std sqrt(5).
  CHECK(vs.vi[4] == doctest::Approx(std::sqrt(5.0)));
  for (double v : vs.vi) CHECK(v >= 0.0);
}

TEST_CASE("method-of-moments logistic fit") {
  // Two-point sample with mean 0.1 and variance (pi^2 / 3) * 0.04.
  const double sd = std::sqrt(std::numbers::pi * std::numbers::pi / 3.0 * 0.04);
  const auto fit = fit_logistic(std::vector<double>{0.1 - sd, 0.1 + sd});
  CHECK(fit.mu == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(fit.s == doctest::Approx(0.2).epsilon(1e-12));
  const auto sym = fit_logistic(std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(sym.mu == doctest::Approx(3.0));
  CHECK_THROWS_AS(fit_logistic(std::vector<double>{2.0, 2.0, 2.0}), std::invalid_argument);
}

TEST_CASE("probabilized volatility examples") {
  const LogisticFit fit{0.5, 0.1};
  const auto at_mu = probabilize(std::vector<double>{0.5}, fit, 10);
  CHECK(at_mu.pvi[0] == doctest::Approx(0.5));
  const auto huge = probabilize(std::vector<double>{1e9}, fit, 10);
  CHECK(huge.pvi[0] == 1.0);
  const auto two = probabilize(std::vector<double>{0.0, 0.3, 0.5, 0.51, 2.0}, fit, 2);
  for (double p : two.pvi) CHECK((p == 0.5 || p == 1.0));
  CHECK_THROWS_AS(probabilize(std::vector<double>{0.5}, fit, 1), std::invalid_argument);
  const auto cont = probabilize(std::vector<double>{0.5, 0.6}, fit, 10, PviMode::continuous);
  CHECK(cont.pvi[0] == doctest::Approx(0.5));
  CHECK(cont.pvi[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
}

TEST_CASE("pvi stays in range and is monotone in volatility") {
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> dist(30.0);
  std::vector<double> vi(500);
  for (auto& v : vi) v = dist(rng);
  const auto fit = fit_logistic(vi);
  for (PviMode mode : {PviMode::quantized, PviMode::continuous}) {
    const auto pv = probabilize(vi, fit, 10, mode);
    for (std::size_t i = 0; i < vi.size(); ++i) {
      CHECK(pv.pvi[i] > 0.0);
      CHECK(pv.pvi[i] <= 1.0);
      for (std::size_t j = 0; j < vi.size(); j += 37) {
        if (vi[i] <= vi[j]) CHECK(pv.pvi[i] <= pv.pvi[j]);
      }
    }
  }
  const auto q = probabilize(vi, fit, 10);
  std::set<double> distinct(q.pvi.begin(), q.pvi.end());
  CHECK(distinct.size() <= 10);
}

TEST_CASE("equal-probability bins debias logistic volatility") {
  // Windows drawn from a logistic distribution fill the bins evenly.
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const LogisticFit truth{0.02, 0.004};
  const std::size_t W = 2000;
  const std::size_t A = 10;
  std::vector<double> vi(W);
  for (auto& v : vi) {
    double u = unit(rng);
    while (u <= 0.0) u = unit(rng);
    v = truth.mu + truth.s * std::log(u / (1.0 - u));
  }
  const auto pv = probabilize(vi, fit_logistic(vi), A);
  std::vector<std::size_t> occupancy(A, 0);
  for (double p : pv.pvi) ++occupancy[static_cast<std::size_t>(std::lround(p * A)) - 1];
  for (std::size_t b = 0; b < A; ++b) {
    CAPTURE(b);
    CHECK(std::fabs(static_cast<double>(occupancy[b]) - static_cast<double>(W / A)) <= 2.0 * std::sqrt(double(W)));
  }
}

TEST_CASE("pvi mode names round-trip") {
  CHECK(parse_pvi_mode("quantized") == PviMode::quantized);
  CHECK(parse_pvi_mode("continuous") == PviMode::continuous);
  CHECK(to_string(PviMode::continuous) == "continuous");
  CHECK_THROWS(parse_pvi_mode("binned"));
}

}  // TEST_SUITE
