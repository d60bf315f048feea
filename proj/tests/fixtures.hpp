#pragma once

// Shared builders and brute-force oracles for the test suites. Oracles are
// written from the definitions, without calling the code under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "priming/burst.hpp"
#include "priming/corpus.hpp"
#include "priming/dates.hpp"
#include "priming/synth.hpp"

namespace fixtures {

using priming::Date;

inline Date day(int offset) {
  return *priming::parse_date("2020-01-01") + std::chrono::days{offset};
}

// Daily index with the given number of windows and constant value.
inline priming::IndexSeries daily_index(std::size_t windows, double value = 100.0) {
  std::vector<Date> starts;
  std::vector<double> values;
  for (std::size_t w = 0; w < windows; ++w) {
    starts.push_back(day(static_cast<int>(w)));
    values.push_back(value);
  }
  return priming::make_index(starts, values);
}

inline priming::Document doc(std::string id, int day_offset, std::vector<std::string> tokens) {
  priming::Document d;
  d.id = std::move(id);
  d.date = day(day_offset);
  d.tokens = std::move(tokens);
  d.normalized = true;
  return d;
}

// Corpus whose documents are described as feature sets: docs[i] holds the
// tokens of document i, all placed in window 0 of a two-window index.
inline priming::WindowedCorpus corpus_from_token_sets(const std::vector<std::vector<std::string>>& docs,
                                                      std::size_t windows = 2) {
  priming::DocumentSet set;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "d%05zu", i);
    set.push_back(doc(id, 0, docs[i]));
  }
  return priming::partition_windows(std::move(set), daily_index(windows));
}

// ---------------------------------------------------------------------------
// The worker / union / wage instance. Document sets realise
// doc(worker, union) = 31/100, doc(worker, wage) = 35/100, doc(union, wage) = 0;
// burst series realise cosines 0.25 and 0.1 (union and wage orthogonal);
// with pvi = 1 everywhere the influence weights are 10, 20 and 64 so the
// pair influence sums are 30 and 74.
struct WorkerInstance {
  priming::WindowedCorpus corpus;
  priming::BurstMatrix bursts;
  std::vector<double> pvi;
};

inline WorkerInstance worker_instance() {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 31; ++i) docs.push_back({"worker", "union"});
  for (int i = 0; i < 35; ++i) docs.push_back({"worker", "wage"});
  for (int i = 0; i < 34; ++i) docs.push_back({"union"});
  for (int i = 0; i < 34; ++i) docs.push_back({"wage"});

  // Windows: 0..4 shared worker/union, 5..9 shared worker/wage,
  // 10..29 union-only, 30..93 wage-only.
  const std::size_t W = 94;
  const double a = std::sqrt(12.5 / 21.875);
  const double b = std::sqrt(6.4 / 24.5);
  std::vector<double> worker(W, 0.0);
  std::vector<double> unions(W, 0.0);
  std::vector<double> wage(W, 0.0);
  for (std::size_t w = 0; w < 10; ++w) worker[w] = 1.0;
  for (std::size_t w = 0; w < 5; ++w) unions[w] = a;
  for (std::size_t w = 5; w < 10; ++w) wage[w] = b;
  for (std::size_t w = 10; w < 30; ++w) unions[w] = 1.0;
  for (std::size_t w = 30; w < 94; ++w) wage[w] = 1.0;

  WorkerInstance inst{corpus_from_token_sets(docs),
                      priming::BurstMatrix::from_probabilities({"union", "wage", "worker"},
                                                               {unions, wage, worker}, 0.9),
                      std::vector<double>(W, 1.0)};
  return inst;
}

// ---------------------------------------------------------------------------
// Oracles.

// Direct binomial summation in extended precision.
inline long double binomial_pmf(std::uint64_t i, std::uint64_t N, long double p) {
  if (p == 0.0L) return i == 0 ? 1.0L : 0.0L;
  if (p == 1.0L) return i == N ? 1.0L : 0.0L;
  const long double log_c = std::lgamma(static_cast<long double>(N) + 1) -
                            std::lgamma(static_cast<long double>(i) + 1) -
                            std::lgamma(static_cast<long double>(N - i) + 1);
  return std::exp(log_c + static_cast<long double>(i) * std::log(p) +
                  static_cast<long double>(N - i) * std::log1p(-p));
}

inline long double direct_upper_tail(std::uint64_t n, std::uint64_t N, long double p) {
  long double sum = 0.0L;
  for (std::uint64_t i = n; i <= N; ++i) sum += binomial_pmf(i, N, p);
  return sum;
}

inline long double direct_lower_sum(std::uint64_t n, std::uint64_t N, long double p) {
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) sum += binomial_pmf(i, N, p);
  return sum;
}

inline double oracle_jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::size_t inter = 0;
  for (auto x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline double oracle_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(std::fabs(dot) / std::sqrt(na * nb));
}

inline double oracle_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n < 3) return 1.0;
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

inline double oracle_priming_score(const std::vector<double>& b, const std::vector<double>& p) {
  long double nb = 0, np = 0;
  for (double x : b) nb += static_cast<long double>(x) * x;
  for (double x : p) np += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(nb) * std::sqrt(np)) * oracle_pearson(b, p);
}

// Every set partition of {0 .. n-1}, as block label vectors (restricted
// growth strings).
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> labels(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      visit(labels);
      return;
    }
    for (std::size_t b = 0; b <= blocks && b < n; ++b) {
      labels[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    visit(labels);
    return;
  }
  labels[0] = 0;
  rec(1, 1);
}

// Acceptance fixture: two disjoint plants over 50 windows.
inline priming::SynthConfig planted_config(int volatility_shift = 0) {
  priming::SynthConfig config;
  config.windows = 50;
  config.vocab = 200;
  config.seed = 1;
  config.plant_peak_count = 10;
  config.volatility_lead = 1;
  config.shape = "shock";
  priming::PlantSpec first;
  first.begin = 10;
  first.end = 18;
  first.volatility_shift = volatility_shift;
  priming::PlantSpec second;
  second.begin = 32;
  second.end = 40;
  second.volatility_shift = volatility_shift;
  config.plants = {first, second};
  return config;
}

}  // namespace fixtures
