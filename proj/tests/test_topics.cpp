#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "priming/topics.hpp"

using namespace priming;

namespace {

// Objective computed directly from document sets, burst rows and pvi.
struct OracleInstance {
  std::vector<std::set<std::size_t>> docs;
  std::vector<std::vector<double>> series;
  std::vector<double> pvi;
  double threshold = 0.9;

  double weight(std::size_t f) const {
    double sum = 0.0;
    for (std::size_t w = 0; w < pvi.size(); ++w) {
      if (series[f][w] >= threshold) sum += pvi[w];
    }
    return sum;
  }

  TopicScore score(const std::vector<std::size_t>& set, bool influence = true) const {
    TopicScore s;
    if (set.size() == 1) {
      s.doc_component = s.temporal_component = 1.0;
    } else {
      double d = 0.0;
      double t = 0.0;
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
          if (i == j) continue;
          d += fixtures::oracle_jaccard(docs[set[i]], docs[set[j]]);
          t += fixtures::oracle_cosine(series[set[i]], series[set[j]]);
          ++pairs;
        }
      }
      s.doc_component = d / static_cast<double>(pairs);
      s.temporal_component = t / static_cast<double>(pairs);
    }
    s.influence_component = 1.0;
    if (influence) {
      s.influence_component = 0.0;
      for (auto f : set) s.influence_component += weight(f);
    }
    s.probability = s.doc_component * s.temporal_component * s.influence_component;
    return s;
  }
};

struct Built {
  WindowedCorpus corpus;
  BurstMatrix bursts;
  std::vector<std::string> names;
};

Built build(const OracleInstance& inst) {
  const std::size_t F = inst.series.size();
  std::size_t ndocs = 0;
  for (const auto& d : inst.docs) {
    if (!d.empty()) ndocs = std::max(ndocs, *d.rbegin() + 1);
  }
  std::vector<std::string> names;
  for (std::size_t f = 0; f < F; ++f) names.push_back("f" + std::to_string(f));
  std::vector<std::vector<std::string>> token_sets(ndocs);
  for (std::size_t f = 0; f < F; ++f) {
    for (auto d : inst.docs[f]) token_sets[d].push_back(names[f]);
  }
  for (auto& t : token_sets) t.push_back("filler");
  return {fixtures::corpus_from_token_sets(token_sets), BurstMatrix::from_probabilities(names, inst.series, inst.threshold),
          names};
}

// Random instance with two planted groups: members share documents and a
// burst pattern.
OracleInstance random_instance(std::mt19937_64& rng, std::size_t F) {
  OracleInstance inst;
  const std::size_t W = 12;
  const std::size_t D = 40;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  inst.pvi.resize(W);
  for (auto& p : inst.pvi) p = 0.05 + 0.95 * unit(rng);
  std::vector<double> pattern[2];
  for (auto& pat : pattern) {
    pat.resize(W);
    for (auto& x : pat) x = unit(rng) < 0.35 ? 0.9 + 0.1 * unit(rng) : 0.5 * unit(rng);
  }
  for (std::size_t f = 0; f < F; ++f) {
    const std::size_t g = f % 2;
    std::set<std::size_t> docs;
    for (std::size_t d = 0; d < D; ++d) {
      const bool home = (d % 2) == g;
      if (unit(rng) < (home ? 0.55 : 0.08)) docs.insert(d);
    }
    if (docs.empty()) docs.insert(g);
    inst.docs.push_back(docs);
    std::vector<double> s(W);
    for (std::size_t w = 0; w < W; ++w) s[w] = std::clamp(pattern[g][w] + 0.08 * (unit(rng) - 0.5), 0.0, 1.0);
    s[f % W] = 0.95;  // every feature has a bursty window
    inst.series.push_back(s);
  }
  return inst;
}

std::vector<std::size_t> ids_of(const Topic& t) { return t.feature_ids; }

std::vector<std::string> topic_containing(const std::vector<Topic>& topics, const std::string& feature) {
  for (const Topic& t : topics) {
    if (std::find(t.features.begin(), t.features.end(), feature) != t.features.end()) return t.features;
  }
  return {};
}

}  // namespace

TEST_SUITE("topics") {

TEST_CASE("document similarity") {
  const auto corpus = fixtures::corpus_from_token_sets({{"a", "b"}, {"a", "b"}, {"c"}, {"a", "d"}, {"d"}, {"e"}, {"d", "e"}});
  CHECK(doc_similarity(corpus, "a", "b") == doctest::Approx(2.0 / 3.0));
  CHECK(doc_similarity(corpus, "b", "a") == doc_similarity(corpus, "a", "b"));
  CHECK(doc_similarity(corpus, "a", "c") == 0.0);
  // a in {0,1,3}, d in {3,4,6}: |intersection| 1, |union| 5.
  CHECK(doc_similarity(corpus, "a", "d") == doctest::Approx(0.2));
  // d in {3,4,6}, e in {5,6}: 1 of 4.
  CHECK(doc_similarity(corpus, "d", "e") == doctest::Approx(0.25));
  CHECK_THROWS(doc_similarity(corpus, "a", "zzz"));
}

TEST_CASE("temporal similarity") {
  const auto bursts = BurstMatrix::from_probabilities({"x", "y", "z", "zero"},
                                                      {{1, 0}, {0, 1}, {1, 1}, {0, 0}}, 0.9);
  CHECK(temporal_similarity(bursts, "x", "x") == doctest::Approx(1.0));
  CHECK(temporal_similarity(bursts, "x", "y") == 0.0);
  CHECK(temporal_similarity(bursts, "x", "z") == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(temporal_similarity(bursts, "z", "x") == temporal_similarity(bursts, "x", "z"));
  CHECK(temporal_similarity(bursts, "x", "zero") == 0.0);
  CHECK_THROWS(temporal_similarity(bursts, "x", "nope"));
}

TEST_CASE("influence weight") {
  std::vector<double> row(6, 0.0);
  row[3] = row[5] = 0.95;
  const auto bursts = BurstMatrix::from_probabilities({"f", "g", "h"}, {row, std::vector<double>(6, 0.1),
                                                                       std::vector<double>(6, 1.0)}, 0.9);
  std::vector<double> pvi{0.1, 0.1, 0.1, 0.2, 0.1, 0.7};
  CHECK(influence_weight(bursts, 0, pvi) == doctest::Approx(0.9));
  CHECK(influence_weight(bursts, 1, pvi) == 0.0);
  CHECK(influence_weight(bursts, 2, std::vector<double>(6, 1.0)) == doctest::Approx(6.0));
}

TEST_CASE("worker instance objective values") {
  const auto inst = fixtures::worker_instance();
  const TopicSpace space(inst.corpus, inst.bursts, inst.pvi);
  const std::vector<std::string> wu{"union", "worker"};
  const std::vector<std::string> ww{"wage", "worker"};
  CHECK(std::fabs(space.objective(wu, false).probability - 0.0775) <= 1e-9);
  CHECK(std::fabs(space.objective(ww, false).probability - 0.035) <= 1e-9);
  CHECK(std::fabs(space.objective(wu, true).probability - 2.325) <= 1e-9);
  CHECK(std::fabs(space.objective(ww, true).probability - 2.59) <= 1e-9);
  const std::vector<std::string> single{"wage"};
  const auto s = space.objective(single);
  CHECK(s.doc_component == 1.0);
  CHECK(s.temporal_component == 1.0);
  CHECK(s.influence_component == doctest::Approx(64.0));
  CHECK_THROWS(space.objective(std::vector<std::string>{}));
}

TEST_CASE("influence flips the worker grouping") {
  const auto inst = fixtures::worker_instance();
  const TopicSpace space(inst.corpus, inst.bursts, inst.pvi);
  TopicOptions main;
  CHECK(topic_containing(extract_topics(space, main), "worker") == std::vector<std::string>{"wage", "worker"});
  TopicOptions baseline;
  baseline.use_influence = false;
  CHECK(topic_containing(extract_topics(space, baseline), "worker") ==
        std::vector<std::string>{"union", "worker"});
}

TEST_CASE("topic burst series") {
  const auto bursts = BurstMatrix::from_probabilities({"a", "b"}, {{1, 0}, {0, 1}}, 0.9);
  const std::vector<std::size_t> a{0};
  const std::vector<std::size_t> ab{0, 1};
  CHECK(topic_burst_series(a, bursts, 0.9).first == std::vector<double>{1, 0});
  const auto [series, bursty] = topic_burst_series(ab, bursts, 0.9);
  CHECK(series == std::vector<double>{0.5, 0.5});
  CHECK(bursty.empty());
  CHECK(topic_burst_series(ab, bursts, 1.0).second.empty());
}

TEST_CASE("extracted topics match the oracle objective and invariants") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = random_instance(rng, 6);
    const auto built = build(inst);
    const TopicSpace space(built.corpus, built.bursts, inst.pvi);
    const auto topics = extract_topics(space);
    std::set<std::size_t> seen;
    double prev = std::numeric_limits<double>::infinity();
    for (const Topic& t : topics) {
      const auto expect = inst.score(ids_of(t));
      CHECK(std::fabs(t.doc_component - expect.doc_component) <= 1e-9);
      CHECK(std::fabs(t.temporal_component - expect.temporal_component) <= 1e-9);
      CHECK(std::fabs(t.influence_component - expect.influence_component) <= 1e-9);
      CHECK(std::fabs(t.probability - expect.probability) <= 1e-9);
      CHECK(t.doc_component >= 0.0);
      CHECK(t.doc_component <= 1.0 + 1e-12);
      CHECK(t.temporal_component <= 1.0 + 1e-12);
      CHECK(t.probability <= prev);
      prev = t.probability;
      CHECK(t.features.size() <= 8);
      for (auto f : t.feature_ids) CHECK(seen.insert(f).second);
      // Monotone aggregation of burst series.
      for (std::size_t w = 0; w < inst.pvi.size(); ++w) {
        double lo = 1.0;
        double hi = 0.0;
        for (auto f : t.feature_ids) {
          lo = std::min(lo, inst.series[f][w]);
          hi = std::max(hi, inst.series[f][w]);
        }
        CHECK(t.burst_series[w] >= lo - 1e-12);
        CHECK(t.burst_series[w] <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("grouping is invariant to scaling pvi") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_instance(rng, 6);
    const auto built = build(inst);
    const TopicSpace space(built.corpus, built.bursts, inst.pvi);
    auto scaled = inst.pvi;
    for (auto& p : scaled) p *= 0.37;
    const TopicSpace scaled_space(built.corpus, built.bursts, scaled);
    const auto a = extract_topics(space);
    const auto b = extract_topics(scaled_space);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].features == b[i].features);
  }
}

TEST_CASE("baseline mode reduces to text coherence") {
  std::mt19937_64 rng(8);
  const auto inst = random_instance(rng, 5);
  const auto built = build(inst);
  const TopicSpace space(built.corpus, built.bursts, inst.pvi);
  TopicOptions options;
  options.use_influence = false;
  for (const Topic& t : extract_topics(space, options)) {
    CHECK(t.influence_component == 1.0);
    CHECK(std::fabs(t.probability - t.doc_component * t.temporal_component) <= 1e-15);
  }
}

TEST_CASE("extraction is thread-count invariant") {
  std::mt19937_64 rng(123);
  const auto inst = random_instance(rng, 6);
  const auto built = build(inst);
  const TopicSpace space(built.corpus, built.bursts, inst.pvi);
  TopicOptions one;
  const auto a = extract_topics(space, one);
  for (unsigned threads : {4u, 8u}) {
    TopicOptions many;
    many.threads = threads;
    const auto b = extract_topics(space, many);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].features == b[i].features);
      CHECK(a[i].probability == b[i].probability);
    }
  }
}

TEST_CASE("no bursty features gives no topics") {
  const auto corpus = fixtures::corpus_from_token_sets({{"a"}, {"b"}});
  const auto bursts = BurstMatrix::from_probabilities({"a", "b"}, {{0.1, 0.2}, {0.3, 0.1}}, 0.9);
  const std::vector<double> pvi{0.5, 0.5};
  CHECK(extract_topics(TopicSpace(corpus, bursts, pvi)).empty());
}

}  // TEST_SUITE
