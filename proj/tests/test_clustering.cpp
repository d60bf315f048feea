#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "priming/clustering.hpp"

using namespace priming;

TEST_SUITE("clustering") {

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == doctest::Approx(1.0));
  CHECK(cosine_similarity(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 1, 0}, std::vector<double>{1, 0, 0}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
}

TEST_CASE("topic document vectors") {
  const auto index = fixtures::daily_index(3);
  DocumentSet docs{fixtures::doc("a", 0, {"x", "x"}), fixtures::doc("b", 0, {"y", "y"}), fixtures::doc("c", 1, {"x"})};
  const auto corpus = partition_windows(docs, index);
  Topic single;
  single.features = {"x"};
  CHECK(topic_doc_vector(single, 0, corpus) == std::vector<double>{2, 0});
  Topic pair;
  pair.features = {"x", "y"};
  CHECK(topic_doc_vector(pair, 0, corpus) == std::vector<double>{1, 1});
  CHECK(topic_doc_vector(pair, 2, corpus).empty());
}

TEST_CASE("clustering quality") {
  std::vector<std::vector<double>> v{{1, 0}, {1, 0}, {0, 1}, {0, 1}};
  const auto sim = similarity_matrix(v);
  CHECK(clustering_quality(sim, std::vector<std::size_t>{0, 0, 1, 1}) == 0.0);
  std::vector<std::vector<double>> same{{1, 1}, {1, 1}, {1, 1}};
  CHECK(clustering_quality(similarity_matrix(same), std::vector<std::size_t>{0, 0, 1}) == doctest::Approx(1.0));
  CHECK_THROWS(clustering_quality(sim, std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST_CASE("cluster selection examples") {
  ClusterOptions options;
  const auto one = cluster_vectors({{1, 2}}, options, 1);
  CHECK(one.k == 1);
  CHECK(one.labels == std::vector<std::size_t>{0});

  const auto pairs = cluster_vectors({{1, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 1}}, options, 1);
  CHECK(pairs.k == 2);
  CHECK(pairs.labels == std::vector<std::size_t>{0, 1, 0, 1});

  const auto same = cluster_vectors({{1, 1}, {1, 1}, {1, 1}}, options, 1);
  CHECK(same.k == 1);
}

TEST_CASE("k-means never returns empty clusters") {
  std::vector<std::vector<double>> v{{1, 0}, {1, 0}, {1, 0}, {1, 0.01}, {0, 1}};
  ClusterOptions options;
  for (std::size_t k = 1; k <= v.size(); ++k) {
    for (std::size_t first = 0; first < v.size(); ++first) {
      const auto labels = kmeans_cosine(v, k, first, options);
      std::set<std::size_t> used(labels.begin(), labels.end());
      CHECK(used.size() == k);
    }
  }
}

TEST_CASE("selection matches exhaustive enumeration on small instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const auto outcome = oracles::check_clustering(seed, n);
    CAPTURE(seed);
    CAPTURE(outcome.note);
    CHECK(outcome.ok);
    CHECK(outcome.max_diff <= 1e-9);
  }
}

TEST_CASE("window clusters partition the window's bursty topics") {
  const auto index = fixtures::daily_index(2);
  DocumentSet docs;
  for (int i = 0; i < 8; ++i) {
    std::vector<std::string> tokens = (i % 2 == 0) ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{"c", "d"};
    docs.push_back(fixtures::doc("d" + std::to_string(i), 0, tokens));
  }
  const auto corpus = partition_windows(docs, index);
  std::vector<Topic> topics;
  for (const char* f : {"a", "b", "c", "d"}) {
    Topic t;
    t.features = {f};
    t.burst_series = {1.0, 0.0};
    t.bursty_windows = {0};
    topics.push_back(t);
  }
  ClusterOptions options;
  for (unsigned threads : {1u, 4u, 8u}) {
    options.threads = threads;
    const auto all = cluster_all_windows(topics, corpus, options);
    REQUIRE(all.size() == 2);
    CHECK(all[1].empty());
    std::multiset<std::size_t> members;
    for (const auto& c : all[0]) members.insert(c.topic_ids.begin(), c.topic_ids.end());
    CHECK(members == std::multiset<std::size_t>{0, 1, 2, 3});
    REQUIRE(all[0].size() == 2);
    CHECK(all[0][0].topic_ids == std::vector<std::size_t>{0, 1});
    CHECK(all[0][1].topic_ids == std::vector<std::size_t>{2, 3});
  }
}

TEST_CASE("seed splitting is deterministic and spreads streams") {
  CHECK(split_seed(1, 2) == split_seed(1, 2));
  CHECK(split_seed(1, 2) != split_seed(1, 3));
  CHECK(split_seed(1, 2) != split_seed(2, 2));
}

}  // TEST_SUITE
