#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "priming/corpus.hpp"
#include "priming/topics.hpp"

namespace priming {

struct TopicCluster {
  std::size_t window = 0;
  // Indices into the topic list, ascending.
  std::vector<std::size_t> topic_ids;
  // Mean of the member topics' document-frequency vectors over the window.
  std::vector<double> centroid;
};

// Mean of the member features' term-frequency vectors over the documents of
// window w (dense, one entry per document of the window).
std::vector<double> topic_doc_vector(const Topic& topic, std::size_t w, const WindowedCorpus& corpus);

// Cosine similarity; 0 when either vector is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Row-major n x n similarity matrix.
std::vector<double> similarity_matrix(const std::vector<std::vector<double>>& vectors);

// Weighted-mean inter-cluster similarity over weighted-mean intra-cluster
// similarity for a labelling with at least two clusters. A singleton
// cluster contributes intra similarity 1 with weight 1. Lower is better.
double clustering_quality(std::span<const double> similarity, std::span<const std::size_t> labels);

struct ClusterOptions {
  std::size_t kmax = 8;
  std::size_t restarts = 5;
  // Inputs with at most this many items try every point as the first centre.
  std::size_t exhaustive_init_limit = 32;
  std::size_t max_iterations = 50;
  double tolerance = 1e-6;
  // The single-cluster partition wins when the best multi-cluster ratio exceeds this.
  double homogeneity_cutoff = 0.8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Clustering {
  // Canonical labels: cluster ids numbered by first appearance.
  std::vector<std::size_t> labels;
  std::size_t k = 1;
  // Quality of the selected multi-cluster partition (also reported when
  // the homogeneity rule chose k = 1); 0 when fewer than two items.
  double quality = 0.0;
};

// Cosine K-means for a fixed k with farthest-point seeding from `first`.
std::vector<std::size_t> kmeans_cosine(const std::vector<std::vector<double>>& vectors, std::size_t k,
                                       std::size_t first, const ClusterOptions& options);

// Runs K-means over k = 2 .. min(n, kmax) with restarts and selects the
// partition with the lowest quality ratio, falling back to one cluster.
Clustering cluster_vectors(const std::vector<std::vector<double>>& vectors, const ClusterOptions& options,
                           std::uint64_t seed);

std::vector<TopicCluster> cluster_window(std::span<const std::size_t> topic_ids, std::size_t w,
                                         std::span<const Topic> topics, const WindowedCorpus& corpus,
                                         const ClusterOptions& options);

// Clusters the bursty topics of every window. Windows run in parallel; each
// window draws its own seed from options.seed and the window index.
std::vector<std::vector<TopicCluster>> cluster_all_windows(std::span<const Topic> topics,
                                                           const WindowedCorpus& corpus,
                                                           const ClusterOptions& options);

// Deterministic 64-bit mixer used to derive per-stage seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace priming
