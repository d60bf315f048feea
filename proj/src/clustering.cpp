#include "priming/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "priming/parallel.hpp"

namespace priming {

namespace {

constexpr std::uint64_t kClusterStream = 0x636c7573746572ULL;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> normalized(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (double& x : out) x /= n;
  }
  return out;
}

std::vector<std::size_t> canonical(std::span<const std::size_t> labels) {
  std::vector<std::size_t> remap(labels.size() + 1, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> out(labels.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& slot = remap[labels[i]];
    if (slot == std::numeric_limits<std::size_t>::max()) slot = next++;
    out[i] = slot;
  }
  return out;
}

std::size_t label_count(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (std::size_t l : labels) k = std::max(k, l + 1);
  return k;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> topic_doc_vector(const Topic& topic, std::size_t w, const WindowedCorpus& corpus) {
  std::vector<double> v(corpus.window_size(w), 0.0);
  if (topic.features.empty() || v.empty()) return v;
  for (const auto& name : topic.features) {
    const auto f = corpus.find_feature(name);
    if (!f) continue;
    for (const TermFrequency& tf : corpus.tf_vector(*f, w)) v[tf.doc] += static_cast<double>(tf.count);
  }
  const double n = static_cast<double>(topic.features.size());
  for (double& x : v) x /= n;
  return v;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: length mismatch");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

std::vector<double> similarity_matrix(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sim[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      sim[i * n + j] = sim[j * n + i] = cosine_similarity(vectors[i], vectors[j]);
    }
  }
  return sim;
}

double clustering_quality(std::span<const double> similarity, std::span<const std::size_t> labels) {
  const std::size_t n = labels.size();
  if (similarity.size() != n * n) throw std::invalid_argument("clustering_quality: matrix size mismatch");
  const std::size_t k = label_count(labels);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  const auto used = static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
  if (used < 2) throw std::invalid_argument("clustering_quality: need at least two clusters");

  double inter = 0.0;
  double inter_w = 0.0;
  double intra = 0.0;
  double intra_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (labels[i] == labels[j]) {
        intra += similarity[i * n + j];
        intra_w += 1.0;
      } else {
        inter += similarity[i * n + j];
        inter_w += 1.0;
      }
    }
  }
  for (std::size_t s : sizes) {
    if (s == 1) {
      intra += 1.0;
      intra_w += 1.0;
    }
  }
  const double intra_mean = intra / intra_w;
  const double inter_mean = inter / inter_w;
  if (!(intra_mean > 0.0)) return std::numeric_limits<double>::infinity();
  return inter_mean / intra_mean;
}

std::vector<std::size_t> kmeans_cosine(const std::vector<std::vector<double>>& vectors, std::size_t k,
                                       std::size_t first, const ClusterOptions& options) {
  const std::size_t n = vectors.size();
  if (k == 0 || k > n) throw std::invalid_argument("kmeans_cosine: k out of range");
  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (const auto& v : vectors) points.push_back(normalized(v));

  // Farthest-point seeding under cosine distance.
  std::vector<std::vector<double>> centroids{points[first % n]};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    std::size_t pick = 0;
    double pick_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], 1.0 - dot(points[i], centroids.back()));
      if (nearest[i] > pick_d) {
        pick_d = nearest[i];
        pick = i;
      }
    }
    centroids.push_back(points[pick]);
  }

  std::vector<std::size_t> labels(n, 0);
  const std::size_t dims = n > 0 ? points.front().size() : 0;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    std::vector<double> own_sim(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_s = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double s = dot(points[i], centroids[c]);
        if (s > best_s) {
          best_s = s;
          best = c;
        }
      }
      labels[i] = best;
      own_sim[i] = best_s;
    }

    // Empty-cluster repair: move the worst-fitting point of a cluster that
    // can spare one.
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t l : labels) ++sizes[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t worst = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        if (worst == n || own_sim[i] < own_sim[worst]) worst = i;
      }
      if (worst == n) break;
      --sizes[labels[worst]];
      labels[worst] = c;
      ++sizes[c];
      own_sim[worst] = 1.0;
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> mean(dims, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != c) continue;
        for (std::size_t d = 0; d < dims; ++d) mean[d] += points[i][d];
      }
      mean = normalized(mean);
      double delta = 0.0;
      for (std::size_t d = 0; d < dims; ++d) delta += (mean[d] - centroids[c][d]) * (mean[d] - centroids[c][d]);
      shift = std::max(shift, std::sqrt(delta));
      centroids[c] = std::move(mean);
    }
    if (shift < options.tolerance) break;
  }
  return canonical(labels);
}

Clustering cluster_vectors(const std::vector<std::vector<double>>& vectors, const ClusterOptions& options,
                           std::uint64_t seed) {
  const std::size_t n = vectors.size();
  Clustering result;
  result.labels.assign(n, 0);
  if (n < 2) return result;

  const auto sim = similarity_matrix(vectors);
  std::mt19937_64 rng(seed);
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  // Farthest-point seeding is fully determined by its first centre, so each
  // restart uses a distinct first point; small inputs try every point.
  std::vector<std::size_t> firsts(n);
  for (std::size_t i = 0; i < n; ++i) firsts[i] = i;
  if (n > std::max(restarts, options.exhaustive_init_limit)) {
    std::shuffle(firsts.begin(), firsts.end(), rng);
    firsts.resize(restarts);
  }

  const std::size_t kmax = std::min(n, std::max<std::size_t>(2, options.kmax));
  double best_q = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_labels;
  std::size_t best_k = 1;
  for (std::size_t k = 2; k <= kmax; ++k) {
    for (std::size_t first : firsts) {
      auto labels = kmeans_cosine(vectors, k, first, options);
      if (label_count(labels) < 2) continue;
      const double q = clustering_quality(sim, labels);
      if (best_labels.empty() || q < best_q) {
        best_q = q;
        best_labels = std::move(labels);
        best_k = label_count(best_labels);
      }
    }
  }
  result.quality = best_q;
  if (best_labels.empty() || !(best_q <= options.homogeneity_cutoff)) return result;
  result.labels = std::move(best_labels);
  result.k = best_k;
  return result;
}

std::vector<TopicCluster> cluster_window(std::span<const std::size_t> topic_ids, std::size_t w,
                                         std::span<const Topic> topics, const WindowedCorpus& corpus,
                                         const ClusterOptions& options) {
  std::vector<TopicCluster> clusters;
  if (topic_ids.empty()) return clusters;
  std::vector<std::size_t> ids(topic_ids.begin(), topic_ids.end());
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<double>> vectors;
  vectors.reserve(ids.size());
  for (std::size_t t : ids) vectors.push_back(topic_doc_vector(topics[t], w, corpus));

  const Clustering c = cluster_vectors(vectors, options, split_seed(options.seed ^ kClusterStream, w));
  clusters.resize(c.k);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    TopicCluster& cluster = clusters[c.labels[i]];
    cluster.window = w;
    cluster.topic_ids.push_back(ids[i]);
    if (cluster.centroid.empty()) cluster.centroid.assign(vectors[i].size(), 0.0);
    for (std::size_t d = 0; d < vectors[i].size(); ++d) cluster.centroid[d] += vectors[i][d];
  }
  for (TopicCluster& cluster : clusters) {
    const double m = static_cast<double>(cluster.topic_ids.size());
    for (double& x : cluster.centroid) x /= m;
  }
  return clusters;
}

std::vector<std::vector<TopicCluster>> cluster_all_windows(std::span<const Topic> topics,
                                                           const WindowedCorpus& corpus,
                                                           const ClusterOptions& options) {
  const std::size_t W = corpus.window_count();
  std::vector<std::vector<std::size_t>> bursty(W);
  for (std::size_t t = 0; t < topics.size(); ++t) {
    for (std::size_t w : topics[t].bursty_windows) {
      if (w < W) bursty[w].push_back(t);
    }
  }
  std::vector<std::vector<TopicCluster>> out(W);
  parallel_for(W, options.threads,
               [&](std::size_t w) { out[w] = cluster_window(bursty[w], w, topics, corpus, options); });
  return out;
}

}  // namespace priming
