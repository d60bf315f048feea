#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "priming/clustering.hpp"
#include "priming/topics.hpp"

namespace priming {

using WindowClusters = std::vector<std::vector<TopicCluster>>;

struct ClusterPath {
  std::size_t begin = 0;
  // One cluster index per window, covering begin .. begin + size - 1.
  std::vector<std::size_t> clusters;
  std::vector<double> intensity;
  double score = 0.0;
  // Sign step at which each member cluster was claimed (parallel to
  // `clusters`). A cluster shared by several paths carries the same step in
  // each of them.
  std::vector<std::size_t> claims;

  std::size_t size() const noexcept { return clusters.size(); }
  std::size_t end() const noexcept { return begin + clusters.size() - 1; }
  bool contains(std::size_t window, std::size_t cluster) const noexcept {
    return window >= begin && window <= end() && clusters[window - begin] == cluster;
  }
};

struct PrimingEvent {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::size_t> paths;
  // Union of member cluster indices for each window begin .. end.
  std::vector<std::vector<std::size_t>> clusters_by_window;
  std::vector<double> intensity;
  std::vector<double> pvi;
  double score = 0.0;
};

// Topic-probability-weighted Jaccard coefficient of two clusters.
double cluster_similarity(const TopicCluster& a, const TopicCluster& b, std::span<const Topic> topics);

// Pearson correlation with the priming conventions: 1 for fewer than three
// points, 0 when either series is constant.
double corref(std::span<const double> a, std::span<const double> b);

// ||B|| * ||PVI|| * corref(B, PVI). Throws std::invalid_argument on a length
// mismatch or empty input.
double priming_score(std::span<const double> intensity, std::span<const double> pvi);

// Per-window mean of the topics' bursty rates; windows with no topics get 0.
// topics_by_window[i] lists the topics present at window begin + i.
std::vector<double> event_intensity(const std::vector<std::vector<std::size_t>>& topics_by_window,
                                    std::size_t begin, std::span<const Topic> topics);

// Shared (window, cluster) members over the shorter path's length.
double path_similarity(const ClusterPath& a, const ClusterPath& b);

// Average-linkage agglomerative grouping; merging stops once the best
// linkage similarity falls below tau. Groups list path indices ascending
// and are ordered by their first member.
std::vector<std::vector<std::size_t>> group_paths(std::span<const ClusterPath> paths, double tau);

struct EventInputs {
  const WindowClusters& clusters;
  std::span<const Topic> topics;
  std::span<const double> pvi;
};

// Recomputes intensity and score of a path from its members.
void rescore_path(ClusterPath& path, const EventInputs& inputs);

// Unused flag per (window, cluster) plus a counter of claim steps. Every
// seeding round and every probing step is one claim step.
struct SignTable {
  std::vector<std::vector<bool>> open;
  std::size_t step = 0;
};
SignTable make_sign_table(const WindowClusters& clusters);

struct ProbeOptions {
  double sigma = 0.2;
  // When false, links are gated by cluster similarity alone and each path
  // takes its most similar admissible cluster.
  bool require_score_gain = true;
};

// Extends the seed paths forward, then backward, one window at a time. A
// path takes the unused next-window cluster with similarity above sigma
// that gives the highest score, if that score beats the path's current
// score. Absorbed clusters are marked used once the step completes, so
// several paths may absorb the same cluster in one step.
void probe_event_path(const EventInputs& inputs, std::vector<ClusterPath>& paths,
                      std::span<const std::size_t> seed_paths, std::size_t seed_window, SignTable& sign,
                      const ProbeOptions& options);

enum class SeedOrder { pvi, intensity };

struct EventOptions {
  double sigma = 0.2;
  double tau = 0.5;
  SeedOrder seed_order = SeedOrder::pvi;
  bool require_score_gain = true;
};

struct EventDetection {
  std::vector<ClusterPath> paths;
  std::vector<PrimingEvent> events;
  std::vector<std::size_t> window_order;
};

PrimingEvent build_event(std::span<const ClusterPath> paths, std::span<const std::size_t> members,
                         const EventInputs& inputs);

// Seeds and probes paths window by window, groups them, and returns events
// ranked by score (highest first).
EventDetection detect_events(const EventInputs& inputs, const EventOptions& options);

}  // namespace priming
