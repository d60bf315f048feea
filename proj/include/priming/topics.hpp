#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "priming/burst.hpp"
#include "priming/corpus.hpp"

namespace priming {

struct Topic {
  // Sorted feature names and their rows in the burst matrix (same order).
  std::vector<std::string> features;
  std::vector<std::size_t> feature_ids;
  double doc_component = 0.0;
  double temporal_component = 0.0;
  double influence_component = 0.0;
  double probability = 0.0;
  std::vector<double> burst_series;
  std::vector<std::size_t> bursty_windows;
};

// Jaccard coefficient of the document sets of two corpus features.
double doc_similarity(const WindowedCorpus& corpus, std::size_t fi, std::size_t fj);
double doc_similarity(const WindowedCorpus& corpus, std::string_view fi, std::string_view fj);

// Cosine of two burst probability series; 0 when either is all-zero.
double temporal_similarity(const BurstMatrix& bursts, std::size_t fi, std::size_t fj);
double temporal_similarity(const BurstMatrix& bursts, std::string_view fi, std::string_view fj);

// Unnormalized influence of a feature: sum of pvi over its bursty windows.
double influence_weight(const BurstMatrix& bursts, std::size_t f, std::span<const double> pvi);

struct TopicScore {
  double doc_component = 0.0;
  double temporal_component = 0.0;
  double influence_component = 0.0;
  double probability = 0.0;
};

// Bundles the inputs of topic extraction and resolves burst-matrix rows to
// corpus features by name.
class TopicSpace {
 public:
  TopicSpace(const WindowedCorpus& corpus, const BurstMatrix& bursts, std::span<const double> pvi);

  const WindowedCorpus& corpus() const noexcept { return corpus_; }
  const BurstMatrix& bursts() const noexcept { return bursts_; }
  std::span<const double> pvi() const noexcept { return pvi_; }

  std::size_t burst_id(std::string_view feature) const;
  double doc_similarity(std::size_t fi, std::size_t fj) const;
  double temporal_similarity(std::size_t fi, std::size_t fj) const;
  double influence_weight(std::size_t f) const { return weights_.at(f); }

  // Objective components for a feature set given as burst-matrix rows.
  // With use_influence = false the influence component is fixed at 1.
  TopicScore objective(std::span<const std::size_t> features, bool use_influence = true) const;
  TopicScore objective(std::span<const std::string> features, bool use_influence = true) const;

 private:
  const WindowedCorpus& corpus_;
  const BurstMatrix& bursts_;
  std::span<const double> pvi_;
  std::vector<std::size_t> corpus_ids_;
  std::vector<double> norms_;
  std::vector<double> weights_;
};

TopicScore topic_objective(std::span<const std::string> features, const WindowedCorpus& corpus,
                           const BurstMatrix& bursts, std::span<const double> pvi, bool use_influence = true);

struct TopicOptions {
  std::size_t size_cap = 8;
  // Minimum doc_component * temporal_component for the seed's first partner.
  double min_pair_coherence = 0.01;
  bool use_influence = true;
  double burst_threshold = 0.9;
  unsigned threads = 1;
};

// Greedy extraction. Candidates are features with bursty windows, ranked by
// influence weight (ties by name). Each topic is seeded by the best-ranked
// unassigned candidate and paired with the unassigned candidate giving the
// highest probability, provided the pair clears min_pair_coherence; it then
// grows while a single addition strictly increases the probability. Topics
// are disjoint and returned by probability, highest first.
std::vector<Topic> extract_topics(const TopicSpace& space, const TopicOptions& options = {});

// Mean of member burst series and the windows at or above `threshold`.
std::pair<std::vector<double>, std::vector<std::size_t>> topic_burst_series(
    std::span<const std::size_t> feature_ids, const BurstMatrix& bursts, double threshold);

}  // namespace priming
