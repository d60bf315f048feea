#include "priming/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "priming/parallel.hpp"

namespace priming {

namespace {

std::size_t intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double jaccard(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(std::span<const double> a, std::span<const double> b, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return std::abs(dot(a, b)) / (norm_a * norm_b);
}

std::size_t require_feature(const WindowedCorpus& corpus, std::string_view name) {
  const auto f = corpus.find_feature(name);
  if (!f) throw std::out_of_range(fmt::format("unknown feature \"{}\"", name));
  return *f;
}

std::size_t require_feature(const BurstMatrix& bursts, std::string_view name) {
  const auto f = bursts.find_feature(name);
  if (!f) throw std::out_of_range(fmt::format("unknown feature \"{}\"", name));
  return *f;
}

}  // namespace

double doc_similarity(const WindowedCorpus& corpus, std::size_t fi, std::size_t fj) {
  return jaccard(corpus.doc_set(fi), corpus.doc_set(fj));
}

double doc_similarity(const WindowedCorpus& corpus, std::string_view fi, std::string_view fj) {
  return doc_similarity(corpus, require_feature(corpus, fi), require_feature(corpus, fj));
}

double temporal_similarity(const BurstMatrix& bursts, std::size_t fi, std::size_t fj) {
  const auto a = bursts.series(fi);
  const auto b = bursts.series(fj);
  return cosine(a, b, std::sqrt(dot(a, a)), std::sqrt(dot(b, b)));
}

double temporal_similarity(const BurstMatrix& bursts, std::string_view fi, std::string_view fj) {
  return temporal_similarity(bursts, require_feature(bursts, fi), require_feature(bursts, fj));
}

double influence_weight(const BurstMatrix& bursts, std::size_t f, std::span<const double> pvi) {
  if (pvi.size() != bursts.window_count()) throw std::invalid_argument("influence_weight: pvi length mismatch");
  double sum = 0.0;
  for (std::size_t w : bursts.bursty_windows(f)) sum += pvi[w];
  return sum;
}

TopicSpace::TopicSpace(const WindowedCorpus& corpus, const BurstMatrix& bursts, std::span<const double> pvi)
    : corpus_(corpus), bursts_(bursts), pvi_(pvi) {
  if (pvi.size() != bursts.window_count()) throw std::invalid_argument("topics: pvi length mismatch");
  const std::size_t F = bursts.feature_count();
  corpus_ids_.resize(F);
  norms_.resize(F);
  weights_.resize(F);
  for (std::size_t f = 0; f < F; ++f) {
    corpus_ids_[f] = require_feature(corpus, bursts.features()[f]);
    const auto s = bursts.series(f);
    norms_[f] = std::sqrt(dot(s, s));
    weights_[f] = priming::influence_weight(bursts, f, pvi);
  }
}

std::size_t TopicSpace::burst_id(std::string_view feature) const { return require_feature(bursts_, feature); }

double TopicSpace::doc_similarity(std::size_t fi, std::size_t fj) const {
  return jaccard(corpus_.doc_set(corpus_ids_[fi]), corpus_.doc_set(corpus_ids_[fj]));
}

double TopicSpace::temporal_similarity(std::size_t fi, std::size_t fj) const {
  return cosine(bursts_.series(fi), bursts_.series(fj), norms_[fi], norms_[fj]);
}

TopicScore TopicSpace::objective(std::span<const std::size_t> features, bool use_influence) const {
  if (features.empty()) throw std::invalid_argument("topic_objective: empty feature set");
  TopicScore score;
  if (features.size() == 1) {
    score.doc_component = 1.0;
    score.temporal_component = 1.0;
  } else {
    double doc = 0.0;
    double temporal = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      for (std::size_t j = i + 1; j < features.size(); ++j) {
        doc += doc_similarity(features[i], features[j]);
        temporal += temporal_similarity(features[i], features[j]);
      }
    }
    const double pairs = static_cast<double>(features.size() * (features.size() - 1) / 2);
    score.doc_component = doc / pairs;
    score.temporal_component = temporal / pairs;
  }
  if (use_influence) {
    for (std::size_t f : features) score.influence_component += weights_[f];
  } else {
    score.influence_component = 1.0;
  }
  score.probability = score.doc_component * score.temporal_component * score.influence_component;
  return score;
}

TopicScore TopicSpace::objective(std::span<const std::string> features, bool use_influence) const {
  std::vector<std::size_t> ids;
  ids.reserve(features.size());
  for (const auto& name : features) ids.push_back(burst_id(name));
  return objective(ids, use_influence);
}

TopicScore topic_objective(std::span<const std::string> features, const WindowedCorpus& corpus,
                           const BurstMatrix& bursts, std::span<const double> pvi, bool use_influence) {
  return TopicSpace(corpus, bursts, pvi).objective(features, use_influence);
}

std::pair<std::vector<double>, std::vector<std::size_t>> topic_burst_series(
    std::span<const std::size_t> feature_ids, const BurstMatrix& bursts, double threshold) {
  std::vector<double> series(bursts.window_count(), 0.0);
  std::vector<std::size_t> bursty;
  if (feature_ids.empty()) return {series, bursty};
  for (std::size_t f : feature_ids) {
    const auto s = bursts.series(f);
    for (std::size_t w = 0; w < series.size(); ++w) series[w] += s[w];
  }
  const double n = static_cast<double>(feature_ids.size());
  for (std::size_t w = 0; w < series.size(); ++w) {
    series[w] /= n;
    if (series[w] >= threshold) bursty.push_back(w);
  }
  return {series, bursty};
}

std::vector<Topic> extract_topics(const TopicSpace& space, const TopicOptions& options) {
  const BurstMatrix& bursts = space.bursts();
  const auto& names = bursts.features();

  std::vector<std::size_t> candidates;
  for (std::size_t f = 0; f < bursts.feature_count(); ++f) {
    if (!bursts.bursty_windows(f).empty()) candidates.push_back(f);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (options.use_influence && space.influence_weight(a) != space.influence_weight(b)) {
      return space.influence_weight(a) > space.influence_weight(b);
    }
    return names[a] < names[b];
  });

  const std::size_t cap = std::max<std::size_t>(1, options.size_cap);
  std::vector<char> assigned(bursts.feature_count(), 0);
  std::vector<double> acc_doc(bursts.feature_count(), 0.0);
  std::vector<double> acc_temporal(bursts.feature_count(), 0.0);
  std::vector<Topic> topics;

  for (std::size_t seed : candidates) {
    if (assigned[seed]) continue;
    assigned[seed] = 1;
    std::vector<std::size_t> members{seed};
    std::vector<std::size_t> pool;
    for (std::size_t c : candidates) {
      if (!assigned[c]) pool.push_back(c);
    }

    auto absorb_row = [&](std::size_t member, bool reset) {
      parallel_for(pool.size(), options.threads, [&](std::size_t i) {
        const std::size_t c = pool[i];
        const double d = space.doc_similarity(member, c);
        const double t = space.temporal_similarity(member, c);
        acc_doc[c] = reset ? d : acc_doc[c] + d;
        acc_temporal[c] = reset ? t : acc_temporal[c] + t;
      });
    };

    double doc_sum = 0.0;
    double temporal_sum = 0.0;
    double weight_sum = space.influence_weight(seed);
    double current = 0.0;
    absorb_row(seed, true);

    auto probability_with = [&](std::size_t c) {
      const double k = static_cast<double>(members.size());
      const double pairs = (k + 1.0) * k / 2.0;
      const double d = (doc_sum + acc_doc[c]) / pairs;
      const double t = (temporal_sum + acc_temporal[c]) / pairs;
      const double influence = options.use_influence ? weight_sum + space.influence_weight(c) : 1.0;
      return d * t * influence;
    };

    while (members.size() < cap && !pool.empty()) {
      std::size_t best = pool.size();
      double best_p = 0.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const std::size_t c = pool[i];
        if (members.size() == 1 && acc_doc[c] * acc_temporal[c] < options.min_pair_coherence) continue;
        const double p = probability_with(c);
        if (best == pool.size() || p > best_p || (p == best_p && names[c] < names[pool[best]])) {
          best = i;
          best_p = p;
        }
      }
      if (best == pool.size()) break;
      if (members.size() > 1 && !(best_p > current)) break;

      const std::size_t chosen = pool[best];
      doc_sum += acc_doc[chosen];
      temporal_sum += acc_temporal[chosen];
      weight_sum += space.influence_weight(chosen);
      current = best_p;
      members.push_back(chosen);
      assigned[chosen] = 1;
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
      absorb_row(chosen, false);
    }

    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    Topic topic;
    topic.feature_ids = members;
    for (std::size_t f : members) topic.features.push_back(names[f]);
    const TopicScore score = space.objective(members, options.use_influence);
    topic.doc_component = score.doc_component;
    topic.temporal_component = score.temporal_component;
    topic.influence_component = score.influence_component;
    topic.probability = score.probability;
    auto [series, bursty] = topic_burst_series(members, bursts, options.burst_threshold);
    topic.burst_series = std::move(series);
    topic.bursty_windows = std::move(bursty);
    topics.push_back(std::move(topic));
  }

  std::stable_sort(topics.begin(), topics.end(), [](const Topic& a, const Topic& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.features < b.features;
  });
  return topics;
}

}  // namespace priming
