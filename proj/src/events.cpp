#include "priming/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace priming {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double cluster_intensity(const TopicCluster& cluster, std::size_t w, std::span<const Topic> topics) {
  if (cluster.topic_ids.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t t : cluster.topic_ids) sum += topics[t].burst_series.at(w);
  return sum / static_cast<double>(cluster.topic_ids.size());
}

// Score of `path` after adding `cluster` at `window` (one past either end).
double extended_score(const ClusterPath& path, std::size_t window, std::size_t cluster,
                      const EventInputs& inputs) {
  const double added = cluster_intensity(inputs.clusters[window][cluster], window, inputs.topics);
  std::vector<double> intensity;
  intensity.reserve(path.size() + 1);
  std::size_t begin = path.begin;
  if (window < path.begin) {
    intensity.push_back(added);
    intensity.insert(intensity.end(), path.intensity.begin(), path.intensity.end());
    begin = window;
  } else {
    intensity = path.intensity;
    intensity.push_back(added);
  }
  return priming_score(intensity, inputs.pvi.subspan(begin, intensity.size()));
}

}  // namespace

double cluster_similarity(const TopicCluster& a, const TopicCluster& b, std::span<const Topic> topics) {
  double shared = 0.0;
  double all = 0.0;
  auto i = a.topic_ids.begin();
  auto j = b.topic_ids.begin();
  while (i != a.topic_ids.end() || j != b.topic_ids.end()) {
    if (j == b.topic_ids.end() || (i != a.topic_ids.end() && *i < *j)) {
      all += topics[*i++].probability;
    } else if (i == a.topic_ids.end() || *j < *i) {
      all += topics[*j++].probability;
    } else {
      shared += topics[*i].probability;
      all += topics[*i].probability;
      ++i;
      ++j;
    }
  }
  return all > 0.0 ? shared / all : 0.0;
}

double corref(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("corref: length mismatch");
  if (a.size() < 3) return 1.0;
  if (constant(a) || constant(b)) return 0.0;
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double priming_score(std::span<const double> intensity, std::span<const double> pvi) {
  if (intensity.size() != pvi.size()) throw std::invalid_argument("priming_score: length mismatch");
  if (intensity.empty()) throw std::invalid_argument("priming_score: empty series");
  return norm(intensity) * norm(pvi) * corref(intensity, pvi);
}

std::vector<double> event_intensity(const std::vector<std::vector<std::size_t>>& topics_by_window,
                                    std::size_t begin, std::span<const Topic> topics) {
  std::vector<double> out(topics_by_window.size(), 0.0);
  for (std::size_t i = 0; i < topics_by_window.size(); ++i) {
    const auto& ids = topics_by_window[i];
    if (ids.empty()) continue;
    double sum = 0.0;
    for (std::size_t t : ids) sum += topics[t].burst_series.at(begin + i);
    out[i] = sum / static_cast<double>(ids.size());
  }
  return out;
}

double path_similarity(const ClusterPath& a, const ClusterPath& b) {
  if (a.clusters.empty() || b.clusters.empty()) return 0.0;
  const std::size_t lo = std::max(a.begin, b.begin);
  const std::size_t hi = std::min(a.end(), b.end());
  std::size_t shared = 0;
  for (std::size_t w = lo; w <= hi && lo <= hi; ++w) {
    if (a.clusters[w - a.begin] == b.clusters[w - b.begin]) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(std::min(a.size(), b.size()));
}

std::vector<std::vector<std::size_t>> group_paths(std::span<const ClusterPath> paths, double tau) {
  const std::size_t n = paths.size();
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[i] = {i};
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sim[i * n + j] = sim[j * n + i] = path_similarity(paths[i], paths[j]);
  }
  std::vector<bool> active(n, true);
  while (true) {
    double best = -1.0;
    std::size_t ba = n;
    std::size_t bb = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && sim[i * n + j] > best) {
          best = sim[i * n + j];
          ba = i;
          bb = j;
        }
      }
    }
    if (ba == n || best < tau) break;
    const double na = static_cast<double>(groups[ba].size());
    const double nb = static_cast<double>(groups[bb].size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == ba || k == bb) continue;
      const double s = (na * sim[ba * n + k] + nb * sim[bb * n + k]) / (na + nb);
      sim[ba * n + k] = sim[k * n + ba] = s;
    }
    groups[ba].insert(groups[ba].end(), groups[bb].begin(), groups[bb].end());
    std::sort(groups[ba].begin(), groups[ba].end());
    groups[bb].clear();
    active[bb] = false;
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) out.push_back(std::move(groups[i]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void rescore_path(ClusterPath& path, const EventInputs& inputs) {
  path.intensity.resize(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::size_t w = path.begin + i;
    path.intensity[i] = cluster_intensity(inputs.clusters[w][path.clusters[i]], w, inputs.topics);
  }
  path.score = priming_score(path.intensity, inputs.pvi.subspan(path.begin, path.size()));
}

SignTable make_sign_table(const WindowClusters& clusters) {
  SignTable sign;
  sign.open.resize(clusters.size());
  for (std::size_t w = 0; w < clusters.size(); ++w) sign.open[w].assign(clusters[w].size(), true);
  return sign;
}

void probe_event_path(const EventInputs& inputs, std::vector<ClusterPath>& paths,
                      std::span<const std::size_t> seed_paths, std::size_t seed_window, SignTable& sign,
                      const ProbeOptions& options) {
  const std::size_t W = inputs.clusters.size();
  for (const int direction : {+1, -1}) {
    // Paths whose frontier cluster sits at window w.
    std::vector<std::size_t> frontier(seed_paths.begin(), seed_paths.end());
    std::size_t w = seed_window;
    while (!frontier.empty()) {
      if (direction > 0 ? w + 1 >= W : w == 0) break;
      const std::size_t next = direction > 0 ? w + 1 : w - 1;
      std::vector<std::size_t> open;
      for (std::size_t j = 0; j < inputs.clusters[next].size(); ++j) {
        if (sign.open[next][j]) open.push_back(j);
      }
      std::vector<std::size_t> extended;
      std::vector<std::size_t> absorbed;
      for (std::size_t k : frontier) {
        ClusterPath& path = paths[k];
        const std::size_t tail = direction > 0 ? path.clusters.back() : path.clusters.front();
        const TopicCluster& from = inputs.clusters[w][tail];
        std::size_t best = inputs.clusters[next].size();
        double best_value = -std::numeric_limits<double>::infinity();
        double best_score = 0.0;
        for (std::size_t j : open) {
          const double s = cluster_similarity(from, inputs.clusters[next][j], inputs.topics);
          if (!(s > options.sigma)) continue;
          const double score = extended_score(path, next, j, inputs);
          if (options.require_score_gain && !(score > path.score)) continue;
          const double value = options.require_score_gain ? score : s;
          if (value > best_value) {
            best_value = value;
            best_score = score;
            best = j;
          }
        }
        if (best == inputs.clusters[next].size()) continue;
        const double added = cluster_intensity(inputs.clusters[next][best], next, inputs.topics);
        if (direction > 0) {
          path.clusters.push_back(best);
          path.intensity.push_back(added);
          path.claims.push_back(sign.step);
        } else {
          path.clusters.insert(path.clusters.begin(), best);
          path.intensity.insert(path.intensity.begin(), added);
          path.claims.insert(path.claims.begin(), sign.step);
          path.begin = next;
        }
        path.score = best_score;
        extended.push_back(k);
        absorbed.push_back(best);
      }
      for (std::size_t j : absorbed) sign.open[next][j] = false;
      ++sign.step;
      frontier = std::move(extended);
      w = next;
    }
  }
}

PrimingEvent build_event(std::span<const ClusterPath> paths, std::span<const std::size_t> members,
                         const EventInputs& inputs) {
  if (members.empty()) throw std::invalid_argument("build_event: no member paths");
  PrimingEvent event;
  event.paths.assign(members.begin(), members.end());
  event.begin = std::numeric_limits<std::size_t>::max();
  event.end = 0;
  for (std::size_t p : members) {
    event.begin = std::min(event.begin, paths[p].begin);
    event.end = std::max(event.end, paths[p].end());
  }
  const std::size_t length = event.end - event.begin + 1;
  event.clusters_by_window.assign(length, {});
  for (std::size_t p : members) {
    const ClusterPath& path = paths[p];
    for (std::size_t i = 0; i < path.size(); ++i) {
      event.clusters_by_window[path.begin + i - event.begin].push_back(path.clusters[i]);
    }
  }
  std::vector<std::vector<std::size_t>> topics_by_window(length);
  for (std::size_t i = 0; i < length; ++i) {
    auto& cs = event.clusters_by_window[i];
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    auto& ts = topics_by_window[i];
    for (std::size_t c : cs) {
      const auto& ids = inputs.clusters[event.begin + i][c].topic_ids;
      ts.insert(ts.end(), ids.begin(), ids.end());
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
  event.intensity = event_intensity(topics_by_window, event.begin, inputs.topics);
  const auto slice = inputs.pvi.subspan(event.begin, length);
  event.pvi.assign(slice.begin(), slice.end());
  event.score = priming_score(event.intensity, event.pvi);
  return event;
}

EventDetection detect_events(const EventInputs& inputs, const EventOptions& options) {
  const std::size_t W = inputs.clusters.size();
  if (inputs.pvi.size() != W) throw std::invalid_argument("detect_events: pvi length mismatch");
  EventDetection out;

  std::vector<double> key(W, 0.0);
  for (std::size_t w = 0; w < W; ++w) {
    if (options.seed_order == SeedOrder::pvi) {
      key[w] = inputs.pvi[w];
      continue;
    }
    std::size_t count = 0;
    for (const TopicCluster& c : inputs.clusters[w]) {
      for (std::size_t t : c.topic_ids) {
        key[w] += inputs.topics[t].burst_series.at(w);
        ++count;
      }
    }
    if (count > 0) key[w] /= static_cast<double>(count);
  }
  out.window_order.resize(W);
  std::iota(out.window_order.begin(), out.window_order.end(), std::size_t{0});
  std::stable_sort(out.window_order.begin(), out.window_order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });

  SignTable sign = make_sign_table(inputs.clusters);
  const ProbeOptions probe{options.sigma, options.require_score_gain};
  for (std::size_t w : out.window_order) {
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < inputs.clusters[w].size(); ++i) {
      if (!sign.open[w][i]) continue;
      ClusterPath path;
      path.begin = w;
      path.clusters = {i};
      path.claims = {sign.step};
      rescore_path(path, inputs);
      seeds.push_back(out.paths.size());
      out.paths.push_back(std::move(path));
      sign.open[w][i] = false;
    }
    ++sign.step;
    if (!seeds.empty()) probe_event_path(inputs, out.paths, seeds, w, sign, probe);
  }

  for (const auto& group : group_paths(out.paths, options.tau)) {
    out.events.push_back(build_event(out.paths, group, inputs));
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const PrimingEvent& a, const PrimingEvent& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.begin < b.begin;
  });
  return out;
}

}  // namespace priming
