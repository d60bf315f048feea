#include "priming/reports.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace priming {

namespace {

std::string join_features(const std::vector<std::string>& features) { return fmt::format("{}", fmt::join(features, ";")); }

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

void write_topics_csv(std::ostream& out, std::span<const Topic> topics) {
  out << "rank,features,doc_component,temporal_component,influence_component,probability\n";
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const Topic& t = topics[i];
    out << (i + 1) << ',' << join_features(t.features) << ',' << format_number(t.doc_component) << ','
        << format_number(t.temporal_component) << ',' << format_number(t.influence_component) << ','
        << format_number(t.probability) << '\n';
  }
}

nlohmann::json events_json(const EventDetection& detection, const WindowClusters& clusters,
                           std::span<const Topic> topics, const std::vector<Window>& windows) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t rank = 0; rank < detection.events.size(); ++rank) {
    const PrimingEvent& e = detection.events[rank];
    nlohmann::json per_window = nlohmann::json::array();
    for (std::size_t i = 0; i < e.clusters_by_window.size(); ++i) {
      const std::size_t w = e.begin + i;
      nlohmann::json cs = nlohmann::json::array();
      for (std::size_t c : e.clusters_by_window[i]) {
        nlohmann::json members = nlohmann::json::array();
        for (std::size_t t : clusters[w][c].topic_ids) members.push_back(topics[t].features);
        cs.push_back({{"cluster", c}, {"topics", members}});
      }
      per_window.push_back({{"window", w}, {"date", format_date(windows[w].start)}, {"clusters", cs}});
    }
    out.push_back({{"rank", rank + 1},
                   {"score", e.score},
                   {"begin_window", e.begin},
                   {"end_window", e.end},
                   {"begin_date", format_date(windows[e.begin].start)},
                   {"end_date", format_date(windows[e.end].start)},
                   {"paths", e.paths.size()},
                   {"windows", per_window},
                   {"intensity", e.intensity},
                   {"pvi", e.pvi}});
  }
  return out;
}

void write_plot_csv(std::ostream& out, std::span<const double> pvi, std::span<const PrimingEvent> events) {
  out << "window,pvi,event_rank,intensity\n";
  for (std::size_t w = 0; w < pvi.size(); ++w) {
    bool covered = false;
    for (std::size_t r = 0; r < events.size(); ++r) {
      const PrimingEvent& e = events[r];
      if (w < e.begin || w > e.end) continue;
      covered = true;
      out << w << ',' << format_number(pvi[w]) << ',' << (r + 1) << ',' << format_number(e.intensity[w - e.begin])
          << '\n';
    }
    if (!covered) out << w << ',' << format_number(pvi[w]) << ",0,0\n";
  }
}

void write_bursts_csv(std::ostream& out, const BurstMatrix& bursts, std::span<const std::size_t> features) {
  out << "feature,window,probability\n";
  for (std::size_t f : features) {
    for (std::size_t w = 0; w < bursts.window_count(); ++w) {
      out << bursts.features()[f] << ',' << w << ',' << format_number(bursts.probability(f, w)) << '\n';
    }
  }
}

void write_volatility_csv(std::ostream& out, std::span<const double> index, const VolatilitySeries& vi,
                          const ProbVolatility& pvi) {
  out << "window,index,vi,pvi\n";
  for (std::size_t w = 0; w < index.size(); ++w) {
    out << w << ',' << format_number(index[w]) << ',' << format_number(vi.vi[w]) << ','
        << format_number(pvi.pvi[w]) << '\n';
  }
}

nlohmann::json clusters_json(const WindowClusters& clusters, std::span<const Topic> topics,
                             const std::vector<Window>& windows) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t w = 0; w < clusters.size(); ++w) {
    if (clusters[w].empty()) continue;
    nlohmann::json cs = nlohmann::json::array();
    for (const TopicCluster& c : clusters[w]) {
      nlohmann::json members = nlohmann::json::array();
      for (std::size_t t : c.topic_ids) members.push_back(topics[t].features);
      cs.push_back({{"topic_ids", c.topic_ids}, {"topics", members}});
    }
    out.push_back({{"window", w}, {"date", format_date(windows[w].start)}, {"clusters", cs}});
  }
  return out;
}

}  // namespace priming
