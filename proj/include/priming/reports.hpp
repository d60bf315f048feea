#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "priming/burst.hpp"
#include "priming/corpus.hpp"
#include "priming/events.hpp"
#include "priming/topics.hpp"
#include "priming/volatility.hpp"

namespace priming {

// Shortest round-trip decimal representation.
std::string format_number(double value);

// rank,features,doc_component,temporal_component,influence_component,probability
void write_topics_csv(std::ostream& out, std::span<const Topic> topics);

nlohmann::json events_json(const EventDetection& detection, const WindowClusters& clusters,
                           std::span<const Topic> topics, const std::vector<Window>& windows);

// window,pvi,event_rank,intensity: one row per (window, covering event);
// windows outside every event get event_rank 0 and intensity 0.
void write_plot_csv(std::ostream& out, std::span<const double> pvi, std::span<const PrimingEvent> events);

// feature,window,probability for the selected burst-matrix rows.
void write_bursts_csv(std::ostream& out, const BurstMatrix& bursts, std::span<const std::size_t> features);

// window,index,vi,pvi
void write_volatility_csv(std::ostream& out, std::span<const double> index, const VolatilitySeries& vi,
                          const ProbVolatility& pvi);

nlohmann::json clusters_json(const WindowClusters& clusters, std::span<const Topic> topics,
                             const std::vector<Window>& windows);

}  // namespace priming
