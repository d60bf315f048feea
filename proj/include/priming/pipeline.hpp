#pragma once

#include <span>
#include <vector>

#include "priming/burst.hpp"
#include "priming/clustering.hpp"
#include "priming/config.hpp"
#include "priming/corpus.hpp"
#include "priming/events.hpp"
#include "priming/topics.hpp"
#include "priming/volatility.hpp"

namespace priming {

struct VolatilityStage {
  std::vector<double> returns;
  VolatilitySeries volatility;
  ProbVolatility pvi;
};

VolatilityStage compute_volatility(const IndexSeries& index, const PipelineConfig& config);

BurstOptions burst_options(const PipelineConfig& config);
TopicOptions topic_options(const PipelineConfig& config);
ClusterOptions cluster_options(const PipelineConfig& config);
EventOptions event_options(const PipelineConfig& config);

struct EventStage {
  WindowClusters clusters;
  EventDetection detection;
};

// Clusters every window and detects ranked priming events.
EventStage discover_priming_events(const WindowedCorpus& corpus, std::span<const Topic> topics,
                                   std::span<const double> pvi, const PipelineConfig& config);

// Index-free comparator: topics grouped without the influence component,
// seeds ordered by window intensity, links gated by similarity only.
// Events are still scored against pvi.
struct BaselineStage {
  std::vector<Topic> topics;
  EventStage events;
};
BaselineStage baseline_events(const WindowedCorpus& corpus, const BurstMatrix& bursts,
                              std::span<const double> pvi, const PipelineConfig& config);

struct PipelineResult {
  IndexSeries index;
  std::size_t dropped = 0;
  std::vector<RecordError> record_errors;
  WindowedCorpus corpus;
  BurstMatrix bursts;
  VolatilityStage volatility;
  std::vector<Topic> topics;
  EventStage events;
};

// Full run from raw records. Honors config.baseline.
PipelineResult run_pipeline(std::span<const RawRecord> records, const IndexSeries& index,
                            const PipelineConfig& config);

}  // namespace priming
