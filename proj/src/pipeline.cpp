#include "priming/pipeline.hpp"

namespace priming {

VolatilityStage compute_volatility(const IndexSeries& index, const PipelineConfig& config) {
  VolatilityStage stage;
  stage.returns = log_returns(index.values);
  stage.volatility = volatility_series(stage.returns, config.volatility_horizon);
  const LogisticFit fit = fit_logistic(stage.volatility.vi);
  stage.pvi = probabilize(stage.volatility.vi, fit, config.pvi_bins, config.pvi_mode);
  return stage;
}

BurstOptions burst_options(const PipelineConfig& config) {
  return {config.burst_threshold, config.pe_exclude_bursty, config.threads};
}

TopicOptions topic_options(const PipelineConfig& config) {
  TopicOptions options;
  options.size_cap = config.topic_size_cap;
  options.min_pair_coherence = config.min_pair_coherence;
  options.use_influence = !config.baseline;
  options.burst_threshold = config.burst_threshold;
  options.threads = config.threads;
  return options;
}

ClusterOptions cluster_options(const PipelineConfig& config) {
  ClusterOptions options;
  options.kmax = config.kmax;
  options.restarts = config.kmeans_restarts;
  options.max_iterations = config.kmeans_iterations;
  options.tolerance = config.kmeans_tolerance;
  options.homogeneity_cutoff = config.homogeneity_cutoff;
  options.seed = config.seed;
  options.threads = config.threads;
  return options;
}

EventOptions event_options(const PipelineConfig& config) {
  EventOptions options;
  options.sigma = config.sigma;
  options.tau = config.tau;
  options.seed_order = config.baseline ? SeedOrder::intensity : SeedOrder::pvi;
  options.require_score_gain = !config.baseline;
  return options;
}

EventStage discover_priming_events(const WindowedCorpus& corpus, std::span<const Topic> topics,
                                   std::span<const double> pvi, const PipelineConfig& config) {
  EventStage stage;
  stage.clusters = cluster_all_windows(topics, corpus, cluster_options(config));
  stage.detection = detect_events(EventInputs{stage.clusters, topics, pvi}, event_options(config));
  return stage;
}

BaselineStage baseline_events(const WindowedCorpus& corpus, const BurstMatrix& bursts,
                              std::span<const double> pvi, const PipelineConfig& config) {
  PipelineConfig baseline = config;
  baseline.baseline = true;
  BaselineStage stage;
  stage.topics = extract_topics(TopicSpace(corpus, bursts, pvi), topic_options(baseline));
  stage.events = discover_priming_events(corpus, stage.topics, pvi, baseline);
  return stage;
}

PipelineResult run_pipeline(std::span<const RawRecord> records, const IndexSeries& index,
                            const PipelineConfig& config) {
  config.validate();
  PipelineResult result;
  result.index = index;
  IngestResult ingest = ingest_documents(records, index);
  result.dropped = ingest.dropped;
  result.record_errors = std::move(ingest.errors);

  PreprocessOptions pre;
  pre.stop_word_fraction = config.stop_word_fraction;
  pre.noisy_fraction = config.noisy_fraction;
  result.corpus = partition_windows(preprocess(std::move(ingest.documents), pre), index);
  result.bursts = burst_series(result.corpus, burst_options(config));
  result.volatility = compute_volatility(index, config);
  const std::span<const double> pvi = result.volatility.pvi.pvi;
  result.topics = extract_topics(TopicSpace(result.corpus, result.bursts, pvi), topic_options(config));
  result.events = discover_priming_events(result.corpus, result.topics, pvi, config);
  return result;
}

}  // namespace priming
