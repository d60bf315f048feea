#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "priming/volatility.hpp"

namespace priming {

// Every free parameter of the pipeline. Field names double as the keys of
// the flat JSON config file and, with '_' replaced by '-', as CLI flags.
struct PipelineConfig {
  double burst_threshold = 0.9;
  bool pe_exclude_bursty = false;
  std::size_t volatility_horizon = 4;
  std::size_t pvi_bins = 10;
  PviMode pvi_mode = PviMode::quantized;
  std::size_t topic_size_cap = 8;
  double min_pair_coherence = 0.01;
  std::size_t kmax = 8;
  std::size_t kmeans_restarts = 5;
  std::size_t kmeans_iterations = 50;
  double kmeans_tolerance = 1e-6;
  double homogeneity_cutoff = 0.8;
  double sigma = 0.2;
  double tau = 0.5;
  std::uint64_t seed = 0;
  bool baseline = false;
  unsigned threads = 1;
  double stop_word_fraction = 0.8;
  double noisy_fraction = 0.05;

  // Throws std::invalid_argument naming the offending key.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

void to_json(nlohmann::json& j, const PipelineConfig& config);
// Unknown keys are rejected; missing keys keep their defaults.
void from_json(const nlohmann::json& j, PipelineConfig& config);

PipelineConfig load_config(const std::string& path);

}  // namespace priming
