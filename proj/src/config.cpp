#include "priming/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "priming/corpus.hpp"

namespace priming {

namespace {

void require(bool ok, const char* key, const char* rule) {
  if (!ok) throw std::invalid_argument(fmt::format("config: {} {}", key, rule));
}

}  // namespace

void PipelineConfig::validate() const {
  require(burst_threshold > 0.0 && burst_threshold < 1.0, "burst_threshold", "must be in (0, 1)");
  require(volatility_horizon >= 2, "volatility_horizon", "must be at least 2");
  require(pvi_bins >= 2, "pvi_bins", "must be at least 2");
  require(topic_size_cap >= 1, "topic_size_cap", "must be at least 1");
  require(min_pair_coherence >= 0.0 && min_pair_coherence < 1.0, "min_pair_coherence", "must be in [0, 1)");
  require(kmax >= 1, "kmax", "must be at least 1");
  require(kmeans_restarts >= 1, "kmeans_restarts", "must be at least 1");
  require(kmeans_iterations >= 1, "kmeans_iterations", "must be at least 1");
  require(kmeans_tolerance > 0.0, "kmeans_tolerance", "must be positive");
  require(homogeneity_cutoff > 0.0, "homogeneity_cutoff", "must be positive");
  require(sigma >= 0.0 && sigma < 1.0, "sigma", "must be in [0, 1)");
  require(tau > 0.0 && tau <= 1.0, "tau", "must be in (0, 1]");
  require(threads >= 1, "threads", "must be at least 1");
  require(stop_word_fraction > 0.0 && stop_word_fraction <= 1.0, "stop_word_fraction", "must be in (0, 1]");
  require(noisy_fraction >= 0.0 && noisy_fraction < 1.0, "noisy_fraction", "must be in [0, 1)");
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = nlohmann::json{{"burst_threshold", c.burst_threshold},
                     {"pe_exclude_bursty", c.pe_exclude_bursty},
                     {"volatility_horizon", c.volatility_horizon},
                     {"pvi_bins", c.pvi_bins},
                     {"pvi_mode", std::string(to_string(c.pvi_mode))},
                     {"topic_size_cap", c.topic_size_cap},
                     {"min_pair_coherence", c.min_pair_coherence},
                     {"kmax", c.kmax},
                     {"kmeans_restarts", c.kmeans_restarts},
                     {"kmeans_iterations", c.kmeans_iterations},
                     {"kmeans_tolerance", c.kmeans_tolerance},
                     {"homogeneity_cutoff", c.homogeneity_cutoff},
                     {"sigma", c.sigma},
                     {"tau", c.tau},
                     {"seed", c.seed},
                     {"baseline", c.baseline},
                     {"threads", c.threads},
                     {"stop_word_fraction", c.stop_word_fraction},
                     {"noisy_fraction", c.noisy_fraction}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  const nlohmann::json defaults = PipelineConfig{};
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw std::invalid_argument(fmt::format("config: unknown key \"{}\"", key));
  }
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(fmt::format("config: bad value for \"{}\"", key));
    }
  };
  get("burst_threshold", c.burst_threshold);
  get("pe_exclude_bursty", c.pe_exclude_bursty);
  get("volatility_horizon", c.volatility_horizon);
  get("pvi_bins", c.pvi_bins);
  if (j.contains("pvi_mode")) {
    if (!j["pvi_mode"].is_string()) throw std::invalid_argument("config: bad value for \"pvi_mode\"");
    c.pvi_mode = parse_pvi_mode(j["pvi_mode"].get<std::string>());
  }
  get("topic_size_cap", c.topic_size_cap);
  get("min_pair_coherence", c.min_pair_coherence);
  get("kmax", c.kmax);
  get("kmeans_restarts", c.kmeans_restarts);
  get("kmeans_iterations", c.kmeans_iterations);
  get("kmeans_tolerance", c.kmeans_tolerance);
  get("homogeneity_cutoff", c.homogeneity_cutoff);
  get("sigma", c.sigma);
  get("tau", c.tau);
  get("seed", c.seed);
  get("baseline", c.baseline);
  get("threads", c.threads);
  get("stop_word_fraction", c.stop_word_fraction);
  get("noisy_fraction", c.noisy_fraction);
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, 0, "cannot open file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path, 0, fmt::format("invalid JSON ({})", e.what()));
  }
  PipelineConfig config;
  from_json(j, config);
  return config;
}

}  // namespace priming
