#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "priming/corpus.hpp"

namespace priming {

struct PlantSpec {
  std::size_t begin = 0;
  std::size_t end = 0;
  // Number of generated planted words; ignored when `vocabulary` is given.
  std::size_t vocab_size = 6;
  std::vector<std::string> vocabulary;
  // Offset (in windows) of the volatility spike relative to the burst.
  int volatility_shift = 0;
};

struct SynthConfig {
  std::size_t windows = 50;
  std::size_t vocab = 200;
  std::size_t docs_per_window = 30;
  std::size_t doc_length = 40;
  std::vector<PlantSpec> plants;
  // Expected out-of-span occurrences of each planted word per window, as a
  // fraction of the peak in-span count.
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string start_date = "2020-01-01";
  std::size_t window_days = 1;
  double plant_doc_fraction = 0.5;
  std::size_t plant_peak_count = 20;
  double base_volatility = 0.002;
  double spike_volatility = 0.04;
  // Windows by which the volatility spike leads the burst, compensating
  // for the lag of a trailing volatility estimate.
  int volatility_lead = 1;
  // Temporal profile shared by planted bursts and volatility spikes:
  // "triangular" (symmetric) or "shock" (sharp onset, linear decay).
  std::string shape = "triangular";
};

struct SynthFixture {
  std::vector<RawRecord> records;
  std::vector<Date> index_dates;
  std::vector<double> index_values;
  // Ground truth: plant spans and vocabularies plus the generator config.
  nlohmann::json manifest;
  std::vector<std::string> warnings;

  IndexSeries index() const { return make_index(index_dates, index_values); }
};

// Throws std::invalid_argument without plants or with a plant outside the
// window range.
SynthFixture synthesize(const SynthConfig& config);

void to_json(nlohmann::json& j, const PlantSpec& plant);
void from_json(const nlohmann::json& j, PlantSpec& plant);
void to_json(nlohmann::json& j, const SynthConfig& config);
void from_json(const nlohmann::json& j, SynthConfig& config);

// Writes docs.jsonl, index.csv and plants.json into `dir`.
void write_fixture(const SynthFixture& fixture, const std::filesystem::path& dir);

}  // namespace priming
