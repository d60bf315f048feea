#include "priming/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "priming/clustering.hpp"
#include "priming/porter_stemmer.hpp"
#include "priming/reports.hpp"

namespace priming {

namespace {

// Small deterministic generator; avoids std distributions so fixtures are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::uint64_t state_;
};

std::string make_word(Rng& rng) {
  static constexpr std::string_view consonants = "bdfgkmnprtvz";
  static constexpr std::string_view vowels = "aiou";
  std::string w;
  const std::size_t syllables = 2 + rng.index(2);
  for (std::size_t s = 0; s < syllables; ++s) {
    w += consonants[rng.index(consonants.size())];
    w += vowels[rng.index(vowels.size())];
  }
  w += consonants[rng.index(consonants.size())];
  return w;
}

std::vector<std::string> make_vocabulary(Rng& rng, std::size_t n, std::set<std::string>& taken) {
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = make_word(rng);
    if (porter_stem(w) != w || !taken.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

// Triangular profile over [begin, end], in (0, 1], peaking at the centre.
double profile(std::ptrdiff_t w, std::ptrdiff_t begin, std::ptrdiff_t end) {
  if (w < begin || w > end) return 0.0;
  const double half = static_cast<double>(end - begin) / 2.0 + 1.0;
  const double centre = static_cast<double>(begin + end) / 2.0;
  return 1.0 - std::abs(static_cast<double>(w) - centre) / half;
}

// Shock profile over [begin, end]: full strength at onset, decaying
// linearly, the way volatility clusters after a news shock.
double shock_profile(std::ptrdiff_t w, std::ptrdiff_t begin, std::ptrdiff_t end) {
  if (w < begin || w > end) return 0.0;
  return 1.0 - static_cast<double>(w - begin) / static_cast<double>(end - begin + 1);
}

double event_profile(const std::string& shape, std::ptrdiff_t w, std::ptrdiff_t begin, std::ptrdiff_t end) {
  return shape == "shock" ? shock_profile(w, begin, end) : profile(w, begin, end);
}

}  // namespace

void to_json(nlohmann::json& j, const PlantSpec& p) {
  j = nlohmann::json{{"begin", p.begin},
                     {"end", p.end},
                     {"vocab_size", p.vocab_size},
                     {"vocabulary", p.vocabulary},
                     {"volatility_shift", p.volatility_shift}};
}

void from_json(const nlohmann::json& j, PlantSpec& p) {
  j.at("begin").get_to(p.begin);
  j.at("end").get_to(p.end);
  if (j.contains("vocab_size")) j.at("vocab_size").get_to(p.vocab_size);
  if (j.contains("vocabulary")) j.at("vocabulary").get_to(p.vocabulary);
  if (j.contains("volatility_shift")) j.at("volatility_shift").get_to(p.volatility_shift);
}

void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = nlohmann::json{{"windows", c.windows},
                     {"vocab", c.vocab},
                     {"docs_per_window", c.docs_per_window},
                     {"doc_length", c.doc_length},
                     {"plants", c.plants},
                     {"noise", c.noise},
                     {"seed", c.seed},
                     {"start_date", c.start_date},
                     {"window_days", c.window_days},
                     {"plant_doc_fraction", c.plant_doc_fraction},
                     {"plant_peak_count", c.plant_peak_count},
                     {"base_volatility", c.base_volatility},
                     {"spike_volatility", c.spike_volatility},
                     {"volatility_lead", c.volatility_lead},
                     {"shape", c.shape}};
}

void from_json(const nlohmann::json& j, SynthConfig& c) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("windows", c.windows);
  get("vocab", c.vocab);
  get("docs_per_window", c.docs_per_window);
  get("doc_length", c.doc_length);
  get("plants", c.plants);
  get("noise", c.noise);
  get("seed", c.seed);
  get("start_date", c.start_date);
  get("window_days", c.window_days);
  get("plant_doc_fraction", c.plant_doc_fraction);
  get("plant_peak_count", c.plant_peak_count);
  get("base_volatility", c.base_volatility);
  get("spike_volatility", c.spike_volatility);
  get("volatility_lead", c.volatility_lead);
  get("shape", c.shape);
}

SynthFixture synthesize(const SynthConfig& config) {
  if (config.plants.empty()) throw std::invalid_argument("synth: at least one planted event is required");
  if (config.windows < 2) throw std::invalid_argument("synth: at least two windows are required");
  if (config.window_days < 1) throw std::invalid_argument("synth: window_days must be positive");
  if (config.shape != "triangular" && config.shape != "shock") {
    throw std::invalid_argument(fmt::format("synth: unknown shape \"{}\"", config.shape));
  }
  const auto start = parse_date(config.start_date);
  if (!start) throw std::invalid_argument("synth: malformed start_date");

  Rng vocab_rng(split_seed(config.seed, 1));
  std::set<std::string> taken;
  const std::vector<std::string> background = make_vocabulary(vocab_rng, config.vocab, taken);

  SynthFixture fixture;
  std::vector<PlantSpec> plants = config.plants;
  for (PlantSpec& p : plants) {
    if (p.begin > p.end || p.end >= config.windows) {
      throw std::invalid_argument(fmt::format("synth: plant [{}, {}] outside the window range", p.begin, p.end));
    }
    if (p.vocabulary.empty()) {
      p.vocabulary = make_vocabulary(vocab_rng, p.vocab_size, taken);
    } else {
      for (const auto& w : p.vocabulary) taken.insert(w);
    }
  }
  for (std::size_t a = 0; a < plants.size(); ++a) {
    for (std::size_t b = a + 1; b < plants.size(); ++b) {
      const bool overlap = plants[a].begin <= plants[b].end && plants[b].begin <= plants[a].end;
      if (!overlap) continue;
      for (const auto& w : plants[a].vocabulary) {
        if (std::find(plants[b].vocabulary.begin(), plants[b].vocabulary.end(), w) != plants[b].vocabulary.end()) {
          fixture.warnings.push_back(
              fmt::format("plants {} and {} overlap in time and share the word \"{}\"", a, b, w));
        }
      }
    }
  }

  Rng doc_rng(split_seed(config.seed, 2));
  const std::size_t D = config.docs_per_window;
  for (std::size_t w = 0; w < config.windows; ++w) {
    std::vector<std::vector<std::string>> docs(D);
    for (auto& doc : docs) {
      for (std::size_t t = 0; t < config.doc_length; ++t) doc.push_back(background[doc_rng.index(background.size())]);
    }
    for (const PlantSpec& p : plants) {
      const double shape = event_profile(config.shape, static_cast<std::ptrdiff_t>(w),
                                         static_cast<std::ptrdiff_t>(p.begin), static_cast<std::ptrdiff_t>(p.end));
      std::vector<std::size_t> order(D);
      for (std::size_t i = 0; i < D; ++i) order[i] = i;
      doc_rng.shuffle(order);
      const std::size_t event_docs =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(config.plant_doc_fraction * static_cast<double>(D))));
      for (const auto& word : p.vocabulary) {
        std::size_t count = 0;
        if (shape > 0.0) {
          count = static_cast<std::size_t>(
              std::lround(static_cast<double>(config.plant_peak_count) * (0.4 + 0.6 * shape)));
        } else if (config.noise > 0.0) {
          const double expected = config.noise * static_cast<double>(config.plant_peak_count);
          count = static_cast<std::size_t>(std::floor(expected + doc_rng.uniform()));
        }
        for (std::size_t c = 0; c < count; ++c) {
          const std::size_t d = shape > 0.0 ? order[doc_rng.index(event_docs)] : doc_rng.index(D);
          docs[d].push_back(word);
        }
      }
    }
    const Date date = *start + std::chrono::days{static_cast<int>(w * config.window_days)};
    for (std::size_t i = 0; i < D; ++i) {
      doc_rng.shuffle(docs[i]);
      RawRecord record;
      record.id = fmt::format("w{:04d}-d{:03d}", w, i);
      record.date = format_date(date);
      record.text = fmt::format("{}", fmt::join(docs[i], " "));
      record.line = fixture.records.size() + 1;
      fixture.records.push_back(std::move(record));
    }
  }

  Rng index_rng(split_seed(config.seed, 3));
  double value = 100.0;
  for (std::size_t w = 0; w < config.windows; ++w) {
    fixture.index_dates.push_back(*start + std::chrono::days{static_cast<int>(w * config.window_days)});
    if (w > 0) {
      double amplitude = config.base_volatility;
      for (const PlantSpec& p : plants) {
        const auto offset = static_cast<std::ptrdiff_t>(p.volatility_shift - config.volatility_lead);
        amplitude += config.spike_volatility * event_profile(config.shape, static_cast<std::ptrdiff_t>(w),
                                                       static_cast<std::ptrdiff_t>(p.begin) + offset,
                                                       static_cast<std::ptrdiff_t>(p.end) + offset);
      }
      const double sign = (w % 2 == 0) ? 1.0 : -1.0;
      const double r = sign * amplitude + 0.25 * config.base_volatility * index_rng.normal();
      value *= std::exp(r);
    }
    fixture.index_values.push_back(value);
  }

  SynthConfig resolved = config;
  resolved.plants = plants;
  fixture.manifest = {{"config", resolved}, {"warnings", fixture.warnings}};
  nlohmann::json spans = nlohmann::json::array();
  for (const PlantSpec& p : plants) {
    spans.push_back({{"begin", p.begin}, {"end", p.end}, {"vocabulary", p.vocabulary}});
  }
  fixture.manifest["plants"] = spans;
  return fixture;
}

void write_fixture(const SynthFixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "docs.jsonl");
    for (const RawRecord& r : fixture.records) {
      out << nlohmann::json{{"id", r.id}, {"date", r.date}, {"text", r.text}}.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / "index.csv");
    out << "date,value\n";
    for (std::size_t i = 0; i < fixture.index_dates.size(); ++i) {
      out << format_date(fixture.index_dates[i]) << ',' << format_number(fixture.index_values[i]) << '\n';
    }
  }
  {
    std::ofstream out(dir / "plants.json");
    out << fixture.manifest.dump(2) << '\n';
  }
}

}  // namespace priming
