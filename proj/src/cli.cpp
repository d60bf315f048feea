#include "priming/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "priming/pipeline.hpp"
#include "priming/reports.hpp"
#include "priming/synth.hpp"

namespace priming {

namespace {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buffer[1 << 15];
  while (in) {
    in.read(buffer, sizeof buffer);
    EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string flag_name(const std::string& key) {
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return "--" + flag;
}

// Config file plus one `--key value` override per config field.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Flat JSON config file");
    const nlohmann::json defaults = PipelineConfig{};
    for (const auto& [key, value] : defaults.items()) {
      app->add_option_function<std::string>(
          flag_name(key), [this, key = key](const std::string& v) { overrides[key] = v; },
          fmt::format("Override {} (default {})", key, value.dump()));
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    nlohmann::json j = config;
    for (const auto& [key, text] : overrides) {
      nlohmann::json value;
      try {
        value = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error&) {
        value = text;
      }
      if (j[key].is_string() && !value.is_string()) value = text;
      j[key] = value;
    }
    from_json(j, config);
    config.validate();
    return config;
  }
};

struct Inputs {
  std::string docs;
  std::string index;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

std::vector<RawRecord> load_records(const std::string& path) {
  if (!fs::exists(path)) throw InputError(path, 0, "file not found");
  return read_documents_jsonl(fs::path(path));
}

IndexSeries load_index(const std::string& path) {
  if (!fs::exists(path)) throw InputError(path, 0, "file not found");
  return read_index_csv(fs::path(path));
}

PipelineResult run_checked(const Inputs& in, const PipelineConfig& config) {
  const auto records = load_records(in.docs);
  const auto index = load_index(in.index);
  for (std::size_t w = 0; w < index.size(); ++w) {
    if (!(index.values[w] > 0.0)) throw InputError(in.index, w + 2, "index values must be positive");
  }
  const IngestResult ingest = ingest_documents(records, index);
  if (!ingest.errors.empty()) {
    const RecordError& e = ingest.errors.front();
    throw InputError(in.docs, e.line,
                     ingest.errors.size() == 1
                         ? e.message
                         : fmt::format("{} (and {} more malformed records)", e.message, ingest.errors.size() - 1));
  }
  return run_pipeline(records, index, config);
}

nlohmann::json input_manifest(const Inputs& in) {
  return {{"docs", {{"path", in.docs}, {"sha256", sha256_file(in.docs)}}},
          {"index", {{"path", in.index}, {"sha256", sha256_file(in.index)}}}};
}

void write_run_outputs(const PipelineResult& r, const Inputs& in, const PipelineConfig& config,
                       const fs::path& out_dir, bool diagnostics) {
  fs::create_directories(out_dir);
  const auto& detection = r.events.detection;
  std::vector<std::string> outputs{"topics.csv", "events.json", "plot.csv", "manifest.json"};

  std::ostringstream topics;
  write_topics_csv(topics, r.topics);
  write_text(out_dir / "topics.csv", topics.str());
  write_text(out_dir / "events.json",
             events_json(detection, r.events.clusters, r.topics, r.corpus.windows()).dump(2) + "\n");
  std::ostringstream plot;
  write_plot_csv(plot, r.volatility.pvi.pvi, detection.events);
  write_text(out_dir / "plot.csv", plot.str());

  if (diagnostics) {
    write_text(out_dir / "clusters.json",
               clusters_json(r.events.clusters, r.topics, r.corpus.windows()).dump(2) + "\n");
    std::ostringstream vol;
    write_volatility_csv(vol, r.index.values, r.volatility.volatility, r.volatility.pvi);
    write_text(out_dir / "volatility.csv", vol.str());
    outputs.insert(outputs.end(), {"clusters.json", "volatility.csv"});
  }

  nlohmann::json manifest = {
      {"version", PRIMING_VERSION},
      {"config", config},
      {"inputs", input_manifest(in)},
      {"logistic_fit", {{"mu", r.volatility.pvi.fit.mu}, {"s", r.volatility.pvi.fit.s}}},
      {"counts",
       {{"documents", r.corpus.document_count()},
        {"dropped_documents", r.dropped},
        {"features", r.corpus.feature_count()},
        {"windows", r.corpus.window_count()},
        {"topics", r.topics.size()},
        {"paths", detection.paths.size()},
        {"events", detection.events.size()}}},
      {"outputs", outputs}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

double mean_score(const std::vector<PrimingEvent>& events) {
  if (events.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : events) sum += e.score;
  return sum / static_cast<double>(events.size());
}

PlantSpec parse_plant(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 4) {
    throw std::invalid_argument(fmt::format("plant \"{}\": expected begin:end[:vocab[:shift]]", text));
  }
  PlantSpec p;
  try {
    p.begin = std::stoul(parts[0]);
    p.end = std::stoul(parts[1]);
    if (parts.size() > 2) p.vocab_size = std::stoul(parts[2]);
    if (parts.size() > 3) p.volatility_shift = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("plant \"{}\": expected integers", text));
  }
  return p;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects priming events from a dated news corpus and a numeric index"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PRIMING_VERSION);

  Inputs inputs;
  std::string out_dir;
  bool diagnostics = false;

  auto add_inputs = [&](CLI::App* sub, bool need_docs) {
    if (need_docs) sub->add_option("--docs", inputs.docs, "Documents (JSON lines)")->required();
    sub->add_option("--index", inputs.index, "Index CSV (date,value)")->required();
  };

  ConfigFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run the pipeline and write reports");
  add_inputs(run, true);
  run->add_option("--out-dir", out_dir, "Output directory")->required();
  run->add_flag("--diagnostics", diagnostics, "Also write clusters.json and volatility.csv");
  run_flags.attach(run);

  ConfigFlags compare_flags;
  CLI::App* compare = app.add_subcommand("compare", "Compare the main pipeline with the index-free baseline");
  add_inputs(compare, true);
  compare->add_option("--out-dir", out_dir, "Output directory")->required();
  compare_flags.attach(compare);

  ConfigFlags burst_flags;
  std::vector<std::string> features;
  std::string out_file;
  CLI::App* dump_bursts = app.add_subcommand("dump-bursts", "Write per-window burst probabilities");
  add_inputs(dump_bursts, true);
  dump_bursts->add_option("--feature", features, "Feature to dump (repeatable; default: every bursty feature)");
  dump_bursts->add_option("--out", out_file, "Output CSV (default: stdout)");
  burst_flags.attach(dump_bursts);

  ConfigFlags vol_flags;
  CLI::App* dump_vol = app.add_subcommand("dump-volatility", "Write the volatility and PVI series");
  add_inputs(dump_vol, false);
  dump_vol->add_option("--out", out_file, "Output CSV (default: stdout)");
  vol_flags.attach(dump_vol);

  SynthConfig synth_config;
  std::string synth_config_path;
  std::vector<std::string> plant_texts;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic fixture with planted events");
  synth->add_option("--out-dir", out_dir, "Output directory")->required();
  synth->add_option("--config", synth_config_path, "Generator config (JSON)");
  synth->add_option("--plant", plant_texts, "Planted event begin:end[:vocab[:shift]] (repeatable)");
  synth->add_option("--windows", synth_config.windows, "Number of windows");
  synth->add_option("--vocab", synth_config.vocab, "Background vocabulary size");
  synth->add_option("--docs-per-window", synth_config.docs_per_window, "Documents per window");
  synth->add_option("--doc-length", synth_config.doc_length, "Background tokens per document");
  synth->add_option("--noise", synth_config.noise, "Out-of-span planted-word rate");
  synth->add_option("--seed", synth_config.seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << PRIMING_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (run->parsed()) {
      const PipelineConfig config = run_flags.resolve();
      const PipelineResult r = run_checked(inputs, config);
      write_run_outputs(r, inputs, config, out_dir, diagnostics);
      out << fmt::format("{} topics, {} events written to {}\n", r.topics.size(),
                         r.events.detection.events.size(), out_dir);
    } else if (compare->parsed()) {
      PipelineConfig config = compare_flags.resolve();
      config.baseline = false;
      const PipelineResult main = run_checked(inputs, config);
      const BaselineStage base =
          baseline_events(main.corpus, main.bursts, main.volatility.pvi.pvi, config);
      fs::create_directories(out_dir);
      const auto& main_events = main.events.detection.events;
      const auto& base_events = base.events.detection.events;
      std::ostringstream summary;
      summary << "method,mean_score,event_count\n";
      summary << "main," << format_number(mean_score(main_events)) << ',' << main_events.size() << '\n';
      summary << "baseline," << format_number(mean_score(base_events)) << ',' << base_events.size() << '\n';
      write_text(fs::path(out_dir) / "comparison.csv", summary.str());
      std::ostringstream scores;
      scores << "method,rank,score\n";
      for (std::size_t i = 0; i < main_events.size(); ++i) {
        scores << "main," << (i + 1) << ',' << format_number(main_events[i].score) << '\n';
      }
      for (std::size_t i = 0; i < base_events.size(); ++i) {
        scores << "baseline," << (i + 1) << ',' << format_number(base_events[i].score) << '\n';
      }
      write_text(fs::path(out_dir) / "comparison_scores.csv", scores.str());
      out << summary.str();
    } else if (dump_bursts->parsed()) {
      const PipelineConfig config = burst_flags.resolve();
      const auto records = load_records(inputs.docs);
      const auto index = load_index(inputs.index);
      IngestResult ingest = ingest_documents(records, index);
      if (!ingest.errors.empty()) {
        throw InputError(inputs.docs, ingest.errors.front().line, ingest.errors.front().message);
      }
      PreprocessOptions pre;
      pre.stop_word_fraction = config.stop_word_fraction;
      pre.noisy_fraction = config.noisy_fraction;
      const WindowedCorpus corpus = partition_windows(preprocess(std::move(ingest.documents), pre), index);
      const BurstMatrix bursts = burst_series(corpus, burst_options(config));
      std::vector<std::size_t> rows;
      if (features.empty()) {
        for (std::size_t f = 0; f < bursts.feature_count(); ++f) {
          if (!bursts.bursty_windows(f).empty()) rows.push_back(f);
        }
      } else {
        for (const auto& name : features) {
          auto f = bursts.find_feature(name);
          if (!f) {
            const auto stems = normalize_text(name);
            if (stems.size() == 1) f = bursts.find_feature(stems.front());
          }
          if (!f) throw std::invalid_argument(fmt::format("unknown feature \"{}\"", name));
          rows.push_back(*f);
        }
      }
      std::ostringstream csv;
      write_bursts_csv(csv, bursts, rows);
      if (out_file.empty()) {
        out << csv.str();
      } else {
        write_text(out_file, csv.str());
      }
    } else if (dump_vol->parsed()) {
      const PipelineConfig config = vol_flags.resolve();
      const auto index = load_index(inputs.index);
      const VolatilityStage stage = compute_volatility(index, config);
      std::ostringstream csv;
      write_volatility_csv(csv, index.values, stage.volatility, stage.pvi);
      if (out_file.empty()) {
        out << csv.str();
      } else {
        write_text(out_file, csv.str());
      }
    } else if (synth->parsed()) {
      SynthConfig config = synth_config;
      if (!synth_config_path.empty()) {
        std::ifstream in(synth_config_path);
        if (!in) throw InputError(synth_config_path, 0, "cannot open file");
        config = nlohmann::json::parse(in).get<SynthConfig>();
        // Flags given explicitly still win over the file.
        for (const auto* opt : synth->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name();
          if (name == "--windows") config.windows = synth_config.windows;
          if (name == "--vocab") config.vocab = synth_config.vocab;
          if (name == "--docs-per-window") config.docs_per_window = synth_config.docs_per_window;
          if (name == "--doc-length") config.doc_length = synth_config.doc_length;
          if (name == "--noise") config.noise = synth_config.noise;
          if (name == "--seed") config.seed = synth_config.seed;
        }
      }
      for (const auto& text : plant_texts) config.plants.push_back(parse_plant(text));
      const SynthFixture fixture = synthesize(config);
      for (const auto& warning : fixture.warnings) err << "warning: " << warning << '\n';
      write_fixture(fixture, out_dir);
      out << fmt::format("{} documents, {} windows written to {}\n", fixture.records.size(),
                         fixture.index_dates.size(), out_dir);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace priming
