#include "priming/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "priming/porter_stemmer.hpp"

namespace priming {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool looks_like_url(std::string_view token) {
  return token.find("://") != std::string_view::npos || token.starts_with("www.");
}

bool looks_like_email(std::string_view token) {
  const auto at = token.find('@');
  if (at == std::string_view::npos || at == 0) return false;
  const auto dot = token.find('.', at + 1);
  return dot != std::string_view::npos && dot > at + 1 && dot + 1 < token.size();
}

void append_normalized(std::string_view raw, std::vector<std::string>& out) {
  std::string lower(raw);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (looks_like_url(lower) || looks_like_email(lower)) return;
  std::size_t i = 0;
  while (i < lower.size()) {
    while (i < lower.size() && !is_ascii_alnum(lower[i])) ++i;
    const std::size_t start = i;
    bool has_digit = false;
    while (i < lower.size() && is_ascii_alnum(lower[i])) {
      has_digit = has_digit || (lower[i] >= '0' && lower[i] <= '9');
      ++i;
    }
    if (i == start || has_digit) continue;
    std::string stem = porter_stem(std::string_view(lower).substr(start, i - start));
    if (!stem.empty()) out.push_back(std::move(stem));
  }
}

}  // namespace

InputError::InputError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", source, line, message)
                                  : fmt::format("{}: {}", source, message)),
      source_(std::move(source)),
      line_(line) {}

std::optional<std::size_t> IndexSeries::window_of(Date date) const {
  auto it = std::upper_bound(windows.begin(), windows.end(), date,
                             [](Date d, const Window& w) { return d < w.start; });
  if (it == windows.begin()) return std::nullopt;
  --it;
  if (date >= it->end) return std::nullopt;
  return static_cast<std::size_t>(it - windows.begin());
}

IndexSeries make_index(std::span<const Date> starts, std::span<const double> values) {
  if (starts.size() != values.size()) {
    throw std::invalid_argument("index: dates and values differ in length");
  }
  if (starts.size() < 2) throw std::invalid_argument("index: at least two windows are required");
  std::vector<int> lengths;
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const auto days = (starts[i] - starts[i - 1]).count();
    if (days <= 0) throw std::invalid_argument("index: window start dates must be strictly increasing");
    lengths.push_back(static_cast<int>(days));
  }
  std::vector<int> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  const int last_length = sorted[(sorted.size() - 1) / 2];

  IndexSeries index;
  index.values.assign(values.begin(), values.end());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Date end = i + 1 < starts.size() ? starts[i + 1] : starts[i] + std::chrono::days{last_length};
    index.windows.push_back({starts[i], end});
  }
  return index;
}

IndexSeries read_index_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Date> starts;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "date,value") throw InputError(source, line_no, "expected header \"date,value\"");
      header_seen = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) throw InputError(source, line_no, "expected \"date,value\"");
    const auto date = parse_date(trim(row.substr(0, comma)));
    if (!date) throw InputError(source, line_no, "malformed date");
    const std::string value_text(trim(row.substr(comma + 1)));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(value_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value_text.size()) throw InputError(source, line_no, "malformed value");
    if (!starts.empty() && *date <= starts.back()) {
      throw InputError(source, line_no, "dates must be strictly increasing");
    }
    starts.push_back(*date);
    values.push_back(value);
  }
  if (!header_seen) throw InputError(source, 0, "empty index file");
  if (starts.size() < 2) throw InputError(source, 0, "at least two index rows are required");
  return make_index(starts, values);
}

IndexSeries read_index_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  return read_index_csv(in, path.string());
}

std::vector<RawRecord> read_documents_jsonl(std::istream& in, const std::string& source) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(source, line_no, fmt::format("invalid JSON ({})", e.what()));
    }
    if (!j.is_object()) throw InputError(source, line_no, "record is not a JSON object");
    RawRecord record;
    record.line = line_no;
    for (const char* key : {"id", "date", "text"}) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw InputError(source, line_no, fmt::format("missing string field \"{}\"", key));
      }
    }
    record.id = j["id"].get<std::string>();
    record.date = j["date"].get<std::string>();
    record.text = j["text"].get<std::string>();
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<RawRecord> read_documents_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  return read_documents_jsonl(in, path.string());
}

IngestResult ingest_documents(std::span<const RawRecord> records, const IndexSeries& index) {
  if (index.size() < 2) throw std::invalid_argument("index: at least two windows are required");
  IngestResult result;
  for (const RawRecord& record : records) {
    const auto date = parse_date(record.date);
    if (!date) {
      result.errors.push_back(
          {record.line, record.id, fmt::format("record \"{}\": malformed date \"{}\"", record.id, record.date)});
      continue;
    }
    if (!index.window_of(*date)) {
      ++result.dropped;
      continue;
    }
    Document doc;
    doc.id = record.id;
    doc.date = *date;
    for (std::string_view raw : split_whitespace(record.text)) doc.tokens.emplace_back(raw);
    result.documents.push_back(std::move(doc));
  }
  if (result.documents.empty()) {
    if (!result.errors.empty()) {
      const RecordError& first = result.errors.front();
      throw std::invalid_argument(fmt::format("no usable documents; line {}: {}", first.line, first.message));
    }
    throw std::invalid_argument("no documents fall inside the index date range");
  }
  return result;
}

std::vector<std::string> normalize_text(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view raw : split_whitespace(text)) append_normalized(raw, out);
  return out;
}

DocumentSet preprocess(DocumentSet docs, const PreprocessOptions& options) {
  for (Document& doc : docs) {
    if (doc.normalized) continue;
    std::vector<std::string> tokens;
    for (const std::string& raw : doc.tokens) append_normalized(raw, tokens);
    doc.tokens = std::move(tokens);
    doc.normalized = true;
  }

  std::map<Date, std::vector<std::size_t>> by_day;
  for (std::size_t i = 0; i < docs.size(); ++i) by_day[docs[i].date].push_back(i);

  for (const auto& [day, members] : by_day) {
    std::unordered_map<std::string, std::size_t> df;
    for (std::size_t i : members) {
      std::unordered_set<std::string_view> seen;
      for (const std::string& t : docs[i].tokens) {
        if (seen.insert(t).second) ++df[t];
      }
    }
    const double n = static_cast<double>(members.size());
    const bool noisy_filter = members.size() >= options.noisy_min_articles;
    std::unordered_set<std::string> removed;
    for (const auto& [feature, count] : df) {
      const double fraction = static_cast<double>(count) / n;
      if (fraction > options.stop_word_fraction || (noisy_filter && fraction < options.noisy_fraction)) {
        removed.insert(feature);
      }
    }
    if (removed.empty()) continue;
    for (std::size_t i : members) {
      auto& tokens = docs[i].tokens;
      std::erase_if(tokens, [&](const std::string& t) { return removed.contains(t); });
    }
  }
  return docs;
}

std::optional<std::size_t> WindowedCorpus::find_feature(std::string_view name) const {
  auto it = feature_index_.find(std::string(name));
  if (it == feature_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Document> WindowedCorpus::window_documents(std::size_t w) const {
  const std::size_t begin = window_offsets_.at(w);
  const std::size_t end = window_offsets_.at(w + 1);
  return std::span<const Document>(documents_).subspan(begin, end - begin);
}

std::span<const std::uint64_t> WindowedCorpus::counts(std::size_t f) const {
  return std::span<const std::uint64_t>(counts_).subspan(f * windows_.size(), windows_.size());
}

std::uint64_t WindowedCorpus::feature_total(std::size_t f) const {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts(f)) total += c;
  return total;
}

std::span<const TermFrequency> WindowedCorpus::tf_vector(std::size_t f, std::size_t w) const {
  const auto& ranges = tf_ranges_.at(w);
  auto it = std::lower_bound(ranges.begin(), ranges.end(), f,
                             [](const TfRange& r, std::size_t feature) { return r.feature < feature; });
  if (it == ranges.end() || it->feature != f) return {};
  return std::span<const TermFrequency>(tf_entries_[w]).subspan(it->begin, it->end - it->begin);
}

WindowedCorpus partition_windows(DocumentSet docs, const IndexSeries& index) {
  WindowedCorpus corpus;
  corpus.windows_ = index.windows;
  const std::size_t W = index.size();

  std::vector<std::pair<std::size_t, Document>> placed;
  placed.reserve(docs.size());
  for (Document& doc : docs) {
    if (auto w = index.window_of(doc.date)) placed.emplace_back(*w, std::move(doc));
  }
  std::sort(placed.begin(), placed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.id, a.second.date, a.second.tokens) <
           std::tie(b.first, b.second.id, b.second.date, b.second.tokens);
  });

  corpus.window_offsets_.assign(W + 1, 0);
  for (const auto& [w, doc] : placed) ++corpus.window_offsets_[w + 1];
  for (std::size_t w = 0; w < W; ++w) corpus.window_offsets_[w + 1] += corpus.window_offsets_[w];

  std::vector<std::size_t> window_of_doc;
  window_of_doc.reserve(placed.size());
  for (auto& [w, doc] : placed) {
    window_of_doc.push_back(w);
    corpus.documents_.push_back(std::move(doc));
  }

  std::vector<std::string> features;
  for (const Document& doc : corpus.documents_) {
    features.insert(features.end(), doc.tokens.begin(), doc.tokens.end());
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  corpus.features_ = std::move(features);
  for (std::size_t f = 0; f < corpus.features_.size(); ++f) corpus.feature_index_[corpus.features_[f]] = f;

  const std::size_t F = corpus.features_.size();
  corpus.counts_.assign(F * W, 0);
  corpus.window_totals_.assign(W, 0);
  corpus.doc_sets_.assign(F, {});
  corpus.tf_entries_.assign(W, {});
  corpus.tf_ranges_.assign(W, {});

  std::vector<std::vector<std::pair<std::size_t, TermFrequency>>> per_window(W);
  for (std::size_t d = 0; d < corpus.documents_.size(); ++d) {
    const std::size_t w = window_of_doc[d];
    const auto local = static_cast<std::uint32_t>(d - corpus.window_offsets_[w]);
    std::map<std::size_t, std::uint32_t> tf;
    for (const std::string& t : corpus.documents_[d].tokens) ++tf[corpus.feature_index_.at(t)];
    for (const auto& [f, c] : tf) {
      corpus.counts_[f * W + w] += c;
      corpus.doc_sets_[f].push_back(static_cast<std::uint32_t>(d));
      per_window[w].push_back({f, TermFrequency{local, c}});
    }
    corpus.window_totals_[w] += corpus.documents_[d].tokens.size();
  }
  for (std::uint64_t n : corpus.window_totals_) corpus.grand_total_ += n;

  for (std::size_t w = 0; w < W; ++w) {
    auto& entries = per_window[w];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& flat = corpus.tf_entries_[w];
    auto& ranges = corpus.tf_ranges_[w];
    for (std::size_t i = 0; i < entries.size();) {
      const std::size_t f = entries[i].first;
      const std::size_t begin = flat.size();
      while (i < entries.size() && entries[i].first == f) flat.push_back(entries[i++].second);
      ranges.push_back({f, begin, flat.size()});
    }
  }
  return corpus;
}

}  // namespace priming
