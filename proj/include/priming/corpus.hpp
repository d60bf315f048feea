#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "priming/dates.hpp"

namespace priming {

// Error raised for malformed input files. Carries the source name and the
// 1-based line number when one applies (0 otherwise).
class InputError : public std::runtime_error {
 public:
  InputError(std::string source, std::size_t line, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

struct RawRecord {
  std::string id;
  std::string date;
  std::string text;
  std::size_t line = 0;
};

struct Document {
  std::string id;
  Date date;
  std::vector<std::string> tokens;
  // Set once tokens have been lowercased, pattern-filtered and stemmed.
  bool normalized = false;
};

using DocumentSet = std::vector<Document>;

// Half-open [start, end) window.
struct Window {
  Date start;
  Date end;
};

struct IndexSeries {
  std::vector<Window> windows;
  std::vector<double> values;

  std::size_t size() const noexcept { return windows.size(); }
  // Index of the window whose half-open interval contains `date`.
  std::optional<std::size_t> window_of(Date date) const;
};

// Builds windows from per-window start dates. Each window ends at the next
// start; the last window's length is the median of the preceding lengths.
IndexSeries make_index(std::span<const Date> starts, std::span<const double> values);

IndexSeries read_index_csv(std::istream& in, const std::string& source);
IndexSeries read_index_csv(const std::filesystem::path& path);

std::vector<RawRecord> read_documents_jsonl(std::istream& in, const std::string& source);
std::vector<RawRecord> read_documents_jsonl(const std::filesystem::path& path);

struct RecordError {
  std::size_t line;
  std::string id;
  std::string message;
};

struct IngestResult {
  DocumentSet documents;
  std::size_t dropped = 0;
  std::vector<RecordError> errors;
};

// Keeps records dated inside the index span. Records with unparseable dates
// are reported in `errors`; throws std::invalid_argument when nothing is
// retained or the index has fewer than two windows.
IngestResult ingest_documents(std::span<const RawRecord> records, const IndexSeries& index);

// Lowercases, drops digit/URL/email tokens and Porter-stems each token.
// Tokens are split on characters other than ASCII letters and digits.
std::vector<std::string> normalize_text(std::string_view text);

struct PreprocessOptions {
  double stop_word_fraction = 0.8;
  double noisy_fraction = 0.05;
  // Days with fewer articles than this skip the noisy-feature filter.
  std::size_t noisy_min_articles = 5;
};

// Normalizes tokens (once) and applies the per-day document-frequency
// filters. Documents left without tokens are retained.
DocumentSet preprocess(DocumentSet docs, const PreprocessOptions& options = {});

// Sparse term-frequency entry: position of the document inside its window
// and the occurrence count.
struct TermFrequency {
  std::uint32_t doc;
  std::uint32_t count;
};

class WindowedCorpus {
 public:
  WindowedCorpus() = default;

  std::size_t window_count() const noexcept { return windows_.size(); }
  std::size_t feature_count() const noexcept { return features_.size(); }
  std::size_t document_count() const noexcept { return documents_.size(); }

  const std::vector<Window>& windows() const noexcept { return windows_; }
  const std::vector<std::string>& features() const noexcept { return features_; }
  const std::string& feature(std::size_t f) const { return features_.at(f); }
  std::optional<std::size_t> find_feature(std::string_view name) const;

  // Documents ordered by (window, id); window w owns [window_begin(w), window_begin(w+1)).
  const DocumentSet& documents() const noexcept { return documents_; }
  std::span<const Document> window_documents(std::size_t w) const;
  std::size_t window_size(std::size_t w) const { return window_documents(w).size(); }

  std::uint64_t count(std::size_t f, std::size_t w) const { return counts_[f * windows_.size() + w]; }
  std::span<const std::uint64_t> counts(std::size_t f) const;
  std::uint64_t window_total(std::size_t w) const { return window_totals_.at(w); }
  const std::vector<std::uint64_t>& window_totals() const noexcept { return window_totals_; }
  std::uint64_t feature_total(std::size_t f) const;
  std::uint64_t grand_total() const noexcept { return grand_total_; }

  // Global document indices (into documents()) containing feature f, sorted.
  const std::vector<std::uint32_t>& doc_set(std::size_t f) const { return doc_sets_.at(f); }
  // Term-frequency vector of feature f over the documents of window w.
  std::span<const TermFrequency> tf_vector(std::size_t f, std::size_t w) const;

  friend WindowedCorpus partition_windows(DocumentSet docs, const IndexSeries& index);

 private:
  std::vector<Window> windows_;
  DocumentSet documents_;
  std::vector<std::size_t> window_offsets_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, std::size_t> feature_index_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> window_totals_;
  std::uint64_t grand_total_ = 0;
  std::vector<std::vector<std::uint32_t>> doc_sets_;
  struct TfRange {
    std::size_t feature;
    std::size_t begin;
    std::size_t end;
  };
  // Per window: entries sorted by (feature, doc) plus a feature lookup table.
  std::vector<std::vector<TermFrequency>> tf_entries_;
  std::vector<std::vector<TfRange>> tf_ranges_;
};

// Assigns each document to the window containing its date and computes the
// per-window statistics. Documents outside every window are discarded.
WindowedCorpus partition_windows(DocumentSet docs, const IndexSeries& index);

}  // namespace priming
