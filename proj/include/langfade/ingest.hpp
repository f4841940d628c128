#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "langfade/lexicon.hpp"

namespace langfade {

inline constexpr double kDefaultCorpusSize = 8.4e10;

struct NgramRecord {
  std::string token;
  int year = 0;
  std::uint64_t match_count = 0;
  std::uint64_t volume_count = 0;
};

struct YearCounts {
  std::uint64_t n_ra = 0;
  std::uint64_t n_se = 0;
  std::uint64_t total() const { return n_ra + n_se; }
  friend bool operator==(const YearCounts&, const YearCounts&) = default;
};

struct VariantCounts {
  std::string lemma;
  std::map<int, YearCounts> by_year;
  std::map<int, std::uint64_t> archaic_by_year;
  friend bool operator==(const VariantCounts&, const VariantCounts&) = default;
};

struct FractionPoint {
  double t = 0.0;  // years since t0_year
  double s = 0.0;  // n_se / n_total
  std::uint64_t n_total = 0;
};

struct FractionSeries {
  std::string lemma;
  int t0_year = 1750;
  std::vector<FractionPoint> points;
};

struct VerbFrequency {
  std::string lemma;
  double nu = 0.0;
};

struct YearRange {
  int first = 0;
  int last = 0;
  bool contains(int year) const { return year >= first && year <= last; }
};

struct ArchaicReport {
  std::string lemma;
  int cutoff_year = 1700;
  std::uint64_t total_after_cutoff = 0;  // counts at or after cutoff_year
  std::uint64_t total_before_cutoff = 0;
  std::map<int, std::uint64_t> by_year;  // years >= cutoff_year only
  bool flagged() const { return total_after_cutoff != 0; }
};

/// Parses `token<TAB>year<TAB>match_count<TAB>volume_count`. The token is NFC
/// normalized; nothing else is touched. Throws DataError quoting the line.
NgramRecord parse_ngram_line(std::string_view line);

/// Streaming per-verb tally. Records are matched by exact (NFC) token equality
/// against every verb's ten modern forms and its archaic forms. A surface form
/// shared by several verbs counts for each of them.
class CountAggregator {
 public:
  CountAggregator(std::span<const VerbEntry> lexicon, YearRange range);

  void add(const NgramRecord& rec);
  /// Commutative merge of another aggregator built over the same lexicon.
  void merge(const CountAggregator& other);
  /// One VariantCounts per lexicon verb, in lexicon order.
  const std::vector<VariantCounts>& counts() const { return counts_; }

  std::uint64_t records_seen() const { return seen_; }
  std::uint64_t records_matched() const { return matched_; }

 private:
  enum class Kind : std::uint8_t { kRa, kSe, kArchaic };
  struct Target {
    std::uint32_t verb;
    Kind kind;
  };
  YearRange range_;
  std::unordered_map<std::string, std::vector<Target>> index_;
  std::vector<VariantCounts> counts_;
  std::uint64_t seen_ = 0;
  std::uint64_t matched_ = 0;
};

std::vector<VariantCounts> aggregate_counts(std::span<const NgramRecord> records,
                                            std::span<const VerbEntry> lexicon, YearRange range);

/// Calls `sink` for every record of a plain or gzip-compressed n-gram file.
/// Blank lines are skipped. Parse errors carry `path:line`. Returns the line count.
std::uint64_t read_ngram_file(const std::filesystem::path& path,
                              const std::function<void(const NgramRecord&)>& sink);

/// Lemmas with at least one ra/se token in every window of `window` years
/// tiling [start_year, end_year] (the last window may be partial), in input
/// order, with `exclusions` removed afterwards.
std::vector<std::string> apply_inclusion_filter(std::span<const VariantCounts> counts,
                                                int start_year, int end_year, int window,
                                                std::span<const std::string> exclusions = {});

/// One point per year with n_ra + n_se > 0. Years without tokens are omitted.
FractionSeries compute_fraction_series(const VariantCounts& counts, int t0_year = 1750);

/// Keeps points with t_min <= t <= t_max.
FractionSeries restrict_window(const FractionSeries& series, double t_min, double t_max);

/// nu = total ra+se tokens over all years / corpus_size.
VerbFrequency compute_frequency(const VariantCounts& counts, double corpus_size = kDefaultCorpusSize);

ArchaicReport verify_archaic_absence(const VariantCounts& counts, int cutoff_year = 1700);

}  // namespace langfade
