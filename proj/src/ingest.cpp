#include "langfade/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <memory>
#include <set>
#include <sstream>

#include "langfade/error.hpp"
#include "langfade/unicode.hpp"

namespace langfade {
namespace {

template <typename T>
bool parse_int(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string printable(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

NgramRecord parse_ngram_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::array<std::string_view, 4> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (count == fields.size()) {
      count++;
      break;
    }
    fields[count++] = line.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (count != 4) {
    throw DataError("expected 4 tab-separated fields: '" + printable(line) + "'");
  }
  NgramRecord rec;
  if (fields[0].empty()) throw DataError("empty token: '" + printable(line) + "'");
  rec.token = to_nfc(fields[0]);
  if (!parse_int(fields[1], rec.year)) {
    throw DataError("non-integer year: '" + printable(line) + "'");
  }
  if (!parse_int(fields[2], rec.match_count) || !parse_int(fields[3], rec.volume_count)) {
    throw DataError("counts must be non-negative integers: '" + printable(line) + "'");
  }
  return rec;
}

CountAggregator::CountAggregator(std::span<const VerbEntry> lexicon, YearRange range)
    : range_(range) {
  counts_.reserve(lexicon.size());
  for (std::uint32_t v = 0; v < lexicon.size(); ++v) {
    const VerbEntry& entry = lexicon[v];
    counts_.push_back(VariantCounts{entry.lemma, {}, {}});
    const VariantForms forms = expand_conjugations(entry);
    auto link = [&](const std::string& form, Kind kind) {
      auto& targets = index_[form];
      const bool dup = std::any_of(targets.begin(), targets.end(),
                                   [&](const Target& t) { return t.verb == v; });
      if (!dup) targets.push_back({v, kind});
    };
    for (const auto& f : forms.ra_forms) link(f, Kind::kRa);
    for (const auto& f : forms.se_forms) link(f, Kind::kSe);
    for (const auto& f : entry.archaic_forms) link(f, Kind::kArchaic);
  }
}

void CountAggregator::add(const NgramRecord& rec) {
  ++seen_;
  if (!range_.contains(rec.year)) return;
  const auto it = index_.find(rec.token);
  if (it == index_.end()) return;
  ++matched_;
  for (const Target& target : it->second) {
    VariantCounts& vc = counts_[target.verb];
    switch (target.kind) {
      case Kind::kRa:
        vc.by_year[rec.year].n_ra += rec.match_count;
        break;
      case Kind::kSe:
        vc.by_year[rec.year].n_se += rec.match_count;
        break;
      case Kind::kArchaic:
        vc.archaic_by_year[rec.year] += rec.match_count;
        break;
    }
  }
}

void CountAggregator::merge(const CountAggregator& other) {
  if (other.counts_.size() != counts_.size()) {
    throw std::invalid_argument("CountAggregator::merge: lexicon mismatch");
  }
  for (std::size_t v = 0; v < counts_.size(); ++v) {
    for (const auto& [year, yc] : other.counts_[v].by_year) {
      auto& mine = counts_[v].by_year[year];
      mine.n_ra += yc.n_ra;
      mine.n_se += yc.n_se;
    }
    for (const auto& [year, n] : other.counts_[v].archaic_by_year) {
      counts_[v].archaic_by_year[year] += n;
    }
  }
  seen_ += other.seen_;
  matched_ += other.matched_;
}

std::vector<VariantCounts> aggregate_counts(std::span<const NgramRecord> records,
                                            std::span<const VerbEntry> lexicon, YearRange range) {
  CountAggregator agg(lexicon, range);
  for (const auto& rec : records) agg.add(rec);
  return agg.counts();
}

std::uint64_t read_ngram_file(const std::filesystem::path& path,
                              const std::function<void(const NgramRecord&)>& sink) {
  std::unique_ptr<gzFile_s, int (*)(gzFile)> file(gzopen(path.c_str(), "rb"), gzclose);
  if (!file) throw DataError("cannot open n-gram file: " + path.string());
  gzbuffer(file.get(), 1 << 17);

  std::uint64_t line_no = 0;
  std::string line;
  std::array<char, 8192> buf{};
  bool pending = false;
  auto flush = [&]() {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (!view.empty()) {
      try {
        sink(parse_ngram_line(view));
      } catch (const DataError& e) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": " << e.what();
        throw DataError(msg.str());
      }
    }
    line.clear();
    pending = false;
  };
  while (gzgets(file.get(), buf.data(), static_cast<int>(buf.size())) != nullptr) {
    std::string_view chunk(buf.data());
    pending = true;
    if (!chunk.empty() && chunk.back() == '\n') {
      chunk.remove_suffix(1);
      line.append(chunk);
      flush();
    } else {
      line.append(chunk);
    }
  }
  int err = Z_OK;
  const char* msg = gzerror(file.get(), &err);
  if (err != Z_OK && err != Z_STREAM_END) {
    throw DataError("read error in " + path.string() + ": " + msg);
  }
  if (pending) flush();
  return line_no;
}

std::vector<std::string> apply_inclusion_filter(std::span<const VariantCounts> counts,
                                                int start_year, int end_year, int window,
                                                std::span<const std::string> exclusions) {
  if (window <= 0) throw std::invalid_argument("window must be positive");
  if (end_year < start_year) throw std::invalid_argument("start_year after end_year");
  const std::set<std::string> excluded(exclusions.begin(), exclusions.end());
  std::vector<std::string> included;
  for (const VariantCounts& vc : counts) {
    bool every_window = true;
    for (int lo = start_year; lo <= end_year && every_window; lo += window) {
      const int hi = std::min(lo + window - 1, end_year);
      std::uint64_t n = 0;
      for (auto it = vc.by_year.lower_bound(lo); it != vc.by_year.end() && it->first <= hi; ++it) {
        n += it->second.total();
      }
      every_window = n >= 1;
    }
    if (every_window && !excluded.contains(vc.lemma)) included.push_back(vc.lemma);
  }
  return included;
}

FractionSeries compute_fraction_series(const VariantCounts& counts, int t0_year) {
  FractionSeries series{counts.lemma, t0_year, {}};
  for (const auto& [year, yc] : counts.by_year) {
    const std::uint64_t n = yc.total();
    if (n == 0) continue;
    series.points.push_back(
        {static_cast<double>(year - t0_year), static_cast<double>(yc.n_se) / static_cast<double>(n), n});
  }
  return series;
}

FractionSeries restrict_window(const FractionSeries& series, double t_min, double t_max) {
  FractionSeries out{series.lemma, series.t0_year, {}};
  for (const auto& p : series.points) {
    if (p.t >= t_min && p.t <= t_max) out.points.push_back(p);
  }
  return out;
}

VerbFrequency compute_frequency(const VariantCounts& counts, double corpus_size) {
  if (!(corpus_size > 0.0)) throw std::invalid_argument("corpus_size must be positive");
  std::uint64_t total = 0;
  for (const auto& [year, yc] : counts.by_year) total += yc.total();
  if (total == 0) {
    throw DataError("verb '" + counts.lemma + "' has no subjunctive tokens; frequency undefined");
  }
  const double nu = static_cast<double>(total) / corpus_size;
  if (nu > 1.0) {
    throw DataError("verb '" + counts.lemma + "' has more tokens than the corpus size");
  }
  return {counts.lemma, nu};
}

ArchaicReport verify_archaic_absence(const VariantCounts& counts, int cutoff_year) {
  ArchaicReport report;
  report.lemma = counts.lemma;
  report.cutoff_year = cutoff_year;
  for (const auto& [year, n] : counts.archaic_by_year) {
    if (year >= cutoff_year) {
      report.total_after_cutoff += n;
      if (n > 0) report.by_year[year] = n;
    } else {
      report.total_before_cutoff += n;
    }
  }
  return report;
}

}  // namespace langfade
