#include "langfade/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "langfade/error.hpp"
#include "langfade/unicode.hpp"

namespace langfade {
namespace {

std::ifstream open_input(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + std::string(what) + ": " + path.string());
  return in;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view where) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw DataError(std::string(where) + ": bad integer '" + std::string(text) + "'");
  }
  return value;
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line);
}

bool skippable(std::string_view line) {
  return line.empty() || line.front() == '#';
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw DataError(std::string(what) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_counts_csv(std::ostream& out, std::span<const VariantCounts> counts) {
  out << "lemma,year,n_ra,n_se\n";
  for (const auto& vc : counts) {
    for (const auto& [year, yc] : vc.by_year) {
      out << vc.lemma << ',' << year << ',' << yc.n_ra << ',' << yc.n_se << '\n';
    }
  }
}

std::vector<VariantCounts> parse_counts_csv(std::istream& in, std::string_view source) {
  std::vector<VariantCounts> counts;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    if (!header) {
      if (line != "lemma,year,n_ra,n_se") {
        throw DataError(where(source, line_no) + ": expected header 'lemma,year,n_ra,n_se'");
      }
      header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 4 || f[0].empty()) {
      throw DataError(where(source, line_no) + ": expected 4 fields in '" + line + "'");
    }
    const std::string lemma = to_nfc(f[0]);
    if (counts.empty() || counts.back().lemma != lemma) {
      for (const auto& vc : counts) {
        if (vc.lemma == lemma) {
          throw DataError(where(source, line_no) + ": rows for '" + lemma + "' are not contiguous");
        }
      }
      counts.push_back(VariantCounts{lemma, {}, {}});
    }
    const int year = parse_integer<int>(f[1], where(source, line_no));
    YearCounts yc{parse_integer<std::uint64_t>(f[2], where(source, line_no)),
                  parse_integer<std::uint64_t>(f[3], where(source, line_no))};
    if (!counts.back().by_year.emplace(year, yc).second) {
      throw DataError(where(source, line_no) + ": duplicate year " + f[1] + " for '" + lemma + "'");
    }
  }
  return counts;
}

std::vector<VariantCounts> read_counts_csv(const std::filesystem::path& path) {
  auto in = open_input(path, "counts file");
  return parse_counts_csv(in, path.string());
}

std::vector<CdhEntry> read_cdh_csv(const std::filesystem::path& path) {
  auto in = open_input(path, "CDH reference file");
  std::vector<CdhEntry> rows;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    if (!header) {
      if (line != "lemma,mean_se_fraction") {
        throw DataError(where(path.string(), line_no) + ": expected header 'lemma,mean_se_fraction'");
      }
      header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 2 || f[0].empty()) {
      throw DataError(where(path.string(), line_no) + ": expected 2 fields in '" + line + "'");
    }
    const double v = parse_double(f[1], where(path.string(), line_no));
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DataError(where(path.string(), line_no) + ": mean_se_fraction outside [0, 1]");
    }
    rows.push_back({to_nfc(f[0]), v});
  }
  return rows;
}

void write_fit_csv(std::ostream& out, std::span<const FitReportRow> rows) {
  out << "lemma,nu,s0,tau,sse,n_points,max_model_value\n";
  for (const auto& r : rows) {
    out << r.lemma << ',' << format_double(r.nu) << ',' << format_double(r.s0) << ','
        << format_double(r.tau) << ',' << format_double(r.sse) << ',' << r.n_points << ','
        << format_double(r.max_model_value) << '\n';
  }
}

std::vector<FitReportRow> parse_fit_csv(std::istream& in, std::string_view source) {
  std::vector<FitReportRow> rows;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    if (!header) {
      if (line != "lemma,nu,s0,tau,sse,n_points,max_model_value") {
        throw DataError(where(source, line_no) + ": unexpected fit report header");
      }
      header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 7 || f[0].empty()) {
      throw DataError(where(source, line_no) + ": expected 7 fields in '" + line + "'");
    }
    const std::string w = where(source, line_no);
    rows.push_back({f[0], parse_double(f[1], w), parse_double(f[2], w), parse_double(f[3], w),
                    parse_double(f[4], w), parse_integer<std::size_t>(f[5], w), parse_double(f[6], w)});
  }
  return rows;
}

std::vector<FitReportRow> read_fit_csv(const std::filesystem::path& path) {
  auto in = open_input(path, "fit report");
  return parse_fit_csv(in, path.string());
}

void write_columns_csv(std::ostream& out, std::span<const std::string> names,
                       std::span<const std::vector<double>> columns) {
  if (names.size() != columns.size()) throw std::invalid_argument("column name count mismatch");
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw std::invalid_argument("columns differ in length");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
    out << '\n';
  }
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_columns_csv(
    const std::filesystem::path& path) {
  auto in = open_input(path, "CSV file");
  std::string line;
  int line_no = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    auto f = split_csv_line(line);
    if (names.empty()) {
      names = std::move(f);
      columns.resize(names.size());
      continue;
    }
    if (f.size() != names.size()) {
      throw DataError(where(path.string(), line_no) + ": wrong field count");
    }
    for (std::size_t j = 0; j < f.size(); ++j) {
      columns[j].push_back(parse_double(f[j], where(path.string(), line_no)));
    }
  }
  return {std::move(names), std::move(columns)};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp);
    out << content;
    if (!out) throw DataError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace langfade
