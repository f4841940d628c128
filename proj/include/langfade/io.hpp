#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langfade/ingest.hpp"

namespace langfade {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view what);

/// Canonical counts CSV: header `lemma,year,n_ra,n_se`, verbs in input order,
/// years ascending. Archaic tallies are not part of this file.
void write_counts_csv(std::ostream& out, std::span<const VariantCounts> counts);
std::vector<VariantCounts> read_counts_csv(const std::filesystem::path& path);
std::vector<VariantCounts> parse_counts_csv(std::istream& in, std::string_view source = "<stream>");

struct CdhEntry {
  std::string lemma;
  double mean_se_fraction = 0.0;
};

/// `lemma,mean_se_fraction` with a header row; `#` lines are comments.
std::vector<CdhEntry> read_cdh_csv(const std::filesystem::path& path);

struct FitReportRow {
  std::string lemma;
  double nu = 0.0;
  double s0 = 0.0;
  double tau = 0.0;
  double sse = 0.0;
  std::size_t n_points = 0;
  double max_model_value = 0.0;
};

/// Header `lemma,nu,s0,tau,sse,n_points,max_model_value`.
void write_fit_csv(std::ostream& out, std::span<const FitReportRow> rows);
std::vector<FitReportRow> read_fit_csv(const std::filesystem::path& path);
std::vector<FitReportRow> parse_fit_csv(std::istream& in, std::string_view source = "<stream>");

/// Column-major numeric CSV; every column must have the same length.
void write_columns_csv(std::ostream& out, std::span<const std::string> names,
                       std::span<const std::vector<double>> columns);
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_columns_csv(
    const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line);

/// Writes text atomically enough for a CLI: temp file then rename.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace langfade
