#include "langfade/config.hpp"

#include <charconv>
#include <fstream>

#include "langfade/error.hpp"
#include "langfade/io.hpp"
#include "langfade/unicode.hpp"

namespace langfade {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T to_int(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("config key '" + std::string(key) + "': expected an integer, got '" +
                     std::string(value) + "'");
  }
  return out;
}

double to_real(std::string_view key, std::string_view value) {
  try {
    return parse_double(value, "config key '" + std::string(key) + "'");
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

}  // namespace

std::vector<double> parse_a_grid(std::string_view spec) {
  spec = trim(spec);
  try {
    if (spec.find(':') != std::string_view::npos) {
      const auto p1 = spec.find(':');
      const auto p2 = spec.find(':', p1 + 1);
      if (p2 == std::string_view::npos) throw UsageError("a_grid range must be min:step:max");
      const double lo = parse_double(trim(spec.substr(0, p1)), "a_grid");
      const double step = parse_double(trim(spec.substr(p1 + 1, p2 - p1 - 1)), "a_grid");
      const double hi = parse_double(trim(spec.substr(p2 + 1)), "a_grid");
      return make_grid(lo, hi, step);
    }
    std::vector<double> grid;
    for (const auto& item : split_csv_line(spec)) grid.push_back(parse_double(trim(item), "a_grid"));
    return grid;
  } catch (const DataError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("a_grid: ") + e.what());
  }
}

FitOptions RunConfig::fit_options() const {
  FitOptions o;
  o.tau_min = tau_min;
  o.tau_max = tau_max;
  o.weighting = weighting;
  return o;
}

void RunConfig::set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir) {
  key = trim(key);
  value = trim(value);
  if (key == "lexicon") {
    lexicon_path = resolve(base_dir, value);
  } else if (key == "ngram") {
    ngram_paths.push_back(resolve(base_dir, value));
  } else if (key == "exclude") {
    if (value.empty()) throw UsageError("config key 'exclude': empty lemma");
    exclusions.push_back(to_nfc(value));
  } else if (key == "cdh") {
    if (value.empty()) {
      cdh_path.reset();
    } else {
      cdh_path = resolve(base_dir, value);
    }
  } else if (key == "output_dir") {
    output_dir = resolve(base_dir, value);
  } else if (key == "counts") {
    counts_path = resolve(base_dir, value);
  } else if (key == "fit_report") {
    fit_path = resolve(base_dir, value);
  } else if (key == "ingest_start_year") {
    ingest_start_year = to_int<int>(key, value);
  } else if (key == "t0_year") {
    t0_year = to_int<int>(key, value);
  } else if (key == "end_year") {
    end_year = to_int<int>(key, value);
  } else if (key == "window_years") {
    window_years = to_int<int>(key, value);
  } else if (key == "archaic_cutoff_year") {
    archaic_cutoff_year = to_int<int>(key, value);
  } else if (key == "corpus_size") {
    corpus_size = to_real(key, value);
  } else if (key == "a_grid") {
    a_grid = parse_a_grid(value);
  } else if (key == "bootstrap_repetitions") {
    bootstrap_repetitions = to_int<int>(key, value);
  } else if (key == "bootstrap_subset_size") {
    bootstrap_subset_size = to_int<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, value);
  } else if (key == "tau_min") {
    tau_min = to_real(key, value);
  } else if (key == "tau_max") {
    tau_max = to_real(key, value);
  } else if (key == "weighting") {
    if (value == "none") {
      weighting = Weighting::kNone;
    } else if (value == "binomial") {
      weighting = Weighting::kBinomial;
    } else {
      throw UsageError("config key 'weighting': expected none or binomial");
    }
  } else if (key == "deming_delta") {
    deming_delta = to_real(key, value);
  } else if (key == "permutations") {
    permutations = to_int<int>(key, value);
  } else {
    throw UsageError("unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (t0_year > end_year) throw UsageError("t0_year must not exceed end_year");
  if (ingest_start_year > end_year) throw UsageError("ingest_start_year must not exceed end_year");
  if (window_years < 1) throw UsageError("window_years must be >= 1");
  if (!(corpus_size > 0.0)) throw UsageError("corpus_size must be positive");
  if (a_grid.empty()) throw UsageError("a_grid is empty");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (a_grid[i] < 0.0) throw UsageError("a_grid values must be >= 0");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1])) throw UsageError("a_grid must be strictly ascending");
  }
  if (bootstrap_repetitions < 1) throw UsageError("bootstrap_repetitions must be >= 1");
  if (bootstrap_subset_size < 1) throw UsageError("bootstrap_subset_size must be >= 1");
  if (!(tau_min > 0.0 && tau_max > tau_min)) throw UsageError("need 0 < tau_min < tau_max");
  if (!(deming_delta > 0.0)) throw UsageError("deming_delta must be positive");
  if (permutations < 0) throw UsageError("permutations must be >= 0");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path.string());
  RunConfig cfg;
  const auto base = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      cfg.set(body.substr(0, eq), body.substr(eq + 1), base);
    } catch (const UsageError& e) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace langfade
