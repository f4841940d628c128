#include "langfade/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "langfade/dynamics.hpp"
#include "langfade/error.hpp"
#include "langfade/fit.hpp"
#include "langfade/ingest.hpp"
#include "langfade/io.hpp"
#include "langfade/kernels.hpp"
#include "langfade/lexicon.hpp"
#include "langfade/stats.hpp"
#include "langfade/svg.hpp"

namespace langfade {
namespace {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::filesystem::path with_extension(std::filesystem::path p, const char* ext) {
  p.replace_extension(ext);
  return p;
}

Json regression_json(const RegressionResult& r) {
  return Json{{"method", method_name(r.method)}, {"slope", number_or_null(r.slope)},
              {"intercept", number_or_null(r.intercept)}, {"r", number_or_null(r.r)},
              {"p_value", number_or_null(r.p_value)}, {"n", r.n}};
}

Json power_law_json(const PowerLawFit& f) {
  return Json{{"beta", number_or_null(f.beta)}, {"log_intercept", number_or_null(f.log_intercept)},
              {"slope", number_or_null(f.slope)}, {"r", number_or_null(f.r)},
              {"p_value", number_or_null(f.p_value)}, {"n", f.n}};
}

}  // namespace

int cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.lexicon_path.empty()) throw UsageError("ingest: no lexicon configured (key 'lexicon')");
  if (cfg.ngram_paths.empty()) throw UsageError("ingest: no n-gram files configured (key 'ngram')");

  const auto lexicon = load_lexicon(cfg.lexicon_path);
  CountAggregator agg(lexicon, {cfg.ingest_start_year, cfg.end_year});
  for (const auto& path : cfg.ngram_paths) {
    const auto lines = read_ngram_file(path, [&](const NgramRecord& rec) { agg.add(rec); });
    if (lines == 0) log << "warning: n-gram file is empty: " << path.string() << "\n";
  }
  const auto& counts = agg.counts();

  std::ostringstream csv;
  write_counts_csv(csv, counts);
  write_text_file(cfg.counts_file(), csv.str());

  const auto included =
      apply_inclusion_filter(counts, cfg.t0_year, cfg.end_year, cfg.window_years, cfg.exclusions);
  std::ostringstream inc;
  for (const auto& lemma : included) inc << lemma << "\n";
  write_text_file(cfg.output_dir / "included_verbs.txt", inc.str());

  Json verbs = Json::array();
  bool any_flagged = false;
  for (const auto& vc : counts) {
    const ArchaicReport rep = verify_archaic_absence(vc, cfg.archaic_cutoff_year);
    if (rep.total_before_cutoff == 0 && rep.total_after_cutoff == 0) continue;
    Json by_year = Json::object();
    for (const auto& [year, n] : rep.by_year) by_year[std::to_string(year)] = n;
    verbs.push_back(Json{{"lemma", rep.lemma}, {"total_before_cutoff", rep.total_before_cutoff},
                         {"total_after_cutoff", rep.total_after_cutoff}, {"by_year", by_year},
                         {"flagged", rep.flagged()}});
    any_flagged = any_flagged || rep.flagged();
  }
  const Json archaic{{"cutoff_year", cfg.archaic_cutoff_year}, {"any_flagged", any_flagged}, {"verbs", verbs}};
  write_text_file(cfg.output_dir / "archaic_report.json", dump(archaic));

  log << "ingest: " << agg.records_seen() << " records, " << agg.records_matched() << " matched, "
      << included.size() << " of " << counts.size() << " verbs pass the " << cfg.window_years
      << "-year window filter\n";
  if (any_flagged) log << "note: archaic forms found at or after " << cfg.archaic_cutoff_year << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto counts = read_counts_csv(cfg.counts_file());
  const auto included =
      apply_inclusion_filter(counts, cfg.t0_year, cfg.end_year, cfg.window_years, cfg.exclusions);
  const std::set<std::string> included_set(included.begin(), included.end());

  std::vector<std::string> excluded;
  std::vector<std::string> failed;
  std::vector<FractionSeries> series;
  std::map<std::string, double> nu;
  for (const auto& vc : counts) {
    if (!included_set.contains(vc.lemma)) {
      excluded.push_back(vc.lemma);
      continue;
    }
    auto fs = restrict_window(compute_fraction_series(vc, cfg.t0_year), 0.0,
                              static_cast<double>(cfg.end_year - cfg.t0_year));
    if (fs.points.size() < 3) {
      log << "warning: '" << vc.lemma << "' has fewer than 3 points in the fit window; skipped\n";
      failed.push_back(vc.lemma);
      continue;
    }
    nu[vc.lemma] = compute_frequency(vc, cfg.corpus_size).nu;
    series.push_back(std::move(fs));
  }
  if (series.empty()) throw FitError("fit: no verbs left to fit");

  FitOptions options = cfg.fit_options();
  options.drop_failed_verbs = true;
  GlobalFit global = fit_global(series, cfg.a_grid, options);
  for (const auto& lemma : global.failed) {
    log << "warning: fit failed for '" << lemma << "'; skipped\n";
    failed.push_back(lemma);
  }
  std::vector<FractionSeries> fitted;
  for (auto& fs : series) {
    if (std::find(global.failed.begin(), global.failed.end(), fs.lemma) == global.failed.end()) {
      fitted.push_back(std::move(fs));
    }
  }

  const std::size_t subset = std::min(cfg.bootstrap_subset_size, fitted.size());
  options.drop_failed_verbs = false;
  const BootstrapResult boot =
      bootstrap_a(fitted, cfg.bootstrap_repetitions, subset, cfg.seed, cfg.a_grid, options);
  const bool boot_degenerate = boot.degenerate || fitted.size() < 2 || subset < cfg.bootstrap_subset_size;
  global.a_sd = boot.sd;
  if (boot_degenerate) log << "warning: bootstrap is degenerate (too few verbs or repetitions)\n";

  std::vector<FitReportRow> rows;
  Json boundary = Json::array();
  Json above_one = Json::array();
  for (const auto& vf : global.verb_fits) {
    rows.push_back({vf.lemma, nu.at(vf.lemma), vf.params.s0, vf.params.tau, vf.sse, vf.n_points,
                    vf.max_model_value});
    if (vf.tau_at_bound) boundary.push_back(vf.lemma);
    if (vf.max_model_value > 1.0) above_one.push_back(vf.lemma);
  }
  std::ostringstream csv;
  write_fit_csv(csv, rows);
  write_text_file(cfg.fit_file(), csv.str());

  Json grid = Json::array();
  for (const auto& [a, sse] : global.grid_sse) grid.push_back(Json::array({a, sse}));
  const Json summary{
      {"a", global.a},
      {"a_sd", global.a_sd},
      {"total_sse", global.total_sse},
      {"excluded", excluded},
      {"failed", failed},
      {"n_verbs", global.verb_fits.size()},
      {"t0_year", cfg.t0_year},
      {"end_year", cfg.end_year},
      {"tau_bounds", Json::array({cfg.tau_min, cfg.tau_max})},
      {"weighting", cfg.weighting == Weighting::kBinomial ? "binomial" : "none"},
      {"tau_at_bound", boundary},
      {"model_exceeds_one", above_one},
      {"bootstrap",
       Json{{"mean", boot.mean}, {"sd", boot.sd}, {"repetitions", cfg.bootstrap_repetitions},
            {"subset_size", subset}, {"seed", cfg.seed}, {"failures", boot.failures},
            {"degenerate", boot_degenerate}, {"samples", boot.samples}}},
      {"grid_sse", grid},
      {"kernel_isa", kernels::isa_name(kernels::active_isa())},
  };
  write_text_file(cfg.output_dir / "fit_summary.json", dump(summary));
  log << "fit: a = " << global.a << " +/- " << global.a_sd << " over " << global.verb_fits.size()
      << " verbs, total sse " << global.total_sse << "\n";
  return kExitOk;
}

SimulateMode parse_simulate_mode(const std::string& text) {
  if (text == "discrete") return SimulateMode::kDiscrete;
  if (text == "continuous") return SimulateMode::kContinuous;
  if (text == "phase") return SimulateMode::kPhase;
  throw UsageError("unknown simulate mode '" + text + "' (expected discrete, continuous or phase)");
}

int cmd_simulate(const SimulateRequest& req, std::ostream& log) {
  if (!(req.t_max >= 0.0)) throw UsageError("simulate: t_max must be >= 0");
  if (!(req.dt > 0.0)) throw UsageError("simulate: dt must be > 0");
  if (req.output.empty()) throw UsageError("simulate: no output path");

  std::vector<std::string> names;
  std::vector<std::vector<double>> cols(3);
  try {
    if (req.mode == SimulateMode::kDiscrete) {
      const DiscreteParams p{req.c, req.gamma, req.e_r, req.e_s};
      const auto steps = static_cast<std::size_t>(std::floor(req.t_max));
      const auto traj = iterate_discrete({req.r_init, req.s_init}, p, steps);
      names = {"t", "s", "r"};
      for (std::size_t k = 0; k < traj.size(); ++k) {
        cols[0].push_back(static_cast<double>(k));
        cols[1].push_back(traj[k].s);
        cols[2].push_back(traj[k].r);
      }
    } else {
      const ContinuousParams p{req.a, req.tau, req.s0};
      p.validate();
      const std::vector<double> grid = make_grid(0.0, req.t_max, req.dt);
      names = {"t", "s", "e_s"};
      cols[0] = grid;
      if (req.mode == SimulateMode::kContinuous) {
        for (double t : grid) {
          cols[1].push_back(closed_form_s(t, p));
          cols[2].push_back(forcing(t, p) / p.tau);
        }
      } else {
        for (const auto& st : integrate_phase({p.s0, p.a}, p.tau, grid)) {
          cols[1].push_back(st.s);
          cols[2].push_back(st.e_s);
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("simulate: ") + e.what());
  }

  std::ostringstream csv;
  write_columns_csv(csv, names, cols);
  write_text_file(req.output, csv.str());
  if (req.svg) {
    SvgPlot plot;
    plot.title = "s(t)";
    plot.x_label = "t (years)";
    plot.y_label = "s";
    for (std::size_t i = 0; i < cols[0].size(); ++i) plot.line.emplace_back(cols[0][i], cols[1][i]);
    write_text_file(with_extension(req.output, ".svg"), render_svg(plot));
  }
  log << "simulate: wrote " << cols[0].size() << " rows to " << req.output.string() << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto rows = read_fit_csv(cfg.fit_file());

  std::vector<std::string> lemmas;
  std::vector<double> taus, nus, s0s;
  for (const auto& r : rows) {
    lemmas.push_back(r.lemma);
    taus.push_back(r.tau);
    nus.push_back(r.nu);
    s0s.push_back(r.s0);
  }

  Json analysis;
  analysis["inputs"] = Json{{"lemmas", lemmas}, {"tau", taus}, {"nu", nus}, {"s0", s0s}};

  if (rows.size() >= 3) {
    const PowerLawFit pl = power_law_fit(taus, nus, cfg.deming_delta, cfg.permutations, cfg.seed);
    Json pj = power_law_json(pl);
    pj["deming_delta"] = cfg.deming_delta;
    pj["permutations"] = cfg.permutations;
    analysis["power_law"] = pj;
    SvgPlot plot{"relaxation time vs frequency of use", "nu", "tau", true, true, {}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) plot.points.emplace_back(nus[i], taus[i]);
    const auto [lo, hi] = std::minmax_element(nus.begin(), nus.end());
    for (double nu_end : {*lo, *hi}) {
      plot.line.emplace_back(nu_end, std::exp(pl.log_intercept) * std::pow(nu_end, -pl.beta));
    }
    write_text_file(cfg.output_dir / "tau_nu.svg", render_svg(plot));
  } else {
    log << "notice: fewer than 3 fitted verbs; power-law fit omitted\n";
    analysis["power_law"] = nullptr;
  }

  if (cfg.cdh_path && std::filesystem::exists(*cfg.cdh_path)) {
    const auto cdh = read_cdh_csv(*cfg.cdh_path);
    std::map<std::string, double> ref;
    for (const auto& e : cdh) ref[e.lemma] = e.mean_se_fraction;
    std::vector<std::string> joined;
    std::vector<double> x, y;
    for (const auto& r : rows) {
      if (auto it = ref.find(r.lemma); it != ref.end()) {
        joined.push_back(r.lemma);
        x.push_back(it->second);
        y.push_back(r.s0);
      }
    }
    if (x.size() >= 3) {
      const RegressionResult reg = pearson(x, y, cfg.permutations, cfg.seed);
      Json cj = regression_json(reg);
      cj["inputs"] = Json{{"lemmas", joined}, {"cdh_mean_se_fraction", x}, {"s0", y}};
      analysis["cdh"] = cj;
      SvgPlot plot{"fitted s0 vs CDH mean -se fraction", "CDH mean -se fraction", "s0", false, false, {}, {}};
      for (std::size_t i = 0; i < x.size(); ++i) plot.points.emplace_back(x[i], y[i]);
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      for (double xe : {*lo, *hi}) plot.line.emplace_back(xe, reg.intercept + reg.slope * xe);
      write_text_file(cfg.output_dir / "s0_cdh.svg", render_svg(plot));
    } else {
      log << "notice: fewer than 3 verbs shared with the CDH reference; CDH panel omitted\n";
      analysis["cdh"] = nullptr;
    }
  } else {
    log << "notice: no CDH reference file; CDH panel omitted\n";
    analysis["cdh"] = nullptr;
  }

  if (std::filesystem::exists(cfg.counts_file())) {
    const auto counts = read_counts_csv(cfg.counts_file());
    std::vector<std::pair<double, std::string>> freq;
    for (const auto& vc : counts) {
      std::uint64_t total = 0;
      for (const auto& [year, yc] : vc.by_year) total += yc.total();
      if (total > 0) freq.emplace_back(static_cast<double>(total) / cfg.corpus_size, vc.lemma);
    }
    std::stable_sort(freq.begin(), freq.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    if (freq.size() > 100) freq.resize(100);
    if (freq.size() >= 3) {
      std::vector<double> f;
      std::vector<std::string> names;
      for (const auto& [v, lemma] : freq) {
        f.push_back(v);
        names.push_back(lemma);
      }
      const PowerLawFit z = zipf_fit(f, cfg.permutations, cfg.seed);
      Json zj = power_law_json(z);
      zj["inputs"] = Json{{"lemmas", names}, {"frequency", f}};
      analysis["zipf"] = zj;
      SvgPlot plot{"rank-frequency", "rank", "frequency", true, true, {}, {}};
      for (std::size_t i = 0; i < f.size(); ++i) plot.points.emplace_back(static_cast<double>(i + 1), f[i]);
      for (double rank : {1.0, static_cast<double>(f.size())}) {
        plot.line.emplace_back(rank, std::exp(z.log_intercept) * std::pow(rank, -z.beta));
      }
      write_text_file(cfg.output_dir / "zipf.svg", render_svg(plot));
    } else {
      analysis["zipf"] = nullptr;
    }
  } else {
    log << "notice: counts file not found; Zipf check omitted\n";
    analysis["zipf"] = nullptr;
  }

  write_text_file(cfg.output_dir / "analysis.json", dump(analysis));
  if (!analysis["power_law"].is_null()) {
    log << "report: beta = " << analysis["power_law"]["beta"].get<double>()
        << ", r = " << analysis["power_law"]["r"].get<double>() << "\n";
  }
  return kExitOk;
}

}  // namespace langfade
