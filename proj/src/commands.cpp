#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"

#include "oddsinv/diagnostics.hpp"
#include "oddsinv/error.hpp"
#include "oddsinv/experiment.hpp"
#include "oddsinv/samplers.hpp"
#include "oddsinv/special_functions.hpp"

namespace oddsinv {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string g6(double v) { return fmt("%.6g", v); }
std::string g17(double v) { return fmt("%.17g", v); }

struct Model {
  CountVector x;
  Partition p;
  ContrastMatrix c;
  DirichletPrior prior;
};

Model build_model(const ExperimentConfig& cfg) {
  cfg.validate();
  return {cfg.table(), cfg.make_partition(), cfg.make_contrast(), cfg.make_prior()};
}

bool is_table_2x2(const ExperimentConfig& cfg) {
  return cfg.cells() == 4 && cfg.dims == std::vector<std::size_t>{2, 2};
}

std::string column_label(std::size_t j) { return std::to_string(j + 1); }

// Closed-form CF of log psi_j under one single-margin scheme.
CfGrid closed_form_grid(const ExperimentConfig& cfg, const Model& m, std::size_t j, Scheme scheme,
                        std::span<const double> t) {
  if (scheme == Scheme::double_constrained)
    fail(ErrorCode::invalid_argument, "no closed-form CF exists for the doubly constrained table");
  if (cfg.prior == PriorKind::dependent)
    return tabulate_cf(t, scheme, [&](double tk) {
      return cf_dependent_example(tk, m.prior.alpha(), m.x, scheme);
    });
  const auto column = m.c.column(j);
  return tabulate_cf(t, scheme, [&](double tk) {
    return cf_logpsi_dirichlet(tk, m.prior, m.x, column, m.p, scheme);
  });
}

Stream stream_for(const ExperimentConfig& cfg, Scheme scheme) {
  if (cfg.prior == PriorKind::dependent) {
    if (scheme == Scheme::unconstrained) return Stream::dependent_unconstrained;
    if (scheme == Scheme::constrained) return Stream::dependent_constrained;
    fail(ErrorCode::invalid_argument, "dependent prior supports single-margin schemes only");
  }
  switch (scheme) {
    case Scheme::unconstrained:
      return Stream::unconstrained;
    case Scheme::constrained:
      return Stream::constrained;
    default:
      return Stream::double_constrained;
  }
}

std::vector<WeightedSample> draw_posterior(const ExperimentConfig& cfg, const Model& m,
                                           Scheme scheme) {
  Rng rng(cfg.seed, stream_for(cfg, scheme));
  if (cfg.prior == PriorKind::dependent)
    return {posterior_dependent_example(m.prior.alpha(), m.x, scheme, cfg.samples, rng)};
  switch (scheme) {
    case Scheme::unconstrained:
      return posterior_unconstrained(m.prior, m.x, m.c, cfg.samples, rng);
    case Scheme::constrained:
      return posterior_constrained(m.prior, m.x, m.p, m.c, cfg.samples, rng);
    case Scheme::double_constrained:
      if (!is_table_2x2(cfg) || !(m.c == odds_ratio_2x2()))
        fail(ErrorCode::invalid_argument,
             "the doubly constrained posterior is defined for the 2x2 odds ratio");
      return {posterior_double_constrained(m.prior, m.x, cfg.samples, rng)};
  }
  fail(ErrorCode::invalid_argument, "unknown scheme");
}

fs::path prepare_out_dir(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void emit(CommandResult& result, const fs::path& path, std::string_view contents) {
  write_file_atomic(path, contents);
  result.files.push_back(path.string());
}

std::vector<double> t_grid(const ExperimentConfig& cfg) {
  return linear_grid(cfg.t_grid.tmin, cfg.t_grid.tmax, cfg.t_grid.points);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io, "cannot rename " + tmp.string() + " to " + path.string());
}

CommandResult cmd_invariance(const ExperimentConfig& cfg) {
  const Model m = build_model(cfg);
  const auto t = t_grid(cfg);
  const bool all_margin_free = margin_free(m.c, m.p);

  CommandResult result;
  std::string& r = result.report;
  json doc;
  doc["margin_free"] = all_margin_free;
  doc["prior"] = cfg.prior == PriorKind::dirichlet ? "dirichlet" : "dependent";
  json columns = json::array();

  const auto u_draws = draw_posterior(cfg, m, Scheme::unconstrained);
  const auto c_draws = draw_posterior(cfg, m, Scheme::constrained);

  bool differs = false;
  bool condition_blocks_difference = false;
  r += "prior: " + doc["prior"].get<std::string>() + "\n";
  r += std::string("margin-free contrast: ") + (all_margin_free ? "yes" : "no") + "\n";
  const std::size_t d = cfg.prior == PriorKind::dependent ? 1 : m.c.cols();
  for (std::size_t j = 0; j < d; ++j) {
    const std::string col = "column " + column_label(j);
    const bool free_j = margin_free_column(m.c, m.p, j);
    const bool condition = meets_sample_size_condition(m.c, m.p, j, m.x.total());
    const CfComparison cmp = cf_grid_compare(closed_form_grid(cfg, m, j, Scheme::unconstrained, t),
                                             closed_form_grid(cfg, m, j, Scheme::constrained, t));
    const KsResult ks = ks_two_sample(u_draws[j].values, c_draws[j].values);
    const bool differs_j = cmp.max_abs_diff > kCfDifferenceThreshold;
    differs = differs || differs_j;
    if (!free_j && !condition && !differs_j) condition_blocks_difference = true;

    r += col + ": block sums zero = " + (free_j ? "yes" : "no") + ", sample-size condition = " +
         (free_j ? "not needed" : condition ? "holds" : "fails") + "\n";
    r += col + ": CF max |phi_u - phi_c| = " + g6(cmp.max_abs_diff) + " at t = " +
         g6(cmp.argmax_t) + "\n";
    r += col + ": KS statistic = " + g6(ks.statistic) + " (threshold " + g6(ks.threshold) +
         "), significant at 0.01 = " + (ks.significant_at_01 ? "yes" : "no") + "\n";
    columns.push_back({{"column", j + 1},
                       {"margin_free", free_j},
                       {"sample_size_condition", condition},
                       {"cf_max_abs_diff", cmp.max_abs_diff},
                       {"cf_argmax_t", cmp.argmax_t},
                       {"cf_differs", differs_j},
                       {"ks", json::parse(ks.to_json())}});
  }
  doc["columns"] = columns;

  if (differs) {
    result.exit_code = 2;
    r += "verdict: non-invariant (posteriors differ between the schemes)\n";
    if (all_margin_free && cfg.prior == PriorKind::dependent)
      r += "note: block sums vanish, but the prior ties theta^P to nu, so the posterior of nu "
           "depends on the scheme\n";
  } else {
    r += "verdict: invariant\n";
    if (condition_blocks_difference)
      r += "note: the coefficients do not sum to zero within every block, but the sample-size "
           "condition (n >= |K+| or n >= |K-|) fails, so no difference is guaranteed at this n\n";
    else if (!all_margin_free)
      r += "note: the coefficients do not sum to zero within every block; the posteriors agree at "
           "this table but differ at some other table\n";
  }
  doc["verdict"] = differs ? "non-invariant" : "invariant";

  const fs::path dir = prepare_out_dir(cfg);
  emit(result, dir / "invariance.json", doc.dump(2) + "\n");
  return result;
}

CommandResult cmd_cf(const ExperimentConfig& cfg) {
  const Model m = build_model(cfg);
  if (std::all_of(cfg.schemes.begin(), cfg.schemes.end(),
                  [](Scheme s) { return s == Scheme::double_constrained; }))
    fail(ErrorCode::invalid_argument, "no closed-form CF exists for the doubly constrained table");
  const auto t = t_grid(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  CommandResult result;
  const std::size_t d = cfg.prior == PriorKind::dependent ? 1 : m.c.cols();
  for (std::size_t j = 0; j < d; ++j) {
    const CfGrid u = closed_form_grid(cfg, m, j, Scheme::unconstrained, t);
    const CfGrid c = closed_form_grid(cfg, m, j, Scheme::constrained, t);
    validate_cf_grid(u);
    validate_cf_grid(c);
    const CfComparison cmp = cf_grid_compare(u, c);
    const std::string name = d == 1 ? "cf.csv" : "cf_col" + column_label(j) + ".csv";
    emit(result, dir / name, cf_pair_csv(u, c));
    result.report += "column " + column_label(j) + ": max |phi_u - phi_c| = " +
                     g6(cmp.max_abs_diff) + " at t = " + g6(cmp.argmax_t) + " -> " + name + "\n";
  }
  return result;
}

CommandResult cmd_figure(const ExperimentConfig& cfg) {
  const Model m = build_model(cfg);
  if (!is_table_2x2(cfg)) fail(ErrorCode::invalid_argument, "figure needs a 2x2 table");
  if (cfg.prior != PriorKind::dirichlet) fail(ErrorCode::invalid_argument, "figure needs a Dirichlet prior");
  const ContrastMatrix odds = odds_ratio_2x2();
  const Partition rows = Partition::rows(2, 2);

  Rng row_rng(cfg.seed, Stream::constrained);
  const WeightedSample row_fixed =
      posterior_constrained(m.prior, m.x, rows, odds, cfg.samples, row_rng).front();
  Rng double_rng(cfg.seed, Stream::double_constrained);
  const WeightedSample both_fixed = posterior_double_constrained(m.prior, m.x, cfg.samples, double_rng);

  const double h_row = silverman_bandwidth(row_fixed);
  const double h_both = silverman_bandwidth(both_fixed);
  const auto [row_lo, row_hi] = std::minmax_element(row_fixed.values.begin(), row_fixed.values.end());
  const auto [both_lo, both_hi] = std::minmax_element(both_fixed.values.begin(), both_fixed.values.end());
  const double lo = std::min(*row_lo - 5.0 * h_row, *both_lo - 5.0 * h_both);
  const double hi = std::max(*row_hi + 5.0 * h_row, *both_hi + 5.0 * h_both);
  const double step = std::min(h_row, h_both) / 3.0;
  const auto points = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1, 512, std::size_t{1} << 16);
  const auto grid = linear_grid(lo, hi, points);

  const DensityCurve row_curve = kde(row_fixed, h_row, grid);
  const DensityCurve both_curve = kde(both_fixed, h_both, grid);
  const KsResult ks = ks_weighted(row_fixed, both_fixed);

  CommandResult result;
  const fs::path dir = prepare_out_dir(cfg);
  emit(result, dir / "density_row_fixed.csv", row_curve.to_csv());
  emit(result, dir / "density_double_fixed.csv", both_curve.to_csv());
  emit(result, dir / "figure_ks.json", ks.to_json() + "\n");

  std::string& r = result.report;
  const Summary row_summary = summarize(row_fixed);
  const Summary both_summary = summarize(both_fixed);
  r += "row-fixed: mean log psi = " + g6(row_summary.mean) + ", sd = " + g6(row_summary.sd) +
       ", bandwidth = " + g6(h_row) + ", integral = " + g6(row_curve.integral()) + "\n";
  r += "both-fixed: mean log psi = " + g6(both_summary.mean) + ", sd = " + g6(both_summary.sd) +
       ", bandwidth = " + g6(h_both) + ", integral = " + g6(both_curve.integral()) +
       ", ESS = " + g6(both_fixed.effective_sample_size()) + " of " + std::to_string(cfg.samples) + "\n";
  if (both_fixed.degenerate_weights)
    r += "warning: importance weights are degenerate (ESS below 1% of the draws)\n";
  r += "weighted KS statistic = " + g6(ks.statistic) + " (threshold " + g6(ks.threshold) +
       "), significant at 0.01 = " + (ks.significant_at_01 ? "yes" : "no") + "\n";
  return result;
}

CommandResult cmd_analyze(const ExperimentConfig& cfg) {
  const Model m = build_model(cfg);
  const auto t = t_grid(cfg);

  std::vector<std::pair<Scheme, std::vector<WeightedSample>>> draws;
  for (Scheme s : cfg.schemes) draws.emplace_back(s, draw_posterior(cfg, m, s));

  CommandResult result;
  std::string& r = result.report;
  std::string summary_csv = "scheme,column,mean,sd,q025,q25,q50,q75,q975,ess\n";
  for (const auto& [scheme, samples] : draws) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const Summary s = summarize(samples[j]);
      summary_csv += std::string(to_string(scheme)) + "," + column_label(j);
      for (double v : {s.mean, s.sd, s.q025, s.q25, s.median, s.q75, s.q975, s.ess})
        summary_csv += "," + g17(v);
      summary_csv += "\n";
      r += std::string(to_string(scheme)) + " column " + column_label(j) + ": mean = " +
           g6(s.mean) + ", sd = " + g6(s.sd) + ", 95% interval = [" + g6(s.q025) + ", " +
           g6(s.q975) + "], ESS = " + g6(s.ess) + "\n";
      if (samples[j].degenerate_weights)
        r += "warning: importance weights for " + std::string(to_string(scheme)) +
             " are degenerate (ESS below 1% of the draws)\n";
    }
  }

  std::string compare_csv = "scheme_a,scheme_b,column,method,statistic,differs\n";
  for (std::size_t a = 0; a < draws.size(); ++a) {
    for (std::size_t b = a + 1; b < draws.size(); ++b) {
      const auto& [sa, da] = draws[a];
      const auto& [sb, db] = draws[b];
      const bool closed_form = sa != Scheme::double_constrained && sb != Scheme::double_constrained;
      const std::size_t d = std::min(da.size(), db.size());
      for (std::size_t j = 0; j < d; ++j) {
        double statistic;
        bool differs;
        if (closed_form) {
          const CfComparison cmp = cf_grid_compare(closed_form_grid(cfg, m, j, sa, t),
                                                   closed_form_grid(cfg, m, j, sb, t));
          statistic = cmp.max_abs_diff;
          differs = statistic > kCfDifferenceThreshold;
        } else {
          const KsResult ks = ks_weighted(da[j], db[j]);
          statistic = ks.statistic;
          differs = ks.significant_at_01;
        }
        const std::string method = closed_form ? "cf" : "ks";
        compare_csv += std::string(to_string(sa)) + "," + std::string(to_string(sb)) + "," +
                       column_label(j) + "," + method + "," + g17(statistic) + "," +
                       (differs ? "true" : "false") + "\n";
        r += std::string(to_string(sa)) + " vs " + std::string(to_string(sb)) + " column " +
             column_label(j) + ": " + method + " statistic = " + g6(statistic) +
             (differs ? " (differ)" : " (agree)") + "\n";
      }
    }
  }

  const fs::path dir = prepare_out_dir(cfg);
  emit(result, dir / "analyze.csv", summary_csv);
  emit(result, dir / "analyze_compare.csv", compare_csv);
  return result;
}

CommandResult cmd_concentration(const ExperimentConfig& cfg) {
  const Model m = build_model(cfg);
  if (cfg.prior != PriorKind::dirichlet)
    fail(ErrorCode::invalid_argument, "concentration study needs a Dirichlet prior");
  std::vector<double> theta0 = cfg.theta0;
  if (theta0.empty()) theta0.assign(cfg.cells(), 1.0 / static_cast<double>(cfg.cells()));

  CommandResult result;
  std::string& r = result.report;
  std::string csv = "scheme,n,column,variance\n";
  for (Scheme scheme : cfg.schemes) {
    if (scheme == Scheme::double_constrained) {
      r += "skipping the doubly constrained scheme: the study covers single-margin schemes\n";
      continue;
    }
    Rng rng(cfg.seed, stream_for(cfg, scheme));
    const auto rows = concentration_study(theta0, m.prior, m.c, m.p, cfg.n_list, scheme,
                                          cfg.samples, rng);
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < row.variance.size(); ++j) {
        csv += std::string(to_string(scheme)) + "," + std::to_string(row.n) + "," +
               column_label(j) + "," + g17(row.variance[j]) + "\n";
        r += std::string(to_string(scheme)) + " n = " + std::to_string(row.n) + " column " +
             column_label(j) + ": posterior variance = " + g6(row.variance[j]) + "\n";
      }
    }
  }

  std::string floor_csv = "column,prior_tau_variance,standard_error\n";
  Rng floor_rng(cfg.seed, Stream::prior_floor);
  for (std::size_t j = 0; j < m.c.cols(); ++j) {
    const VarianceEstimate floor = prior_tau_variance(m.prior, m.c, m.p, j, cfg.samples, floor_rng);
    floor_csv += column_label(j) + "," + g17(floor.value) + "," + g17(floor.standard_error) + "\n";
    r += "column " + column_label(j) + ": prior variance of the margin part = " + g6(floor.value) +
         " (se " + g6(floor.standard_error) + "), the constrained floor\n";
  }

  const fs::path dir = prepare_out_dir(cfg);
  emit(result, dir / "concentration.csv", csv);
  emit(result, dir / "concentration_floor.csv", floor_csv);
  return result;
}

CommandResult run_command(std::string_view name, const ExperimentConfig& cfg) {
  if (name == "invariance") return cmd_invariance(cfg);
  if (name == "cf") return cmd_cf(cfg);
  if (name == "figure") return cmd_figure(cfg);
  if (name == "analyze") return cmd_analyze(cfg);
  if (name == "concentration") return cmd_concentration(cfg);
  fail(ErrorCode::invalid_argument, "unknown command '" + std::string(name) + "'");
}

}  // namespace oddsinv
