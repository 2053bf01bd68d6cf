// Acceptance gate. Each criterion prints one PASS/FAIL line with its measured
// values; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oddsinv/diagnostics.hpp"
#include "oddsinv/experiment.hpp"
#include "oddsinv/fnch.hpp"
#include "oddsinv/model.hpp"
#include "oddsinv/rng.hpp"
#include "oddsinv/samplers.hpp"
#include "oddsinv/special_functions.hpp"

using namespace oddsinv;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240501;
constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

// Random partition of r cells into k nonempty blocks.
Partition random_partition(std::size_t r, std::size_t k, Rng& rng) {
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = r; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, 0, i - 1)]);
  std::vector<std::vector<std::size_t>> blocks(k);
  for (std::size_t i = 0; i < r; ++i)
    blocks[i < k ? i : uniform_index(rng, 0, k - 1)].push_back(order[i]);
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return Partition(r, std::move(blocks));
}

// Integer contrast whose coefficients sum to zero inside every block; no column is all zero.
ContrastMatrix random_margin_free_contrast(const Partition& p, std::size_t d, Rng& rng) {
  const std::size_t r = p.cell_count();
  std::vector<double> data(r * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double* col = data.data() + j * r;
    bool nonzero = false;
    while (!nonzero) {
      for (const auto& block : p.blocks()) {
        double sum = 0.0;
        for (std::size_t m = 0; m + 1 < block.size(); ++m) {
          col[block[m]] = static_cast<double>(uniform_index(rng, 0, 6)) - 3.0;
          sum += col[block[m]];
        }
        col[block.back()] = -sum;
      }
      nonzero = std::any_of(col, col + r, [](double v) { return v != 0.0; });
    }
  }
  return ContrastMatrix(r, d, std::move(data));
}

std::vector<double> random_alpha(std::size_t r, Rng& rng) {
  std::vector<double> a(r);
  for (auto& v : a) v = 0.5 + 2.5 * rng.uniform();
  return a;
}

CountVector random_counts(std::size_t r, Rng& rng) {
  std::vector<std::uint64_t> x(r);
  for (auto& v : x) v = uniform_index(rng, 0, 10);
  return CountVector(std::move(x));
}

// Every count vector of length r with total n.
std::vector<CountVector> all_tables(std::size_t r, std::uint64_t n) {
  std::vector<CountVector> out;
  std::vector<std::uint64_t> x(r, 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t left) {
    if (i + 1 == r) {
      x[i] = left;
      out.emplace_back(x);
      return;
    }
    for (std::uint64_t v = 0; v <= left; ++v) {
      x[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

// Every set partition of {0, ..., r-1}, by restricted growth strings.
std::vector<Partition> all_partitions(std::size_t r) {
  std::vector<Partition> out;
  std::vector<std::size_t> label(r, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == r) {
      std::vector<std::vector<std::size_t>> blocks(used);
      for (std::size_t c = 0; c < r; ++c) blocks[label[c]].push_back(c);
      out.emplace_back(r, std::move(blocks));
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

CfComparison closed_form_gap(const DirichletPrior& prior, const CountVector& x,
                             const ContrastMatrix& c, std::size_t j, const Partition& p,
                             std::span<const double> t) {
  const auto column = c.column(j);
  const auto u = tabulate_cf(t, Scheme::unconstrained, [&](double tk) {
    return cf_logpsi_dirichlet(tk, prior, x, column, p, Scheme::unconstrained);
  });
  const auto k = tabulate_cf(t, Scheme::constrained, [&](double tk) {
    return cf_logpsi_dirichlet(tk, prior, x, column, p, Scheme::constrained);
  });
  return cf_grid_compare(u, k);
}

// ---------------------------------------------------------------------------

Outcome margin_free_invariance() {
  const std::size_t draws = 100000;
  const auto t = linear_grid(-10.0, 10.0, 401);
  struct Instance {
    DirichletPrior prior;
    CountVector x;
    Partition p;
    ContrastMatrix c;
  };
  std::vector<Instance> instances;
  instances.push_back({DirichletPrior({1, 1, 1, 1}), CountVector({7, 1, 1, 1}), Partition::rows(2, 2),
                       odds_ratio_2x2()});
  Rng gen(kSeed, 11);
  while (instances.size() < 21) {
    const std::size_t r = uniform_index(gen, 2, 8);
    const std::size_t k = uniform_index(gen, 1, r - 1);
    const std::size_t d = uniform_index(gen, 1, 3);
    Partition p = random_partition(r, k, gen);
    ContrastMatrix c = random_margin_free_contrast(p, d, gen);
    instances.push_back({DirichletPrior(random_alpha(r, gen)), random_counts(r, gen), std::move(p),
                         std::move(c)});
  }

  std::size_t tests = 0;
  for (const auto& in : instances) tests += in.c.cols();
  const double level = 0.01 / static_cast<double>(tests);

  double worst_cf = 0.0;
  double worst_ks_ratio = 0.0;
  std::size_t rejected = 0;
  bool all_free = true;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& in = instances[i];
    all_free = all_free && margin_free(in.c, in.p);
    for (std::size_t j = 0; j < in.c.cols(); ++j)
      worst_cf = std::max(worst_cf, closed_form_gap(in.prior, in.x, in.c, j, in.p, t).max_abs_diff);
    Rng ru(kSeed + i, Stream::unconstrained);
    Rng rc(kSeed + i, Stream::constrained);
    const auto u = posterior_unconstrained(in.prior, in.x, in.c, draws, ru);
    const auto c = posterior_constrained(in.prior, in.x, in.p, in.c, draws, rc);
    for (std::size_t j = 0; j < in.c.cols(); ++j) {
      const KsResult ks = ks_two_sample(u[j].values, c[j].values);
      const double threshold = ks_threshold(ks.n1, ks.n2, level);
      worst_ks_ratio = std::max(worst_ks_ratio, ks.statistic / threshold);
      if (ks.statistic > threshold) ++rejected;
    }
  }
  Outcome o;
  o.pass = all_free && worst_cf < 1e-12 && rejected == 0;
  o.detail = fmt("%zu instances, %zu columns: max CF diff %.3g (< 1e-12); KS N=%zu, "
                 "%zu rejections at family-wise 0.01 (max D/threshold %.3f)",
                 instances.size(), tests, worst_cf, draws, rejected, worst_ks_ratio);
  return o;
}

Outcome half_contrast_n2() {
  const DirichletPrior prior({1, 1, 1, 1});
  const ContrastMatrix c(std::vector<double>{0.5, 0.5, 0.5, 0.5});
  const Partition p(4, {{0, 1}, {2, 3}});
  const auto t = linear_grid(-10.0, 10.0, 401);
  double best = 0.0;
  std::string where;
  for (const auto& x : all_tables(4, 2)) {
    const auto gap = closed_form_gap(prior, x, c, 0, p, t);
    if (gap.max_abs_diff > best) {
      best = gap.max_abs_diff;
      std::ostringstream s;
      s << "x=(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ") at t=" << gap.argmax_t;
      where = s.str();
    }
  }
  return {best > 1e-6, fmt("largest CF diff over all n=2 tables %.4g (> 1e-6), %s", best, where.c_str())};
}

Outcome half_contrast_n1() {
  const DirichletPrior prior({1, 1, 1, 1});
  const ContrastMatrix c(std::vector<double>{0.5, 0.5, 0.5, 0.5});
  const Partition p(4, {{0, 1}, {2, 3}});
  const auto t = linear_grid(-10.0, 10.0, 401);
  double worst = 0.0;
  const auto tables = all_tables(4, 1);
  for (const auto& x : tables) worst = std::max(worst, closed_form_gap(prior, x, c, 0, p, t).max_abs_diff);
  return {worst < 1e-12, fmt("%zu tables with n=1: max CF diff %.3g (< 1e-12)", tables.size(), worst)};
}

Outcome dependent_prior() {
  const std::vector<double> alpha(4, 1.0);
  const CountVector x({1, 1, 1, 1});
  const Complex ratio = cf_dependent_example(1.0, alpha, x, Scheme::unconstrained) /
                        cf_dependent_example(1.0, alpha, x, Scheme::constrained);
  const double ratio_err = std::abs(ratio - 50.0 / 36.0);

  const std::size_t draws = 1000000;
  const auto t = linear_grid(-5.0, 5.0, 41);
  double worst[2] = {0.0, 0.0};
  const Scheme schemes[2] = {Scheme::unconstrained, Scheme::constrained};
  const Stream streams[2] = {Stream::dependent_unconstrained, Stream::dependent_constrained};
  for (int s = 0; s < 2; ++s) {
    Rng rng(kSeed, streams[s]);
    const WeightedSample sample = posterior_dependent_example(alpha, x, schemes[s], draws, rng);
    for (double tk : t)
      worst[s] = std::max(worst[s], std::abs(mc_cf_estimate(sample, tk) -
                                             cf_dependent_example(tk, alpha, x, schemes[s])));
  }
  Outcome o;
  o.pass = ratio_err < 1e-10 && worst[0] < 3e-3 && worst[1] < 3e-3;
  o.detail = fmt("CF ratio at t=1 %.15g vs 50/36 (error %.2g < 1e-10); MC sup error over 41 points "
                 "%.3g unconstrained, %.3g constrained (< 3e-3)",
                 ratio.real(), ratio_err, worst[0], worst[1]);
  return o;
}

Outcome conditional_part_law() {
  const std::size_t draws = 100000;
  Rng gen(kSeed, 12);
  struct Instance {
    DirichletPrior prior;
    CountVector x;
    Partition p;
    ContrastMatrix c;
  };
  std::vector<Instance> instances;
  while (instances.size() < 10) {
    const std::size_t r = uniform_index(gen, 3, 8);
    const std::size_t k = uniform_index(gen, 2, r - 1);
    const std::size_t d = uniform_index(gen, 1, 3);
    Partition p = random_partition(r, k, gen);
    std::vector<double> coef(r * d);
    for (auto& v : coef) v = 4.0 * gen.uniform() - 2.0;
    instances.push_back({DirichletPrior(random_alpha(r, gen)), random_counts(r, gen), std::move(p),
                         ContrastMatrix(r, d, std::move(coef))});
  }
  std::size_t tests = 0;
  for (const auto& in : instances) tests += in.c.cols();
  const double level = 0.01 / static_cast<double>(tests);
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& in = instances[i];
    Rng ru(kSeed + 100 + i, Stream::unconstrained);
    Rng rc(kSeed + 100 + i, Stream::constrained);
    const auto u = posterior_unconstrained(in.prior, in.x, in.p, in.c, draws, ru, Component::rho);
    const auto c = posterior_constrained(in.prior, in.x, in.p, in.c, draws, rc, Component::rho);
    for (std::size_t j = 0; j < in.c.cols(); ++j) {
      const KsResult ks = ks_two_sample(u[j].values, c[j].values);
      if (ks.statistic > ks_threshold(ks.n1, ks.n2, level)) ++rejected;
    }
  }

  // Calibration: 100 independent pairs drawn from one law, each tested at 0.01.
  const Instance& base = instances.front();
  std::size_t false_positives = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    Rng ra(kSeed + 200, static_cast<std::uint64_t>(Stream::repetition_base) + 2 * rep);
    Rng rb(kSeed + 200, static_cast<std::uint64_t>(Stream::repetition_base) + 2 * rep + 1);
    const auto a = posterior_unconstrained(base.prior, base.x, base.p, base.c, draws, ra, Component::rho);
    const auto b = posterior_constrained(base.prior, base.x, base.p, base.c, draws, rb, Component::rho);
    if (ks_two_sample(a[0].values, b[0].values).significant_at_01) ++false_positives;
  }
  Outcome o;
  o.pass = rejected == 0 && false_positives <= 3;
  o.detail = fmt("10 instances, %zu columns, N=%zu: %zu KS rejections at family-wise 0.01; "
                 "calibration %zu/100 false positives (<= 3)",
                 tests, draws, rejected, false_positives);
  return o;
}

double csv_integral(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  double prev_x = 0.0, prev_f = 0.0, total = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double f = std::stod(line.substr(comma + 1));
    if (!first) total += 0.5 * (f + prev_f) * (x - prev_x);
    prev_x = x;
    prev_f = f;
    first = false;
  }
  return total;
}

Outcome figure_separation(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.dims = {2, 2};
  cfg.counts = {7, 1, 1, 1};
  cfg.alpha = {1, 1, 1, 1};
  cfg.schemes = {Scheme::unconstrained, Scheme::constrained, Scheme::double_constrained};
  cfg.samples = 100000;
  cfg.seed = kSeed;
  cfg.out_dir = (out / "figure").string();
  cmd_figure(cfg);
  const double row_mass = csv_integral(out / "figure" / "density_row_fixed.csv");
  const double both_mass = csv_integral(out / "figure" / "density_double_fixed.csv");

  // Same streams as the command, so these are the draws behind the CSVs.
  const DirichletPrior prior(cfg.alpha);
  const CountVector x(cfg.counts);
  Rng row_rng(cfg.seed, Stream::constrained);
  const auto row_fixed =
      posterior_constrained(prior, x, Partition::rows(2, 2), odds_ratio_2x2(), cfg.samples, row_rng).front();
  Rng double_rng(cfg.seed, Stream::double_constrained);
  const auto both_fixed = posterior_double_constrained(prior, x, cfg.samples, double_rng);
  const KsResult ks = ks_weighted(row_fixed, both_fixed);
  const double ess = both_fixed.effective_sample_size();

  Outcome o;
  o.pass = ks.significant_at_01 && ess >= 1e3 && std::abs(row_mass - 1.0) <= 1e-3 &&
           std::abs(both_mass - 1.0) <= 1e-3;
  o.detail = fmt("weighted KS D=%.4f vs threshold %.4f; ESS %.0f of %zu (>= 1000); density integrals "
                 "%.6f and %.6f (1 +- 1e-3)",
                 ks.statistic, ks.threshold, ess, cfg.samples, row_mass, both_mass);
  return o;
}

// Factorial-product pmf, independent of the log-gamma code.
double multinomial_pmf_oracle(const CountVector& x, std::span<const double> theta) {
  double out = 1.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::uint64_t k = 1; k <= x[i]; ++k) out *= static_cast<double>(++n) / static_cast<double>(k) * theta[i];
  return out;
}

Outcome factorization() {
  const auto partitions = all_partitions(4);
  Rng gen(kSeed, 13);
  double worst = 0.0, worst_mass = 0.0;
  std::size_t evaluations = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto theta = sample_dirichlet(std::vector<double>(4, 1.0), gen);
    for (std::uint64_t n = 0; n <= 4; ++n) {
      double mass = 0.0;
      for (const auto& x : all_tables(4, n)) {
        const double oracle = multinomial_pmf_oracle(x, theta);
        const double direct = std::exp(multinomial_log_pmf(x, theta));
        worst = std::max(worst, std::abs(direct - oracle));
        mass += direct;
        for (const auto& p : partitions) {
          worst = std::max(worst, std::abs(std::exp(factorized_multinomial_log_pmf(x, theta, p)) - oracle));
          ++evaluations;
        }
      }
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
  }
  return {worst < 1e-12 && worst_mass < 1e-12,
          fmt("%zu product-form evaluations over %zu partitions, all tables n<=4: max error %.3g "
              "(< 1e-12), max |total mass - 1| %.3g",
              evaluations, partitions.size(), worst, worst_mass)};
}

Outcome concentration() {
  const std::size_t draws = 100000;
  const std::vector<double> theta0 = {0.4, 0.1, 0.2, 0.3};
  const std::vector<std::uint64_t> ns = {100, 1000, 10000};
  const DirichletPrior prior({1, 1, 1, 1});
  const Partition rows = Partition::rows(2, 2);

  std::vector<double> u_var;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    Rng rng(kSeed + k, Stream::unconstrained);
    const auto s = posterior_unconstrained(prior, rounded_counts(theta0, ns[k]), odds_ratio_2x2(), draws, rng);
    u_var.push_back(variance_estimate(s[0].values).value);
  }
  const double shrink1 = u_var[0] / u_var[1];
  const double shrink2 = u_var[1] / u_var[2];

  const ContrastMatrix half(std::vector<double>{0.5, 0.5, 0.5, 0.5});
  Rng floor_rng(kSeed, Stream::prior_floor);
  const VarianceEstimate floor = prior_tau_variance(prior, half, rows, 0, 1000000, floor_rng);
  bool above = true;
  std::string constrained;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    Rng rng(kSeed + k, Stream::constrained);
    const auto s = posterior_constrained(prior, rounded_counts(theta0, ns[k]), rows, half, draws, rng);
    const VarianceEstimate v = variance_estimate(s[0].values);
    // Sampling allowance: four standard errors of the difference of two estimates.
    const double allowance = 4.0 * std::hypot(v.standard_error, floor.standard_error);
    above = above && v.value >= floor.value - allowance;
    constrained += fmt(" %.4f", v.value);
  }
  Outcome o;
  o.pass = shrink1 >= 3.0 && shrink2 >= 3.0 && above;
  o.detail = fmt("unconstrained variance shrinks x%.2f and x%.2f per decade (>= 3); constrained "
                 "variances%s vs prior-tau floor %.4f (se %.1g)",
                 shrink1, shrink2, constrained.c_str(), floor.value, floor.standard_error);
  return o;
}

Outcome numerics() {
  double recurrence = 0.0, reflection = 0.0;
  std::size_t points = 0;
  for (int a = 0; a < 100; ++a) {
    for (int b = 0; b < 100; ++b) {
      const Complex z(-9.95 + 0.2 * a, -9.9 + 0.2 * b);
      const Complex lz = lgamma_complex(z);
      recurrence = std::max(recurrence, std::abs(lgamma_complex(z + 1.0) - lz - std::log(z)));
      const Complex lhs = lz + lgamma_complex(1.0 - z);
      const Complex rhs = std::log(kPi) - std::log(std::sin(kPi * z));
      // The identity holds on the principal branches up to a multiple of 2 pi i.
      reflection = std::max(reflection, std::hypot(lhs.real() - rhs.real(),
                                                   std::remainder(lhs.imag() - rhs.imag(), 2.0 * kPi)));
      ++points;
    }
  }

  double normalization = 0.0;
  for (double psi : {1e-6, 0.01, 0.3, 1.0, 2.7, 50.0, 1e6}) {
    for (const auto& [n1, n2, m1] : std::vector<std::array<std::uint64_t, 3>>{
             {5, 5, 5}, {10, 3, 7}, {1, 40, 20}, {60, 70, 65}, {400, 300, 350}}) {
      double total = 0.0;
      for (double v : fnch_log_pmf_support({n1, n2, m1, psi})) total += std::exp(v);
      normalization = std::max(normalization, std::abs(total - 1.0));
    }
  }

  // Central law from exact integer binomials.
  const auto choose = [](std::uint64_t n, std::uint64_t k) {
    unsigned __int128 out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
  };
  double central = 0.0;
  for (std::uint64_t n1 = 0; n1 <= 15; ++n1) {
    for (std::uint64_t n2 = 0; n2 <= 15; ++n2) {
      for (std::uint64_t m1 = 0; m1 <= n1 + n2; ++m1) {
        const FnchSupport s = fnch_support({n1, n2, m1, 1.0});
        for (std::uint64_t a = s.lo; a <= s.hi; ++a) {
          const double exact = static_cast<double>(choose(n1, a) * choose(n2, m1 - a)) /
                               static_cast<double>(choose(n1 + n2, m1));
          central = std::max(central, std::abs(std::exp(fnch_log_pmf(a, {n1, n2, m1, 1.0})) - exact));
        }
      }
    }
  }
  Outcome o;
  o.pass = recurrence < 1e-12 && reflection < 1e-12 && normalization < 1e-12 && central < 1e-12;
  o.detail = fmt("log-gamma on %zu points: recurrence %.3g, reflection %.3g (< 1e-12); noncentral "
                 "hypergeometric normalization %.3g, central reduction %.3g (< 1e-12)",
                 points, recurrence, reflection, normalization, central);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--out DIR]\n", argv[0]);
      return 1;
    }
  }
  fs::create_directories(out);

  struct Criterion {
    const char* name;
    double time_limit;  // seconds; 0 when the criterion sets none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"margin-free contrasts are invariant", 60, margin_free_invariance},
      {"half contrast differs at n=2", 10, half_contrast_n2},
      {"half contrast agrees at n=1", 5, half_contrast_n1},
      {"dependent prior breaks invariance", 120, dependent_prior},
      {"conditional part has one law", 0, conditional_part_law},
      {"row-fixed and doubly fixed posteriors separate", 0, [&] { return figure_separation(out); }},
      {"multinomial block factorization", 0, factorization},
      {"posterior concentration and prior floor", 120, concentration},
      {"log-gamma and hypergeometric numerics", 0, numerics},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", seconds);
    if (c.time_limit > 0) {
      timing += fmt(" of %.0f s", c.time_limit);
      if (seconds >= c.time_limit) o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", k + 1, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
