#include "oddsinv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "oddsinv/error.hpp"

namespace oddsinv {

namespace {

struct Weighted {
  double value;
  double weight;
};

std::vector<Weighted> sorted_pairs(std::span<const double> values, std::span<const double> weights) {
  std::vector<Weighted> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) fail(ErrorCode::domain, "sample holds a non-finite value");
    out[i] = {values[i], weights.empty() ? 1.0 : weights[i]};
  }
  std::sort(out.begin(), out.end(),
            [](const Weighted& l, const Weighted& r) { return l.value < r.value; });
  return out;
}

// Largest gap between the two (weighted) ECDFs, evaluated at every distinct value.
double ecdf_distance(const std::vector<Weighted>& a, const std::vector<Weighted>& b) {
  double total_a = 0.0;
  double total_b = 0.0;
  for (const auto& p : a) total_a += p.weight;
  for (const auto& p : b) total_b += p.weight;
  if (!(total_a > 0.0) || !(total_b > 0.0))
    fail(ErrorCode::invalid_argument, "KS test needs positive total weight");

  double cum_a = 0.0;
  double cum_b = 0.0;
  double best = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (i == a.size())
      v = b[j].value;
    else if (j == b.size())
      v = a[i].value;
    else
      v = std::min(a[i].value, b[j].value);
    while (i < a.size() && a[i].value == v) cum_a += a[i++].weight;
    while (j < b.size() && b[j].value == v) cum_b += b[j++].weight;
    best = std::max(best, std::abs(cum_a / total_a - cum_b / total_b));
  }
  return std::min(best, 1.0);
}

KsResult make_result(double statistic, double n1, double n2) {
  KsResult r;
  r.statistic = statistic;
  r.n1 = n1;
  r.n2 = n2;
  r.threshold = ks_threshold(n1, n2);
  r.significant_at_01 = statistic > r.threshold;
  return r;
}

void validate_weights(const WeightedSample& s) {
  if (s.values.empty()) fail(ErrorCode::invalid_argument, "empty sample");
  if (s.weights.size() != s.values.size())
    fail(ErrorCode::invalid_argument, "sample values and weights differ in length");
  for (double w : s.weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      fail(ErrorCode::invalid_argument, "weights must be finite and nonnegative");
}

}  // namespace

std::string KsResult::to_json() const {
  nlohmann::ordered_json j;
  j["statistic"] = statistic;
  j["n1"] = n1;
  j["n2"] = n2;
  j["threshold"] = threshold;
  j["significant_at_01"] = significant_at_01;
  return j.dump(2);
}

double kolmogorov_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::invalid_argument, "level must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(0.5 * level));
}

double ks_threshold(double n1, double n2) {
  return kKolmogorovCritical01 * std::sqrt((n1 + n2) / (n1 * n2));
}

double ks_threshold(double n1, double n2, double level) {
  return kolmogorov_critical(level) * std::sqrt((n1 + n2) / (n1 * n2));
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::invalid_argument, "KS test needs two nonempty samples");
  const double d = ecdf_distance(sorted_pairs(a, {}), sorted_pairs(b, {}));
  return make_result(d, static_cast<double>(a.size()), static_cast<double>(b.size()));
}

KsResult ks_weighted(const WeightedSample& a, const WeightedSample& b) {
  validate_weights(a);
  validate_weights(b);
  const double ess_a = a.effective_sample_size();
  const double ess_b = b.effective_sample_size();
  if (ess_a < 10.0 || ess_b < 10.0)
    fail(ErrorCode::unreliable, "effective sample size below 10; KS result would be unreliable");
  const double d = ecdf_distance(sorted_pairs(a.values, a.weights), sorted_pairs(b.values, b.weights));
  return make_result(d, ess_a, ess_b);
}

CfComparison cf_grid_compare(const CfGrid& u, const CfGrid& c) {
  if (u.t != c.t || u.values.size() != u.t.size() || c.values.size() != c.t.size())
    fail(ErrorCode::invalid_argument, "CF grids differ; comparison needs identical t values");
  CfComparison out;
  for (std::size_t k = 0; k < u.t.size(); ++k) {
    const double diff = std::abs(u.values[k] - c.values[k]);
    if (diff > out.max_abs_diff || k == 0) {
      out.max_abs_diff = diff;
      out.argmax_t = u.t[k];
    }
  }
  return out;
}

Complex mc_cf_estimate(const WeightedSample& s, double t) {
  validate_weights(s);
  double re = 0.0;
  double im = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double w = s.weights[k];
    const double phase = t * s.values[k];
    re += w * std::cos(phase);
    im += w * std::sin(phase);
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorCode::invalid_argument, "sample has zero total weight");
  return {re / total, im / total};
}

double weighted_quantile(const WeightedSample& s, double q) {
  validate_weights(s);
  const auto pairs = sorted_pairs(s.values, s.weights);
  const double total = s.total_weight();
  double cum = 0.0;
  for (const auto& p : pairs) {
    cum += p.weight;
    if (cum >= q * total) return p.value;
  }
  return pairs.back().value;
}

double weighted_variance(const WeightedSample& s) {
  validate_weights(s);
  const double total = s.total_weight();
  double mean = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) mean += s.weights[k] * s.values[k];
  mean /= total;
  double var = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = s.values[k] - mean;
    var += s.weights[k] * d * d;
  }
  return var / total;
}

Summary summarize(const WeightedSample& s) {
  validate_weights(s);
  Summary out;
  const double total = s.total_weight();
  for (std::size_t k = 0; k < s.size(); ++k) out.mean += s.weights[k] * s.values[k];
  out.mean /= total;
  out.sd = std::sqrt(weighted_variance(s));
  const auto pairs = sorted_pairs(s.values, s.weights);
  const double levels[] = {0.025, 0.25, 0.5, 0.75, 0.975};
  double* targets[] = {&out.q025, &out.q25, &out.median, &out.q75, &out.q975};
  std::size_t next = 0;
  double cum = 0.0;
  for (const auto& p : pairs) {
    cum += p.weight;
    while (next < 5 && cum >= levels[next] * total) *targets[next++] = p.value;
  }
  while (next < 5) *targets[next++] = pairs.back().value;
  out.ess = s.effective_sample_size();
  return out;
}

VarianceEstimate variance_estimate(std::span<const double> values) {
  if (values.size() < 2) fail(ErrorCode::invalid_argument, "variance needs at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  return {m2 * n / (n - 1.0), std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

CountVector rounded_counts(std::span<const double> theta0, std::uint64_t n) {
  double total = 0.0;
  for (double v : theta0) {
    if (!(v > 0.0)) fail(ErrorCode::invalid_argument, "theta0 must be strictly positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::invalid_argument, "theta0 must sum to 1");
  std::vector<std::uint64_t> counts(theta0.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < theta0.size(); ++i) {
    const double exact = static_cast<double>(n) * theta0[i];
    counts[i] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return CountVector(std::move(counts));
}

std::vector<ConcentrationRow> concentration_study(std::span<const double> theta0,
                                                  const DirichletPrior& prior,
                                                  const ContrastMatrix& c, const Partition& p,
                                                  std::span<const std::uint64_t> n_list,
                                                  Scheme scheme, std::size_t draws, Rng& rng) {
  std::vector<ConcentrationRow> rows;
  for (std::uint64_t n : n_list) {
    const CountVector x = rounded_counts(theta0, n);
    std::vector<WeightedSample> samples;
    if (scheme == Scheme::unconstrained)
      samples = posterior_unconstrained(prior, x, c, draws, rng);
    else if (scheme == Scheme::constrained)
      samples = posterior_constrained(prior, x, p, c, draws, rng);
    else
      fail(ErrorCode::invalid_argument, "concentration study supports single-margin schemes only");
    ConcentrationRow row;
    row.n = n;
    for (const auto& s : samples) row.variance.push_back(weighted_variance(s));
    rows.push_back(std::move(row));
  }
  return rows;
}

VarianceEstimate prior_tau_variance(const DirichletPrior& prior, const ContrastMatrix& c,
                                    const Partition& p, std::size_t j, std::size_t draws,
                                    Rng& rng) {
  const DirichletPrior marginal = prior.aggregated(p);
  const auto coef = contrast_block_sums(c, p, j);
  std::vector<double> log_marg(p.block_count());
  std::vector<double> tau(draws);
  for (std::size_t s = 0; s < draws; ++s) {
    sample_log_dirichlet(marginal.alpha(), rng, log_marg);
    double v = 0.0;
    for (std::size_t b = 0; b < coef.size(); ++b) v += coef[b] * log_marg[b];
    tau[s] = v;
  }
  return variance_estimate(tau);
}

}  // namespace oddsinv
