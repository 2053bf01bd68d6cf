#include "oddsinv/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddsinv/error.hpp"
#include "oddsinv/fnch.hpp"

namespace oddsinv {

namespace {

std::vector<WeightedSample> make_columns(std::size_t cols, std::size_t draws) {
  std::vector<WeightedSample> out(cols);
  for (auto& s : out) {
    s.values.reserve(draws);
    s.weights.assign(draws, 1.0);
  }
  return out;
}

void check_inputs(const DirichletPrior& prior, const CountVector& x, const ContrastMatrix& c) {
  if (prior.size() != x.size() || c.rows() != x.size())
    fail(ErrorCode::partition_mismatch, "prior, counts and contrast disagree on the cell count");
}

double log_sum_exp(std::span<const double> v) {
  double top = -INFINITY;
  for (double x : v) top = std::max(top, x);
  double total = 0.0;
  for (double x : v) total += std::exp(x - top);
  return top + std::log(total);
}

// Splits log theta into log theta^P and log nu, then records the requested component.
void record_components(std::span<const double> log_theta, const Partition& p,
                       const ContrastMatrix& c, Component component,
                       std::vector<double>& log_marg, std::vector<double>& scratch,
                       std::vector<WeightedSample>& out) {
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    scratch.clear();
    for (std::size_t i : p.block(b)) scratch.push_back(log_theta[i]);
    log_marg[b] = log_sum_exp(scratch);
  }
  for (std::size_t j = 0; j < c.cols(); ++j) {
    double tau = 0.0;
    double rho = 0.0;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
      double coef_sum = 0.0;
      for (std::size_t i : p.block(b)) {
        const double coef = c(i, j);
        if (coef == 0.0) continue;
        coef_sum += coef;
        rho += coef * (log_theta[i] - log_marg[b]);
      }
      if (coef_sum != 0.0) tau += coef_sum * log_marg[b];
    }
    out[j].values.push_back(component == Component::tau ? tau
                            : component == Component::rho ? rho
                                                          : tau + rho);
  }
}

void record_log_psi(std::span<const double> log_theta, const ContrastMatrix& c,
                    std::vector<WeightedSample>& out) {
  for (std::size_t j = 0; j < c.cols(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < log_theta.size(); ++i) {
      const double coef = c(i, j);
      if (coef != 0.0) v += coef * log_theta[i];
    }
    out[j].values.push_back(v);
  }
}

double log_beta_logit(double a, double b, Rng& rng) { return rng.log_gamma(a) - rng.log_gamma(b); }

}  // namespace

WeightedSample WeightedSample::unweighted(std::vector<double> values) {
  WeightedSample s;
  s.weights.assign(values.size(), 1.0);
  s.values = std::move(values);
  return s;
}

double WeightedSample::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double WeightedSample::effective_sample_size() const { return oddsinv::effective_sample_size(weights); }

double effective_sample_size(std::span<const double> weights) {
  double total = 0.0;
  double squares = 0.0;
  for (double w : weights) {
    total += w;
    squares += w * w;
  }
  if (!(total > 0.0)) return 0.0;
  return total * total / squares;
}

std::vector<WeightedSample> posterior_unconstrained(const DirichletPrior& prior,
                                                    const CountVector& x,
                                                    const ContrastMatrix& c, std::size_t draws,
                                                    Rng& rng) {
  check_inputs(prior, x, c);
  const DirichletPrior post = prior.updated(x);
  auto out = make_columns(c.cols(), draws);
  std::vector<double> log_theta(prior.size());
  for (std::size_t s = 0; s < draws; ++s) {
    sample_log_dirichlet(post.alpha(), rng, log_theta);
    record_log_psi(log_theta, c, out);
  }
  return out;
}

std::vector<WeightedSample> posterior_unconstrained(const DirichletPrior& prior,
                                                    const CountVector& x, const Partition& p,
                                                    const ContrastMatrix& c, std::size_t draws,
                                                    Rng& rng, Component component) {
  check_inputs(prior, x, c);
  if (p.cell_count() != x.size()) fail(ErrorCode::partition_mismatch, "partition does not match table");
  const DirichletPrior post = prior.updated(x);
  auto out = make_columns(c.cols(), draws);
  std::vector<double> log_theta(prior.size());
  std::vector<double> log_marg(p.block_count());
  std::vector<double> scratch;
  for (std::size_t s = 0; s < draws; ++s) {
    sample_log_dirichlet(post.alpha(), rng, log_theta);
    record_components(log_theta, p, c, component, log_marg, scratch, out);
  }
  return out;
}

std::vector<WeightedSample> posterior_constrained(const DirichletPrior& prior,
                                                  const CountVector& x, const Partition& p,
                                                  const ContrastMatrix& c, std::size_t draws,
                                                  Rng& rng, Component component) {
  check_inputs(prior, x, c);
  if (p.cell_count() != x.size()) fail(ErrorCode::partition_mismatch, "partition does not match table");
  const DirichletPrior marginal = prior.aggregated(p);
  std::vector<std::vector<double>> block_alpha(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b)
    for (std::size_t i : p.block(b)) block_alpha[b].push_back(prior[i] + static_cast<double>(x[i]));

  auto out = make_columns(c.cols(), draws);
  std::vector<double> log_marg(p.block_count());
  std::vector<double> log_nu;
  std::vector<double> log_theta(prior.size());
  std::vector<double> scratch;
  for (std::size_t s = 0; s < draws; ++s) {
    sample_log_dirichlet(marginal.alpha(), rng, log_marg);
    for (std::size_t b = 0; b < p.block_count(); ++b) {
      const auto& block = p.block(b);
      log_nu.resize(block.size());
      sample_log_dirichlet(block_alpha[b], rng, log_nu);
      for (std::size_t k = 0; k < block.size(); ++k) log_theta[block[k]] = log_marg[b] + log_nu[k];
    }
    if (component == Component::log_psi)
      record_log_psi(log_theta, c, out);
    else
      record_components(log_theta, p, c, component, log_marg, scratch, out);
  }
  return out;
}

WeightedSample posterior_dependent_example(std::span<const double> alpha, const CountVector& x,
                                           Scheme scheme, std::size_t draws, Rng& rng) {
  if (alpha.size() != 4 || x.size() != 4)
    fail(ErrorCode::invalid_argument, "dependent-prior construction is defined for 2x2 tables");
  for (double a : alpha)
    if (!(a > 0.0)) fail(ErrorCode::invalid_argument, "Beta parameters must be positive");
  const double x1 = static_cast<double>(x[0]);
  const double x2 = static_cast<double>(x[1]);
  const double x3 = static_cast<double>(x[2]);
  const double x4 = static_cast<double>(x[3]);
  double a_first = 0.0;
  double b_first = 0.0;
  if (scheme == Scheme::unconstrained) {
    a_first = alpha[0] + 2.0 * x1 + x2;
    b_first = alpha[1] + x2 + x3 + x4;
  } else if (scheme == Scheme::constrained) {
    a_first = alpha[0] + x1;
    b_first = alpha[1] + x2;
  } else {
    fail(ErrorCode::invalid_argument, "dependent-prior sampler supports single-margin schemes only");
  }
  const double a_second = alpha[2] + x3;
  const double b_second = alpha[3] + x4;

  std::vector<double> values;
  values.reserve(draws);
  for (std::size_t s = 0; s < draws; ++s) {
    const double logit_first = log_beta_logit(a_first, b_first, rng);
    const double logit_second = log_beta_logit(a_second, b_second, rng);
    values.push_back(logit_first - logit_second);
  }
  return WeightedSample::unweighted(std::move(values));
}

WeightedSample posterior_double_constrained(const DirichletPrior& prior, const CountVector& x,
                                            std::size_t draws, Rng& rng) {
  if (prior.size() != 4 || x.size() != 4)
    fail(ErrorCode::invalid_argument, "double-margin posterior is defined for 2x2 tables");
  if (draws == 0) fail(ErrorCode::invalid_argument, "importance sampling needs at least one draw");
  const FnchLikelihood likelihood(x[0], x[0] + x[1], x[2] + x[3], x[0] + x[2]);

  WeightedSample out;
  out.values.reserve(draws);
  out.weights.reserve(draws);
  std::vector<double> log_theta(4);
  std::vector<double> log_weights;
  log_weights.reserve(draws);
  for (std::size_t s = 0; s < draws; ++s) {
    sample_log_dirichlet(prior.alpha(), rng, log_theta);
    const double log_psi = log_theta[0] + log_theta[3] - log_theta[1] - log_theta[2];
    out.values.push_back(log_psi);
    log_weights.push_back(likelihood(log_psi));
  }
  // Weights are relative; shifting by the largest keeps at least one at 1.
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  for (double lw : log_weights) out.weights.push_back(std::exp(lw - top));
  out.degenerate_weights = out.effective_sample_size() < 0.01 * static_cast<double>(draws);
  return out;
}

}  // namespace oddsinv
