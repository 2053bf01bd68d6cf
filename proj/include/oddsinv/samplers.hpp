#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oddsinv/model.hpp"
#include "oddsinv/rng.hpp"

namespace oddsinv {

/// Posterior draws with importance weights (all ones for exact samplers).
struct WeightedSample {
  std::vector<double> values;
  std::vector<double> weights;
  /// Set by importance samplers when ESS < 1% of the draws.
  bool degenerate_weights = false;

  static WeightedSample unweighted(std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
  double total_weight() const;
  /// (sum w)^2 / sum w^2.
  double effective_sample_size() const;
};

double effective_sample_size(std::span<const double> weights);

/// Which part of log psi_j a sampler reports.
enum class Component { log_psi, tau, rho };

// Every sampler returns one WeightedSample per contrast column; column j of
// draw s always comes from the same theta draw.

/// theta | x ~ Dirichlet(alpha + x).
std::vector<WeightedSample> posterior_unconstrained(const DirichletPrior& prior,
                                                    const CountVector& x,
                                                    const ContrastMatrix& c, std::size_t draws,
                                                    Rng& rng);
/// Same posterior, reporting tau or rho with respect to `p`.
std::vector<WeightedSample> posterior_unconstrained(const DirichletPrior& prior,
                                                    const CountVector& x, const Partition& p,
                                                    const ContrastMatrix& c, std::size_t draws,
                                                    Rng& rng, Component component);

/// Margin fixed: theta^P ~ Dirichlet(alpha^P) stays at its prior, and
/// nu^P ~ Dirichlet(alpha_P + x_P) independently per block. Per draw the
/// marginal vector is drawn first, then the blocks in partition order.
std::vector<WeightedSample> posterior_constrained(const DirichletPrior& prior,
                                                  const CountVector& x, const Partition& p,
                                                  const ContrastMatrix& c, std::size_t draws,
                                                  Rng& rng,
                                                  Component component = Component::log_psi);

/// Dependent-prior construction on a 2x2 table with rows fixed. Draws
/// log psi = logit(nu_1) - logit(nu_3) with nu_3 ~ Beta(a3 + x3, a4 + x4) and
/// nu_1 ~ Beta(a1 + 2x1 + x2, a2 + x2 + x3 + x4) (unconstrained) or
/// Beta(a1 + x1, a2 + x2) (constrained).
WeightedSample posterior_dependent_example(std::span<const double> alpha, const CountVector& x,
                                           Scheme scheme, std::size_t draws, Rng& rng);

/// Both margins of the 2x2 table fixed. theta is drawn from the Dirichlet(alpha)
/// prior and weighted by the noncentral hypergeometric likelihood of x_1 given
/// the margins at psi(theta); values are the log odds ratio.
WeightedSample posterior_double_constrained(const DirichletPrior& prior, const CountVector& x,
                                            std::size_t draws, Rng& rng);

}  // namespace oddsinv
