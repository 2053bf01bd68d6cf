#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oddsinv/model.hpp"
#include "oddsinv/rng.hpp"
#include "oddsinv/samplers.hpp"
#include "oddsinv/special_functions.hpp"

namespace oddsinv {

/// Asymptotic two-sided Kolmogorov critical value at level 0.01.
inline constexpr double kKolmogorovCritical01 = 1.628;

struct KsResult {
  double statistic = 0.0;
  double n1 = 0.0;  // sample size, or ESS for weighted samples
  double n2 = 0.0;
  double threshold = 0.0;
  bool significant_at_01 = false;

  std::string to_json() const;
};

/// Asymptotic Kolmogorov critical value c(level) = sqrt(-ln(level / 2) / 2).
double kolmogorov_critical(double level);

/// Critical distance c(0.01) * sqrt((n1 + n2) / (n1 * n2)).
double ks_threshold(double n1, double n2);
/// Same distance at an arbitrary level, for family-wise corrected tests.
double ks_threshold(double n1, double n2, double level);

/// Sup-distance between the two empirical CDFs.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Sup-distance between weighted ECDFs, judged with ESS in place of sizes.
/// Throws ErrorCode::unreliable when either ESS is below 10.
KsResult ks_weighted(const WeightedSample& a, const WeightedSample& b);

struct CfComparison {
  double max_abs_diff = 0.0;
  double argmax_t = 0.0;
};

/// sup_t |u(t) - c(t)| over a shared grid.
CfComparison cf_grid_compare(const CfGrid& u, const CfGrid& c);

/// Weighted empirical CF: sum_s w_s exp(i t v_s) / sum_s w_s.
Complex mc_cf_estimate(const WeightedSample& s, double t);

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;

  /// Trapezoid rule over the grid.
  double integral() const;
  std::string to_csv() const;
};

/// Silverman's rule, 0.9 min(sd, IQR/1.34) ESS^{-1/5}, with weighted moments.
double silverman_bandwidth(const WeightedSample& s);

/// Grid covering [min - 5h, max + 5h] with spacing at most h/3.
std::vector<double> kde_grid(const WeightedSample& s, double bandwidth,
                             std::size_t min_points = 512);

/// Gaussian-kernel weighted density. A missing bandwidth means Silverman's rule;
/// a missing grid means kde_grid. Zero-variance samples are rejected.
DensityCurve kde(const WeightedSample& s, std::optional<double> bandwidth = std::nullopt,
                 std::optional<std::vector<double>> grid = std::nullopt);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
};

/// Weighted quantile: smallest value whose weighted ECDF reaches q.
double weighted_quantile(const WeightedSample& s, double q);
Summary summarize(const WeightedSample& s);
double weighted_variance(const WeightedSample& s);

struct VarianceEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Variance with the standard error sqrt((m4 - var^2) / N) of an unweighted sample.
VarianceEstimate variance_estimate(std::span<const double> values);

/// x(n): n * theta0 rounded by largest remainder so the counts sum to n
/// (ties go to the lower cell index).
CountVector rounded_counts(std::span<const double> theta0, std::uint64_t n);

struct ConcentrationRow {
  std::uint64_t n = 0;
  std::vector<double> variance;  // one per contrast column
};

/// Posterior variance of log psi_j at x(n) for each n, under the unconstrained
/// or margin-constrained scheme.
std::vector<ConcentrationRow> concentration_study(std::span<const double> theta0,
                                                  const DirichletPrior& prior,
                                                  const ContrastMatrix& c, const Partition& p,
                                                  std::span<const std::uint64_t> n_list,
                                                  Scheme scheme, std::size_t draws, Rng& rng);

/// Variance of tau_j under the prior theta^P ~ Dirichlet(alpha^P), by direct simulation.
/// This is the floor a margin-constrained posterior cannot go below.
VarianceEstimate prior_tau_variance(const DirichletPrior& prior, const ContrastMatrix& c,
                                    const Partition& p, std::size_t j, std::size_t draws,
                                    Rng& rng);

}  // namespace oddsinv
