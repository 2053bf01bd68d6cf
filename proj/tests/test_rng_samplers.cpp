#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "doctest.h"
#include "test_support.hpp"

#include "oddsinv/diagnostics.hpp"
#include "oddsinv/rng.hpp"
#include "oddsinv/samplers.hpp"
#include "oddsinv/special_functions.hpp"

using namespace oddsinv;
using boost::math::digamma;
using boost::math::trigamma;
using oddsinv::testing::error_code_of;

namespace {

struct Moments {
  double mean;
  double var;
};

Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, var / (n - 1.0)};
}

// One-sample Kolmogorov distance against a continuous CDF.
template <class Cdf>
double ks_one_sample(std::vector<double> v, Cdf cdf) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double f = cdf(v[k]);
    d = std::max({d, f - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - f});
  }
  return d;
}

// Central hypergeometric weights scaled by psi^a, summed directly over the support.
double fnch_pmf_oracle(std::uint64_t a, std::uint64_t n1, std::uint64_t n2, std::uint64_t m1, double log_psi) {
  auto log_choose = [](std::uint64_t n, std::uint64_t k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  };
  const std::uint64_t lo = m1 > n2 ? m1 - n2 : 0;
  const std::uint64_t hi = std::min(n1, m1);
  double total = 0.0;
  double target = 0.0;
  for (std::uint64_t u = lo; u <= hi; ++u) {
    const double w = std::exp(log_choose(n1, u) + log_choose(n2, m1 - u) + static_cast<double>(u) * log_psi);
    total += w;
    if (u == a) target = w;
  }
  return target / total;
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42, Stream::unconstrained);
  Rng b(42, Stream::unconstrained);
  Rng c(42, Stream::constrained);
  Rng d(43, Stream::unconstrained);
  bool differs_c = false;
  bool differs_d = false;
  for (int k = 0; k < 1000; ++k) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    differs_c = differs_c || va != c.next_u64();
    differs_d = differs_d || va != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  Rng e(42, 1);
  Rng f(42, Stream::unconstrained);
  CHECK(e.next_u64() == f.next_u64());
}

TEST_CASE("uniform variates lie in the open unit interval and pass KS") {
  Rng rng(1, 99);
  std::vector<double> u(200000);
  for (auto& v : u) {
    v = rng.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  CHECK(ks_one_sample(u, [](double x) { return x; }) < kKolmogorovCritical01 / std::sqrt(200000.0));
}

TEST_CASE("normal variates pass KS against the normal CDF") {
  Rng rng(2, 99);
  std::vector<double> z(200000);
  for (auto& v : z) v = rng.normal();
  const double d = ks_one_sample(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  CHECK(d < kKolmogorovCritical01 / std::sqrt(200000.0));
}

TEST_CASE("gamma variates have the right moments, including tiny shapes") {
  Rng rng(3, 99);
  const std::size_t n = 200000;
  for (double shape : {0.05, 0.3, 1.0, 2.5, 30.0}) {
    std::vector<double> g(n);
    std::vector<double> lg(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = std::exp(lg[k] = rng.log_gamma(shape));
    const Moments m = moments(g);
    CHECK(std::abs(m.mean - shape) < 5.0 * std::sqrt(shape / n));
    CHECK(m.var == doctest::Approx(shape).epsilon(0.05));
    // E log G = digamma(shape), Var log G = trigamma(shape).
    const Moments ml = moments(lg);
    CHECK(std::abs(ml.mean - digamma(shape)) < 5.0 * std::sqrt(trigamma(shape) / n));
  }
  for (int k = 0; k < 1000; ++k) CHECK(std::isfinite(rng.log_gamma(1e-3)));
  CHECK(error_code_of([&] { rng.log_gamma(0.0); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([&] { rng.log_gamma(-1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("Dirichlet draws sum to one with digamma log-moments") {
  Rng rng(4, 99);
  const std::vector<double> alpha = {0.4, 1.0, 2.5, 6.0};
  const double total = 9.9;
  const std::size_t n = 100000;
  std::vector<std::vector<double>> logs(4, std::vector<double>(n));
  std::vector<double> out(4);
  for (std::size_t s = 0; s < n; ++s) {
    sample_log_dirichlet(alpha, rng, out);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) sum += std::exp(logs[i][s] = out[i]);
    REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Moments m = moments(logs[i]);
    const double exact = digamma(alpha[i]) - digamma(total);
    CHECK(std::abs(m.mean - exact) < 5.0 * std::sqrt(m.var / n));
  }
  const auto theta = sample_dirichlet(alpha, rng);
  CHECK(std::accumulate(theta.begin(), theta.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("unconstrained log odds ratio mean matches the digamma identity") {
  const DirichletPrior prior({1.0, 1.0, 1.0, 1.0});
  const CountVector x({7, 1, 1, 1});
  Rng rng(5, Stream::unconstrained);
  const auto draws = posterior_unconstrained(prior, x, odds_ratio_2x2(), 200000, rng);
  REQUIRE(draws.size() == 1);
  const Moments m = moments(draws[0].values);
  const double exact = digamma(8.0) - digamma(2.0) - digamma(2.0) + digamma(2.0);
  CHECK(std::abs(m.mean - exact) < 4.0 * std::sqrt(m.var / 200000.0));
  const double exact_var = trigamma(8.0) + 3.0 * trigamma(2.0);
  CHECK(m.var == doctest::Approx(exact_var).epsilon(0.02));
}

TEST_CASE("constrained draws split into prior tau and posterior rho") {
  const DirichletPrior prior({0.5, 1.5, 2.0, 1.0, 0.7, 1.3});
  const CountVector x({4, 0, 2, 1, 5, 3});
  const Partition p(6, {{0, 1}, {2, 3, 4}, {5}});
  const ContrastMatrix c(std::vector<double>{1.0, 0.5, -1.0, 0.0, 2.0, -0.5});
  const std::size_t n = 200000;
  Rng rng(6, Stream::constrained);
  const auto tau = posterior_constrained(prior, x, p, c, n, rng, Component::tau);
  const auto rho = posterior_constrained(prior, x, p, c, n, rng, Component::rho);

  // tau = sum_b c^P_b log theta^P_b with theta^P ~ Dirichlet(alpha^P): (2, 3.7, 1.3).
  const std::vector<double> alpha_marg = {2.0, 3.7, 1.3};
  const std::vector<double> coef_marg = {1.5, 1.0, -0.5};
  double tau_exact = 0.0;
  for (std::size_t b = 0; b < 3; ++b) tau_exact += coef_marg[b] * (digamma(alpha_marg[b]) - digamma(7.0));
  const Moments mt = moments(tau[0].values);
  CHECK(std::abs(mt.mean - tau_exact) < 4.0 * std::sqrt(mt.var / n));

  // rho = sum_i c_i log nu_i with nu_b ~ Dirichlet(alpha_b + x_b); the singleton block adds 0.
  const double rho_exact = 1.0 * (digamma(4.5) - digamma(6.0)) + 0.5 * (digamma(1.5) - digamma(6.0)) -
                           1.0 * (digamma(4.0) - digamma(11.7)) + 2.0 * (digamma(5.7) - digamma(11.7)) -
                           0.5 * (digamma(4.3) - digamma(4.3));
  const Moments mr = moments(rho[0].values);
  CHECK(std::abs(mr.mean - rho_exact) < 4.0 * std::sqrt(mr.var / n));

  // rho has the same law under both schemes.
  Rng other(6, Stream::unconstrained);
  const auto rho_u = posterior_unconstrained(prior, x, p, c, n, other, Component::rho);
  CHECK_FALSE(ks_two_sample(rho_u[0].values, rho[0].values).significant_at_01);
}

TEST_CASE("Monte Carlo CFs match the closed forms") {
  const DirichletPrior prior({1.0, 2.0, 0.5, 1.0});
  const CountVector x({2, 0, 3, 1});
  const Partition p = Partition::rows(2, 2);
  const ContrastMatrix half(std::vector<double>{0.5, 0.5, 0.5, 0.5});
  const std::size_t n = 200000;
  // Standard error of each CF component is at most sqrt(1 / (2n)).
  const double tol = 5.0 * std::sqrt(1.0 / n);
  for (Scheme s : {Scheme::unconstrained, Scheme::constrained}) {
    Rng rng(7, s == Scheme::unconstrained ? Stream::unconstrained : Stream::constrained);
    const auto draws = s == Scheme::unconstrained ? posterior_unconstrained(prior, x, half, n, rng)
                                                  : posterior_constrained(prior, x, p, half, n, rng);
    for (double t = -5.0; t <= 5.0; t += 0.5) {
      const Complex mc = mc_cf_estimate(draws[0], t);
      const Complex exact = cf_logpsi_dirichlet(t, prior, x, half.column(0), p, s);
      CHECK(std::abs(mc - exact) < tol);
    }
  }
}

TEST_CASE("dependent-prior draws match the Beta logit moments") {
  const std::vector<double> alpha = {1.0, 1.0, 1.0, 1.0};
  const CountVector x({1, 1, 1, 1});
  const std::size_t n = 200000;
  for (Scheme s : {Scheme::unconstrained, Scheme::constrained}) {
    Rng rng(8, s == Scheme::unconstrained ? Stream::dependent_unconstrained : Stream::dependent_constrained);
    const WeightedSample w = posterior_dependent_example(alpha, x, s, n, rng);
    // nu_1 ~ Beta(4, 4) or Beta(2, 2), nu_3 ~ Beta(2, 2); Var logit Beta(a, b) = trigamma(a) + trigamma(b).
    const double a1 = s == Scheme::unconstrained ? 4.0 : 2.0;
    const double exact_var = 2.0 * trigamma(a1) + 2.0 * trigamma(2.0);
    const Moments m = moments(w.values);
    CHECK(std::abs(m.mean) < 4.0 * std::sqrt(exact_var / n));
    CHECK(m.var == doctest::Approx(exact_var).epsilon(0.02));
    for (double t = -5.0; t <= 5.0; t += 1.0)
      CHECK(std::abs(mc_cf_estimate(w, t) - cf_dependent_example(t, alpha, x, s)) < 5.0 * std::sqrt(1.0 / n));
  }
  Rng rng(8, 0);
  CHECK(error_code_of([&] { posterior_dependent_example(alpha, x, Scheme::double_constrained, 10, rng); }));
}

TEST_CASE("doubly constrained posterior agrees with rejection sampling") {
  // Rejection oracle: accept a prior draw with probability equal to the likelihood (<= 1).
  const DirichletPrior prior({1.0, 1.0, 1.0, 1.0});
  const CountVector x({7, 1, 1, 1});
  Rng rng(9, Stream::double_constrained);
  const WeightedSample weighted = posterior_double_constrained(prior, x, 100000, rng);
  CHECK_FALSE(weighted.degenerate_weights);
  CHECK(*std::max_element(weighted.weights.begin(), weighted.weights.end()) == 1.0);

  Rng oracle_rng(9, 777);
  std::vector<double> accepted;
  std::vector<double> log_theta(4);
  while (accepted.size() < 50000) {
    sample_log_dirichlet(prior.alpha(), oracle_rng, log_theta);
    const double log_psi = log_theta[0] + log_theta[3] - log_theta[1] - log_theta[2];
    if (oracle_rng.uniform() < fnch_pmf_oracle(7, 8, 2, 8, log_psi)) accepted.push_back(log_psi);
  }
  const KsResult ks = ks_weighted(weighted, WeightedSample::unweighted(accepted));
  CHECK_FALSE(ks.significant_at_01);
}

TEST_CASE("importance weights are flagged when degenerate") {
  const DirichletPrior prior({1.0, 1.0, 1.0, 1.0});
  Rng rng(10, Stream::double_constrained);
  const WeightedSample w = posterior_double_constrained(prior, CountVector({3000, 5, 5, 3000}), 20000, rng);
  CHECK(w.degenerate_weights);
  CHECK(w.effective_sample_size() < 200.0);
  CHECK(w.total_weight() > 0.0);
}

TEST_CASE("sampler argument checks") {
  Rng rng(11, 0);
  const DirichletPrior prior({1.0, 1.0, 1.0, 1.0});
  CHECK(error_code_of([&] { posterior_unconstrained(prior, CountVector({1, 2, 3}), odds_ratio_2x2(), 10, rng); }) ==
        ErrorCode::partition_mismatch);
  CHECK(error_code_of([&] {
          posterior_constrained(prior, CountVector({1, 2, 3, 4}), Partition::rows(2, 3), odds_ratio_2x2(), 10, rng);
        }) == ErrorCode::partition_mismatch);
  CHECK(error_code_of([&] { posterior_double_constrained(DirichletPrior({1, 1, 1}), CountVector({1, 1, 1}), 10, rng); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("effective sample size") {
  CHECK(effective_sample_size(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(4.0));
  CHECK(effective_sample_size(std::vector<double>{1, 0, 0, 0}) == doctest::Approx(1.0));
  CHECK(effective_sample_size(std::vector<double>{2, 2}) == doctest::Approx(2.0));
  const WeightedSample s = WeightedSample::unweighted({0.5, 1.5, 2.5});
  CHECK(s.total_weight() == 3.0);
  CHECK(s.effective_sample_size() == doctest::Approx(3.0));
}
