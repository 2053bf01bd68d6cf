#include "oddsinv/fnch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oddsinv/error.hpp"
#include "oddsinv/special_functions.hpp"

namespace oddsinv {

namespace {

double log_choose(std::uint64_t n, std::uint64_t k) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return lgamma_real(nd + 1.0) - lgamma_real(kd + 1.0) - lgamma_real(nd - kd + 1.0);
}

FnchSupport support_of(std::uint64_t n1, std::uint64_t n2, std::uint64_t m1) {
  if (m1 > n1 + n2)
    fail(ErrorCode::invalid_argument, "column total " + std::to_string(m1) +
                                          " exceeds table total " + std::to_string(n1 + n2));
  return {m1 > n2 ? m1 - n2 : 0, std::min(n1, m1)};
}

// Unnormalized log weights over the support.
std::vector<double> log_terms(std::uint64_t n1, std::uint64_t n2, std::uint64_t m1,
                              double log_psi, FnchSupport s) {
  std::vector<double> terms;
  terms.reserve(s.hi - s.lo + 1);
  for (std::uint64_t u = s.lo; u <= s.hi; ++u)
    terms.push_back(log_choose(n1, u) + log_choose(n2, m1 - u) + static_cast<double>(u) * log_psi);
  return terms;
}

double log_sum_exp(const std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += std::exp(x - top);
  return top + std::log(total);
}

double checked_log_psi(double psi) {
  if (!(psi > 0.0) || !std::isfinite(psi))
    fail(ErrorCode::domain, "noncentral hypergeometric odds ratio must be finite and positive");
  return std::log(psi);
}

}  // namespace

FnchSupport fnch_support(const FnchParams& params) {
  return support_of(params.n1, params.n2, params.m1);
}

double fnch_log_pmf_log_odds(std::uint64_t a, std::uint64_t n1, std::uint64_t n2,
                             std::uint64_t m1, double log_psi) {
  if (!std::isfinite(log_psi)) fail(ErrorCode::domain, "log odds ratio must be finite");
  const FnchSupport s = support_of(n1, n2, m1);
  if (a < s.lo || a > s.hi)
    fail(ErrorCode::domain, "cell count " + std::to_string(a) + " outside support [" +
                                std::to_string(s.lo) + ", " + std::to_string(s.hi) + "]");
  const auto terms = log_terms(n1, n2, m1, log_psi, s);
  return terms[a - s.lo] - log_sum_exp(terms);
}

double fnch_log_pmf(std::uint64_t a, const FnchParams& params) {
  return fnch_log_pmf_log_odds(a, params.n1, params.n2, params.m1, checked_log_psi(params.psi));
}

std::vector<double> fnch_log_pmf_support(const FnchParams& params) {
  const double log_psi = checked_log_psi(params.psi);
  const FnchSupport s = fnch_support(params);
  auto terms = log_terms(params.n1, params.n2, params.m1, log_psi, s);
  const double norm = log_sum_exp(terms);
  for (double& v : terms) v -= norm;
  return terms;
}

double fnch_mean(const FnchParams& params) {
  const FnchSupport s = fnch_support(params);
  const auto log_pmf = fnch_log_pmf_support(params);
  double mean = 0.0;
  for (std::size_t k = 0; k < log_pmf.size(); ++k)
    mean += static_cast<double>(s.lo + k) * std::exp(log_pmf[k]);
  return mean;
}

FnchLikelihood::FnchLikelihood(std::uint64_t a, std::uint64_t n1, std::uint64_t n2,
                               std::uint64_t m1) {
  const FnchSupport s = support_of(n1, n2, m1);
  if (a < s.lo || a > s.hi)
    fail(ErrorCode::domain, "observed cell count outside the noncentral hypergeometric support");
  offset_ = a - s.lo;
  base_ = log_terms(n1, n2, m1, 0.0, s);
}

double FnchLikelihood::operator()(double log_psi) const {
  if (!std::isfinite(log_psi)) fail(ErrorCode::domain, "log odds ratio must be finite");
  double top = -INFINITY;
  for (std::size_t k = 0; k < base_.size(); ++k)
    top = std::max(top, base_[k] + static_cast<double>(k) * log_psi);
  double total = 0.0;
  for (std::size_t k = 0; k < base_.size(); ++k)
    total += std::exp(base_[k] + static_cast<double>(k) * log_psi - top);
  return base_[offset_] + static_cast<double>(offset_) * log_psi - top - std::log(total);
}

}  // namespace oddsinv
