#pragma once

#include <cstdint>
#include <vector>

namespace oddsinv {

/// Fisher's noncentral hypergeometric law of the top-left cell of a 2x2 table
/// with row totals n1, n2 and first-column total m1, indexed by the odds ratio.
struct FnchParams {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t m1 = 0;
  double psi = 1.0;
};

struct FnchSupport {
  std::uint64_t lo;
  std::uint64_t hi;
};

/// [max(0, m1 - n2), min(n1, m1)]; throws when m1 > n1 + n2.
FnchSupport fnch_support(const FnchParams& params);

/// log P(A = a) = log C(n1,a) C(n2,m1-a) psi^a - log sum_u C(n1,u) C(n2,m1-u) psi^u,
/// normalized by log-sum-exp over the support.
double fnch_log_pmf(std::uint64_t a, const FnchParams& params);

/// Same pmf parameterized by log psi, which avoids overflow for extreme odds.
double fnch_log_pmf_log_odds(std::uint64_t a, std::uint64_t n1, std::uint64_t n2,
                             std::uint64_t m1, double log_psi);

/// log pmf at every support point lo..hi.
std::vector<double> fnch_log_pmf_support(const FnchParams& params);

double fnch_mean(const FnchParams& params);

/// log pmf of a fixed observed count as a function of log psi, with the
/// binomial-coefficient terms computed once. Used for importance weights.
class FnchLikelihood {
 public:
  FnchLikelihood(std::uint64_t a, std::uint64_t n1, std::uint64_t n2, std::uint64_t m1);
  double operator()(double log_psi) const;

 private:
  std::uint64_t offset_;
  std::vector<double> base_;
};

}  // namespace oddsinv
