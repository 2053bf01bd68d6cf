#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oddsinv/model.hpp"

namespace oddsinv {

using Complex = std::complex<double>;

/// Principal branch of log Gamma(z).
///
/// Lanczos approximation (g = 7, nine coefficients) for Re(z) >= 0.5 and the
/// reflection formula below that. The branch is the one that is real on the
/// positive real axis and continuous on the plane cut along (-inf, 0], so
/// log Gamma(z+1) = log z + log Gamma(z) holds without 2*pi*i jumps.
/// Throws ErrorCode::pole at z = 0, -1, -2, ...
Complex lgamma_complex(Complex z);

/// log Gamma(x) for real x > 0, the real part of lgamma_complex on the axis.
double lgamma_real(double x);

// Characteristic functions of posterior log-odds components under a Dirichlet
// prior. `column` is one column of the contrast (length r). All Gamma ratios
// are accumulated as sums of lgamma_complex and exponentiated once.

/// CF of rho_j given x. Identical under both single-margin schemes.
Complex cf_rho_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                         std::span<const double> column, const Partition& p);

/// CF of tau_j given x: theta^P | x is Dirichlet(alpha^P + x^P) when unconstrained
/// and Dirichlet(alpha^P) when the margin is fixed.
Complex cf_tau_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                         std::span<const double> column, const Partition& p, Scheme scheme);

/// CF of log psi_j = tau_j + rho_j (the two parts are independent a posteriori).
Complex cf_logpsi_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                            std::span<const double> column, const Partition& p, Scheme scheme);

/// Closed-form CF of the log odds ratio in the dependent-prior construction on a
/// 2x2 table (rows fixed): theta^P_{12} ~ Beta(a1, a2) equals nu_1 almost surely
/// and nu_3 ~ Beta(a3, a4) independently.
Complex cf_dependent_example(double t, std::span<const double> alpha, const CountVector& x,
                             Scheme scheme);

/// Characteristic function tabulated on a strictly increasing t grid.
struct CfGrid {
  std::vector<double> t;
  std::vector<Complex> values;
  Scheme scheme = Scheme::unconstrained;

  std::size_t size() const noexcept { return t.size(); }
};

/// `points` equally spaced values on [tmin, tmax]; the middle point is snapped
/// to 0 exactly when the grid is symmetric with an odd count.
std::vector<double> linear_grid(double tmin, double tmax, std::size_t points);

template <class Fn>
CfGrid tabulate_cf(std::span<const double> t, Scheme scheme, Fn&& fn) {
  CfGrid grid;
  grid.scheme = scheme;
  grid.t.assign(t.begin(), t.end());
  grid.values.reserve(t.size());
  for (double tk : t) grid.values.push_back(fn(tk));
  return grid;
}

/// Checks the CfGrid invariants: strictly increasing t, finite values, value 1 at t = 0.
void validate_cf_grid(const CfGrid& grid);

struct Interval {
  double lo;
  double hi;
};

/// Maximal runs of consecutive grid points where |value| < tol.
std::vector<Interval> cf_zero_set_scan(const CfGrid& grid, double tol = 1e-10);

/// CSV with header `t,re_u,im_u,re_c,im_c,abs_diff`. Grids must share t.
std::string cf_pair_csv(const CfGrid& unconstrained, const CfGrid& constrained);

}  // namespace oddsinv
