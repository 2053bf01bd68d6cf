#include <cmath>
#include <cstdio>

#include "oddsinv/error.hpp"
#include "oddsinv/special_functions.hpp"

namespace oddsinv {

namespace {

// log Gamma(a + i t c) - log Gamma(a); zero when c == 0.
Complex log_gamma_shift(double a, double t, double c) {
  if (c == 0.0 || t == 0.0) return 0.0;
  if (!(a > 0.0)) fail(ErrorCode::domain, "Gamma ratio with nonpositive real part");
  return lgamma_complex(Complex(a, t * c)) - lgamma_complex(Complex(a, 0.0));
}

// log E[prod_i v_i^{i t c_i}] for v ~ Dirichlet(a).
Complex log_dirichlet_moment(std::span<const double> a, std::span<const double> c, double t) {
  Complex out = 0.0;
  double a_total = 0.0;
  double c_total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += log_gamma_shift(a[i], t, c[i]);
    a_total += a[i];
    c_total += c[i];
  }
  out -= log_gamma_shift(a_total, t, c_total);
  return out;
}

void check_shapes(const DirichletPrior& alpha, const CountVector& x,
                  std::span<const double> column, const Partition& p) {
  if (alpha.size() != p.cell_count() || x.size() != p.cell_count() ||
      column.size() != p.cell_count())
    fail(ErrorCode::partition_mismatch, "prior, counts, contrast and partition disagree on r");
}

Complex log_cf_rho(double t, const DirichletPrior& alpha, const CountVector& x,
                   std::span<const double> column, const Partition& p) {
  Complex out = 0.0;
  std::vector<double> a;
  std::vector<double> c;
  for (const auto& block : p.blocks()) {
    a.clear();
    c.clear();
    for (std::size_t i : block) {
      a.push_back(alpha[i] + static_cast<double>(x[i]));
      c.push_back(column[i]);
    }
    out += log_dirichlet_moment(a, c, t);
  }
  return out;
}

Complex log_cf_tau(double t, const DirichletPrior& alpha, const CountVector& x,
                   std::span<const double> column, const Partition& p, Scheme scheme) {
  std::vector<double> a = block_sums(alpha.alpha(), p);
  if (scheme == Scheme::unconstrained) {
    const auto xs = partition_sums(x, p);
    for (std::size_t b = 0; b < a.size(); ++b) a[b] += static_cast<double>(xs[b]);
  } else if (scheme != Scheme::constrained) {
    fail(ErrorCode::invalid_argument, "closed-form tau CF exists only for single-margin schemes");
  }
  const std::vector<double> c = block_sums(column, p);
  return log_dirichlet_moment(a, c, t);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Complex cf_rho_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                         std::span<const double> column, const Partition& p) {
  check_shapes(alpha, x, column, p);
  return std::exp(log_cf_rho(t, alpha, x, column, p));
}

Complex cf_tau_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                         std::span<const double> column, const Partition& p, Scheme scheme) {
  check_shapes(alpha, x, column, p);
  return std::exp(log_cf_tau(t, alpha, x, column, p, scheme));
}

Complex cf_logpsi_dirichlet(double t, const DirichletPrior& alpha, const CountVector& x,
                            std::span<const double> column, const Partition& p, Scheme scheme) {
  check_shapes(alpha, x, column, p);
  return std::exp(log_cf_tau(t, alpha, x, column, p, scheme) + log_cf_rho(t, alpha, x, column, p));
}

Complex cf_dependent_example(double t, std::span<const double> alpha, const CountVector& x,
                             Scheme scheme) {
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
  switch (scheme) {
    case Scheme::unconstrained:
      a_first = alpha[0] + 2.0 * x1 + x2;
      b_first = alpha[1] + x2 + x3 + x4;
      break;
    case Scheme::constrained:
      a_first = alpha[0] + x1;
      b_first = alpha[1] + x2;
      break;
    default:
      fail(ErrorCode::invalid_argument, "dependent-prior CF exists only for single-margin schemes");
  }
  // log psi = logit(nu_1) - logit(nu_3)
  const Complex log_value = log_gamma_shift(alpha[2] + x3, t, -1.0) +
                            log_gamma_shift(alpha[3] + x4, t, 1.0) +
                            log_gamma_shift(a_first, t, 1.0) + log_gamma_shift(b_first, t, -1.0);
  return std::exp(log_value);
}

std::vector<double> linear_grid(double tmin, double tmax, std::size_t points) {
  if (points == 0) fail(ErrorCode::invalid_argument, "grid needs at least one point");
  if (!std::isfinite(tmin) || !std::isfinite(tmax))
    fail(ErrorCode::invalid_argument, "grid bounds must be finite");
  if (points == 1) return {tmin};
  if (!(tmax > tmin)) fail(ErrorCode::invalid_argument, "grid needs tmax > tmin");
  std::vector<double> t(points);
  const double span = tmax - tmin;
  for (std::size_t k = 0; k < points; ++k) {
    t[k] = tmin + span * static_cast<double>(k) / static_cast<double>(points - 1);
    if (std::abs(t[k]) < 1e-14 * span) t[k] = 0.0;
  }
  return t;
}

void validate_cf_grid(const CfGrid& grid) {
  if (grid.t.size() != grid.values.size())
    fail(ErrorCode::invalid_argument, "CF grid has mismatched t and value counts");
  for (std::size_t k = 0; k < grid.t.size(); ++k) {
    if (k > 0 && !(grid.t[k] > grid.t[k - 1]))
      fail(ErrorCode::invalid_argument, "CF grid must be strictly increasing");
    const Complex v = grid.values[k];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorCode::domain, "CF grid holds a non-finite value");
    if (grid.t[k] == 0.0 && std::abs(v - 1.0) > 1e-12)
      fail(ErrorCode::domain, "CF grid value at t = 0 is not 1");
  }
}

std::vector<Interval> cf_zero_set_scan(const CfGrid& grid, double tol) {
  std::vector<Interval> out;
  bool open = false;
  for (std::size_t k = 0; k < grid.t.size(); ++k) {
    const bool small = std::abs(grid.values[k]) < tol;
    if (small && !open) {
      out.push_back({grid.t[k], grid.t[k]});
      open = true;
    } else if (small) {
      out.back().hi = grid.t[k];
    } else {
      open = false;
    }
  }
  return out;
}

std::string cf_pair_csv(const CfGrid& unconstrained, const CfGrid& constrained) {
  if (unconstrained.t != constrained.t)
    fail(ErrorCode::invalid_argument, "CF grids are evaluated on different t values");
  std::string out = "t,re_u,im_u,re_c,im_c,abs_diff\n";
  for (std::size_t k = 0; k < unconstrained.t.size(); ++k) {
    const Complex u = unconstrained.values[k];
    const Complex c = constrained.values[k];
    out += format_double(unconstrained.t[k]) + ',' + format_double(u.real()) + ',' +
           format_double(u.imag()) + ',' + format_double(c.real()) + ',' +
           format_double(c.imag()) + ',' + format_double(std::abs(u - c)) + '\n';
  }
  return out;
}

}  // namespace oddsinv
