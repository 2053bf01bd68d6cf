#include "oddsinv/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "oddsinv/error.hpp"
#include "oddsinv/special_functions.hpp"

namespace oddsinv {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

void require_simplex(std::span<const double> theta, std::size_t cells) {
  if (theta.size() != cells)
    fail(ErrorCode::partition_mismatch, "probability vector length " +
                                            std::to_string(theta.size()) +
                                            " does not match " + std::to_string(cells) + " cells");
  double total = 0.0;
  for (double v : theta) {
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorCode::degenerate, "cell probabilities must be strictly positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorCode::invalid_argument, "cell probabilities must sum to 1");
}

double log_factorial(std::uint64_t k) { return lgamma_real(static_cast<double>(k) + 1.0); }

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::unconstrained:
      return "unconstrained";
    case Scheme::constrained:
      return "constrained";
    case Scheme::double_constrained:
      return "double";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "unconstrained") return Scheme::unconstrained;
  if (name == "constrained") return Scheme::constrained;
  if (name == "double" || name == "double_constrained") return Scheme::double_constrained;
  fail(ErrorCode::invalid_argument, "unknown scheme '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::size_t cells, std::vector<std::vector<std::size_t>> blocks)
    : cells_(cells), blocks_(std::move(blocks)), owner_(cells, kUnassigned) {
  if (cells_ == 0) fail(ErrorCode::invalid_argument, "partition over zero cells");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty())
      fail(ErrorCode::invalid_argument, "partition block " + std::to_string(b + 1) + " is empty");
    for (std::size_t i : blocks_[b]) {
      if (i >= cells_)
        fail(ErrorCode::partition_mismatch,
             "cell index " + std::to_string(i + 1) + " out of range 1.." + std::to_string(cells_));
      if (owner_[i] != kUnassigned)
        fail(ErrorCode::invalid_argument,
             "cell index " + std::to_string(i + 1) + " appears in more than one block");
      owner_[i] = b;
    }
  }
  auto missing = std::find(owner_.begin(), owner_.end(), kUnassigned);
  if (missing != owner_.end())
    fail(ErrorCode::invalid_argument,
         "cell index " + std::to_string(missing - owner_.begin() + 1) + " is not in any block");
}

Partition Partition::from_one_based(std::size_t cells,
                                    const std::vector<std::vector<std::size_t>>& blocks) {
  std::vector<std::vector<std::size_t>> zero_based;
  zero_based.reserve(blocks.size());
  for (const auto& block : blocks) {
    std::vector<std::size_t> b;
    b.reserve(block.size());
    for (std::size_t i : block) {
      if (i == 0 || i > cells)
        fail(ErrorCode::partition_mismatch,
             "cell index " + std::to_string(i) + " out of range 1.." + std::to_string(cells));
      b.push_back(i - 1);
    }
    zero_based.push_back(std::move(b));
  }
  return Partition(cells, std::move(zero_based));
}

Partition Partition::rows(std::size_t rows, std::size_t cols) {
  std::vector<std::vector<std::size_t>> blocks(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) blocks[i].push_back(i * cols + j);
  return Partition(rows * cols, std::move(blocks));
}

Partition Partition::columns(std::size_t rows, std::size_t cols) {
  std::vector<std::vector<std::size_t>> blocks(cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) blocks[j].push_back(i * cols + j);
  return Partition(rows * cols, std::move(blocks));
}

// ---------------------------------------------------------------------------
// CountVector, ContrastMatrix, DirichletPrior

CountVector::CountVector(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)),
      total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {}

ContrastMatrix::ContrastMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)), integral_(true) {
  check();
}

ContrastMatrix::ContrastMatrix(std::vector<double> column)
    : rows_(column.size()), cols_(1), data_(std::move(column)), integral_(true) {
  check();
}

void ContrastMatrix::check() {
  if (rows_ == 0 || cols_ == 0)
    fail(ErrorCode::invalid_argument, "contrast matrix needs at least one row and one column");
  if (data_.size() != rows_ * cols_)
    fail(ErrorCode::invalid_argument, "contrast matrix data has wrong size");
  for (double v : data_) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_argument, "contrast coefficients must be finite");
    if (v != std::trunc(v)) integral_ = false;
  }
}

ContrastMatrix ContrastMatrix::from_cell_rows(const std::vector<std::vector<double>>& cells) {
  if (cells.empty() || cells.front().empty())
    fail(ErrorCode::invalid_argument, "contrast matrix needs at least one row and one column");
  const std::size_t r = cells.size();
  const std::size_t d = cells.front().size();
  std::vector<double> data(r * d);
  for (std::size_t i = 0; i < r; ++i) {
    if (cells[i].size() != d) fail(ErrorCode::invalid_argument, "ragged contrast matrix");
    for (std::size_t j = 0; j < d; ++j) data[j * r + i] = cells[i][j];
  }
  return ContrastMatrix(r, d, std::move(data));
}

std::span<const double> ContrastMatrix::column(std::size_t j) const {
  if (j >= cols_) fail(ErrorCode::invalid_argument, "contrast column index out of range");
  return std::span<const double>(data_).subspan(j * rows_, rows_);
}

DirichletPrior::DirichletPrior(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) fail(ErrorCode::invalid_argument, "Dirichlet prior needs at least one cell");
  for (double a : alpha_)
    if (!(a > 0.0) || !std::isfinite(a))
      fail(ErrorCode::invalid_argument, "Dirichlet concentrations must be finite and positive");
}

DirichletPrior DirichletPrior::symmetric(std::size_t cells, double concentration) {
  return DirichletPrior(std::vector<double>(cells, concentration));
}

DirichletPrior DirichletPrior::updated(const CountVector& x) const {
  if (x.size() != alpha_.size())
    fail(ErrorCode::partition_mismatch, "count vector and prior have different lengths");
  std::vector<double> a(alpha_);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += static_cast<double>(x[i]);
  return DirichletPrior(std::move(a));
}

DirichletPrior DirichletPrior::aggregated(const Partition& p) const {
  return DirichletPrior(block_sums(alpha_, p));
}

// ---------------------------------------------------------------------------
// Operations

std::vector<std::uint64_t> partition_sums(const CountVector& x, const Partition& p) {
  if (x.size() != p.cell_count())
    fail(ErrorCode::partition_mismatch, "table has " + std::to_string(x.size()) +
                                            " cells but partition covers " +
                                            std::to_string(p.cell_count()));
  std::vector<std::uint64_t> sums(p.block_count(), 0);
  for (std::size_t b = 0; b < p.block_count(); ++b)
    for (std::size_t i : p.block(b)) sums[b] += x[i];
  return sums;
}

std::vector<double> block_sums(std::span<const double> values, const Partition& p) {
  if (values.size() != p.cell_count())
    fail(ErrorCode::partition_mismatch, "vector length does not match partition");
  std::vector<double> sums(p.block_count(), 0.0);
  for (std::size_t b = 0; b < p.block_count(); ++b)
    for (std::size_t i : p.block(b)) sums[b] += values[i];
  return sums;
}

Reparam reparametrize(std::span<const double> theta, const Partition& p) {
  require_simplex(theta, p.cell_count());
  Reparam rep;
  rep.theta_marg = block_sums(theta, p);
  rep.nu.resize(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    const double mass = rep.theta_marg[b];
    if (!(mass > 0.0)) fail(ErrorCode::degenerate, "zero block probability");
    for (std::size_t i : p.block(b)) rep.nu[b].push_back(theta[i] / mass);
  }
  return rep;
}

std::vector<double> reconstruct(const Reparam& rep, const Partition& p) {
  if (rep.theta_marg.size() != p.block_count() || rep.nu.size() != p.block_count())
    fail(ErrorCode::partition_mismatch, "reparametrization does not match partition");
  std::vector<double> theta(p.cell_count(), 0.0);
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    const auto& block = p.block(b);
    if (rep.nu[b].size() != block.size())
      fail(ErrorCode::partition_mismatch, "conditional vector does not match block size");
    for (std::size_t k = 0; k < block.size(); ++k)
      theta[block[k]] = rep.theta_marg[b] * rep.nu[b][k];
  }
  return theta;
}

std::vector<double> log_godds(std::span<const double> theta, const ContrastMatrix& c) {
  if (theta.size() != c.rows())
    fail(ErrorCode::partition_mismatch, "probability vector does not match contrast rows");
  std::vector<double> log_theta(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0)) fail(ErrorCode::domain, "cell probabilities must be strictly positive");
    log_theta[i] = std::log(theta[i]);
  }
  std::vector<double> out(c.cols(), 0.0);
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < theta.size(); ++i) out[j] += c(i, j) * log_theta[i];
  return out;
}

std::vector<double> godds(std::span<const double> theta, const ContrastMatrix& c) {
  auto out = log_godds(theta, c);
  for (double& v : out) v = std::exp(v);
  return out;
}

DecomposedLogOdds decompose_log_odds(const Reparam& rep, const ContrastMatrix& c,
                                     const Partition& p) {
  if (c.rows() != p.cell_count())
    fail(ErrorCode::partition_mismatch, "contrast rows do not match partition");
  if (rep.theta_marg.size() != p.block_count() || rep.nu.size() != p.block_count())
    fail(ErrorCode::partition_mismatch, "reparametrization does not match partition");
  DecomposedLogOdds out{std::vector<double>(c.cols(), 0.0), std::vector<double>(c.cols(), 0.0)};
  for (std::size_t j = 0; j < c.cols(); ++j) {
    for (std::size_t b = 0; b < p.block_count(); ++b) {
      const auto& block = p.block(b);
      double coef_sum = 0.0;
      for (std::size_t k = 0; k < block.size(); ++k) {
        const double coef = c(block[k], j);
        coef_sum += coef;
        if (coef != 0.0) out.rho[j] += coef * std::log(rep.nu[b][k]);
      }
      if (coef_sum != 0.0) out.tau[j] += coef_sum * std::log(rep.theta_marg[b]);
    }
  }
  return out;
}

std::vector<double> contrast_block_sums(const ContrastMatrix& c, const Partition& p,
                                        std::size_t j) {
  if (c.rows() != p.cell_count())
    fail(ErrorCode::partition_mismatch, "contrast rows do not match partition");
  return block_sums(c.column(j), p);
}

double margin_tolerance(const ContrastMatrix& c) noexcept { return c.is_integral() ? 0.0 : 1e-12; }

bool margin_free_column(const ContrastMatrix& c, const Partition& p, std::size_t j) {
  const double tol = margin_tolerance(c);
  for (double s : contrast_block_sums(c, p, j))
    if (std::abs(s) > tol) return false;
  return true;
}

bool margin_free(const ContrastMatrix& c, const Partition& p) {
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (!margin_free_column(c, p, j)) return false;
  return true;
}

bool meets_sample_size_condition(const ContrastMatrix& c, const Partition& p, std::size_t j,
                                 std::uint64_t n) {
  const double tol = margin_tolerance(c);
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  for (double s : contrast_block_sums(c, p, j)) {
    if (s > tol) ++positive;
    if (s < -tol) ++negative;
  }
  return (positive > 0 && n >= positive) || (negative > 0 && n >= negative);
}

ContrastMatrix odds_ratio_2x2() { return ContrastMatrix(std::vector<double>{1.0, -1.0, -1.0, 1.0}); }

ContrastMatrix local_odds_ratio(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  if (rows < 2 || cols < 2)
    fail(ErrorCode::invalid_argument, "local odds ratio needs at least a 2x2 table");
  if (i + 1 >= rows || j + 1 >= cols)
    fail(ErrorCode::invalid_argument, "local odds ratio cell (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") has no lower-right neighbour");
  std::vector<double> c(rows * cols, 0.0);
  c[i * cols + j] = 1.0;
  c[(i + 1) * cols + (j + 1)] = 1.0;
  c[(i + 1) * cols + j] = -1.0;
  c[i * cols + (j + 1)] = -1.0;
  return ContrastMatrix(std::move(c));
}

ContrastMatrix higher_order_odds_ratio(std::size_t k) {
  if (k < 1 || k > 20) fail(ErrorCode::invalid_argument, "higher-order odds ratio needs 1 <= k <= 20");
  const std::size_t cells = std::size_t{1} << k;
  std::vector<double> c(cells);
  for (std::size_t idx = 0; idx < cells; ++idx)
    c[idx] = (std::popcount(idx) % 2 == 0) ? 1.0 : -1.0;
  return ContrastMatrix(std::move(c));
}

double multinomial_log_pmf(const CountVector& x, std::span<const double> theta) {
  if (theta.size() != x.size())
    fail(ErrorCode::partition_mismatch, "count vector and probabilities have different lengths");
  double out = log_factorial(x.total());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out -= log_factorial(x[i]);
    if (x[i] > 0) out += static_cast<double>(x[i]) * std::log(theta[i]);
  }
  return out;
}

double factorized_multinomial_log_pmf(const CountVector& x, std::span<const double> theta,
                                      const Partition& p) {
  const Reparam rep = reparametrize(theta, p);
  const auto sums = partition_sums(x, p);
  double out = log_factorial(x.total());
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    out -= log_factorial(sums[b]);
    if (sums[b] > 0) out += static_cast<double>(sums[b]) * std::log(rep.theta_marg[b]);
  }
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    double block = log_factorial(sums[b]);
    const auto& cells = p.block(b);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto xi = x[cells[k]];
      block -= log_factorial(xi);
      if (xi > 0) block += static_cast<double>(xi) * std::log(rep.nu[b][k]);
    }
    out += block;
  }
  return out;
}

}  // namespace oddsinv
