#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oddsinv {

/// How the table was sampled: total fixed only, one margin fixed, or both margins fixed.
enum class Scheme { unconstrained, constrained, double_constrained };

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view name);

/// Disjoint blocks of cell indices (0-based internally) covering {0..r-1}.
///
/// Cells are flattened row-major from the original table. A Partition is
/// validated when it is built: every block is nonempty, blocks are pairwise
/// disjoint and their union is exactly the cell set. Block order and the
/// order of indices inside a block are kept as given.
class Partition {
 public:
  Partition(std::size_t cells, std::vector<std::vector<std::size_t>> blocks);

  /// Blocks given with 1-based cell indices, the convention used in configs.
  static Partition from_one_based(std::size_t cells,
                                  const std::vector<std::vector<std::size_t>>& blocks);
  /// One block per table row of a rows x cols table.
  static Partition rows(std::size_t rows, std::size_t cols);
  /// One block per table column of a rows x cols table.
  static Partition columns(std::size_t rows, std::size_t cols);

  std::size_t cell_count() const noexcept { return cells_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_.at(b); }
  std::size_t block_of(std::size_t cell) const { return owner_.at(cell); }

  bool operator==(const Partition&) const = default;

 private:
  std::size_t cells_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> owner_;
};

/// Observed cell counts of a flattened table.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<std::uint64_t> counts);

  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
  std::span<const std::uint64_t> values() const noexcept { return counts_; }

  bool operator==(const CountVector&) const = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// r x d matrix of finite contrast coefficients; column j defines log psi_j.
class ContrastMatrix {
 public:
  /// `column_major` holds r*d entries, column j at offset j*r.
  ContrastMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);
  /// Single-column contrast.
  explicit ContrastMatrix(std::vector<double> column);
  /// `cells[i][j]` is the coefficient of cell i in contrast j.
  static ContrastMatrix from_cell_rows(const std::vector<std::vector<double>>& cells);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  std::span<const double> column(std::size_t j) const;
  /// True when every coefficient is an integer; margin checks are then exact.
  bool is_integral() const noexcept { return integral_; }

  bool operator==(const ContrastMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  void check();

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  bool integral_;
};

/// Dirichlet(alpha) prior on the cell probabilities.
class DirichletPrior {
 public:
  explicit DirichletPrior(std::vector<double> alpha);
  static DirichletPrior symmetric(std::size_t cells, double concentration);

  std::size_t size() const noexcept { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }
  std::span<const double> alpha() const noexcept { return alpha_; }

  /// Prior updated with counts: alpha + x.
  DirichletPrior updated(const CountVector& x) const;
  /// Prior of the aggregated block probabilities, alpha^P.
  DirichletPrior aggregated(const Partition& p) const;

  bool operator==(const DirichletPrior&) const = default;

 private:
  std::vector<double> alpha_;
};

/// Marginal block probabilities plus the within-block conditionals.
struct Reparam {
  std::vector<double> theta_marg;
  std::vector<std::vector<double>> nu;
};

/// log psi_j split into its marginal (tau) and within-block (rho) parts.
struct DecomposedLogOdds {
  std::vector<double> tau;
  std::vector<double> rho;
};

std::vector<std::uint64_t> partition_sums(const CountVector& x, const Partition& p);
std::vector<double> block_sums(std::span<const double> values, const Partition& p);

Reparam reparametrize(std::span<const double> theta, const Partition& p);
std::vector<double> reconstruct(const Reparam& rep, const Partition& p);

std::vector<double> log_godds(std::span<const double> theta, const ContrastMatrix& c);
/// Generalized odds ratios psi_j = prod_i theta_i^{c_ij}, evaluated in the log domain.
std::vector<double> godds(std::span<const double> theta, const ContrastMatrix& c);

DecomposedLogOdds decompose_log_odds(const Reparam& rep, const ContrastMatrix& c,
                                     const Partition& p);

/// Block sums of contrast column j: c^P_j.
std::vector<double> contrast_block_sums(const ContrastMatrix& c, const Partition& p,
                                        std::size_t j);

/// Tolerance used for "block sum is zero": 0 for integer contrasts, 1e-12 otherwise.
double margin_tolerance(const ContrastMatrix& c) noexcept;

/// True iff every block sum of every column vanishes, i.e. tau is identically zero.
bool margin_free(const ContrastMatrix& c, const Partition& p);
bool margin_free_column(const ContrastMatrix& c, const Partition& p, std::size_t j);

/// Sample-size condition on column j: with K+ (K-) the blocks whose coefficient
/// sum is positive (negative), holds iff (|K+| > 0 and n >= |K+|) or
/// (|K-| > 0 and n >= |K-|).
bool meets_sample_size_condition(const ContrastMatrix& c, const Partition& p, std::size_t j,
                                 std::uint64_t n);

// Contrast builders. Tables are flattened row-major.
ContrastMatrix odds_ratio_2x2();
/// Local odds ratio of cells (i,j),(i+1,j+1) over (i+1,j),(i,j+1) in a rows x cols table.
ContrastMatrix local_odds_ratio(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
/// (k-1)-th order odds ratio of a 2^k table: coefficient (-1)^{|j|}, |j| = sum of bits mod 2.
/// Cell (j_1,...,j_k) sits at flat index with j_1 as the most significant bit.
ContrastMatrix higher_order_odds_ratio(std::size_t k);

/// log of the Multinomial(n, theta) pmf at x.
double multinomial_log_pmf(const CountVector& x, std::span<const double> theta);
/// Same pmf evaluated through the block factorization: the Multinomial(n, theta^P)
/// pmf of the block sums times the per-block Multinomial(x^P_b, nu^b) pmfs.
double factorized_multinomial_log_pmf(const CountVector& x, std::span<const double> theta,
                                      const Partition& p);

}  // namespace oddsinv
