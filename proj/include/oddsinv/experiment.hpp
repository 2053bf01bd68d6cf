#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oddsinv/model.hpp"

namespace oddsinv {

enum class PriorKind { dirichlet, dependent };

struct PartitionSpec {
  /// "rows" (blocks by first table index), "columns" (blocks by last index) or "blocks".
  std::string kind = "rows";
  std::vector<std::vector<std::size_t>> blocks;  // 1-based, for kind == "blocks"

  bool operator==(const PartitionSpec&) const = default;
};

struct ContrastSpec {
  /// "or2x2", "local", "higher_order" or "matrix".
  std::string builder = "or2x2";
  std::size_t cell_row = 0;  // local: 0-based cell (i, j)
  std::size_t cell_col = 0;
  std::size_t order = 2;     // higher_order: number of binary variables k
  std::vector<std::vector<double>> matrix;  // matrix: r rows of d coefficients

  bool operator==(const ContrastSpec&) const = default;
};

struct TGridSpec {
  double tmin = -10.0;
  double tmax = 10.0;
  std::size_t points = 401;

  bool operator==(const TGridSpec&) const = default;
};

/// One experiment, read from a JSON file. Cross-validated against the model
/// invariants at load time.
struct ExperimentConfig {
  std::vector<std::size_t> dims;
  std::vector<std::uint64_t> counts;
  PartitionSpec partition;
  ContrastSpec contrast;
  PriorKind prior = PriorKind::dirichlet;
  std::vector<double> alpha;
  std::vector<Scheme> schemes = {Scheme::unconstrained, Scheme::constrained};
  std::size_t samples = 100000;
  std::uint64_t seed = 20240501;
  TGridSpec t_grid;
  std::string out_dir = "out";
  std::vector<double> theta0;  // concentration study; empty means uniform
  std::vector<std::uint64_t> n_list = {100, 1000, 10000};

  static ExperimentConfig from_json(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string to_json() const;

  /// Throws ErrorCode::config describing the first inconsistency.
  void validate() const;

  std::size_t cells() const;
  CountVector table() const;
  Partition make_partition() const;
  ContrastMatrix make_contrast() const;
  DirichletPrior make_prior() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct CommandResult {
  /// 0 success or invariant, 2 non-invariant finding.
  int exit_code = 0;
  std::string report;
  std::vector<std::string> files;
};

/// CF-grid difference above which two posteriors are declared different.
inline constexpr double kCfDifferenceThreshold = 1e-6;

CommandResult cmd_invariance(const ExperimentConfig& cfg);
CommandResult cmd_cf(const ExperimentConfig& cfg);
CommandResult cmd_figure(const ExperimentConfig& cfg);
CommandResult cmd_analyze(const ExperimentConfig& cfg);
CommandResult cmd_concentration(const ExperimentConfig& cfg);

/// Dispatches on "invariance", "cf", "figure", "analyze" or "concentration".
CommandResult run_command(std::string_view name, const ExperimentConfig& cfg);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace oddsinv
