#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oddsinv {

/// Fixed stream identifiers. A run seeded with `seed` draws every scheme from
/// its own generator, Rng(seed, stream), so schemes never share random numbers
/// and adding draws to one scheme leaves the others untouched.
enum class Stream : std::uint64_t {
  unconstrained = 1,
  constrained = 2,
  dependent_unconstrained = 3,
  dependent_constrained = 4,
  double_constrained = 5,
  prior_floor = 6,
  // Repetition r of a study uses repetition_base + r.
  repetition_base = 1000,
};

/// Seedable source of variates. The engine is std::mt19937_64 (bit-identical on
/// every conforming platform) seeded through std::seed_seq from the 64-bit seed
/// and stream id. Uniform, normal and gamma variates are produced here rather
/// than by <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  Rng(std::uint64_t seed, Stream stream) : Rng(seed, static_cast<std::uint64_t>(stream)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal, Marsaglia polar method.
  double normal();
  /// log of a Gamma(shape, 1) variate. Marsaglia-Tsang squeeze for shape >= 1;
  /// for shape < 1 the boost G(shape) = G(shape + 1) * U^{1/shape}, kept in logs
  /// so tiny shapes do not underflow.
  double log_gamma(double shape);
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Fills `out` with log theta for theta ~ Dirichlet(alpha).
void sample_log_dirichlet(std::span<const double> alpha, Rng& rng, std::span<double> out);
/// theta ~ Dirichlet(alpha) via normalized Gamma(alpha_i, 1) variates.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);

}  // namespace oddsinv
