#include "oddsinv/rng.hpp"

#include <algorithm>
#include <cmath>

#include "oddsinv/error.hpp"

namespace oddsinv {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32)};
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double Rng::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double Rng::log_gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    fail(ErrorCode::invalid_argument, "gamma shape must be finite and positive");
  if (shape < 1.0) return log_gamma(shape + 1.0) + std::log(uniform()) / shape;

  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

double Rng::gamma(double shape) { return std::exp(log_gamma(shape)); }

void sample_log_dirichlet(std::span<const double> alpha, Rng& rng, std::span<double> out) {
  if (out.size() != alpha.size()) fail(ErrorCode::invalid_argument, "output span has wrong size");
  double top = -INFINITY;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = rng.log_gamma(alpha[i]);
    top = std::max(top, out[i]);
  }
  double total = 0.0;
  for (double v : out) total += std::exp(v - top);
  const double log_norm = top + std::log(total);
  for (double& v : out) v -= log_norm;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  std::vector<double> out(alpha.size());
  sample_log_dirichlet(alpha, rng, out);
  for (double& v : out) v = std::exp(v);
  return out;
}

}  // namespace oddsinv
