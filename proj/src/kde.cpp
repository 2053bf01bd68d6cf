#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "oddsinv/diagnostics.hpp"
#include "oddsinv/error.hpp"

namespace oddsinv {

namespace {

constexpr double kKernelCutoff = 8.0;  // kernel treated as zero beyond 8 bandwidths
constexpr std::size_t kMaxGridPoints = 1 << 16;

}  // namespace

double DensityCurve::integral() const {
  double total = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    total += 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
  return total;
}

std::string DensityCurve::to_csv() const {
  std::string out = "x,density\n";
  char buf[96];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid[k], density[k]);
    out += buf;
  }
  return out;
}

double silverman_bandwidth(const WeightedSample& s) {
  const double sd = std::sqrt(weighted_variance(s));
  if (!(sd > 0.0)) fail(ErrorCode::degenerate, "sample has zero variance; density is degenerate");
  const double iqr = weighted_quantile(s, 0.75) - weighted_quantile(s, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(s.effective_sample_size(), -0.2);
}

std::vector<double> kde_grid(const WeightedSample& s, double bandwidth, std::size_t min_points) {
  if (!(bandwidth > 0.0)) fail(ErrorCode::invalid_argument, "bandwidth must be positive");
  if (s.values.empty()) fail(ErrorCode::invalid_argument, "empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(s.values.begin(), s.values.end());
  const double lo = *lo_it - 5.0 * bandwidth;
  const double hi = *hi_it + 5.0 * bandwidth;
  const auto needed = static_cast<std::size_t>(std::ceil((hi - lo) / (bandwidth / 3.0))) + 1;
  const std::size_t points = std::clamp(needed, std::max<std::size_t>(min_points, 2), kMaxGridPoints);
  return linear_grid(lo, hi, points);
}

DensityCurve kde(const WeightedSample& s, std::optional<double> bandwidth,
                 std::optional<std::vector<double>> grid) {
  if (s.values.empty()) fail(ErrorCode::invalid_argument, "empty sample");
  if (weighted_variance(s) <= 0.0)
    fail(ErrorCode::degenerate, "sample has zero variance; density is degenerate");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(s);
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::invalid_argument, "bandwidth must be positive");

  DensityCurve curve;
  curve.bandwidth = h;
  curve.grid = grid ? std::move(*grid) : kde_grid(s, h);
  curve.density.assign(curve.grid.size(), 0.0);

  std::vector<std::pair<double, double>> pts(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) pts[k] = {s.values[k], s.weights[k]};
  std::sort(pts.begin(), pts.end());
  const double norm = 1.0 / (s.total_weight() * h * std::sqrt(2.0 * std::numbers::pi));

  for (std::size_t g = 0; g < curve.grid.size(); ++g) {
    const double x = curve.grid[g];
    auto first = std::lower_bound(pts.begin(), pts.end(), std::pair<double, double>{x - kKernelCutoff * h, -INFINITY});
    double acc = 0.0;
    for (auto it = first; it != pts.end() && it->first <= x + kKernelCutoff * h; ++it) {
      const double z = (x - it->first) / h;
      acc += it->second * std::exp(-0.5 * z * z);
    }
    curve.density[g] = acc * norm;
  }
  return curve;
}

}  // namespace oddsinv
