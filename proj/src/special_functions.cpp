#include "oddsinv/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "oddsinv/error.hpp"

namespace oddsinv {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLogTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);
const double kLogPi = std::log(std::numbers::pi);

// Valid for Re(z) >= 0.5.
Complex lanczos_lgamma(Complex z) {
  const Complex zm1 = z - 1.0;
  Complex series = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k)
    series += kLanczosCoef[k] / (zm1 + static_cast<double>(k));
  const Complex t = zm1 + kLanczosG + 0.5;
  return kHalfLogTwoPi + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

// Reflection for Im(z) >= 0:
//   log Gamma(z) = log(pi) - S(z) - log Gamma(1 - z),
// with S the branch of log sin(pi z) that is analytic on the upper half-plane,
//   S(z) = -i pi z + i pi/2 - log 2 + log(1 - exp(2 pi i z)),
// and S(1/2) = 0. |exp(2 pi i z)| <= 1 keeps the last log on its principal branch.
Complex reflected_lgamma_upper(Complex z) {
  using std::numbers::pi;
  const Complex i(0.0, 1.0);
  const Complex w = std::exp(2.0 * pi * i * z);
  const Complex log_sin = -i * pi * z + i * (pi / 2.0) - std::log(2.0) + std::log(1.0 - w);
  return kLogPi - log_sin - lanczos_lgamma(1.0 - z);
}

}  // namespace

Complex lgamma_complex(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(ErrorCode::domain, "lgamma of a non-finite argument");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    fail(ErrorCode::pole, "Gamma has a pole at " + std::to_string(z.real()));
  if (z.real() >= 0.5) return lanczos_lgamma(z);
  if (z.imag() >= 0.0) return reflected_lgamma_upper(z);
  return std::conj(reflected_lgamma_upper(std::conj(z)));
}

double lgamma_real(double x) {
  if (!(x > 0.0)) fail(ErrorCode::domain, "lgamma_real needs a positive argument");
  return lgamma_complex(Complex(x, 0.0)).real();
}

}  // namespace oddsinv
