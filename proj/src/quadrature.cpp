#include "zdl/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"

namespace zdl {

namespace {

// Antiderivatives of the Lagrange basis on nodes 0, 1, 2, 3.
double basis_antiderivative(int k, double u) noexcept {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  switch (k) {
    case 0: return -(u4 / 4 - 2 * u3 + 5.5 * u2 - 6 * u) / 6;
    case 1: return (u4 / 4 - 5 * u3 / 3 + 3 * u2) / 2;
    case 2: return -(u4 / 4 - 4 * u3 / 3 + 1.5 * u2) / 2;
    default: return (u4 / 4 - u3 + u2) / 6;
  }
}

double basis(int k, double u) noexcept {
  switch (k) {
    case 0: return -(u - 1) * (u - 2) * (u - 3) / 6;
    case 1: return u * (u - 2) * (u - 3) / 2;
    case 2: return -u * (u - 1) * (u - 3) / 2;
    default: return u * (u - 1) * (u - 2) / 6;
  }
}

}  // namespace

UniformCumulative::UniformCumulative(double origin, double step, std::span<const double> samples)
    : origin_(origin), step_(step), samples_(samples.begin(), samples.end()) {
  if (!(step > 0.0)) throw ParameterError("sample step must be positive");
  if (samples_.size() < 4) throw CoverageError("cumulative quadrature needs at least 4 samples");
  const std::size_t n = samples_.size() - 1;
  cumulative_.resize(n + 1);
  cumulative_[0] = 0.0;
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = stencil_start(i);
    const double a = static_cast<double>(i - j0);
    acc.add(local_integral(j0, a, a + 1.0));
    cumulative_[i + 1] = acc.value();
  }
}

std::size_t UniformCumulative::stencil_start(std::size_t interval) const noexcept {
  const std::size_t last = samples_.size() - 4;
  if (interval == 0) return 0;
  return std::min(interval - 1, last);
}

double UniformCumulative::local_integral(std::size_t j0, double a, double b) const {
  double s = 0.0;
  for (int k = 0; k < 4; ++k)
    s += samples_[j0 + k] * (basis_antiderivative(k, b) - basis_antiderivative(k, a));
  return s * step_;
}

double UniformCumulative::integral_to(double x) const {
  const double u = (x - origin_) / step_;
  const double n = static_cast<double>(intervals());
  const double slack = 1e-9;
  if (!(u >= -slack) || !(u <= n + slack))
    throw CoverageError("integration bound outside the sampled range");
  const double uc = std::clamp(u, 0.0, n);
  auto i = static_cast<std::size_t>(std::floor(uc));
  if (i >= intervals()) return cumulative_.back();
  const double frac = uc - static_cast<double>(i);
  if (frac == 0.0) return cumulative_[i];
  const std::size_t j0 = stencil_start(i);
  const double a = static_cast<double>(i - j0);
  return cumulative_[i] + local_integral(j0, a, a + frac);
}

double UniformCumulative::interpolate(double x) const {
  const double u = (x - origin_) / step_;
  const double n = static_cast<double>(intervals());
  if (!(u >= -1e-9) || !(u <= n + 1e-9))
    throw CoverageError("interpolation point outside the sampled range");
  const double uc = std::clamp(u, 0.0, n);
  auto i = std::min(static_cast<std::size_t>(std::floor(uc)), intervals() - 1);
  const std::size_t j0 = stencil_start(i);
  const double v = uc - static_cast<double>(j0);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += samples_[j0 + k] * basis(k, v);
  return s;
}

double simpson(const std::function<double(double)>& f, double a, double b, double max_step) {
  if (!(max_step > 0.0)) throw ParameterError("simpson step must be positive");
  if (b == a) return 0.0;
  auto panels = static_cast<std::size_t>(std::ceil(std::abs(b - a) / max_step));
  panels = std::max<std::size_t>(2, panels + (panels & 1));
  const double h = (b - a) / static_cast<double>(panels);
  CompensatedSum acc;
  acc.add(f(a));
  acc.add(f(b));
  for (std::size_t i = 1; i < panels; ++i)
    acc.add((i & 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i)));
  return acc.value() * h / 3.0;
}

}  // namespace zdl
