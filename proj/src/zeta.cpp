#include "zdl/zeta.hpp"

#include <array>
#include <cmath>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"

namespace zdl {

namespace {

using cplx = std::complex<double>;

// B_{2k} / (2k)! for k = 1..15.
constexpr std::array<double, 15> bernoulli_over_factorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
    8553103.0 / 6.0 / 4.0329146112660565e26,
    -23749461029.0 / 870.0 / 3.0488834461171387e29,
    8615841276005.0 / 14322.0 / 2.6525285981219107e32,
};

// Taylor coefficients of Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp) about
// p = ½, with the derivative weights m!/(m−j)! folded in for j = 0..12.
class PsiExpansion {
 public:
  static constexpr int terms = 64;
  static constexpr int max_derivative = 12;

  PsiExpansion() {
    constexpr int samples = 128;
    std::array<cplx, samples> values{};
    for (int j = 0; j < samples; ++j) {
      const double phi = two_pi * j / samples;
      const cplx z = std::polar(1.0, phi);
      values[j] = -std::cos(two_pi * (z * z - 5.0 / 16.0)) / std::cos(two_pi * z);
    }
    std::array<double, terms> a{};
    for (int m = 0; m < terms; ++m) {
      cplx s = 0.0;
      for (int j = 0; j < samples; ++j) s += values[j] * std::polar(1.0, -two_pi * m * j / samples);
      a[m] = s.real() / samples;  // radius 1, so no rescaling
    }
    for (int d = 0; d <= max_derivative; ++d) {
      for (int m = 0; m < terms; ++m) {
        double w = 0.0;
        if (m >= d) {
          w = a[m];
          for (int i = 0; i < d; ++i) w *= static_cast<double>(m - i);
        }
        weights_[d][m] = w;
      }
    }
  }

  // Ψ^{(d)}(½ + z).
  double derivative(int d, double z) const noexcept {
    double s = 0.0;
    for (int m = terms - 1; m >= d; --m) s = s * z + weights_[d][m];
    return s;
  }

 private:
  std::array<std::array<double, terms>, max_derivative + 1> weights_{};
};

const PsiExpansion& psi() {
  static const PsiExpansion expansion;
  return expansion;
}

}  // namespace

double riemann_siegel_coefficient(int k, double p);

namespace {

double correction_sum(double p, double a, int order) {
  double sum = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= order; ++k) {
    sum += scale * riemann_siegel_coefficient(k, p);
    scale /= a;
  }
  return sum;
}

}  // namespace

double riemann_siegel_theta(double t) {
  const double t2 = t * t;
  return 0.5 * t * std::log(t / two_pi) - 0.5 * t - pi / 8.0 + 1.0 / (48.0 * t) +
         7.0 / (5760.0 * t * t2) + 31.0 / (80640.0 * t * t2 * t2);
}

double riemann_siegel_coefficient(int k, double p) {
  if (k < 0 || k > 4) throw ParameterError("Riemann-Siegel coefficient index must be 0..4");
  const auto& ps = psi();
  const double z = p - 0.5;
  const double pi2 = pi * pi, pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;
  auto D = [&](int d) { return ps.derivative(d, z); };
  switch (k) {
    case 0: return D(0);
    case 1: return -D(3) / (96.0 * pi2);
    case 2: return D(2) / (64.0 * pi2) + D(6) / (18432.0 * pi4);
    case 3: return -D(1) / (64.0 * pi2) - D(5) / (3840.0 * pi4) - D(9) / (5308416.0 * pi6);
    default:
      return D(0) / (128.0 * pi2) + 19.0 * D(4) / (24576.0 * pi4) +
             11.0 * D(8) / (5898240.0 * pi6) + D(12) / (2038431744.0 * pi8);
  }
}

double hardy_z(double t, int order) {
  if (!(t > 0.0)) throw DomainError("hardy_z needs t > 0");
  if (order < 0 || order > 4) throw ParameterError("Riemann-Siegel order must be 0..4");
  const double a = std::sqrt(t / two_pi);
  const auto n_terms = static_cast<std::int64_t>(std::floor(a));
  const double p = a - static_cast<double>(n_terms);
  const double theta = riemann_siegel_theta(t);
  CompensatedSum main;
  for (std::int64_t n = 1; n <= n_terms; ++n) {
    const double ln = std::log(static_cast<double>(n));
    main.add(std::cos(theta - t * ln) / std::sqrt(static_cast<double>(n)));
  }
  const double sign = (n_terms - 1) % 2 == 0 ? 1.0 : -1.0;
  return 2.0 * main.value() + sign * correction_sum(p, a, order) / std::sqrt(a);
}

std::complex<double> zeta_euler_maclaurin(std::complex<double> s) {
  const double height = std::abs(s.imag());
  const auto n = static_cast<std::int64_t>(std::ceil(height)) + 40;
  const auto N = static_cast<double>(n);
  CompensatedSum re, im;
  for (std::int64_t k = 1; k < n; ++k) {
    const cplx term = std::exp(-s * std::log(static_cast<double>(k)));
    re.add(term.real());
    im.add(term.imag());
  }
  const cplx n_pow = std::exp(-s * std::log(N));  // N^{-s}
  cplx tail = n_pow * N / (s - 1.0) + 0.5 * n_pow;
  cplx rising = s;        // s(s+1)...(s+2k−2)
  cplx power = n_pow / N;  // N^{-s-2k+1}
  for (std::size_t k = 0; k < bernoulli_over_factorial.size(); ++k) {
    tail += bernoulli_over_factorial[k] * rising * power;
    const double j = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + j) * (s + j + 1.0);
    power /= N * N;
  }
  return cplx(re.value(), im.value()) + tail;
}

std::complex<double> zeta_half(double t, const ZetaOptions& options) {
  if (t < 0.0) return std::conj(zeta_half(-t, options));
  if (t < options.rs_threshold) return zeta_euler_maclaurin(cplx(0.5, t));
  const double z = hardy_z(t, options.rs_order);
  return std::polar(z, -riemann_siegel_theta(t));
}

double zeta_half_abs2(double t, const ZetaOptions& options) {
  if (std::abs(t) < options.rs_threshold) return std::norm(zeta_half(t, options));
  const double z = hardy_z(std::abs(t), options.rs_order);
  return z * z;
}

double max_grid_step(double t_end) { return pi / std::log(t_end / two_pi + 2.0); }

bool ZetaSampleGrid::covers(double a, double b) const noexcept {
  const double tol = 1e-9 * std::max(1.0, std::abs(t_end));
  return a >= t_start - tol && b <= t_end + tol && a <= b;
}

namespace {

ZetaSampleGrid grid_shell(double t_start, double t_end, double step, const ZetaOptions& options) {
  if (!(t_start >= 0.0) || !(t_end > t_start)) throw ParameterError("grid needs 0 ≤ t_start < t_end");
  if (!(step > 0.0)) throw ParameterError("grid step must be positive");
  if (step > max_grid_step(t_end))
    throw ParameterError("grid step too coarse for t_end; at most " + std::to_string(max_grid_step(t_end)));
  const auto intervals = static_cast<std::size_t>(std::ceil((t_end - t_start) / step - 1e-9));
  ZetaSampleGrid g;
  g.t_start = t_start;
  g.step = step;
  g.t_end = t_start + step * static_cast<double>(intervals);
  g.method = ZetaMethod::riemann_siegel;
  g.rs_order = options.rs_order;
  g.values.resize(intervals + 1);
  return g;
}

}  // namespace

ZetaSampleGrid build_zeta_grid_serial(double t_start, double t_end, double step,
                                      const ZetaOptions& options) {
  auto g = grid_shell(t_start, t_end, step, options);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = zeta_half_abs2(g.t_at(i), options);
  return g;
}

ZetaSampleGrid build_zeta_grid(double t_start, double t_end, double step, const ZetaOptions& options) {
  auto g = grid_shell(t_start, t_end, step, options);
  const auto n = static_cast<std::int64_t>(g.values.size());
#pragma omp parallel for schedule(static, 4096)
  for (std::int64_t i = 0; i < n; ++i)
    g.values[static_cast<std::size_t>(i)] = zeta_half_abs2(g.t_at(static_cast<std::size_t>(i)), options);
  return g;
}

void validate_grid(const ZetaSampleGrid& grid) {
  if (!(grid.step > 0.0) || !(grid.t_end > grid.t_start))
    throw DataError("grid has an empty range or nonpositive step");
  const double expected = (grid.t_end - grid.t_start) / grid.step;
  if (std::abs(expected - static_cast<double>(grid.values.size() - 1)) > 1e-6)
    throw DataError("grid sample count does not match its range");
  if (grid.step > max_grid_step(grid.t_end) * (1 + 1e-12))
    throw DataError("grid step violates the density bound");
  for (double v : grid.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("grid sample negative or non-finite");
}

const char* to_string(ERoute route) noexcept {
  return route == ERoute::quadrature ? "quadrature" : "atkinson";
}

double mean_square_main_term(double T) noexcept {
  if (T <= 0.0) return 0.0;
  return T * (std::log(T / two_pi) + 2.0 * euler_gamma - 1.0);
}

ZetaMeanSquare::ZetaMeanSquare(const ZetaSampleGrid& grid) {
  if (grid.t_start != 0.0) throw CoverageError("mean-square grid must start at t = 0");
  cumulative_ = UniformCumulative(0.0, grid.step, grid.values);
}

double ZetaMeanSquare::E_at_node(std::size_t i) const {
  const double t = cumulative_.step() * static_cast<double>(i);
  return cumulative_.at_node(i) - mean_square_main_term(t);
}

double mean_square_integral(double T, const ZetaMeanSquare& ms) {
  if (T < 0.0) throw DomainError("T must be nonnegative");
  if (T > ms.t_end() + 1e-9) throw CoverageError("grid does not cover [0, T]");
  return ms.integral(T);
}

EValue E_quadrature(double T, const ZetaMeanSquare& ms) {
  return {T, mean_square_integral(T, ms) - mean_square_main_term(T), ERoute::quadrature};
}

double E_star(double t, const ZetaMeanSquare& ms, const DivisorTable& table) {
  return E_quadrature(t, ms).value - two_pi * delta_star_combination(t / two_pi, table).value;
}

}  // namespace zdl
