#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "zdl/divisor.hpp"
#include "zdl/quadrature.hpp"

namespace zdl {

enum class ZetaMethod : std::uint8_t { euler_maclaurin = 0, riemann_siegel = 1 };

struct ZetaOptions {
  /// Highest Riemann–Siegel correction term C_k used (0..4).
  int rs_order = 4;
  /// Below this height Euler–Maclaurin summation is used.
  double rs_threshold = 40.0;
};

/// Riemann–Siegel phase θ(t), asymptotic series through the t⁻⁵ term.
double riemann_siegel_theta(double t);

/// C_k(p) of the Riemann–Siegel remainder, k = 0..4, 0 ≤ p < 1.
double riemann_siegel_coefficient(int k, double p);

/// Hardy's Z(t) by the Riemann–Siegel formula, t > 0.
double hardy_z(double t, int order = 4);

/// ζ(s) by Euler–Maclaurin summation; accurate for moderate |Im s|.
std::complex<double> zeta_euler_maclaurin(std::complex<double> s);

/// ζ(½ + it). Negative t returns the conjugate of ζ(½ + i|t|).
std::complex<double> zeta_half(double t, const ZetaOptions& options = {});

/// |ζ(½ + it)|², the grid integrand.
double zeta_half_abs2(double t, const ZetaOptions& options = {});

/// Largest grid step allowed for a grid ending at t_end.
double max_grid_step(double t_end);

/// Samples of |ζ(½+it)|² at t_start + i·step, i = 0..n.
struct ZetaSampleGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;
  ZetaMethod method = ZetaMethod::riemann_siegel;
  int rs_order = 4;
  std::vector<double> values;

  double t_at(std::size_t i) const noexcept { return t_start + step * static_cast<double>(i); }
  bool covers(double a, double b) const noexcept;
};

/// Serial reference grid builder. t_end is rounded up to a whole step.
ZetaSampleGrid build_zeta_grid_serial(double t_start, double t_end, double step,
                                      const ZetaOptions& options = {});

/// OpenMP grid builder over disjoint t-chunks; identical output to the serial builder.
ZetaSampleGrid build_zeta_grid(double t_start, double t_end, double step,
                               const ZetaOptions& options = {});

/// Checks the sample invariants (nonnegative, finite, consistent size, step density).
void validate_grid(const ZetaSampleGrid& grid);

enum class ERoute { quadrature, atkinson };

const char* to_string(ERoute route) noexcept;

struct EValue {
  double T = 0.0;
  double value = 0.0;
  ERoute route = ERoute::quadrature;
};

/// T(log(T/2π) + 2γ − 1).
double mean_square_main_term(double T) noexcept;

/// Running integral of |ζ(½+it)|² over a grid starting at t = 0.
/// Holds a copy of the samples; immutable once built.
class ZetaMeanSquare {
 public:
  explicit ZetaMeanSquare(const ZetaSampleGrid& grid);

  double t_end() const noexcept { return cumulative_.end(); }
  double step() const noexcept { return cumulative_.step(); }

  /// ∫₀ᵀ |ζ(½+it)|² dt.
  double integral(double T) const { return cumulative_.integral_to(T); }

  /// ∫_a^b |ζ(½+it)|² dt.
  double integral(double a, double b) const { return cumulative_.integral(a, b); }

  /// Cubic interpolant of |ζ|² between grid samples.
  double abs2(double t) const { return cumulative_.interpolate(t); }

  double E(double T) const { return integral(T) - mean_square_main_term(T); }

  /// E at grid node i.
  double E_at_node(std::size_t i) const;

  std::size_t nodes() const noexcept { return cumulative_.intervals() + 1; }

  const UniformCumulative& cumulative() const noexcept { return cumulative_; }

 private:
  UniformCumulative cumulative_;
};

/// ∫₀ᵀ|ζ(½+it)|² dt; the grid must start at 0 and reach T.
double mean_square_integral(double T, const ZetaMeanSquare& ms);

/// E(T) by quadrature.
EValue E_quadrature(double T, const ZetaMeanSquare& ms);

/// E*(t) = E(t) − 2πΔ*(t/2π), with Δ* by the combination route.
double E_star(double t, const ZetaMeanSquare& ms, const DivisorTable& table);

}  // namespace zdl
