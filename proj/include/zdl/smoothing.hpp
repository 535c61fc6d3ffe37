#pragma once

#include <functional>

#include "zdl/divisor.hpp"
#include "zdl/zeta.hpp"

namespace zdl {

enum class Side { plus, minus };

const char* to_string(Side side) noexcept;

/// Gaussian averaging kernel e^{−u²/G²} on u ∈ [0, truncation].
struct GaussianKernelSpec {
  double G = 1.0;
  double truncation = 0.0;
  Side sign = Side::plus;

  /// Kernel for averaging around T: truncation = G·log T, with 1 ≤ G and
  /// G·log T ≤ T/2 enforced.
  static GaussianKernelSpec around(double T, double G, Side sign);
};

/// A real function known on [lo, hi]. `resolution` is the spacing of the
/// samples behind it (0 for functions evaluated exactly).
struct SampledFunction {
  std::function<double(double)> eval;
  double lo = 0.0;
  double hi = 0.0;
  double resolution = 0.0;
};

struct GaussianAverage {
  double value = 0.0;
  /// Upper bound for the kernel mass dropped beyond the truncation,
  /// relative to the normalisation: e^{−(truncation/G)²}.
  double truncation_error = 0.0;
};

/// (2/(√π G)) ∫₀^{trunc} f(T ± u) e^{−u²/G²} du by composite Simpson with
/// step at most G/20.
GaussianAverage gaussian_average(const SampledFunction& f, double T, const GaussianKernelSpec& spec);

/// E(t) from the mean-square integrator, as a sampled function.
SampledFunction sampled_E(const ZetaMeanSquare& ms);

/// t ↦ Δ*(t/2π) over the range the table supports.
SampledFunction sampled_delta_star(const DivisorTable& table);

struct SandwichReport {
  double T = 0.0;
  double G = 0.0;
  double lhs = 0.0;            // E(T)
  double upper_average = 0.0;  // forward average of E
  double lower_average = 0.0;  // backward average of E
  double envelope = 0.0;       // C·G·log T
  bool upper_holds = false;    // E(T) ≤ upper_average + envelope
  bool lower_holds = false;    // E(T) ≥ lower_average − envelope
  bool holds() const noexcept { return upper_holds && lower_holds; }
};

/// The one-sided Gaussian sandwich for E(T) with envelope constant C.
SandwichReport check_sandwich(double T, double G, const ZetaMeanSquare& ms, double C = 3.0);

struct SmoothingIdentityReport {
  double T = 0.0;
  double G = 0.0;
  double centre = 0.0;        // Δ*(T/2π)
  double average_plus = 0.0;
  double average_minus = 0.0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double envelope = 0.0;        // C·G·T^ε, the statement's normalised scaling
  double envelope_proof = 0.0;  // C·G²·T^ε, the unnormalised scaling
  bool holds() const noexcept { return residual_plus <= envelope && residual_minus <= envelope; }
};

/// Residual of the Gaussian identity for Δ*(T/2π), both signs.
SmoothingIdentityReport check_smoothing_identity(double T, double G, const DivisorTable& table, double C = 3.0,
                          double epsilon0 = 0.05);

}  // namespace zdl
