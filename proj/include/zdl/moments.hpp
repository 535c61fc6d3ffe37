#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zdl/divisor.hpp"
#include "zdl/zeta.hpp"

namespace zdl {

enum class Quantity { delta, delta_star, E, E_star };

const char* to_string(Quantity q) noexcept;
Quantity parse_quantity(std::string_view name);

/// Δ-family integrals start at 1, E-family integrals at 0.
double moment_lower_limit(Quantity q) noexcept;

struct MomentSample {
  double T = 0.0;
  double integral = 0.0;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

struct MomentEstimate {
  Quantity quantity = Quantity::delta;
  int power = 2;
  std::vector<MomentSample> samples;
  ExponentFit fit;
  /// Odd powers only: samples left out of the fit because the integral was ≤ 0.
  std::size_t discarded = 0;
};

/// Data the integrands are built from. E-family quantities need `zeta`,
/// Δ-family and E* need `table`.
struct MomentResources {
  const DivisorTable* table = nullptr;
  const ZetaMeanSquare* zeta = nullptr;
  /// Simpson panels per unit length for the Δ family.
  int points_per_unit = 8;
};

/// ∫ quantity(x)^k dx from the lower limit to each T (ascending, > lower limit).
/// Serial reference.
std::vector<MomentSample> moment_scan_serial(Quantity q, int k, std::span<const double> Ts,
                                             const MomentResources& res);

/// Same integrals; pieces are integrated in parallel and accumulated in
/// ascending order, so results equal the serial reference bit for bit.
std::vector<MomentSample> moment_scan(Quantity q, int k, std::span<const double> Ts, const MomentResources& res);

double moment_integral(Quantity q, int k, double T, const MomentResources& res);

/// Geometric points lo, lo·ratio, … up to hi (hi itself appended if missed).
std::vector<double> geometric_points(double lo, double hi, double ratio);

/// Least squares of log(integral) on log(T) with no range requirement
/// (≥ 2 positive samples); used for short trend checks.
ExponentFit log_log_fit(std::span<const MomentSample> samples);

/// Least squares of log(integral) on log(T). Needs ≥ 6 positive samples
/// spanning at least a decade.
ExponentFit fit_exponent(std::span<const MomentSample> samples);

/// exp(mean(log I − slope·log T)): the leading coefficient for a fixed exponent.
double fixed_exponent_coefficient(std::span<const MomentSample> samples, double slope);

MomentEstimate estimate_moment(Quantity q, int k, std::span<const double> Ts, const MomentResources& res);

/// Σ d²(n) n^{−3/2}: direct sum to `terms` plus an integral tail from a
/// fitted x·P₃(log x) model of Σ_{n≤x} d²(n).
struct DivisorSquareSeries {
  double partial = 0.0;
  double tail = 0.0;
  double total() const noexcept { return partial + tail; }
};

DivisorSquareSeries divisor_square_series(const DivisorTable& table, std::uint64_t terms);

/// Σ_{n≤M} d²(n) n^{−3/2} with no tail; at height T the E mean square follows
/// this sum cut at M = T/2π long before it reaches the full series.
double divisor_square_partial(const DivisorTable& table, std::uint64_t M);

/// (6π²)⁻¹ Σ d²(n) n^{−3/2}.
double delta_mean_square_constant(double series) noexcept;

/// (2/3)(2π)^{−1/2} Σ d²(n) n^{−3/2}.
double E_mean_square_constant(double series) noexcept;

/// Accepted slope range for one moment.
struct SlopeBound {
  double expected = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  const char* note = "";
};

/// Fixed bounds for Δ^{2,3,4}, E^{2,3,4} and (E*)²; empty for other moments.
/// (E*)⁴ is only bounded relative to E⁴, see verify_moment_suite.
std::optional<SlopeBound> slope_bound(Quantity q, int k);

struct MomentSuiteConfig {
  double t_min = 100.0;
  double delta_max = 1e5;
  double e_max = 5000.0;
  double ratio = 1.25;
};

/// One fitted moment and the bound it is checked against.
struct MomentSuiteRow {
  MomentEstimate estimate;
  double expected = 0.0;  // reference exponent
  double lower = 0.0;     // accepted slope range
  double upper = 0.0;
  std::string note;
  bool pass = false;
};

/// Fits Δ², Δ³, Δ⁴, E², E³, E⁴, (E*)², (E*)⁴. The (E*)⁴ row passes when
/// its slope is at least 0.1 below the E⁴ slope.
std::vector<MomentSuiteRow> verify_moment_suite(const MomentSuiteConfig& config, const MomentResources& res);

}  // namespace zdl
