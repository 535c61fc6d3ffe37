#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zdl/divisor.hpp"
#include "zdl/zeta.hpp"

namespace zdl {

/// A truncated explicit-formula evaluation. `error_envelope` is the
/// formula's O-term evaluated with implied constant 1 (heuristic).
struct SeriesResult {
  double value = 0.0;
  std::uint64_t N = 0;
  double error_envelope = 0.0;
};

struct VoronoiOptions {
  /// ε in the envelope x^{1/2+ε} N^{−1/2}.
  double epsilon0 = 0.01;
  /// N ≪ x is enforced as N ≤ max_ratio · x.
  double max_ratio = 1.0;
};

/// (π√2)⁻¹ x^{1/4} Σ_{n≤N} d(n) n^{−3/4} cos(4π√(nx) − π/4).
SeriesResult voronoi_delta(double x, std::uint64_t N, const DivisorTable& table,
                           const VoronoiOptions& options = {});

/// As voronoi_delta with coefficients (−1)ⁿ d(n).
SeriesResult voronoi_delta_star(double x, std::uint64_t N, const DivisorTable& table,
                                const VoronoiOptions& options = {});

/// Serial reference for a batch of x.
std::vector<SeriesResult> voronoi_batch_serial(std::span<const double> xs, std::uint64_t N, bool alternating,
                                               const DivisorTable& table, const VoronoiOptions& options = {});

/// OpenMP over the batch; each x is summed in ascending n, so output is
/// identical to the serial reference.
std::vector<SeriesResult> voronoi_batch(std::span<const double> xs, std::uint64_t N, bool alternating,
                                        const DivisorTable& table, const VoronoiOptions& options = {});

/// log(x + √(1 + x²)), odd-symmetric and accurate near 0.
double arsinh(double x) noexcept;

/// Phase f(T, n) = 2T arsinh(√(πn/2T)) + √(2πnT + π²n²) − π/4 (exact form).
double atkinson_phase(double T, double n);

/// Amplitude e(T, n) = (1 + πn/2T)^{−1/4} {(2T/πn)^{1/2} arsinh(√(πn/2T))}⁻¹.
/// Requires 1 ≤ n < T.
double atkinson_amplitude(double T, double n);

/// Truncation parameters: A·T < N < A'·T and the derived N'.
struct AtkinsonParams {
  double T = 0.0;
  double N = 0.0;
  double N_prime = 0.0;

  /// Validates the bounds. Defaults A = 0.5, A' = 2.
  static AtkinsonParams make(double T, double N, double A = 0.5, double A_prime = 2.0);

  /// N = T.
  static AtkinsonParams standard(double T) { return make(T, T); }
};

/// N' = T/2π + N/2 − (N²/4 + NT/2π)^{1/2}.
double atkinson_n_prime(double T, double N) noexcept;

struct AtkinsonSums {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Σ₁(T) and Σ₂(T) separately.
AtkinsonSums atkinson_sums(const AtkinsonParams& params, const DivisorTable& table);

/// E(T) ≈ Σ₁(T) + Σ₂(T).
EValue atkinson_E(const AtkinsonParams& params, const DivisorTable& table);

}  // namespace zdl
