#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zdl {

struct QuadrupleOptions {
  std::uint64_t max_N = 1500;
  double epsilon0 = 0.05;
};

/// Ordered quadruples (n₁,n₂,n₃,n₄) ∈ (N, 2N]⁴ with
/// |n₁^{1/k} + n₂^{1/k} − n₃^{1/k} − n₄^{1/k}| < δN^{1/k}.
struct QuadrupleReport {
  std::uint64_t N = 0;
  int k = 2;
  double delta = 0.0;
  std::uint64_t count = 0;
  /// N^{ε₀}(N⁴δ + N²)
  double envelope = 0.0;
  double ratio = 0.0;
  /// Pairs whose difference lies within 1e-12·N^{1/k} of the threshold; their
  /// side of the strict inequality is decided by rounding.
  std::uint64_t ties = 0;
};

/// Sorted k-th-root pair sums n₁^{1/k} + n₂^{1/k} over (N, 2N]².
std::vector<double> pair_sums(std::uint64_t N, int k);

QuadrupleReport count_quadruples_serial(std::uint64_t N, int k, double delta, const QuadrupleOptions& opts = {});

/// Same count with the pair-sum build and the sweep split across threads.
QuadrupleReport count_quadruples(std::uint64_t N, int k, double delta, const QuadrupleOptions& opts = {});

struct QuadrupleBoundRow {
  QuadrupleReport report;
  bool pass = false;
};

/// Every (N, k, δ) combination; a row passes when ratio ≤ C.
std::vector<QuadrupleBoundRow> verify_quadruple_bound(std::span<const std::uint64_t> Ns, std::span<const int> ks,
                                     std::span<const double> deltas, double C = 32.0,
                                     const QuadrupleOptions& opts = {});

}  // namespace zdl
