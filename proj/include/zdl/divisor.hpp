#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zdl {

/// Sieved divisor counts d(1..limit) with exact cumulative sums.
///
/// Besides the plain prefix Σ_{n≤m} d(n) the table keeps the signed prefix
/// Σ_{n≤m} (−1)ⁿ d(n), so the two Δ* routes read disjoint data. Immutable
/// after construction and safe to share between threads.
class DivisorTable {
 public:
  /// Default memory budget for sieving, in bytes.
  static constexpr std::size_t default_memory_budget = std::size_t{4} << 30;

  static constexpr std::size_t bytes_per_entry =
      sizeof(std::uint32_t) + sizeof(std::uint64_t) + sizeof(std::int64_t);

  /// Builds a table from d(1..limit); `counts[0]` must hold d(1).
  static DivisorTable from_counts(std::vector<std::uint32_t> counts);

  std::uint64_t limit() const noexcept { return limit_; }

  std::uint32_t d(std::uint64_t n) const noexcept { return counts_[n]; }

  /// Σ_{n≤m} d(n), for 0 ≤ m ≤ limit.
  std::uint64_t prefix(std::uint64_t m) const noexcept { return prefix_[m]; }

  /// Σ_{n≤m} (−1)ⁿ d(n), for 0 ≤ m ≤ limit.
  std::int64_t alternating_prefix(std::uint64_t m) const noexcept { return alt_prefix_[m]; }

  /// d(1..limit) in order.
  std::span<const std::uint32_t> counts() const noexcept {
    return {counts_.data() + 1, static_cast<std::size_t>(limit_)};
  }

  /// Throws TableUnderflow unless limit() ≥ required.
  void require(std::uint64_t required) const;

 private:
  DivisorTable() = default;

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> counts_;  // index 0 unused
  std::vector<std::uint64_t> prefix_;
  std::vector<std::int64_t> alt_prefix_;
};

/// d(n) for n ≤ limit by the O(limit log limit) multiple-marking sieve.
/// Serial reference.
DivisorTable sieve_divisors_serial(std::uint64_t limit,
                                   std::size_t memory_budget = DivisorTable::default_memory_budget);

/// Block-parallel sieve; each thread owns a contiguous range of n.
DivisorTable sieve_divisors(std::uint64_t limit,
                            std::size_t memory_budget = DivisorTable::default_memory_budget);

/// Σ_{n≤m} floor(m/n) in O(√m) integer steps.
std::uint64_t hyperbola_sum(std::uint64_t m);

/// True when prefix(limit) matches the hyperbola identity.
bool validate_hyperbola(const DivisorTable& table);

enum class DeltaRoute { exact, combination, alternating, voronoi };

const char* to_string(DeltaRoute route) noexcept;

struct DeltaValue {
  double x = 0.0;
  double value = 0.0;
  DeltaRoute route = DeltaRoute::exact;
};

/// Δ(x) = Σ_{n≤x} d(n) − x(log x + 2γ − 1) − 1/4. The sum includes n = x at
/// integer x. Requires x > 0 and limit ≥ ⌊x⌋.
DeltaValue delta(double x, const DivisorTable& table);

/// Δ*(x) = −Δ(x) + 2Δ(2x) − ½Δ(4x). Requires limit ≥ ⌊4x⌋.
DeltaValue delta_star_combination(double x, const DivisorTable& table);

/// Δ*(x) from the alternating divisor sum:
/// ½Σ_{n≤4x}(−1)ⁿd(n) − x(log x + 2γ − 1) − 1/8.
DeltaValue delta_star_alternating(double x, const DivisorTable& table);

}  // namespace zdl
