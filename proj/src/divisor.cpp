#include "zdl/divisor.hpp"

#include <cmath>
#include <string>

#include <omp.h>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"

namespace zdl {

namespace {

void check_sizing(std::uint64_t limit, std::size_t memory_budget) {
  if (limit == 0) throw SizingError("sieve limit must be at least 1");
  const long double bytes =
      static_cast<long double>(limit + 1) * DivisorTable::bytes_per_entry;
  if (bytes > static_cast<long double>(memory_budget)) {
    throw SizingError("sieve limit " + std::to_string(limit) + " needs about " +
                      std::to_string(static_cast<unsigned long long>(bytes / (1 << 20))) +
                      " MiB, over the budget of " +
                      std::to_string(memory_budget >> 20) + " MiB");
  }
}

std::uint64_t checked_floor(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("argument must be a positive finite real");
  return static_cast<std::uint64_t>(std::floor(x));
}

double delta_raw(double x, const DivisorTable& table) {
  const std::uint64_t m = checked_floor(x);
  table.require(m);
  return static_cast<double>(table.prefix(m)) - divisor_main_term(x) - 0.25;
}

}  // namespace

DivisorTable DivisorTable::from_counts(std::vector<std::uint32_t> counts) {
  if (counts.empty()) throw SizingError("divisor table needs at least one entry");
  DivisorTable t;
  t.limit_ = counts.size();
  t.counts_.reserve(counts.size() + 1);
  t.counts_.push_back(0);
  t.counts_.insert(t.counts_.end(), counts.begin(), counts.end());
  counts.clear();
  counts.shrink_to_fit();

  t.prefix_.resize(t.limit_ + 1);
  t.alt_prefix_.resize(t.limit_ + 1);
  std::uint64_t acc = 0;
  std::int64_t alt = 0;
  for (std::uint64_t n = 1; n <= t.limit_; ++n) {
    acc += t.counts_[n];
    alt += (n & 1) ? -std::int64_t{t.counts_[n]} : std::int64_t{t.counts_[n]};
    t.prefix_[n] = acc;
    t.alt_prefix_[n] = alt;
  }
  return t;
}

void DivisorTable::require(std::uint64_t required) const {
  if (required > limit_) throw TableUnderflow(required);
}

DivisorTable sieve_divisors_serial(std::uint64_t limit, std::size_t memory_budget) {
  check_sizing(limit, memory_budget);
  std::vector<std::uint32_t> d(limit, 0);
  for (std::uint64_t i = 1; i <= limit; ++i)
    for (std::uint64_t j = i; j <= limit; j += i) ++d[j - 1];
  return DivisorTable::from_counts(std::move(d));
}

DivisorTable sieve_divisors(std::uint64_t limit, std::size_t memory_budget) {
  check_sizing(limit, memory_budget);
  std::vector<std::uint32_t> d(limit, 0);
  // Blocks of n; each block is marked by every i ≤ its upper end, so blocks
  // are written by exactly one thread.
  const auto chunks = static_cast<std::uint64_t>(4 * omp_get_max_threads());
  const std::uint64_t block = std::max<std::uint64_t>(1 << 16, limit / chunks + 1);
  const auto nblocks = static_cast<std::int64_t>((limit + block - 1) / block);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block + 1;
    const std::uint64_t hi = std::min(limit, lo + block - 1);
    for (std::uint64_t i = 1; i <= hi; ++i) {
      std::uint64_t j = ((lo + i - 1) / i) * i;
      for (; j <= hi; j += i) ++d[j - 1];
    }
  }
  return DivisorTable::from_counts(std::move(d));
}

std::uint64_t hyperbola_sum(std::uint64_t m) {
  // Σ_{n≤m} ⌊m/n⌋ = 2Σ_{n≤r} ⌊m/n⌋ − r², r = ⌊√m⌋.
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  std::uint64_t s = 0;
  for (std::uint64_t n = 1; n <= r; ++n) s += m / n;
  return 2 * s - r * r;
}

bool validate_hyperbola(const DivisorTable& table) {
  return table.prefix(table.limit()) == hyperbola_sum(table.limit());
}

const char* to_string(DeltaRoute route) noexcept {
  switch (route) {
    case DeltaRoute::exact: return "exact";
    case DeltaRoute::combination: return "combination";
    case DeltaRoute::alternating: return "alternating";
    case DeltaRoute::voronoi: return "voronoi";
  }
  return "unknown";
}

DeltaValue delta(double x, const DivisorTable& table) {
  return {x, delta_raw(x, table), DeltaRoute::exact};
}

DeltaValue delta_star_combination(double x, const DivisorTable& table) {
  table.require(checked_floor(4.0 * x));
  const double v = -delta_raw(x, table) + 2.0 * delta_raw(2.0 * x, table) -
                   0.5 * delta_raw(4.0 * x, table);
  return {x, v, DeltaRoute::combination};
}

DeltaValue delta_star_alternating(double x, const DivisorTable& table) {
  const std::uint64_t m = checked_floor(4.0 * x);
  table.require(m);
  // With the −1/4 of Δ, the alternating identity carries the constant −1/8.
  const double v = 0.5 * static_cast<double>(table.alternating_prefix(m)) -
                   divisor_main_term(x) - 0.125;
  return {x, v, DeltaRoute::alternating};
}

}  // namespace zdl
