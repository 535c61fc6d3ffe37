#include "zdl/quadruples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <omp.h>

#include "zdl/errors.hpp"

namespace zdl {

namespace {

void check(std::uint64_t N, int k, double delta, const QuadrupleOptions& opts) {
  if (N < 1) throw ParameterError("N must be at least 1");
  if (k < 2) throw ParameterError("k must be at least 2");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (N > opts.max_N)
    throw SizingError("N = " + std::to_string(N) + " exceeds the cap " + std::to_string(opts.max_N) +
                      " (" + std::to_string(N * N) + " pair sums)");
}

std::vector<double> roots(std::uint64_t N, int k) {
  std::vector<double> r(N);
  for (std::uint64_t i = 0; i < N; ++i) r[i] = std::pow(static_cast<double>(N + 1 + i), 1.0 / k);
  return r;
}

// Pairs (i, j), i in [begin, end), j > i, with s[j] − s[i] < bound.
std::uint64_t sweep(std::span<const double> s, std::size_t begin, std::size_t end, double bound) {
  if (begin >= end) return 0;
  std::uint64_t count = 0;
  const double first = s[begin];
  std::size_t j = static_cast<std::size_t>(
      std::partition_point(s.begin() + static_cast<std::ptrdiff_t>(begin), s.end(),
                           [&](double v) { return v - first < bound; }) -
      s.begin());
  for (std::size_t i = begin; i < end; ++i) {
    j = std::max(j, i + 1);
    while (j < s.size() && s[j] - s[i] < bound) ++j;
    count += j - i - 1;
  }
  return count;
}

std::uint64_t ordered_count(std::span<const double> s, double bound, bool parallel) {
  std::uint64_t unordered = 0;
  if (!parallel) {
    unordered = sweep(s, 0, s.size(), bound);
  } else {
    const std::size_t blocks = std::max<std::size_t>(1, 8 * static_cast<std::size_t>(omp_get_max_threads()));
    const std::size_t width = (s.size() + blocks - 1) / blocks;
#pragma omp parallel for schedule(dynamic) reduction(+ : unordered)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * width;
      unordered += sweep(s, lo, std::min(s.size(), lo + width), bound);
    }
  }
  // Each unordered pair of pair-sums gives two ordered quadruples; every pair
  // sum also matches itself.
  return 2 * unordered + s.size();
}

QuadrupleReport finish(std::uint64_t N, int k, double delta, std::span<const double> s, double eps0,
                       bool parallel) {
  const double scale = std::pow(static_cast<double>(N), 1.0 / k);
  const double bound = delta * scale;
  QuadrupleReport r;
  r.N = N;
  r.k = k;
  r.delta = delta;
  r.count = ordered_count(s, bound, parallel);
  const double slack = 1e-12 * scale;
  r.ties = ordered_count(s, bound + slack, parallel) - ordered_count(s, std::max(0.0, bound - slack), parallel);
  const double n = static_cast<double>(N);
  r.envelope = std::pow(n, eps0) * (n * n * n * n * delta + n * n);
  r.ratio = static_cast<double>(r.count) / r.envelope;
  return r;
}

}  // namespace

std::vector<double> pair_sums(std::uint64_t N, int k) {
  const auto r = roots(N, k);
  std::vector<double> s;
  s.reserve(N * N);
  for (double a : r)
    for (double b : r) s.push_back(a + b);
  std::sort(s.begin(), s.end());
  return s;
}

QuadrupleReport count_quadruples_serial(std::uint64_t N, int k, double delta, const QuadrupleOptions& opts) {
  check(N, k, delta, opts);
  const auto s = pair_sums(N, k);
  return finish(N, k, delta, s, opts.epsilon0, false);
}

QuadrupleReport count_quadruples(std::uint64_t N, int k, double delta, const QuadrupleOptions& opts) {
  check(N, k, delta, opts);
  const auto r = roots(N, k);
  std::vector<double> s(N * N);
  const auto n = static_cast<std::int64_t>(N);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < N; ++j) s[static_cast<std::size_t>(i) * N + j] = r[static_cast<std::size_t>(i)] + r[j];
  std::sort(s.begin(), s.end());
  return finish(N, k, delta, s, opts.epsilon0, true);
}

std::vector<QuadrupleBoundRow> verify_quadruple_bound(std::span<const std::uint64_t> Ns, std::span<const int> ks,
                                     std::span<const double> deltas, double C, const QuadrupleOptions& opts) {
  std::vector<QuadrupleBoundRow> rows;
  for (int k : ks)
    for (std::uint64_t N : Ns) {
      check(N, k, 1.0, opts);
      const auto r = roots(N, k);
      std::vector<double> s;
      s.reserve(N * N);
      for (double a : r)
        for (double b : r) s.push_back(a + b);
      std::sort(s.begin(), s.end());
      for (double delta : deltas) {
        check(N, k, delta, opts);
        QuadrupleBoundRow row;
        row.report = finish(N, k, delta, s, opts.epsilon0, true);
        row.pass = row.report.ratio <= C;
        rows.push_back(row);
      }
    }
  return rows;
}

}  // namespace zdl
