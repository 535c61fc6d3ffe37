#include "zdl/explicit_formulas.hpp"

#include <cmath>
#include <string>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"

namespace zdl {

namespace {

void check_voronoi(double x, std::uint64_t N, const DivisorTable& table, const VoronoiOptions& options) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Voronoi series needs x > 0");
  if (N < 2) throw ParameterError("Voronoi truncation N must be at least 2");
  if (N > table.limit()) throw TableUnderflow(N);
  if (static_cast<double>(N) > options.max_ratio * x)
    throw ParameterError("Voronoi truncation N = " + std::to_string(N) + " exceeds " +
                         std::to_string(options.max_ratio) + "·x");
}

SeriesResult voronoi_unchecked(double x, std::uint64_t N, bool alternating, const DivisorTable& table,
                               const VoronoiOptions& options) {
  CompensatedSum acc;
  const double root_x = std::sqrt(x);
  for (std::uint64_t n = 1; n <= N; ++n) {
    const auto nd = static_cast<double>(n);
    double c = table.d(n) * std::pow(nd, -0.75);
    if (alternating && (n & 1)) c = -c;
    acc.add(c * std::cos(4.0 * pi * std::sqrt(nd) * root_x - pi / 4.0));
  }
  SeriesResult r;
  r.value = std::pow(x, 0.25) / (pi * std::sqrt(2.0)) * acc.value();
  r.N = N;
  r.error_envelope = std::pow(x, 0.5 + options.epsilon0) / std::sqrt(static_cast<double>(N));
  return r;
}

}  // namespace

SeriesResult voronoi_delta(double x, std::uint64_t N, const DivisorTable& table, const VoronoiOptions& options) {
  check_voronoi(x, N, table, options);
  return voronoi_unchecked(x, N, false, table, options);
}

SeriesResult voronoi_delta_star(double x, std::uint64_t N, const DivisorTable& table,
                                const VoronoiOptions& options) {
  check_voronoi(x, N, table, options);
  return voronoi_unchecked(x, N, true, table, options);
}

std::vector<SeriesResult> voronoi_batch_serial(std::span<const double> xs, std::uint64_t N, bool alternating,
                                               const DivisorTable& table, const VoronoiOptions& options) {
  std::vector<SeriesResult> out(xs.size());
  for (double x : xs) check_voronoi(x, N, table, options);
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = voronoi_unchecked(xs[i], N, alternating, table, options);
  return out;
}

std::vector<SeriesResult> voronoi_batch(std::span<const double> xs, std::uint64_t N, bool alternating,
                                        const DivisorTable& table, const VoronoiOptions& options) {
  std::vector<SeriesResult> out(xs.size());
  for (double x : xs) check_voronoi(x, N, table, options);
  const auto n = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = voronoi_unchecked(xs[k], N, alternating, table, options);
  }
  return out;
}

double arsinh(double x) noexcept {
  // log(x + √(1+x²)) loses digits for small or negative x; evaluate on |x|
  // through log1p and restore the sign.
  const double a = std::abs(x);
  const double r = std::log1p(a + a * a / (1.0 + std::sqrt(1.0 + a * a)));
  return std::copysign(r, x);
}

double atkinson_phase(double T, double n) {
  if (!(T > 0.0) || !(n >= 1.0)) throw DomainError("atkinson_phase needs T > 0 and n ≥ 1");
  const double q = pi * n / (2.0 * T);
  return 2.0 * T * arsinh(std::sqrt(q)) + std::sqrt(2.0 * pi * n * T + pi * pi * n * n) - pi / 4.0;
}

namespace {

double amplitude_unchecked(double T, double n) {
  const double q = pi * n / (2.0 * T);
  return std::pow(1.0 + q, -0.25) / (arsinh(std::sqrt(q)) / std::sqrt(q));
}

}  // namespace

double atkinson_amplitude(double T, double n) {
  if (!(n >= 1.0)) throw DomainError("atkinson_amplitude needs n ≥ 1");
  if (!(n < T)) throw DomainError("atkinson_amplitude needs n < T");
  return amplitude_unchecked(T, n);
}

double atkinson_n_prime(double T, double N) noexcept {
  return T / two_pi + N / 2.0 - std::sqrt(N * N / 4.0 + N * T / two_pi);
}

AtkinsonParams AtkinsonParams::make(double T, double N, double A, double A_prime) {
  if (!(T > 0.0)) throw DomainError("Atkinson formula needs T > 0");
  if (!(0.0 < A && A < A_prime)) throw ParameterError("Atkinson bounds need 0 < A < A'");
  if (!(A * T < N && N < A_prime * T))
    throw ParameterError("Atkinson truncation must satisfy A·T < N < A'·T");
  if (N < 2.0) throw ParameterError("Atkinson truncation N must be at least 2");
  AtkinsonParams p{T, N, atkinson_n_prime(T, N)};
  if (!(p.N_prime > 0.0 && p.N_prime < p.N)) throw DataError("derived N' outside (0, N)");
  return p;
}

AtkinsonSums atkinson_sums(const AtkinsonParams& params, const DivisorTable& table) {
  const double T = params.T;
  const auto n1 = static_cast<std::uint64_t>(std::floor(params.N));
  const auto n2 = static_cast<std::uint64_t>(std::floor(params.N_prime));
  table.require(n1);
  // log(T/2πn) > 0 for every n ≤ N'.
  if (!(params.N_prime < T / two_pi)) throw DataError("N' reaches the resonance n = T/2π");

  CompensatedSum s1;
  for (std::uint64_t n = 1; n <= n1; ++n) {
    const auto nd = static_cast<double>(n);
    double c = table.d(n) * std::pow(nd, -0.75);
    if (n & 1) c = -c;
    s1.add(c * amplitude_unchecked(T, nd) * std::cos(atkinson_phase(T, nd)));
  }
  CompensatedSum s2;
  for (std::uint64_t n = 1; n <= n2; ++n) {
    const auto nd = static_cast<double>(n);
    const double L = std::log(T / (two_pi * nd));
    s2.add(table.d(n) / std::sqrt(nd) / L * std::cos(T * L - T + pi / 4.0));
  }
  return {std::sqrt(2.0) * std::pow(T / two_pi, 0.25) * s1.value(), -2.0 * s2.value()};
}

EValue atkinson_E(const AtkinsonParams& params, const DivisorTable& table) {
  const auto s = atkinson_sums(params, table);
  return {params.T, s.sigma1 + s.sigma2, ERoute::atkinson};
}

}  // namespace zdl
