#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "zdl/errors.hpp"
#include "zdl/explicit_formulas.hpp"
#include "zdl/numeric.hpp"

using namespace zdl;

namespace {

const DivisorTable& table() {
  static const auto t = sieve_divisors(100'000);
  return t;
}

// 200 sample points in [10⁴, 2·10⁴] at a fixed offset from the integers.
std::vector<double> sample_points(double offset, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m(10'000, 19'999);
  std::vector<double> xs(200);
  for (auto& x : xs) x = m(rng) + offset;
  return xs;
}

template <typename Series, typename Exact>
double rms_error(const std::vector<double>& xs, std::uint64_t N, Series series, Exact exact) {
  double s = 0.0;
  for (double x : xs) {
    const double e = series(x, N) - exact(x);
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

TEST_CASE("Voronoi series with N = 2 by hand") {
  const double x = 100.0;
  const double pref = std::pow(x, 0.25) / (pi * std::sqrt(2.0));
  const double t1 = std::cos(4 * pi * std::sqrt(x) - pi / 4);
  const double t2 = 2 * std::pow(2.0, -0.75) * std::cos(4 * pi * std::sqrt(2 * x) - pi / 4);
  const auto r = voronoi_delta(x, 2, table());
  CHECK(r.value == doctest::Approx(pref * (t1 + t2)).epsilon(1e-13));
  CHECK(r.N == 2);
  CHECK(r.error_envelope == doctest::Approx(std::pow(x, 0.51) / std::sqrt(2.0)));
  CHECK(voronoi_delta_star(x, 2, table()).value == doctest::Approx(pref * (-t1 + t2)).epsilon(1e-13));
}

TEST_CASE("Voronoi parameter errors") {
  CHECK_THROWS_AS(voronoi_delta(100.0, 1, table()), ParameterError);
  CHECK_THROWS_AS(voronoi_delta(1e6, 200'000, table()), TableUnderflow);
  CHECK_THROWS_AS(voronoi_delta(100.0, 101, table()), ParameterError);
  VoronoiOptions wide;
  wide.max_ratio = 2.0;
  CHECK_NOTHROW(voronoi_delta(100.0, 150, table(), wide));
}

TEST_CASE("Voronoi series converges to the exact delta") {
  const auto xs = sample_points(0.5, 7);
  auto series = [](double x, std::uint64_t N) { return voronoi_delta(x, N, table()).value; };
  auto exact = [](double x) { return delta(x, table()).value; };
  const double e100 = rms_error(xs, 100, series, exact);
  const double e1e4 = rms_error(xs, 10'000, series, exact);
  CHECK(e1e4 < e100);
}

TEST_CASE("Voronoi series for delta star converges and matches delta's error scale") {
  // Δ* jumps on the quarter-integer lattice; sample midway between jumps.
  const auto xs = sample_points(0.125, 11);
  auto series = [](double x, std::uint64_t N) { return voronoi_delta_star(x, N, table()).value; };
  auto exact = [](double x) { return delta_star_combination(x, table()).value; };
  const double e100 = rms_error(xs, 100, series, exact);
  const double e1e4 = rms_error(xs, 10'000, series, exact);
  CHECK(e1e4 < e100);

  const auto xs_delta = sample_points(0.5, 11);
  const double d100 = rms_error(
      xs_delta, 100, [](double x, std::uint64_t N) { return voronoi_delta(x, N, table()).value; },
      [](double x) { return delta(x, table()).value; });
  CHECK(e100 / d100 > 0.5);
  CHECK(e100 / d100 < 2.0);
}

TEST_CASE("Voronoi batch kernels agree with the serial reference") {
  const auto xs = sample_points(0.5, 3);
  const auto a = voronoi_batch_serial(xs, 500, true, table());
  const auto b = voronoi_batch(xs, 500, true, table());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].value == b[i].value);
  CHECK(a[17].value == voronoi_delta_star(xs[17], 500, table()).value);
}

TEST_CASE("arsinh") {
  CHECK(arsinh(0.0) == 0.0);
  CHECK(arsinh(1.0) == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-15));
  for (double x : {1e-12, 0.3, 2.0, 50.0, 1e8}) {
    CHECK(arsinh(-x) == -arsinh(x));
    CHECK(arsinh(x) == doctest::Approx(std::asinh(x)).epsilon(1e-14));
  }
}

TEST_CASE("Atkinson phase expansion at T = 10^6, n = 10") {
  const double T = 1e6, n = 10;
  const double lead = -pi / 4 + 2 * std::sqrt(2 * pi * n * T);
  const double next = std::sqrt(2 * pi * pi * pi) / 6 * std::pow(n, 1.5) / std::sqrt(T);
  const double rest = atkinson_phase(T, n) - lead - next;
  CHECK(std::abs(rest) <= std::pow(n, 2.5) * std::pow(T, -1.5));
  CHECK(std::abs(atkinson_phase(T, n) - lead) == doctest::Approx(next).epsilon(1e-3));
}

TEST_CASE("Atkinson phase is increasing in n and has the expected T-derivative") {
  const double T = 5000;
  for (double n = 1; n < 5000; n += 37) REQUIRE(atkinson_phase(T, n + 1) > atkinson_phase(T, n));
  for (double n : {1.0, 10.0, 400.0, 4000.0}) {
    const double h = 1e-3;
    const double fd = (atkinson_phase(T + h, n) - atkinson_phase(T - h, n)) / (2 * h);
    const double analytic = 2 * arsinh(std::sqrt(pi * n / (2 * T)));
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("Atkinson amplitude") {
  CHECK(std::abs(atkinson_amplitude(1e6, 1) - 1) < 1e-5);
  const double T = 3000;
  double prev = 2.0;
  for (double n = 1; n < T; n += 11) {
    const double e = atkinson_amplitude(T, n);
    REQUIRE(e > 0.0);
    REQUIRE(e <= 1.0);
    REQUIRE(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(atkinson_amplitude(100, 100), DomainError);
  CHECK_THROWS_AS(atkinson_amplitude(100, 0.5), DomainError);
}

TEST_CASE("Atkinson parameters") {
  CHECK(atkinson_n_prime(two_pi, two_pi) ==
        doctest::Approx(1 + pi - std::sqrt(pi * pi + 2 * pi)).epsilon(1e-14));
  CHECK(atkinson_n_prime(two_pi, two_pi) == doctest::Approx(0.122539).epsilon(1e-5));
  const auto p = AtkinsonParams::standard(1000);
  CHECK(p.N == 1000);
  CHECK(p.N_prime > 0);
  CHECK(p.N_prime < p.N);
  CHECK(p.N_prime < 1000 / two_pi);
  CHECK_THROWS_AS(AtkinsonParams::make(1000, 400), ParameterError);
  CHECK_THROWS_AS(AtkinsonParams::make(1000, 2500), ParameterError);
  CHECK_NOTHROW(AtkinsonParams::make(1000, 400, 0.3, 2.0));
}

TEST_CASE("Atkinson second sum is small next to the first near T = 10^4") {
  double s1sq = 0, s2sq = 0, s2max = 0;
  for (double T = 9500; T < 10500; T += 20) {
    const auto s = atkinson_sums(AtkinsonParams::standard(T), table());
    s1sq += s.sigma1 * s.sigma1;
    s2sq += s.sigma2 * s.sigma2;
    s2max = std::max(s2max, std::abs(s.sigma2));
  }
  CHECK(s2max <= 2 * std::log(1e4));
  CHECK(std::sqrt(s2sq) < 0.5 * std::sqrt(s1sq));
}

TEST_CASE("Atkinson formula against quadrature at moderate T") {
  ZetaMeanSquare ms(build_zeta_grid(0.0, 1100.0, 0.02));
  for (double T : {100.0, 250.0, 613.0, 1000.0}) {
    const auto a = atkinson_E(AtkinsonParams::standard(T), table());
    CHECK(a.route == ERoute::atkinson);
    CHECK(std::abs(a.value - ms.E(T)) <= 10 * std::pow(std::log(T), 2));
  }
}
