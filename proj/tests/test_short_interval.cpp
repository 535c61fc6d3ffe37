#include <cmath>

#include "doctest.h"
#include "zdl/errors.hpp"
#include "zdl/short_interval.hpp"

using namespace zdl;

namespace {

const ZetaSampleGrid& grid() {
  static const auto g = build_zeta_grid(0.0, 4100.0, 0.02);
  return g;
}

const ZetaMeanSquare& mean_square() {
  static const ZetaMeanSquare ms(grid());
  return ms;
}

}  // namespace

TEST_CASE("short integral basics") {
  const auto& ms = mean_square();
  CHECK(short_integral(1000, 0.0, ms) == doctest::Approx(0.0));
  CHECK(short_integral(1000, 1e-6, ms) < 1e-4);
  const double whole = short_integral(1000, 10, ms);
  CHECK(whole == doctest::Approx(short_integral(995, 5, ms) + short_integral(1005, 5, ms)).epsilon(1e-12));
  CHECK(whole > 0);
  CHECK_THROWS_AS(short_integral(4095, 10, ms), CoverageError);
}

TEST_CASE("short integral agrees with a step-halved grid") {
  const ZetaMeanSquare fine(build_zeta_grid(0.0, 1020.0, 0.01));
  const ZetaMeanSquare coarse(build_zeta_grid(0.0, 1020.0, 0.02));
  const double a = short_integral(1000, 10, coarse), b = short_integral(1000, 10, fine);
  CHECK(std::abs(a - b) < 0.005 * b);
}

TEST_CASE("generators produce admissible systems") {
  const double T = 2000, G = std::pow(T, 0.25);
  for (PointGenerator g : {PointGenerator::uniform, PointGenerator::random, PointGenerator::greedy_peak}) {
    CAPTURE(to_string(g));
    const auto s = make_points(g, T, G, 7, grid());
    CHECK_NOTHROW(validate(s));
    CHECK(s.points.size() >= 10);
    CHECK(parse_point_generator(to_string(g)) == g);
  }
  const auto u = uniform_points(T, G);
  CHECK(u.points.size() == static_cast<std::size_t>(std::floor((T - 2 * G) / (5 * G))) + 1);
}

TEST_CASE("random points depend only on the seed") {
  const auto a = random_points(1000, 6, 42), b = random_points(1000, 6, 42), c = random_points(1000, 6, 43);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
}

TEST_CASE("validation rejects bad systems") {
  PointSystem s{1000, 6, {1100, 1120}};
  CHECK_THROWS_AS(validate(s), ParameterError);  // 20 < 5G
  s.points = {900};
  CHECK_THROWS_AS(validate(s), ParameterError);  // outside (T, 2T]
  s = {1000, 2.0, {1100}};
  CHECK_THROWS_AS(validate(s), ParameterError);  // G below T^{0.21}
  s = {1000, 6, {1100, 1130}};
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("fourth-power sum over separated windows") {
  const auto& ms = mean_square();
  const PointSystem one{2000, 8, {2500}};
  const auto r1 = fourth_power_sum(one, ms);
  CHECK(r1.sum == doctest::Approx(std::pow(short_integral(2500, 8, ms), 4)));
  CHECK(r1.R == 1);

  const auto s = random_points(2000, std::pow(2000.0, 0.25), 3);
  const auto a = fourth_power_sum_serial(s, ms), b = fourth_power_sum(s, ms);
  CHECK(a.sum == b.sum);
  CHECK(a.ratio == doctest::Approx(a.sum / a.envelope));
  CHECK(a.envelope == doctest::Approx(std::pow(2000.0, 2.01) / (s.G * s.G) +
                                      s.points.size() * std::pow(s.G, 4) * std::pow(2000.0, 0.01)));
}

TEST_CASE("dyadic classes partition the window maxima") {
  const double T = 2000;
  const auto rep = dyadic_classes(T, grid());
  CHECK(rep.windows == 2000);
  std::size_t total = rep.below;
  double prev_V = 0;
  for (const auto& c : rep.classes) {
    CHECK(c.V > prev_V);
    prev_V = c.V;
    for (const auto& m : c.members) {
      CHECK(m.abs_zeta >= c.V);
      CHECK(m.abs_zeta < 2 * c.V);
      CHECK(m.abs_zeta >= std::log(T));
    }
    total += c.R();
  }
  CHECK(total == rep.windows);
  // Largest |ζ| seen stays within 3·T^{1/6}.
  CHECK(rep.classes.back().V <= 3 * std::pow(T, 1.0 / 6));
  // Class sizes fall off with V above the bulk.
  for (std::size_t i = 2; i < rep.classes.size(); ++i) CHECK(rep.classes[i].R() <= rep.classes[i - 1].R());

  CHECK_THROWS_AS(dyadic_classes(T, build_zeta_grid(0.0, 4100.0, 0.1)), ParameterError);
}

TEST_CASE("refinement never lowers a window maximum") {
  const auto plain = dyadic_classes(300, grid());
  const auto refined = dyadic_classes(300, grid(), true);
  for (std::size_t i = 0; i < plain.maxima.size(); ++i) {
    CHECK(refined.maxima[i].abs_zeta >= plain.maxima[i].abs_zeta);
    CHECK(refined.maxima[i].abs_zeta <= plain.maxima[i].abs_zeta * 1.05);
  }
}

TEST_CASE("power moments") {
  const auto& g = grid();
  const auto& ms = mean_square();
  CHECK(zeta_power_moment(1234.5, g, 1) == doctest::Approx(ms.integral(1234.5)).epsilon(1e-12));
  double prev = 0;
  for (double T : {500.0, 1000.0, 2000.0, 4000.0}) {
    const auto r = twelfth_moment(T, g);
    CHECK(r.value >= prev);
    prev = r.value;
    const double m2 = zeta_power_moment(T, g, 1), m4 = zeta_power_moment(T, g, 2);
    CHECK(m4 >= m2 * m2 / T);
    CHECK(r.value >= m4 * m4 * m4 / (T * T));
    CHECK(r.value >= std::pow(m2, 6) / std::pow(T, 5));
  }
}
