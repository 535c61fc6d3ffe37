#include "zdl/short_interval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"
#include "zdl/quadrature.hpp"

namespace zdl {

const char* to_string(PointGenerator g) noexcept {
  switch (g) {
    case PointGenerator::uniform: return "uniform";
    case PointGenerator::random: return "random";
    case PointGenerator::greedy_peak: return "greedy_peak";
  }
  return "unknown";
}

PointGenerator parse_point_generator(std::string_view name) {
  if (name == "uniform") return PointGenerator::uniform;
  if (name == "random") return PointGenerator::random;
  if (name == "greedy_peak" || name == "greedy-peak" || name == "peak") return PointGenerator::greedy_peak;
  throw ParameterError("unknown point generator '" + std::string(name) + "'");
}

namespace {

void check_TG(double T, double G) {
  if (!(T > 1.0)) throw ParameterError("T must exceed 1");
  if (!(G > 0.0) || !(5.0 * G <= T)) throw ParameterError("G must satisfy 0 < 5G ≤ T");
}

}  // namespace

void validate(const PointSystem& s, double epsilon0) {
  check_TG(s.T, s.G);
  const double g_min = std::pow(s.T, 0.2 + epsilon0);
  if (s.G < g_min * (1.0 - 1e-9) || s.G > s.T)
    throw ParameterError("G = " + std::to_string(s.G) + " outside [T^{0.2+eps0}, T] = [" + std::to_string(g_min) +
                         ", " + std::to_string(s.T) + "]");
  if (s.points.empty()) throw ParameterError("point system is empty");
  for (std::size_t r = 0; r < s.points.size(); ++r) {
    const double t = s.points[r];
    if (!(t > s.T) || t > 2.0 * s.T) throw ParameterError("point " + std::to_string(t) + " outside (T, 2T]");
    if (r > 0 && s.points[r] - s.points[r - 1] < 5.0 * s.G * (1.0 - 1e-12))
      throw ParameterError("points " + std::to_string(s.points[r - 1]) + " and " + std::to_string(t) +
                           " closer than 5G");
  }
}

PointSystem uniform_points(double T, double G) {
  check_TG(T, G);
  PointSystem s{T, G, {}};
  for (double t = T + G; t + G <= 2.0 * T; t += 5.0 * G) s.points.push_back(t);
  return s;
}

PointSystem random_points(double T, double G, std::uint64_t seed) {
  check_TG(T, G);
  std::mt19937_64 gen(seed);
  // 53 random bits → [0, 1), identical on every platform.
  auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  PointSystem s{T, G, {}};
  for (double t = T + G + 5.0 * G * uniform(); t + G <= 2.0 * T; t += 5.0 * G * (1.0 + uniform()))
    s.points.push_back(t);
  return s;
}

PointSystem greedy_peak_points(double T, double G, const ZetaSampleGrid& grid) {
  check_TG(T, G);
  if (!grid.covers(T, 2.0 * T)) throw CoverageError("zeta grid does not cover (T, 2T]");
  const auto first = static_cast<std::size_t>(std::ceil((T + G - grid.t_start) / grid.step));
  const auto last = static_cast<std::size_t>(std::floor((2.0 * T - G - grid.t_start) / grid.step));
  std::vector<std::size_t> order(last - first + 1);
  std::iota(order.begin(), order.end(), first);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.values[a] > grid.values[b]; });
  std::set<double> chosen;
  const double gap = 5.0 * G;
  for (std::size_t i : order) {
    const double t = grid.t_at(i);
    auto hi = chosen.lower_bound(t);
    if (hi != chosen.end() && *hi - t < gap) continue;
    if (hi != chosen.begin() && t - *std::prev(hi) < gap) continue;
    chosen.insert(t);
  }
  return {T, G, {chosen.begin(), chosen.end()}};
}

PointSystem make_points(PointGenerator g, double T, double G, std::uint64_t seed, const ZetaSampleGrid& grid) {
  switch (g) {
    case PointGenerator::uniform: return uniform_points(T, G);
    case PointGenerator::random: return random_points(T, G, seed);
    case PointGenerator::greedy_peak: return greedy_peak_points(T, G, grid);
  }
  throw ParameterError("unknown point generator");
}

double short_integral(double t, double G, const ZetaMeanSquare& ms) {
  if (!(G >= 0.0)) throw ParameterError("G must be nonnegative");
  if (t - G < 0.0 || t + G > ms.t_end() + 1e-9)
    throw CoverageError("zeta grid does not cover [" + std::to_string(t - G) + ", " + std::to_string(t + G) + "]");
  return std::max(0.0, ms.integral(t - G, t + G));
}

namespace {

FourthPowerSum finish_sum(const PointSystem& s, std::span<const double> fourth, double epsilon0) {
  FourthPowerSum r;
  r.T = s.T;
  r.G = s.G;
  r.R = s.points.size();
  CompensatedSum acc;
  for (double v : fourth) acc.add(v);
  r.sum = acc.value();
  r.envelope = std::pow(s.T, 2.0 + epsilon0) / (s.G * s.G) +
               static_cast<double>(r.R) * std::pow(s.G, 4) * std::pow(s.T, epsilon0);
  r.ratio = r.sum / r.envelope;
  return r;
}

double fourth_power(double v) { return (v * v) * (v * v); }

}  // namespace

FourthPowerSum fourth_power_sum_serial(const PointSystem& s, const ZetaMeanSquare& ms, double epsilon0) {
  validate(s, epsilon0);
  std::vector<double> fourth(s.points.size());
  for (std::size_t r = 0; r < fourth.size(); ++r) fourth[r] = fourth_power(short_integral(s.points[r], s.G, ms));
  return finish_sum(s, fourth, epsilon0);
}

FourthPowerSum fourth_power_sum(const PointSystem& s, const ZetaMeanSquare& ms, double epsilon0) {
  validate(s, epsilon0);
  std::vector<double> fourth(s.points.size());
  const auto n = static_cast<std::int64_t>(fourth.size());
  // Coverage is checked up front so no exception leaves the parallel region.
  short_integral(s.points.front(), s.G, ms);
  short_integral(s.points.back(), s.G, ms);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    const auto u = static_cast<std::size_t>(r);
    fourth[u] = fourth_power(std::max(0.0, ms.integral(s.points[u] - s.G, s.points[u] + s.G)));
  }
  return finish_sum(s, fourth, epsilon0);
}

namespace {

WindowMaximum polish(WindowMaximum m, double lo, double hi, double step) {
  // Golden-section search for the largest |ζ|² near the grid maximum.
  double a = std::max(lo, m.t - step), b = std::min(hi, m.t + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = zeta_half_abs2(c), fd = zeta_half_abs2(d);
  for (int i = 0; i < 40 && b - a > 1e-9; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = zeta_half_abs2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = zeta_half_abs2(d);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = std::sqrt(zeta_half_abs2(t));
  if (v > m.abs_zeta) return {t, v};
  return m;
}

}  // namespace

DyadicReport dyadic_classes(double T, const ZetaSampleGrid& grid, bool refine) {
  if (!(T > 1.0)) throw ParameterError("T must exceed 1");
  if (!grid.covers(T, 2.0 * T)) throw CoverageError("zeta grid does not cover [T, 2T]");
  if (grid.step > 0.05 + 1e-12) throw ParameterError("dyadic classification needs grid step ≤ 0.05");

  DyadicReport rep;
  rep.T = T;
  rep.windows = static_cast<std::size_t>(std::floor(T));
  rep.maxima.resize(rep.windows);
  const auto n = static_cast<std::int64_t>(rep.windows);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < n; ++r) {
    const double lo = T + static_cast<double>(r), hi = lo + 1.0;
    const auto i0 = static_cast<std::size_t>(std::ceil((lo - grid.t_start) / grid.step - 1e-9));
    const auto i1 = std::min(grid.values.size() - 1,
                             static_cast<std::size_t>(std::floor((hi - grid.t_start) / grid.step + 1e-9)));
    std::size_t best = i0;
    for (std::size_t i = i0; i <= i1; ++i)
      if (grid.values[i] > grid.values[best]) best = i;
    WindowMaximum m{grid.t_at(best), std::sqrt(grid.values[best])};
    if (refine) m = polish(m, lo, hi, grid.step);
    rep.maxima[static_cast<std::size_t>(r)] = m;
  }

  const double floor_value = std::log(T);
  for (const auto& m : rep.maxima) {
    if (m.abs_zeta < floor_value) {
      ++rep.below;
      continue;
    }
    const double V = std::exp2(std::floor(std::log2(m.abs_zeta)));
    auto it = std::find_if(rep.classes.begin(), rep.classes.end(), [&](const DyadicClass& c) { return c.V == V; });
    if (it == rep.classes.end()) {
      rep.classes.push_back({V, {}});
      it = std::prev(rep.classes.end());
    }
    it->members.push_back(m);
  }
  std::sort(rep.classes.begin(), rep.classes.end(), [](const auto& a, const auto& b) { return a.V < b.V; });
  return rep;
}

double zeta_power_moment(double T, const ZetaSampleGrid& grid, int m) {
  if (m < 1) throw ParameterError("moment order must be at least 1");
  if (grid.t_start != 0.0) throw ParameterError("power moments need a grid starting at t = 0");
  if (T < 0.0 || T > grid.t_end + 1e-9) throw CoverageError("zeta grid does not reach T");
  const auto last = std::min(grid.values.size() - 1, static_cast<std::size_t>(std::ceil(T / grid.step)) + 2);
  std::vector<double> powered(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    double v = 1.0;
    for (int j = 0; j < m; ++j) v *= grid.values[i];
    powered[i] = v;
  }
  return UniformCumulative(0.0, grid.step, powered).integral_to(T);
}

TwelfthMoment twelfth_moment(double T, const ZetaSampleGrid& grid, double epsilon0) {
  TwelfthMoment r;
  r.T = T;
  r.value = zeta_power_moment(T, grid, 6);
  r.normalized = r.value / std::pow(T, 2.0 + epsilon0);
  return r;
}

}  // namespace zdl
