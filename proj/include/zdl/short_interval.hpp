#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "zdl/zeta.hpp"

namespace zdl {

/// Centres t_1 < … < t_R in (T, 2T], pairwise at least 5G apart.
struct PointSystem {
  double T = 0.0;
  double G = 0.0;
  std::vector<double> points;
};

/// Throws ParameterError unless the points are increasing, lie in (T, 2T],
/// are 5G-separated, and T^{0.2+ε₀} ≤ G ≤ T.
void validate(const PointSystem& system, double epsilon0 = 0.01);

enum class PointGenerator { uniform, random, greedy_peak };

const char* to_string(PointGenerator g) noexcept;
PointGenerator parse_point_generator(std::string_view name);

/// Maximal packing: t_r = T + G + 5G·r while the window stays inside (T, 2T].
PointSystem uniform_points(double T, double G);

/// Gaps 5G·(1 + u), u uniform in [0, 1) from mt19937_64(seed).
PointSystem random_points(double T, double G, std::uint64_t seed);

/// Greedy selection from the largest |ζ|² grid samples in (T + G, 2T − G]
/// subject to the separation rule.
PointSystem greedy_peak_points(double T, double G, const ZetaSampleGrid& grid);

PointSystem make_points(PointGenerator g, double T, double G, std::uint64_t seed, const ZetaSampleGrid& grid);

/// ∫_{t−G}^{t+G} |ζ(½+iu)|² du.
double short_integral(double t, double G, const ZetaMeanSquare& ms);

struct FourthPowerSum {
  double T = 0.0;
  double G = 0.0;
  std::size_t R = 0;
  /// Σ_r (short_integral(t_r, G))⁴
  double sum = 0.0;
  /// T^{2+ε₀}G^{−2} + R·G⁴·T^{ε₀}
  double envelope = 0.0;
  double ratio = 0.0;
};

FourthPowerSum fourth_power_sum_serial(const PointSystem& system, const ZetaMeanSquare& ms, double epsilon0 = 0.01);
FourthPowerSum fourth_power_sum(const PointSystem& system, const ZetaMeanSquare& ms, double epsilon0 = 0.01);

struct WindowMaximum {
  double t = 0.0;
  double abs_zeta = 0.0;
};

struct DyadicClass {
  double V = 0.0;
  std::vector<WindowMaximum> members;
  std::size_t R() const noexcept { return members.size(); }
};

struct DyadicReport {
  double T = 0.0;
  std::size_t windows = 0;
  /// Windows whose maximum is below log T.
  std::size_t below = 0;
  std::vector<WindowMaximum> maxima;
  /// Increasing V; classes with no members are omitted.
  std::vector<DyadicClass> classes;
};

/// Maxima of |ζ(½+it)| over [T + r − 1, T + r], r = 1..⌊T⌋, taken from the grid
/// (step ≤ 0.05), optionally polished by golden-section search on |Z|. Maxima
/// with |ζ| ≥ log T go into class V = 2^⌊log₂|ζ|⌋.
DyadicReport dyadic_classes(double T, const ZetaSampleGrid& grid, bool refine = false);

/// ∫₀ᵀ |ζ(½+it)|^{2m} dt from the grid samples, same 4th-order rule as the mean square.
double zeta_power_moment(double T, const ZetaSampleGrid& grid, int m);

struct TwelfthMoment {
  double T = 0.0;
  double value = 0.0;
  /// value / T^{2+ε₀}
  double normalized = 0.0;
};

TwelfthMoment twelfth_moment(double T, const ZetaSampleGrid& grid, double epsilon0 = 0.01);

}  // namespace zdl
