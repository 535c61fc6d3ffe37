#include "zdl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"

namespace zdl {

const char* to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::delta: return "delta";
    case Quantity::delta_star: return "delta_star";
    case Quantity::E: return "E";
    case Quantity::E_star: return "E_star";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view name) {
  if (name == "delta") return Quantity::delta;
  if (name == "delta_star" || name == "delta-star") return Quantity::delta_star;
  if (name == "E") return Quantity::E;
  if (name == "E_star" || name == "E-star" || name == "estar") return Quantity::E_star;
  throw ParameterError("unknown quantity '" + std::string(name) + "'");
}

double moment_lower_limit(Quantity q) noexcept {
  return (q == Quantity::delta || q == Quantity::delta_star) ? 1.0 : 0.0;
}

namespace {

double ipow(double v, int k) noexcept {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= v;
  return r;
}

struct Piece {
  double a, b;
  std::uint64_t cell;  // lattice cell holding the piece
};

// Integrand of one quantity with its jump structure.
class Integrand {
 public:
  Integrand(Quantity q, const MomentResources& res) : q_(q), res_(res) {
    switch (q) {
      case Quantity::delta: spacing_ = 1.0; break;
      case Quantity::delta_star: spacing_ = 0.25; break;
      case Quantity::E: spacing_ = 1.0; break;
      case Quantity::E_star: spacing_ = pi / 2.0; break;
    }
    const bool needs_table = q != Quantity::E;
    const bool needs_zeta = q == Quantity::E || q == Quantity::E_star;
    if (needs_table && res.table == nullptr) throw ParameterError("moment needs a divisor table");
    if (needs_zeta && res.zeta == nullptr) throw ParameterError("moment needs a zeta mean-square grid");
    if (res.points_per_unit < 2) throw ParameterError("points_per_unit must be at least 2");
    panel_ = needs_zeta ? res.zeta->step() : 1.0 / res.points_per_unit;
  }

  double spacing() const noexcept { return spacing_; }

  void require_coverage(double T_max) const {
    const auto& t = res_.table;
    switch (q_) {
      case Quantity::delta: t->require(static_cast<std::uint64_t>(std::floor(T_max))); break;
      case Quantity::delta_star: t->require(static_cast<std::uint64_t>(std::floor(4.0 * T_max))); break;
      case Quantity::E_star:
        t->require(static_cast<std::uint64_t>(std::floor(2.0 * T_max / pi)) + 1);
        [[fallthrough]];
      case Quantity::E:
        if (T_max > res_.zeta->t_end() + 1e-9) throw CoverageError("zeta grid does not reach T");
        break;
    }
  }

  // Value inside lattice cell `cell`, where all divisor counts are constant.
  double value(std::uint64_t cell, double x) const {
    const auto& t = *res_.table;
    switch (q_) {
      case Quantity::delta:
        return static_cast<double>(t.prefix(cell)) - divisor_main_term(x) - 0.25;
      case Quantity::delta_star:
        return delta_star_in_cell(t, cell, x);
      case Quantity::E:
        return res_.zeta->E(x);
      case Quantity::E_star:
        return res_.zeta->E(x) - two_pi * delta_star_in_cell(t, cell, x / two_pi);
    }
    return 0.0;
  }

  double integrate(const Piece& p, int k) const {
    auto panels = static_cast<std::size_t>(std::ceil((p.b - p.a) / panel_ - 1e-9));
    panels = std::max<std::size_t>(2, panels + (panels & 1));
    const double h = (p.b - p.a) / static_cast<double>(panels);
    CompensatedSum acc;
    acc.add(ipow(value(p.cell, p.a), k));
    acc.add(ipow(value(p.cell, p.b), k));
    for (std::size_t i = 1; i < panels; ++i)
      acc.add((i & 1 ? 4.0 : 2.0) * ipow(value(p.cell, p.a + h * static_cast<double>(i)), k));
    return acc.value() * h / 3.0;
  }

 private:
  // Δ*(x) with 4x in the open cell (q, q+1).
  static double delta_star_in_cell(const DivisorTable& t, std::uint64_t q, double x) {
    const double d1 = static_cast<double>(t.prefix(q / 4)) - divisor_main_term(x) - 0.25;
    const double d2 = static_cast<double>(t.prefix(q / 2)) - divisor_main_term(2.0 * x) - 0.25;
    const double d4 = static_cast<double>(t.prefix(q)) - divisor_main_term(4.0 * x) - 0.25;
    return -d1 + 2.0 * d2 - 0.5 * d4;
  }

  Quantity q_;
  const MomentResources& res_;
  double spacing_ = 1.0;
  double panel_ = 0.125;
};

// Cells of the jump lattice cut at every requested T. `ends[j]` is the index
// one past the last piece that finishes at Ts[j].
struct Partition {
  std::vector<Piece> pieces;
  std::vector<std::size_t> ends;
};

Partition partition(double lower, std::span<const double> Ts, double spacing) {
  Partition out;
  double a = lower;
  auto cell_of = [&](double lo, double hi) {
    return static_cast<std::uint64_t>(std::floor(0.5 * (lo + hi) / spacing));
  };
  for (double T : Ts) {
    while (a < T) {
      const double next_knot = (std::floor(a / spacing + 1e-12) + 1.0) * spacing;
      const double b = std::min(next_knot, T);
      if (b - a > 1e-12 * std::max(1.0, b)) out.pieces.push_back({a, b, cell_of(a, b)});
      a = b;
    }
    out.ends.push_back(out.pieces.size());
  }
  return out;
}

void check_scan(int k, std::span<const double> Ts, double lower) {
  if (k < 1) throw ParameterError("moment power must be at least 1");
  if (Ts.empty()) throw ParameterError("moment scan needs at least one T");
  double prev = lower;
  for (double T : Ts) {
    if (!(T > prev)) throw ParameterError("moment sample points must be increasing and above the lower limit");
    prev = T;
  }
}

std::vector<MomentSample> accumulate(const Partition& part, std::span<const double> piece_values,
                                     std::span<const double> Ts) {
  std::vector<MomentSample> out;
  CompensatedSum acc;
  std::size_t i = 0;
  for (std::size_t j = 0; j < Ts.size(); ++j) {
    for (; i < part.ends[j]; ++i) acc.add(piece_values[i]);
    out.push_back({Ts[j], acc.value()});
  }
  return out;
}

}  // namespace

std::vector<MomentSample> moment_scan_serial(Quantity q, int k, std::span<const double> Ts,
                                             const MomentResources& res) {
  const double lower = moment_lower_limit(q);
  check_scan(k, Ts, lower);
  const Integrand f(q, res);
  f.require_coverage(Ts.back());
  const auto part = partition(lower, Ts, f.spacing());
  std::vector<double> values(part.pieces.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f.integrate(part.pieces[i], k);
  return accumulate(part, values, Ts);
}

std::vector<MomentSample> moment_scan(Quantity q, int k, std::span<const double> Ts, const MomentResources& res) {
  const double lower = moment_lower_limit(q);
  check_scan(k, Ts, lower);
  const Integrand f(q, res);
  f.require_coverage(Ts.back());
  const auto part = partition(lower, Ts, f.spacing());
  std::vector<double> values(part.pieces.size());
  const auto n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    values[u] = f.integrate(part.pieces[u], k);
  }
  return accumulate(part, values, Ts);
}

double moment_integral(Quantity q, int k, double T, const MomentResources& res) {
  const double Ts[] = {T};
  return moment_scan(q, k, Ts, res).front().integral;
}

std::vector<double> geometric_points(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi >= lo) || !(ratio > 1.0)) throw ParameterError("geometric points need 0 < lo ≤ hi, ratio > 1");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo * std::pow(ratio, i);
    if (v > hi * (1 + 1e-12)) break;
    out.push_back(v);
  }
  if (out.back() < hi * (1 - 1e-9)) out.push_back(hi);
  return out;
}

ExponentFit log_log_fit(std::span<const MomentSample> samples) {
  if (samples.size() < 2) throw ParameterError("log-log fit needs at least 2 samples");
  for (const auto& s : samples) {
    if (!(s.T > 0.0)) throw ParameterError("log-log fit needs T > 0");
    if (!(s.integral > 0.0))
      throw DataError("nonpositive moment integral at T = " + std::to_string(s.T) +
                      "; even powers indicate an integration bug");
  }
  const auto n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  for (const auto& s : samples) {
    sx += std::log(s.T);
    sy += std::log(s.integral);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double dx = std::log(s.T) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(s.integral) - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("log-log fit needs distinct T values");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (const auto& s : samples) {
    const double r = std::log(s.integral) - (fit.intercept + fit.slope * std::log(s.T));
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

ExponentFit fit_exponent(std::span<const MomentSample> samples) {
  if (samples.size() < 6) throw ParameterError("exponent fit needs at least 6 samples");
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (const auto& s : samples) {
    tmin = std::min(tmin, s.T);
    tmax = std::max(tmax, s.T);
  }
  if (tmax < 10.0 * tmin) throw ParameterError("exponent fit samples must span at least a decade");
  return log_log_fit(samples);
}

double fixed_exponent_coefficient(std::span<const MomentSample> samples, double slope) {
  if (samples.empty()) throw ParameterError("coefficient fit needs samples");
  double s = 0;
  for (const auto& m : samples) {
    if (!(m.integral > 0.0)) throw DataError("nonpositive moment integral in coefficient fit");
    s += std::log(m.integral) - slope * std::log(m.T);
  }
  return std::exp(s / static_cast<double>(samples.size()));
}

MomentEstimate estimate_moment(Quantity q, int k, std::span<const double> Ts, const MomentResources& res) {
  MomentEstimate e;
  e.quantity = q;
  e.power = k;
  e.samples = moment_scan(q, k, Ts, res);
  if (k % 2 == 0) {
    e.fit = fit_exponent(e.samples);
    return e;
  }
  // Odd moments change sign at small T; fit where the integral has settled positive.
  std::vector<MomentSample> positive;
  for (const auto& s : e.samples)
    if (s.integral > 0.0) positive.push_back(s);
  e.discarded = e.samples.size() - positive.size();
  e.fit = fit_exponent(positive);
  return e;
}

DivisorSquareSeries divisor_square_series(const DivisorTable& table, std::uint64_t terms) {
  if (terms < 1000) throw ParameterError("divisor-square series needs at least 1000 terms");
  table.require(terms);
  DivisorSquareSeries out;
  CompensatedSum partial;
  std::vector<double> D2(terms + 1, 0.0);
  double running = 0.0;
  for (std::uint64_t n = 1; n <= terms; ++n) {
    const double d = table.d(n);
    running += d * d;
    D2[n] = running;
    partial.add(d * d * std::pow(static_cast<double>(n), -1.5));
  }
  out.partial = partial.value();

  // Fit Σ_{n≤u} d²(n) ≈ u·(c₃L³ + c₂L² + c₁L + c₀), L = log u, over u in
  // [terms/100, terms] by least squares (normal equations, 4×4).
  double A[4][5] = {};
  const int samples = 400;
  for (int i = 0; i < samples; ++i) {
    const double u = std::floor(terms / 100.0 * std::pow(100.0, i / (samples - 1.0)));
    const auto ui = static_cast<std::size_t>(u);
    const double L = std::log(u);
    const double basis[4] = {1.0, L, L * L, L * L * L};
    const double y = D2[ui] / u;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) A[r][c] += basis[r] * basis[c];
      A[r][4] += basis[r] * y;
    }
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int j = c; j < 5; ++j) A[r][j] -= f * A[c][j];
    }
  }
  double coef[4];
  for (int r = 0; r < 4; ++r) coef[r] = A[r][4] / A[r][r];

  // Density (u·P(L))' = P(L) + P'(L); J_j = ∫_M^∞ L^j u^{−3/2} du satisfies
  // J_j = 2 L_M^j M^{−1/2} + 2j J_{j−1}.
  const double M = static_cast<double>(terms);
  const double LM = std::log(M);
  double J[4];
  J[0] = 2.0 / std::sqrt(M);
  for (int j = 1; j < 4; ++j) J[j] = 2.0 * std::pow(LM, j) / std::sqrt(M) + 2.0 * j * J[j - 1];
  double density[4] = {coef[0] + coef[1], coef[1] + 2 * coef[2], coef[2] + 3 * coef[3], coef[3]};
  double tail = 0.0;
  for (int j = 0; j < 4; ++j) tail += density[j] * J[j];
  out.tail = tail;
  return out;
}

double divisor_square_partial(const DivisorTable& table, std::uint64_t M) {
  table.require(M);
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= M; ++n) {
    const double d = table.d(n);
    acc.add(d * d * std::pow(static_cast<double>(n), -1.5));
  }
  return acc.value();
}

double delta_mean_square_constant(double series) noexcept { return series / (6.0 * pi * pi); }

double E_mean_square_constant(double series) noexcept { return 2.0 / 3.0 / std::sqrt(two_pi) * series; }

std::optional<SlopeBound> slope_bound(Quantity q, int k) {
  constexpr double none = -std::numeric_limits<double>::infinity();
  switch (q) {
    case Quantity::delta:
      if (k == 2) return SlopeBound{1.5, 1.45, 1.55, "mean square of Delta, exponent 3/2"};
      if (k == 3) return SlopeBound{1.75, 1.65, 1.85, "cube of Delta, exponent 7/4"};
      if (k == 4) return SlopeBound{2.0, 1.9, 2.1, "fourth power of Delta, exponent 2"};
      break;
    case Quantity::E:
      if (k == 2) return SlopeBound{1.5, 1.4, 1.6, "mean square of E, exponent 3/2"};
      if (k == 3) return SlopeBound{1.75, 1.6, 1.9, "cube of E, exponent 7/4"};
      if (k == 4) return SlopeBound{2.0, 1.85, 2.15, "fourth power of E, exponent 2"};
      break;
    case Quantity::E_star:
      if (k == 2) return SlopeBound{4.0 / 3.0, none, 1.45, "mean square of E*, bound T^{4/3} log^3 T"};
      break;
    case Quantity::delta_star: break;
  }
  return std::nullopt;
}

std::vector<MomentSuiteRow> verify_moment_suite(const MomentSuiteConfig& config, const MomentResources& res) {
  const auto delta_T = geometric_points(config.t_min, config.delta_max, config.ratio);
  const auto e_T = geometric_points(config.t_min, config.e_max, config.ratio);
  std::vector<MomentSuiteRow> rows;
  auto add = [&](Quantity q, int k, const SlopeBound& b) {
    MomentSuiteRow row;
    const auto& Ts = (q == Quantity::delta || q == Quantity::delta_star) ? delta_T : e_T;
    row.estimate = estimate_moment(q, k, Ts, res);
    row.expected = b.expected;
    row.lower = b.lower;
    row.upper = b.upper;
    row.note = b.note;
    row.pass = row.estimate.fit.slope >= b.lower && row.estimate.fit.slope <= b.upper;
    rows.push_back(std::move(row));
  };
  for (auto [q, k] : {std::pair{Quantity::delta, 2}, {Quantity::delta, 3}, {Quantity::delta, 4},
                      {Quantity::E, 2}, {Quantity::E, 3}, {Quantity::E, 4}, {Quantity::E_star, 2}})
    add(q, k, *slope_bound(q, k));
  const double e4 = rows[5].estimate.fit.slope;
  add(Quantity::E_star, 4,
      {16.0 / 9.0, -std::numeric_limits<double>::infinity(), e4 - 0.1,
       "fourth power of E*, bound T^{16/9+eps}; slope at least 0.1 below E^4"});
  return rows;
}

}  // namespace zdl
