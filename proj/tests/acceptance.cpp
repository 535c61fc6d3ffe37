// Acceptance checks, one line per criterion: "criterion N: PASS|FAIL <summary>".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "zdl/app.hpp"
#include "zdl/cache.hpp"
#include "zdl/errors.hpp"
#include "zdl/explicit_formulas.hpp"
#include "zdl/moments.hpp"
#include "zdl/numeric.hpp"
#include "zdl/quadruples.hpp"
#include "zdl/short_interval.hpp"
#include "zdl/smoothing.hpp"

using namespace zdl;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t table_limit = 1000000;
constexpr double grid_step = 0.02;

struct Context {
  fs::path cache_dir;
  std::optional<Cache> cache;
  std::optional<DivisorTable> table;
  std::optional<ZetaSampleGrid> grid;
  std::optional<ZetaMeanSquare> ms;

  const Cache& store() {
    if (!cache) cache.emplace(cache_dir);
    return *cache;
  }
  const DivisorTable& divisors() {
    if (!table) table.emplace(store().divisors(table_limit));
    return *table;
  }
  // One grid for everything; [0, 8500] covers (T, 2T] windows at T = 4000.
  const ZetaSampleGrid& zeta() {
    if (!grid) grid.emplace(store().zeta_grid(8500.0, grid_step));
    return *grid;
  }
  const ZetaMeanSquare& mean_square() {
    if (!ms) ms.emplace(zeta());
    return *ms;
  }
  MomentResources moments() { return {&divisors(), &mean_square(), 8}; }
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

template <typename F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome criterion1(Context& ctx) {
  Outcome o;
  const auto& t = ctx.divisors();
  std::mt19937_64 gen(20240601);
  double worst = 0.0;
  const double elapsed = seconds([&] {
    for (int i = 0; i < 500; ++i) {
      const double x = std::floor(1.0 + uniform01(gen) * 9999.0) + 0.5;
      const double c = delta_star_combination(x, t).value;
      const double a = delta_star_alternating(x, t).value;
      worst = std::max(worst, std::abs(c - a) / (1.0 + std::abs(c)));
    }
  });
  o.pass = worst < 1e-8 && elapsed < 5.0;
  o.detail << "500 half-integer x in [1, 1e4]: max |comb - alt|/(1+|D*|) = " << fmt(worst) << " (< 1e-8), "
           << fmt(elapsed, 2) << " s";
  return o;
}

Outcome criterion2(Context& ctx) {
  Outcome o;
  const auto& t = ctx.divisors();
  std::mt19937_64 gen(7);
  std::vector<double> x_half, x_eighth;
  for (int i = 0; i < 200; ++i) {
    const double u = 1e4 + uniform01(gen) * 1e4;
    // Δ is continuous at half-integers; Δ* jumps at quarter-integers, so its
    // samples sit midway between them.
    x_half.push_back(std::min(std::floor(u) + 0.5, 2e4 - 0.5));
    x_eighth.push_back(std::min(std::floor(4.0 * u) / 4.0 + 0.125, 2e4 - 0.125));
  }
  const std::uint64_t Ns[] = {100, 400, 1600, 6400, 10000};
  for (bool star : {false, true}) {
    const auto& xs = star ? x_eighth : x_half;
    std::vector<double> exact;
    for (double x : xs) exact.push_back(star ? delta_star_combination(x, t).value : delta(x, t).value);
    std::vector<double> rms;
    for (std::uint64_t N : Ns) {
      const auto s = voronoi_batch(xs, N, star, t);
      double sq = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) sq += std::pow(s[i].value - exact[i], 2);
      rms.push_back(std::sqrt(sq / static_cast<double>(xs.size())));
    }
    o.detail << (star ? "; D*" : "D") << " rms";
    for (std::size_t i = 0; i < rms.size(); ++i) o.detail << " N=" << Ns[i] << ":" << fmt(rms[i]);
    o.detail << " ratios per 4x:";
    for (std::size_t i = 0; i + 2 < rms.size(); ++i) {
      const double ratio = rms[i] / rms[i + 1];
      o.detail << " " << fmt(ratio, 3);
      o.pass = o.pass && ratio >= 1.4 && ratio <= 2.8;
    }
    o.detail << " (need [1.4, 2.8])";
    o.pass = o.pass && rms.back() < rms.front();
  }
  return o;
}

Outcome criterion3(Context& ctx) {
  Outcome o;
  const auto& ms = ctx.mean_square();
  const auto& t = ctx.divisors();
  double worst = 0.0, worst_T = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double T = 100.0 * std::pow(50.0, i / 49.0);
    const double diff = std::abs(atkinson_E(AtkinsonParams::standard(T), t).value - ms.E(T));
    const double scaled = diff / std::pow(std::log(T), 2);
    if (scaled > worst) {
      worst = scaled;
      worst_T = T;
    }
  }
  o.pass = worst <= 10.0;
  o.detail << "50 T in [100, 5000], N = T: max |E_atk - E_quad|/log^2 T = " << fmt(worst) << " at T = "
           << fmt(worst_T, 6) << " (<= 10)";
  return o;
}

Outcome criterion4(Context& ctx) {
  Outcome o;
  const auto res = ctx.moments();
  const double series = divisor_square_series(ctx.divisors(), table_limit).total();

  const auto d = estimate_moment(Quantity::delta, 2, geometric_points(100, 1e5, 1.25), res);
  const double d_coef = fixed_exponent_coefficient(d.samples, 1.5);
  const double d_expected = delta_mean_square_constant(series);
  const bool d_slope = std::abs(d.fit.slope - 1.5) <= 0.05;
  const bool d_ok = std::abs(d_coef / d_expected - 1.0) <= 0.15;

  const auto e = estimate_moment(Quantity::E, 2, geometric_points(100, 5000, 1.25), res);
  const double e_coef = fixed_exponent_coefficient(e.samples, 1.5);
  const double e_expected = E_mean_square_constant(series);
  const bool e_slope = std::abs(e.fit.slope - 1.5) <= 0.1;
  const bool e_ok = std::abs(e_coef / e_expected - 1.0) <= 0.25;
  o.pass = d_slope && d_ok && e_slope && e_ok;

  const double e_cut = E_mean_square_constant(divisor_square_partial(ctx.divisors(), std::uint64_t(5000 / two_pi)));
  o.detail << "series " << fmt(series, 8) << "; Delta^2 slope " << fmt(d.fit.slope) << (d_slope ? " ok" : " FAIL")
           << ", coef " << fmt(d_coef) << " vs " << fmt(d_expected) << (d_ok ? " ok" : " FAIL")
           << "; E^2 slope " << fmt(e.fit.slope) << (e_slope ? " ok" : " FAIL") << ", coef " << fmt(e_coef)
           << " vs " << fmt(e_expected) << (e_ok ? " ok" : " FAIL") << " (series cut at 5000/2pi gives "
           << fmt(e_cut) << ")";
  return o;
}

Outcome criterion5(Context& ctx) {
  Outcome o;
  const auto res = ctx.moments();
  const auto delta_T = geometric_points(100, 1e5, 1.25);
  const auto e_T = geometric_points(100, 5000, 1.25);
  const char* sep = "";
  for (auto [q, k] : {std::pair{Quantity::delta, 3}, {Quantity::delta, 4}, {Quantity::E, 3}, {Quantity::E, 4}}) {
    const auto b = *slope_bound(q, k);
    const auto est = estimate_moment(q, k, q == Quantity::delta ? delta_T : e_T, res);
    const bool ok = est.fit.slope >= b.lower && est.fit.slope <= b.upper;
    o.pass = o.pass && ok;
    o.detail << sep << to_string(q) << "^" << k << " slope " << fmt(est.fit.slope) << " in [" << fmt(b.lower, 3)
             << ", " << fmt(b.upper, 3) << "]" << (ok ? " ok" : " FAIL");
    if (est.discarded) o.detail << " (" << est.discarded << " nonpositive samples dropped)";
    sep = "; ";
  }
  return o;
}

Outcome criterion6(Context& ctx) {
  Outcome o;
  const auto res = ctx.moments();
  const auto Ts = geometric_points(100, 5000, 1.25);
  const double e2 = estimate_moment(Quantity::E, 2, Ts, res).fit.slope;
  const double s2 = estimate_moment(Quantity::E_star, 2, Ts, res).fit.slope;
  const double e4 = estimate_moment(Quantity::E, 4, Ts, res).fit.slope;
  const double s4 = estimate_moment(Quantity::E_star, 4, Ts, res).fit.slope;
  const bool first = s2 < 1.45;
  const bool second = s4 <= e4 - 0.1;
  o.pass = first && second;
  o.detail << "E*^2 slope " << fmt(s2) << " < 1.45" << (first ? " ok" : " FAIL") << " (E^2 " << fmt(e2)
           << "); E*^4 slope " << fmt(s4) << " <= E^4 " << fmt(e4) << " - 0.1" << (second ? " ok" : " FAIL");
  return o;
}

Outcome criterion7(Context&) {
  Outcome o;
  const double small[] = {1e-6, 1e-4, 1e-3, 3e-3, 0.01, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 1.0};
  std::size_t mismatches = 0, cases = 0;
  for (int k : {2, 3})
    for (std::uint64_t N = 1; N <= 20; ++N)
      for (double delta : small) {
        ++cases;
        if (count_quadruples(N, k, delta).count != oracle::quadruples_brute_force(N, k, delta)) ++mismatches;
      }
  const std::uint64_t Ns[] = {64, 128, 256, 512};
  const int ks[] = {2, 3};
  std::vector<double> deltas;
  for (int i = 0; i <= 8; ++i) deltas.push_back(std::pow(10.0, -4.0 + 0.5 * i));
  double worst = 0.0;
  std::uint64_t ties = 0;
  const double elapsed = seconds([&] {
    for (const auto& row : verify_quadruple_bound(Ns, ks, deltas, 32.0)) {
      worst = std::max(worst, row.report.ratio);
      ties += row.report.ties;
    }
  });
  o.pass = mismatches == 0 && worst <= 32.0 && elapsed < 300.0;
  o.detail << cases << " exhaustive cases, " << mismatches << " mismatches; sweep max count/envelope "
           << fmt(worst) << " (<= 32), " << ties << " threshold ties, " << fmt(elapsed, 2) << " s";
  return o;
}

Outcome criterion8(Context& ctx) {
  Outcome o;
  const auto& ms = ctx.mean_square();
  const auto& t = ctx.divisors();
  int fail2 = 0, fail3 = 0;
  double worst2 = -1e300, worst3 = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double T = 500.0 * std::pow(8.0, i / 19.0);
    // G runs over [2, 40] in a shuffled order so T and G are not aligned.
    const double G = 2.0 * std::pow(20.0, ((i * 7) % 20) / 19.0);
    const auto l2 = check_sandwich(T, G, ms, 3.0);
    const auto l3 = check_smoothing_identity(T, G, t, 3.0, 0.05);
    if (!l2.holds()) ++fail2;
    if (!l3.holds()) ++fail3;
    const double slack = std::max(l2.lhs - l2.upper_average, l2.lower_average - l2.lhs) / l2.envelope;
    worst2 = std::max(worst2, slack);
    worst3 = std::max(worst3, std::max(l3.residual_plus, l3.residual_minus) / l3.envelope);
  }
  o.pass = fail2 == 0 && fail3 == 0;
  o.detail << "20 (T, G) pairs: sandwich failures " << fail2 << " (worst violation/envelope " << fmt(worst2)
           << "), identity failures " << fail3 << " (worst residual/envelope " << fmt(worst3) << ")";
  return o;
}

Outcome criterion9(Context& ctx) {
  Outcome o;
  const auto& grid = ctx.zeta();
  const auto& ms = ctx.mean_square();
  const char* sep = "";
  for (PointGenerator g : {PointGenerator::uniform, PointGenerator::random, PointGenerator::greedy_peak}) {
    std::vector<MomentSample> ratios;
    double worst = 0.0;
    for (double T : {1000.0, 2000.0, 4000.0}) {
      const double G = std::pow(T, 0.25);
      const auto r = fourth_power_sum(make_points(g, T, G, 1, grid), ms);
      ratios.push_back({T, r.ratio});
      worst = std::max(worst, r.ratio);
    }
    const double trend = log_log_fit(ratios).slope;
    const bool ok = worst <= 16.0 && trend <= 0.2;
    o.pass = o.pass && ok;
    o.detail << sep << to_string(g) << " max ratio " << fmt(worst) << " (<= 16), trend " << fmt(trend, 3)
             << " (<= 0.2)" << (ok ? " ok" : " FAIL");
    sep = "; ";
  }
  std::vector<MomentSample> twelfth;
  for (double T : {500.0, 1000.0, 2000.0, 4000.0}) twelfth.push_back({T, twelfth_moment(T, grid).value});
  const double slope = log_log_fit(twelfth).slope;
  const bool ok = slope <= 2.3;
  o.pass = o.pass && ok;
  o.detail << "; twelfth moment slope " << fmt(slope) << " (<= 2.3)" << (ok ? " ok" : " FAIL");
  return o;
}

Outcome criterion10(Context& ctx) {
  Outcome o;
  const fs::path dir = ctx.cache_dir / "criterion10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "run.cfg";
  {
    std::ofstream f(config);
    f << "cache-dir=" << dir.string() << "\nT=800\ngenerator=random\nC=1e12\noutput=json\n";
  }
  auto run = [&](std::vector<std::string> args, std::string* out) {
    std::ostringstream so, se;
    args.insert(args.begin(), "zdl");
    const int status = run_cli(args, so, se);
    if (out) *out = so.str();
    return std::pair{status, se.str()};
  };
  std::string a, b, c;
  const auto [s1, e1] = run({"short-interval", "--seed", "5", "--config", config.string()}, &a);
  const auto [s2, e2] = run({"short-interval", "--seed", "5", "--config", config.string()}, &b);
  const bool identical = s1 == exit_ok && s2 == exit_ok && a == b && !a.empty();

  // Corrupt the cached grid, then the divisor table used by a second command.
  bool repaired = true;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".zgr") {
      std::fstream f(entry.path(), std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(1000);
      f.put('\x42');
    }
  const auto [s3, e3] = run({"short-interval", "--seed", "5", "--config", config.string()}, &c);
  repaired = repaired && s3 == exit_ok && c == a && e3.find("rebuilt") != std::string::npos;

  std::string d1, d2;
  run({"delta", "--cache-dir", dir.string(), "--x", "777.25"}, &d1);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".zdl") fs::resize_file(entry.path(), 100);
  const auto [s4, e4] = run({"delta", "--cache-dir", dir.string(), "--x", "777.25"}, &d2);
  repaired = repaired && s4 == exit_ok && d1 == d2 && e4.find("rebuilt") != std::string::npos;

  bool valid = false;
  const double elapsed = seconds([&] { valid = validate_hyperbola(sieve_divisors(10000000)); });
  o.pass = identical && repaired && valid && elapsed < 10.0;
  o.detail << "reruns byte-identical: " << (identical ? "yes" : "NO") << "; corrupted grid and table rebuilt: "
           << (repaired ? "yes" : "NO") << "; sieve to 1e7 + hyperbola check " << (valid ? "passes" : "FAILS")
           << " in " << fmt(elapsed, 3) << " s (< 10)";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> criteria;
  Context ctx;
  ctx.cache_dir = default_cache_dir();
  app.add_option("--criterion", criteria, "Criterion numbers (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--cache-dir", ctx.cache_dir, "Cache directory");
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty())
    for (int i = 1; i <= 10; ++i) criteria.push_back(i);

  using Check = Outcome (*)(Context&);
  const Check checks[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                          criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int c : criteria) {
    Outcome o;
    try {
      o = checks[c - 1](ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "error: " << e.what();
    }
    all = all && o.pass;
    std::printf("criterion %d: %s %s\n", c, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
