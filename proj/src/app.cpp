#include "zdl/app.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "zdl/cache.hpp"
#include "zdl/errors.hpp"
#include "zdl/explicit_formulas.hpp"
#include "zdl/moments.hpp"
#include "zdl/numeric.hpp"
#include "zdl/quadruples.hpp"
#include "zdl/report.hpp"
#include "zdl/short_interval.hpp"
#include "zdl/smoothing.hpp"

namespace zdl {

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> merge_config(std::vector<std::string> args, const std::map<std::string, std::string>& config) {
  for (const auto& [key, value] : config) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

namespace {

struct Common {
  std::string cache_dir = default_cache_dir().string();
  std::string output = "csv";
  std::optional<double> epsilon0;
  std::uint64_t seed = 1;
  std::string config;
  double step = 0.02;
  std::optional<std::uint64_t> limit;
};

// Outcome of a command: the report and whether its built-in check passed.
struct Result {
  Report report;
  bool pass = true;
};

class Resources {
 public:
  Resources(const Common& c, std::ostream& err) : common_(c), err_(err) {}

  const Cache& cache() {
    if (!cache_) cache_.emplace(common_.cache_dir);
    return *cache_;
  }

  // Table reaching at least `needed`; an explicit --limit is used as given.
  const DivisorTable& table(std::uint64_t needed) {
    std::uint64_t limit = common_.limit.value_or(std::max<std::uint64_t>(100000, (needed + 99999) / 100000 * 100000));
    if (limit < needed) throw TableUnderflow(needed);
    if (!table_ || table_->limit() != limit) {
      CacheOutcome o{};
      table_.emplace(cache().divisors(limit, &o));
      err_ << "cache: divisor table to " << limit << " " << to_string(o) << "\n";
    }
    return *table_;
  }

  const ZetaSampleGrid& grid(double t_needed) {
    if (!(t_needed > 0.0)) throw ParameterError("zeta grid end must be positive");
    const double t_end = std::ceil(t_needed / 500.0) * 500.0;
    if (!grid_ || grid_->t_end < t_needed) {
      CacheOutcome o{};
      grid_.emplace(cache().zeta_grid(t_end, common_.step, {}, &o));
      ms_.reset();
      err_ << "cache: zeta grid to " << t_end << " step " << common_.step << " " << to_string(o) << "\n";
    }
    return *grid_;
  }

  const ZetaMeanSquare& mean_square(double t_needed) {
    grid(t_needed);
    if (!ms_) ms_.emplace(*grid_);
    return *ms_;
  }

 private:
  const Common& common_;
  std::ostream& err_;
  std::optional<Cache> cache_;
  std::optional<DivisorTable> table_;
  std::optional<ZetaSampleGrid> grid_;
  std::optional<ZetaMeanSquare> ms_;
};

std::uint64_t table_need(double x) { return static_cast<std::uint64_t>(std::floor(x)) + 1; }

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void require_positive(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ParameterError(std::string(what) + " needs at least one value");
  for (double x : v)
    if (!(x > 0.0)) throw ParameterError(std::string(what) + " must be positive");
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divisor-problem and zeta mean-square experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--cache-dir", common.cache_dir, "Cache directory (default $ZDL_CACHE_DIR or .zdl-cache)");
  app.add_option("--output", common.output, "Output format")->check(CLI::IsMember({"csv", "json", "plotdata"}));
  app.add_option("--epsilon0", common.epsilon0, "Exponent slack inside error envelopes");
  app.add_option("--seed", common.seed, "Seed for random point systems");
  app.add_option("--config", common.config, "key=value file; command-line flags take precedence");
  app.add_option("--step", common.step, "Zeta grid step")->check(CLI::PositiveNumber);
  app.add_option("--limit", common.limit, "Divisor table limit (default: rounded up from the request)");

  std::function<Result(Resources&)> command;

  // sieve
  std::uint64_t sieve_limit = 0;
  auto* sieve = app.add_subcommand("sieve", "Build (or load) the divisor table and check it");
  sieve->add_option("--limit", sieve_limit, "Table limit")->required()->check(CLI::PositiveNumber);
  sieve->callback([&] {
    command = [&](Resources& res) {
      common.limit = sieve_limit;
      const auto& t = res.table(sieve_limit);
      Result r;
      r.report.command = "sieve";
      r.report.title = "divisor summatory function at the table limit";
      r.report.columns = {"limit", "divisor_sum", "hyperbola_sum", "max_d", "valid"};
      std::uint32_t max_d = 0;
      for (auto d : t.counts()) max_d = std::max(max_d, d);
      const auto h = hyperbola_sum(t.limit());
      r.pass = h == t.prefix(t.limit());
      r.report.add_row({t.limit(), t.prefix(t.limit()), h, std::uint64_t{max_d}, r.pass});
      r.report.summary["valid"] = r.pass;
      return r;
    };
  });

  // delta
  std::vector<double> delta_x;
  auto* delta_cmd = app.add_subcommand("delta", "Delta and Delta* by every exact route");
  delta_cmd->add_option("--x", delta_x, "Points x > 0")->required();
  delta_cmd->callback([&] {
    command = [&](Resources& res) {
      require_positive(delta_x, "--x");
      const auto& t = res.table(table_need(4.0 * max_of(delta_x)));
      Result r;
      r.report.command = "delta";
      r.report.title = "Delta*(x) by the combination route";
      r.report.columns = {"x", "delta", "delta_star_combination", "delta_star_alternating", "route_difference"};
      r.report.plot_y = 2;
      double worst = 0.0;
      for (double x : delta_x) {
        const double d = delta(x, t).value;
        const double c = delta_star_combination(x, t).value;
        const double a = delta_star_alternating(x, t).value;
        const double diff = std::abs(c - a);
        worst = std::max(worst, diff / (1.0 + std::abs(c)));
        r.report.add_row({x, d, c, a, diff});
      }
      r.pass = worst < 1e-8;
      r.report.summary["max_relative_route_difference"] = worst;
      r.report.summary["tolerance"] = 1e-8;
      r.report.summary["pass"] = r.pass;
      return r;
    };
  });

  // estar
  std::vector<double> estar_t;
  auto* estar = app.add_subcommand("estar", "E(t), 2*pi*Delta*(t/2pi) and E*(t)");
  estar->add_option("--t", estar_t, "Heights t > 0")->required();
  estar->callback([&] {
    command = [&](Resources& res) {
      require_positive(estar_t, "--t");
      const double t_max = max_of(estar_t);
      const auto& ms = res.mean_square(t_max);
      const auto& table = res.table(table_need(4.0 * t_max / two_pi));
      Result r;
      r.report.command = "estar";
      r.report.title = "E*(t) = E(t) - 2 pi Delta*(t/2pi)";
      r.report.columns = {"t", "E", "two_pi_delta_star", "E_star"};
      r.report.plot_y = 3;
      for (double t : estar_t) {
        const double e = ms.E(t);
        const double d = two_pi * delta_star_combination(t / two_pi, table).value;
        r.report.add_row({t, e, d, e - d});
      }
      return r;
    };
  });

  // atkinson
  std::vector<double> atk_T;
  std::optional<double> atk_N;
  double atk_A = 0.5, atk_A_prime = 2.0, atk_C = 10.0;
  auto* atk = app.add_subcommand("atkinson", "E(T) from the explicit formula against quadrature");
  atk->add_option("--T", atk_T, "Heights T")->required();
  atk->add_option("--N", atk_N, "Truncation (default N = T)");
  atk->add_option("--A", atk_A, "Lower truncation ratio");
  atk->add_option("--A-prime", atk_A_prime, "Upper truncation ratio");
  atk->add_option("--C", atk_C, "Envelope constant for C*log^2 T");
  atk->callback([&] {
    command = [&](Resources& res) {
      require_positive(atk_T, "--T");
      const double T_max = max_of(atk_T);
      const auto& ms = res.mean_square(T_max);
      const auto& table = res.table(table_need(std::max(T_max, atk_N.value_or(0.0)) + 1));
      Result r;
      r.report.command = "atkinson";
      r.report.title = "E(T): explicit formula minus quadrature";
      r.report.columns = {"T", "N", "N_prime", "sigma1", "sigma2", "E_atkinson", "E_quadrature", "difference",
                          "envelope", "pass"};
      r.report.plot_y = 7;
      for (double T : atk_T) {
        const auto p = AtkinsonParams::make(T, atk_N.value_or(T), atk_A, atk_A_prime);
        const auto s = atkinson_sums(p, table);
        const double e_atk = s.sigma1 + s.sigma2;
        const double e_q = ms.E(T);
        const double env = atk_C * std::pow(std::log(T), 2);
        const bool ok = std::abs(e_atk - e_q) <= env;
        r.pass = r.pass && ok;
        r.report.add_row({T, p.N, p.N_prime, s.sigma1, s.sigma2, e_atk, e_q, e_atk - e_q, env, ok});
      }
      r.report.summary["pass"] = r.pass;
      return r;
    };
  });

  // voronoi
  std::vector<double> vor_x;
  std::uint64_t vor_N = 0;
  bool vor_star = false;
  auto* vor = app.add_subcommand("voronoi", "Truncated Voronoi series against the exact value");
  vor->add_option("--x", vor_x, "Points x")->required();
  vor->add_option("--N", vor_N, "Number of terms")->required();
  vor->add_flag("--star", vor_star, "Alternating series for Delta*");
  vor->callback([&] {
    command = [&](Resources& res) {
      require_positive(vor_x, "--x");
      const double x_max = max_of(vor_x);
      const auto& table = res.table(std::max<std::uint64_t>(vor_N, table_need(4.0 * x_max)));
      VoronoiOptions opts;
      if (common.epsilon0) opts.epsilon0 = *common.epsilon0;
      const auto series = voronoi_batch(vor_x, vor_N, vor_star, table, opts);
      Result r;
      r.report.command = "voronoi";
      r.report.title = vor_star ? "Voronoi series for Delta*" : "Voronoi series for Delta";
      r.report.columns = {"x", "N", "series", "exact", "error", "envelope"};
      r.report.plot_y = 4;
      CompensatedSum sq;
      for (std::size_t i = 0; i < vor_x.size(); ++i) {
        const double x = vor_x[i];
        const double exact = vor_star ? delta_star_combination(x, table).value : delta(x, table).value;
        const double e = series[i].value - exact;
        sq.add(e * e);
        r.report.add_row({x, vor_N, series[i].value, exact, e, series[i].error_envelope});
      }
      r.report.summary["rms_error"] = std::sqrt(sq.value() / static_cast<double>(vor_x.size()));
      return r;
    };
  });

  // smooth
  double sm_T = 0, sm_G = 0, sm_C = 3.0;
  std::string sm_check = "sandwich";
  auto* sm = app.add_subcommand("smooth", "Gaussian averaging inequalities for E and Delta*");
  sm->add_option("--T", sm_T, "Centre T")->required();
  sm->add_option("--G", sm_G, "Kernel width G")->required();
  sm->add_option("--check", sm_check, "sandwich (E between its one-sided averages) or identity (Delta*)")
      ->check(CLI::IsMember({"sandwich", "identity"}));
  sm->add_option("--C", sm_C, "Envelope constant");
  sm->callback([&] {
    command = [&](Resources& res) {
      if (!(sm_T > 1.0) || !(sm_G >= 1.0)) throw ParameterError("smoothing needs T > 1 and G ≥ 1");
      const double reach = sm_T + sm_G * std::log(sm_T) + 1.0;
      Result r;
      r.report.command = "smooth";
      if (sm_check == "sandwich") {
        const auto rep = check_sandwich(sm_T, sm_G, res.mean_square(reach), sm_C);
        r.report.title = "E(T) against its one-sided Gaussian averages";
        r.report.columns = {"T", "G", "E", "upper_average", "lower_average", "envelope", "pass"};
        r.report.plot_y = 2;
        r.pass = rep.holds();
        r.report.add_row({rep.T, rep.G, rep.lhs, rep.upper_average, rep.lower_average, rep.envelope, r.pass});
      } else {
        const double eps = common.epsilon0.value_or(0.05);
        const auto rep = check_smoothing_identity(sm_T, sm_G, res.table(table_need(4.0 * reach / two_pi)), sm_C, eps);
        r.report.title = "Delta*(T/2pi) against its Gaussian averages";
        r.report.columns = {"T",           "G", "delta_star", "average_plus", "average_minus", "residual_plus",
                            "residual_minus", "envelope", "envelope_unnormalised", "pass"};
        r.report.plot_y = 2;
        r.pass = rep.holds();
        r.report.add_row({rep.T, rep.G, rep.centre, rep.average_plus, rep.average_minus, rep.residual_plus,
                          rep.residual_minus, rep.envelope, rep.envelope_proof, r.pass});
      }
      r.report.summary["pass"] = r.pass;
      return r;
    };
  });

  // moments
  std::string mo_quantity = "delta";
  int mo_power = 2, mo_ppu = 8;
  double mo_tmin = 100, mo_tmax = 0, mo_ratio = 1.25;
  auto* mo = app.add_subcommand("moments", "Power moments and their fitted growth exponent");
  mo->add_option("--quantity", mo_quantity, "delta, delta_star, E or E_star");
  mo->add_option("--power", mo_power, "Power k")->check(CLI::Range(1, 12));
  mo->add_option("--tmin", mo_tmin, "First sample point");
  mo->add_option("--tmax", mo_tmax, "Last sample point")->required();
  mo->add_option("--ratio", mo_ratio, "Geometric ratio of sample points");
  mo->add_option("--points-per-unit", mo_ppu, "Simpson panels per unit for the Delta family");
  mo->callback([&] {
    command = [&](Resources& res) {
      const Quantity q = parse_quantity(mo_quantity);
      const auto Ts = geometric_points(mo_tmin, mo_tmax, mo_ratio);
      if (!(Ts.front() > moment_lower_limit(q))) throw ParameterError("--tmin must exceed the lower limit");
      MomentResources mr;
      mr.points_per_unit = mo_ppu;
      if (q != Quantity::E) {
        const double reach = q == Quantity::delta ? mo_tmax : q == Quantity::delta_star ? 4.0 * mo_tmax
                                                                                        : 4.0 * mo_tmax / two_pi;
        mr.table = &res.table(table_need(reach) + 1);
      }
      if (q == Quantity::E || q == Quantity::E_star) mr.zeta = &res.mean_square(mo_tmax);
      const auto est = estimate_moment(q, mo_power, Ts, mr);
      Result r;
      r.report.command = "moments";
      r.report.title = std::string("integral of ") + to_string(q) + "^" + std::to_string(mo_power);
      r.report.columns = {"T", "integral"};
      for (const auto& s : est.samples) r.report.add_row({s.T, s.integral});
      auto& sum = r.report.summary;
      sum["quantity"] = to_string(q);
      sum["power"] = mo_power;
      sum["fitted_slope"] = est.fit.slope;
      sum["fitted_intercept"] = est.fit.intercept;
      sum["residual_rms"] = est.fit.residual_rms;
      sum["discarded_samples"] = est.discarded;
      if (mo_power == 2 || mo_power == 4) {
        sum["coefficient_at_exponent"] = fixed_exponent_coefficient(est.samples, mo_power == 2 ? 1.5 : 2.0);
      }
      if (const auto b = slope_bound(q, mo_power)) {
        sum["expected_slope"] = b->expected;
        if (std::isfinite(b->lower)) sum["slope_lower"] = b->lower;
        sum["slope_upper"] = b->upper;
        r.pass = est.fit.slope >= b->lower && est.fit.slope <= b->upper;
        sum["pass"] = r.pass;
      }
      return r;
    };
  });

  // quadruples
  std::uint64_t qu_N = 0;
  int qu_k = 2;
  double qu_delta = 0, qu_C = 32.0;
  auto* qu = app.add_subcommand("quadruples", "Near-coincident k-th root quadruples");
  qu->add_option("--N", qu_N, "Block (N, 2N]")->required();
  qu->add_option("--k", qu_k, "Root order k ≥ 2");
  qu->add_option("--delta", qu_delta, "Window delta > 0")->required();
  qu->add_option("--C", qu_C, "Harness constant for count/envelope");
  qu->callback([&] {
    command = [&](Resources&) {
      QuadrupleOptions opts;
      if (common.epsilon0) opts.epsilon0 = *common.epsilon0;
      const auto rep = count_quadruples(qu_N, qu_k, qu_delta, opts);
      Result r;
      r.report.command = "quadruples";
      r.report.title = "quadruple count against N^eps (N^4 delta + N^2)";
      r.report.columns = {"N", "k", "delta", "count", "envelope", "ratio", "ties"};
      r.report.plot_x = 2;
      r.report.plot_y = 5;
      r.report.add_row({rep.N, std::int64_t{rep.k}, rep.delta, rep.count, rep.envelope, rep.ratio, rep.ties});
      r.pass = rep.ratio <= qu_C;
      r.report.summary["pass"] = r.pass;
      return r;
    };
  });

  // short-interval
  double si_T = 0, si_C = 16.0;
  std::optional<double> si_G;
  std::string si_generator = "uniform";
  bool si_classes = false, si_refine = false;
  auto* si = app.add_subcommand("short-interval", "Fourth powers of short mean squares over separated points");
  si->add_option("--T", si_T, "Range (T, 2T]")->required();
  si->add_option("--G", si_G, "Half-window G (default T^{1/4})");
  si->add_option("--generator", si_generator, "uniform, random or greedy_peak");
  si->add_option("--C", si_C, "Harness constant for sum/envelope");
  si->add_flag("--classes", si_classes, "Report dyadic classes of unit-window maxima instead");
  si->add_flag("--refine", si_refine, "Polish window maxima by golden-section search");
  si->callback([&] {
    command = [&](Resources& res) {
      if (!(si_T > 1.0)) throw ParameterError("--T must exceed 1");
      Result r;
      r.report.command = "short-interval";
      if (si_classes) {
        const auto rep = dyadic_classes(si_T, res.grid(2.0 * si_T + 1.0), si_refine);
        r.report.title = "dyadic classes R_V of unit-window maxima of |zeta|";
        r.report.columns = {"T", "V", "R_V"};
        r.report.plot_x = 1;
        r.report.plot_y = 2;
        for (const auto& c : rep.classes) r.report.add_row({si_T, c.V, std::uint64_t{c.R()}});
        r.report.summary["windows"] = rep.windows;
        r.report.summary["below_log_T"] = rep.below;
        return r;
      }
      const double G = si_G.value_or(std::pow(si_T, 0.25));
      const double eps = common.epsilon0.value_or(0.01);
      const auto gen = parse_point_generator(si_generator);
      const auto& grid = res.grid(2.0 * si_T + G + 1.0);
      const auto system = make_points(gen, si_T, G, common.seed, grid);
      const auto t2 = fourth_power_sum(system, res.mean_square(2.0 * si_T + G + 1.0), eps);
      r.report.title = "sum of fourth powers of short mean squares";
      r.report.columns = {"T", "G", "generator", "R", "sum", "envelope", "ratio", "pass"};
      r.report.plot_y = 6;
      r.pass = t2.ratio <= si_C;
      r.report.add_row({t2.T, t2.G, std::string(to_string(gen)), std::uint64_t{t2.R}, t2.sum, t2.envelope, t2.ratio,
                        r.pass});
      r.report.summary["pass"] = r.pass;
      return r;
    };
  });

  // twelfth
  std::vector<double> tw_T{500, 1000, 2000, 4000};
  double tw_max_slope = 2.3;
  auto* tw = app.add_subcommand("twelfth", "Twelfth moment of |zeta| on the critical line");
  tw->add_option("--T", tw_T, "Heights T");
  tw->add_option("--max-slope", tw_max_slope, "Largest accepted log-log slope");
  tw->callback([&] {
    command = [&](Resources& res) {
      require_positive(tw_T, "--T");
      const auto& grid = res.grid(max_of(tw_T));
      const double eps = common.epsilon0.value_or(0.01);
      Result r;
      r.report.command = "twelfth";
      r.report.title = "integral of |zeta(1/2+it)|^12 over [0, T]";
      r.report.columns = {"T", "value", "normalized"};
      std::vector<MomentSample> samples;
      for (double T : tw_T) {
        const auto m = twelfth_moment(T, grid, eps);
        r.report.add_row({T, m.value, m.normalized});
        samples.push_back({T, m.value});
      }
      if (samples.size() >= 2) {
        const auto fit = log_log_fit(samples);
        r.pass = fit.slope <= tw_max_slope;
        r.report.summary["fitted_slope"] = fit.slope;
        r.report.summary["max_slope"] = tw_max_slope;
        r.report.summary["pass"] = r.pass;
      }
      return r;
    };
  });

  try {
    // A --config file is folded into the arguments before the real parse.
    for (std::size_t i = 1; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (!path.empty()) {
        args = merge_config(args, read_config_file(path));
        break;
      }
    }
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }

  try {
    const auto format = parse_output_format(common.output);
    Resources res(common, err);
    const Result r = command(res);
    out << render(r.report, format);
    out.flush();
    if (!r.pass) {
      err << "check failed\n";
      return exit_check_failed;
    }
    return exit_ok;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace zdl
