#include "zdl/smoothing.hpp"

#include <cmath>
#include <string>

#include "zdl/errors.hpp"
#include "zdl/numeric.hpp"
#include "zdl/quadrature.hpp"

namespace zdl {

const char* to_string(Side side) noexcept { return side == Side::plus ? "plus" : "minus"; }

GaussianKernelSpec GaussianKernelSpec::around(double T, double G, Side sign) {
  if (!(T > 1.0)) throw DomainError("Gaussian window needs T > 1");
  if (!(G >= 1.0)) throw ParameterError("Gaussian width G must be at least 1");
  const double trunc = G * std::log(T);
  if (trunc > T / 2.0)
    throw ParameterError("Gaussian width too large: G·log T = " + std::to_string(trunc) + " exceeds T/2");
  return {G, trunc, sign};
}

GaussianAverage gaussian_average(const SampledFunction& f, double T, const GaussianKernelSpec& spec) {
  if (!(spec.G > 0.0) || !(spec.truncation > 0.0)) throw ParameterError("kernel needs G > 0 and truncation > 0");
  const double max_step = spec.G / 20.0;
  if (f.resolution > max_step)
    throw ParameterError("sample spacing exceeds G/20 for the requested kernel");
  const double a = spec.sign == Side::plus ? T : T - spec.truncation;
  const double b = spec.sign == Side::plus ? T + spec.truncation : T;
  if (a < f.lo || b > f.hi) throw CoverageError("samples do not cover the Gaussian window");

  const double dir = spec.sign == Side::plus ? 1.0 : -1.0;
  const double G2 = spec.G * spec.G;
  auto integrand = [&](double u) { return f.eval(T + dir * u) * std::exp(-u * u / G2); };
  const double integral = simpson(integrand, 0.0, spec.truncation, max_step);
  const double ratio = spec.truncation / spec.G;
  return {2.0 / (std::sqrt(pi) * spec.G) * integral, std::exp(-ratio * ratio)};
}

SampledFunction sampled_E(const ZetaMeanSquare& ms) {
  return {[&ms](double t) { return ms.E(t); }, 0.0, ms.t_end(), ms.step()};
}

SampledFunction sampled_delta_star(const DivisorTable& table) {
  const double hi = two_pi * static_cast<double>(table.limit()) / 4.0;
  return {[&table](double t) { return delta_star_combination(t / two_pi, table).value; }, 1e-9, hi, 0.0};
}

SandwichReport check_sandwich(double T, double G, const ZetaMeanSquare& ms, double C) {
  const auto E = sampled_E(ms);
  SandwichReport r;
  r.T = T;
  r.G = G;
  r.upper_average = gaussian_average(E, T, GaussianKernelSpec::around(T, G, Side::plus)).value;
  r.lower_average = gaussian_average(E, T, GaussianKernelSpec::around(T, G, Side::minus)).value;
  r.lhs = ms.E(T);
  r.envelope = C * G * std::log(T);
  r.upper_holds = r.lhs <= r.upper_average + r.envelope;
  r.lower_holds = r.lhs >= r.lower_average - r.envelope;
  return r;
}

SmoothingIdentityReport check_smoothing_identity(double T, double G, const DivisorTable& table, double C, double epsilon0) {
  const auto plus = GaussianKernelSpec::around(T, G, Side::plus);
  const auto minus = GaussianKernelSpec::around(T, G, Side::minus);
  table.require(static_cast<std::uint64_t>(std::floor(4.0 * (T + plus.truncation) / two_pi)));
  const auto f = sampled_delta_star(table);
  SmoothingIdentityReport r;
  r.T = T;
  r.G = G;
  r.centre = f.eval(T);
  r.average_plus = gaussian_average(f, T, plus).value;
  r.average_minus = gaussian_average(f, T, minus).value;
  r.residual_plus = std::abs(r.centre - r.average_plus);
  r.residual_minus = std::abs(r.centre - r.average_minus);
  r.envelope = C * G * std::pow(T, epsilon0);
  r.envelope_proof = C * G * G * std::pow(T, epsilon0);
  return r;
}

}  // namespace zdl
