#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace zdl {

/// Running integral of uniformly spaced samples.
///
/// Each grid interval is integrated with the cubic through the four nearest
/// samples (the 4-point rule −1/24, 13/24, 13/24, −1/24 in the interior),
/// a fourth-order composite rule of the same order as Simpson's. Integrals
/// to an arbitrary abscissa integrate the same local cubic over the partial
/// interval, so integral_to() is continuous and exact for cubics.
class UniformCumulative {
 public:
  UniformCumulative() = default;
  UniformCumulative(double origin, double step, std::span<const double> samples);

  double origin() const noexcept { return origin_; }
  double step() const noexcept { return step_; }
  double end() const noexcept { return origin_ + step_ * static_cast<double>(intervals()); }
  std::size_t intervals() const noexcept { return cumulative_.empty() ? 0 : cumulative_.size() - 1; }

  /// ∫ from origin to x. Throws CoverageError outside [origin, end()].
  double integral_to(double x) const;

  /// ∫ from a to b, a ≤ b.
  double integral(double a, double b) const { return integral_to(b) - integral_to(a); }

  /// Cubic interpolant of the samples at x.
  double interpolate(double x) const;

  /// Cumulative integral at node i.
  double at_node(std::size_t i) const noexcept { return cumulative_[i]; }

 private:
  // Integral over [a, b] (in units of step, relative to node j0) of the cubic
  // through samples j0..j0+3.
  double local_integral(std::size_t j0, double a, double b) const;
  std::size_t stencil_start(std::size_t interval) const noexcept;

  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> samples_;
  std::vector<double> cumulative_;
};

/// Composite Simpson over [a, b] with an even number of panels no wider than
/// max_step.
double simpson(const std::function<double(double)>& f, double a, double b, double max_step);

}  // namespace zdl
