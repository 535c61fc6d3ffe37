#pragma once

#include <cmath>
#include <numbers>

namespace zdl {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

/// Neumaier-compensated running sum. Addition order is the caller's, so
/// results are reproducible for a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// x(log x + 2γ − 1), the smooth part shared by the divisor and mean-square
/// error terms. Continuous extension 0 at x = 0.
inline double divisor_main_term(double x) noexcept {
  if (x <= 0.0) return 0.0;
  return x * (std::log(x) + 2.0 * euler_gamma - 1.0);
}

}  // namespace zdl
