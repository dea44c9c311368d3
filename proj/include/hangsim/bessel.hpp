#pragma once

#include <cmath>
#include <stdexcept>

namespace hangsim {

// Power series for J0 and J1, adequate for the first few zeros (|x| <~ 15).
inline double bessel_j0(double x) {
  const double z = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= -z / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// J1(x)/x, entire in x^2; J1(0)/0 is taken as the limit 1/2.
inline double bessel_j1_over_x(double x) {
  const double z = 0.25 * x * x;
  double term = 0.5, sum = 0.5;
  for (int k = 1; k <= 60; ++k) {
    term *= -z / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

inline double bessel_j1(double x) { return x * bessel_j1_over_x(x); }

// n-th positive zero of J0 by bisection; brackets around the (n - 1/4)pi
// asymptotic location.
inline double bessel_j0_zero(int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("bessel_j0_zero: n must be in 1..8");
  const double pi = 3.14159265358979323846;
  double lo = (n - 0.75) * pi, hi = (n + 0.25) * pi;
  double flo = bessel_j0(lo);
  if (flo * bessel_j0(hi) > 0.0) throw std::runtime_error("bessel_j0_zero: bracket failed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j0(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hangsim
