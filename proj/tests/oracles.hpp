#pragma once

// Independent closed-form oracles used by the tests only.

#include <cmath>
#include <map>
#include <utility>

namespace oracles {

// Bivariate polynomial with exact integration over the unit disc.
struct Poly2 {
  std::map<std::pair<int, int>, double> c;

  static Poly2 monomial(int i, int j, double v) {
    Poly2 p;
    p.c[{i, j}] = v;
    return p;
  }

  Poly2 dx() const {
    Poly2 out;
    for (auto& [ij, v] : c)
      if (ij.first > 0) out.c[{ij.first - 1, ij.second}] += ij.first * v;
    return out;
  }
  Poly2 dy() const {
    Poly2 out;
    for (auto& [ij, v] : c)
      if (ij.second > 0) out.c[{ij.first, ij.second - 1}] += ij.second * v;
    return out;
  }
  Poly2 operator*(const Poly2& o) const {
    Poly2 out;
    for (auto& [a, va] : c)
      for (auto& [b, vb] : o.c)
        out.c[{a.first + b.first, a.second + b.second}] += va * vb;
    return out;
  }

  // integral of x^i y^j over the unit disc (zero for odd exponents)
  static double disc_moment(int i, int j) {
    if (i % 2 || j % 2) return 0.0;
    const double ang = 2.0 * std::tgamma(0.5 * (i + 1)) * std::tgamma(0.5 * (j + 1)) /
                       std::tgamma(0.5 * (i + j) + 1.0);
    return ang / (i + j + 2);
  }

  double disc_integral() const {
    double acc = 0.0;
    for (auto& [ij, v] : c) acc += v * disc_moment(ij.first, ij.second);
    return acc;
  }
};

// (x^2+y^2)^k, the disc lift of s^k
inline Poly2 radial_power(int k) {
  Poly2 r2;
  r2.c[{2, 0}] = 1.0;
  r2.c[{0, 2}] = 1.0;
  Poly2 out = Poly2::monomial(0, 0, 1.0);
  for (int i = 0; i < k; ++i) out = out * r2;
  return out;
}

// squared H^m(D) norm, with the half-gradient convention matched to the
// lift: (s u')' on the interval corresponds to Laplacian/4 on the disc, so
// one interval derivative matches half a disc gradient.  Order-o terms are
// therefore weighted by 4^{-o}.
inline double disc_sobolev_sq(const Poly2& f, int m) {
  double acc = 0.0;
  std::map<int, std::map<int, Poly2>> derivs;  // order -> (#x-derivs -> poly)
  derivs[0][0] = f;
  double w = 1.0;
  for (int o = 0; o <= m; ++o) {
    if (o > 0) {
      for (int i = 0; i <= o; ++i) {
        derivs[o][i] = (i > 0) ? derivs[o - 1][i - 1].dx() : derivs[o - 1][0].dy();
      }
      w *= 0.25;
    }
    for (auto& [i, p] : derivs[o]) acc += w * (p * p).disc_integral();
  }
  return acc;
}

// first zeros of J0, frozen from standard tables
inline constexpr double kJ0Zero1 = 2.4048255576957728;
inline constexpr double kJ0Zero2 = 5.5200781102863106;

}  // namespace oracles
