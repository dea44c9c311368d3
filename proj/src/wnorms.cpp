#include "hangsim/wnorms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hangsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int max_deriv_X(int m) { return m; }

std::vector<ScalarField> all_derivs(const Mesh& mesh, const ScalarField& u, int max_order) {
  std::vector<ScalarField> d;
  d.reserve(max_order + 1);
  d.push_back(u);
  for (int k = 1; k <= max_order; ++k) d.push_back(mesh.derivative(u, k));
  return d;
}

double sq(double x) { return x * x; }

}  // namespace

Certificate make_certificate(std::string name, double lhs, double rhs) {
  Certificate c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.satisfied = c.slack >= -kCertTol * std::max(1.0, std::abs(rhs));
  return c;
}

double norm_Lp(const Mesh& mesh, const ScalarField& u, double p, double alpha) {
  const ScalarField& s = mesh.nodes();
  ScalarField w = u.abs();
  if (alpha != 0.0) {
    ScalarField sa = s.pow(alpha);
    if (alpha > 0.0) sa[0] = 0.0;
    w *= sa;
  }
  if (p == kInf) return w.maxCoeff();
  return std::pow(mesh.integrate(w.pow(p)), 1.0 / p);
}

double norm_L2(const Mesh& mesh, const ScalarField& u) {
  return std::sqrt(mesh.integrate(u.square()));
}

double norm_Linf(const ScalarField& u) { return u.abs().maxCoeff(); }

double norm_X_derivs(const Mesh& mesh, std::span<const ScalarField> derivs, int m) {
  if (m < 0 || m > 4) throw std::invalid_argument("norm_X: m must be in 0..4");
  const int k = m / 2;
  const ScalarField& s = mesh.nodes();
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) acc += mesh.integrate(derivs[j].square());
  if (m % 2 == 0) {
    for (int j = 1; j <= k; ++j)
      acc += mesh.integrate((s.pow(j) * derivs[k + j]).square());
  } else {
    for (int j = 1; j <= k + 1; ++j)
      acc += mesh.integrate((s.pow(j - 0.5) * derivs[k + j]).square());
  }
  return std::sqrt(acc);
}

double norm_Y_derivs(const Mesh& mesh, std::span<const ScalarField> derivs, int m) {
  if (m < 0 || m > 4) throw std::invalid_argument("norm_Y: m must be in 0..4");
  const ScalarField& s = mesh.nodes();
  if (m == 0) return std::sqrt(mesh.integrate(s * derivs[0].square()));
  double acc = 0.0;
  if (m % 2 == 1) {
    const int k = (m - 1) / 2;
    for (int j = 0; j <= k; ++j) acc += mesh.integrate(derivs[j].square());
    for (int j = 1; j <= k + 1; ++j)
      acc += mesh.integrate((s.pow(j) * derivs[k + j]).square());
  } else {
    const int k = (m - 2) / 2;
    for (int j = 0; j <= k; ++j) acc += mesh.integrate(derivs[j].square());
    for (int j = 1; j <= k + 2; ++j)
      acc += mesh.integrate((s.pow(j - 0.5) * derivs[k + j]).square());
  }
  return std::sqrt(acc);
}

double norm_X(const Mesh& mesh, const ScalarField& u, int m) {
  auto d = all_derivs(mesh, u, max_deriv_X(m));
  return norm_X_derivs(mesh, d, m);
}

double norm_Y(const Mesh& mesh, const ScalarField& u, int m) {
  auto d = all_derivs(mesh, u, m == 0 ? 0 : m);
  return norm_Y_derivs(mesh, d, m);
}

double norm_Xeps(const Mesh& mesh, const ScalarField& u, int k, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("norm_Xeps: eps must be positive");
  if (k < 1 || k > 3) throw std::invalid_argument("norm_Xeps: k must be in 1..3");
  auto d = all_derivs(mesh, u, k);
  switch (k) {
    case 1:
      return std::sqrt(sq(norm_Lp(mesh, d[0], kInf, eps)) +
                       sq(norm_Lp(mesh, d[1], 2.0, 0.5 + eps)));
    case 2:
      return std::sqrt(sq(norm_Linf(d[0])) + sq(norm_Lp(mesh, d[1], 2.0, eps)) +
                       sq(norm_Lp(mesh, d[2], 2.0, 1.0 + eps)));
    default:
      return std::sqrt(sq(norm_Linf(d[0])) + sq(norm_Lp(mesh, d[1], kInf, eps)) +
                       sq(norm_Lp(mesh, d[2], 2.0, 0.5 + eps)) +
                       sq(norm_Lp(mesh, d[3], 2.0, 1.5 + eps)));
  }
}

double norm_X(const Mesh& mesh, const VecField& u, int m) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += sq(norm_X(mesh, ScalarField(u.col(c)), m));
  return std::sqrt(acc);
}

ScalarField weighted_average(const Mesh& mesh, const ScalarField& u, double alpha) {
  if (u.size() != mesh.num_nodes())
    throw std::invalid_argument("weighted_average: field/mesh mismatch");
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  // sigma^alpha is integrated in closed form against the linear interpolant.
  ScalarField out(n);
  double cum = 0.0;
  out[0] = u[0] / (alpha + 1.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double a = s[i], b = s[i + 1];
    const double slope = (u[i + 1] - u[i]) / (b - a);
    const double i1 = (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) / (alpha + 1.0);
    const double i2 = (std::pow(b, alpha + 2.0) - std::pow(a, alpha + 2.0)) / (alpha + 2.0);
    cum += u[i] * i1 + slope * (i2 - a * i1);
    out[i + 1] = cum / std::pow(b, alpha + 1.0);
  }
  return out;
}

ScalarField averaging(const Mesh& mesh, const ScalarField& u) {
  // Uses the mesh's native cumulative rule (order-4 capable) rather than the
  // linear-interpolant closed form of weighted_average.
  ScalarField out = mesh.cumulative(u);
  const ScalarField& s = mesh.nodes();
  for (int i = 1; i < mesh.num_nodes(); ++i) out[i] /= s[i];
  out[0] = u[0];
  return out;
}

VecField averaging(const Mesh& mesh, const VecField& u) {
  VecField out(u.rows(), 3);
  for (int c = 0; c < 3; ++c) out.col(c) = averaging(mesh, ScalarField(u.col(c)));
  return out;
}

std::vector<ScalarField> averaging_derivs(const Mesh& mesh, const ScalarField& u, int max_order) {
  auto du = all_derivs(mesh, u, max_order);
  std::vector<ScalarField> out;
  out.reserve(max_order + 1);
  for (int j = 0; j <= max_order; ++j) out.push_back(weighted_average(mesh, du[j], j));
  return out;
}

Certificate cert_calineq(const Mesh& mesh, const ScalarField& h, double alpha, double p) {
  if (!(alpha + 1.0 / p > 0.0)) throw std::invalid_argument("CalIneq: need alpha + 1/p > 0");
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  const double ip = (p == kInf) ? 0.0 : 1.0 / p;
  const double c = (p == kInf) ? 1.0 : std::pow(alpha + ip, -ip);
  ScalarField habs = h.abs();

  if (p != 1.0 && p != 2.0 && p != kInf) {
    ScalarField cum = mesh.cumulative(habs);
    ScalarField H = cum[n - 1] - cum;
    return make_certificate("CalIneq", norm_Lp(mesh, H, p, alpha),
                            c * norm_Lp(mesh, habs, 1.0, alpha + ip));
  }

  // For p in {1,2,inf} both sides are integrated in closed form against the
  // linear interpolant of |h| (weight moments exact), so the continuous lemma
  // applies verbatim to the interpolant and quadrature error cannot flip the
  // inequality.
  ScalarField H(n);
  H[n - 1] = 0.0;
  for (int i = n - 2; i >= 0; --i)
    H[i] = H[i + 1] + 0.5 * (s[i + 1] - s[i]) * (habs[i] + habs[i + 1]);

  auto mom = [](double e, double u, double v) {
    return (std::pow(v, e + 1.0) - std::pow(u, e + 1.0)) / (e + 1.0);
  };

  double rhs_int = 0.0, acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double u = s[i], v = s[i + 1];
    const double b = (habs[i + 1] - habs[i]) / (v - u);
    const double a = habs[i] - b * u;
    rhs_int += a * mom(alpha + ip, u, v) + b * mom(alpha + ip + 1.0, u, v);
    if (p == kInf) continue;
    // H(s) on [u,v] is the quadratic q0 + q1 s + q2 s^2
    const double q0 = H[i] + a * u + 0.5 * b * u * u, q1 = -a, q2 = -0.5 * b;
    if (p == 1.0) {
      acc += q0 * mom(alpha, u, v) + q1 * mom(alpha + 1.0, u, v) + q2 * mom(alpha + 2.0, u, v);
    } else {
      acc += q0 * q0 * mom(2.0 * alpha, u, v) + 2.0 * q0 * q1 * mom(2.0 * alpha + 1.0, u, v) +
             (q1 * q1 + 2.0 * q0 * q2) * mom(2.0 * alpha + 2.0, u, v) +
             2.0 * q1 * q2 * mom(2.0 * alpha + 3.0, u, v) + q2 * q2 * mom(2.0 * alpha + 4.0, u, v);
    }
  }

  double lhs;
  if (p == kInf) {
    // nodal sampling underestimates the sup, which keeps the check one-sided
    lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = s[i] > 0.0 ? std::pow(s[i], alpha) : (alpha > 0.0 ? 0.0 : 1.0);
      lhs = std::max(lhs, w * H[i]);
    }
  } else {
    lhs = std::pow(acc, 1.0 / p);
  }
  return make_certificate("CalIneq", lhs, c * rhs_int);
}

Certificate cert_estM(const Mesh& mesh, const ScalarField& u, double alpha, double beta, double p) {
  const double ip = (p == kInf) ? 0.0 : 1.0 / p;
  if (!(alpha + 1.0 > beta + ip)) throw std::invalid_argument("EstM: need alpha+1 > beta+1/p");
  ScalarField U = weighted_average(mesh, u, alpha);
  const double c = 1.0 / (alpha - beta + 1.0 - ip);
  return make_certificate("EstM", norm_Lp(mesh, U, p, beta), c * norm_Lp(mesh, u, p, beta));
}

Certificate cert_wem1(const Mesh& mesh, const ScalarField& u, int m) {
  auto du = all_derivs(mesh, u, max_deriv_X(m));
  auto dMu = averaging_derivs(mesh, u, max_deriv_X(m));
  return make_certificate("WEM1", norm_X_derivs(mesh, dMu, m),
                          2.0 * norm_X_derivs(mesh, du, m));
}

std::vector<Certificate> check_inequalities(const Mesh& mesh, const ScalarField& u,
                                            double p, double alpha, double beta) {
  std::vector<Certificate> out;
  out.push_back(cert_calineq(mesh, u, alpha, p));
  out.push_back(cert_estM(mesh, u, alpha, beta, p));
  for (int m = 0; m <= 4; ++m) {
    auto c = cert_wem1(mesh, u, m);
    c.name = "WEM1_X" + std::to_string(m);
    out.push_back(std::move(c));
  }
  return out;
}

NormReport norm_report(const Mesh& mesh, const ScalarField& u, int m, double eps) {
  NormReport r;
  auto d = all_derivs(mesh, u, std::min(m, 4));
  r.values["L2"] = norm_L2(mesh, u);
  r.values["Linf"] = norm_Linf(u);
  for (int j = 0; j <= std::min(m, 4); ++j)
    r.values["X" + std::to_string(j)] = norm_X_derivs(mesh, d, j);
  for (int j = 0; j <= std::min(m, 3); ++j)
    r.values["Y" + std::to_string(j)] = norm_Y_derivs(mesh, d, j);
  if (eps > 0.0) {
    r.values["eps"] = eps;
    for (int k = 1; k <= std::min(m, 3); ++k)
      r.values["Xeps" + std::to_string(k)] = norm_Xeps(mesh, u, k, eps);
  }
  return r;
}

double triple_bar(const Mesh& mesh, std::span<const ScalarField> jets, int m) {
  double acc = 0.0;
  for (int j = 0; j < static_cast<int>(jets.size()) && j <= m; ++j)
    acc += sq(norm_X(mesh, jets[j], m - j));
  return std::sqrt(acc);
}

double triple_bar(const Mesh& mesh, std::span<const VecField> jets, int m) {
  double acc = 0.0;
  for (int j = 0; j < static_cast<int>(jets.size()) && j <= m; ++j)
    acc += sq(norm_X(mesh, jets[j], m - j));
  return std::sqrt(acc);
}

}  // namespace hangsim
