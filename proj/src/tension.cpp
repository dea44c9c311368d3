#include "hangsim/tension.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hangsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField clip_nonneg(const Mesh& mesh, const ScalarField& q) {
  if (q.size() != mesh.num_nodes()) throw std::invalid_argument("tension: field/mesh mismatch");
  if (!q.isFinite().all()) throw std::invalid_argument("tension: non-finite potential");
  return q.max(0.0);
}

// One classical RK4 step of (u, u')' = (u', q u) over [sa, sb].
void rk4_step(double h, double qa, double qm, double qb, double& u, double& up) {
  auto f = [](double q, double u_, double up_, double& du, double& dup) {
    du = up_;
    dup = q * u_;
  };
  double k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
  f(qa, u, up, k1u, k1p);
  f(qm, u + 0.5 * h * k1u, up + 0.5 * h * k1p, k2u, k2p);
  f(qm, u + 0.5 * h * k2u, up + 0.5 * h * k2p, k3u, k3p);
  f(qb, u + h * k3u, up + h * k3p, k4u, k4p);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

double ratio_minmax(const Mesh& mesh, const ScalarField& num, bool want_min) {
  const ScalarField& s = mesh.nodes();
  double best = want_min ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  for (int i = 1; i < mesh.num_nodes(); ++i) {
    const double r = num[i] / s[i];
    best = want_min ? std::min(best, r) : std::max(best, r);
  }
  return best;
}

}  // namespace

FundamentalPair solve_fundamental(const Mesh& mesh, const ScalarField& q_in) {
  ScalarField q = clip_nonneg(mesh, q_in);
  ScalarField qm = mesh.midpoints(q).max(0.0);
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();

  FundamentalPair p;
  p.phi.resize(n);
  p.phi_p.resize(n);
  p.psi.resize(n);
  p.psi_p.resize(n);

  double u = 0.0, up = 1.0;
  p.phi[0] = u;
  p.phi_p[0] = up;
  for (int i = 0; i + 1 < n; ++i) {
    rk4_step(s[i + 1] - s[i], q[i], qm[i], q[i + 1], u, up);
    p.phi[i + 1] = u;
    p.phi_p[i + 1] = up;
  }

  u = 1.0;
  up = 0.0;
  p.psi[n - 1] = u;
  p.psi_p[n - 1] = up;
  for (int i = n - 1; i > 0; --i) {
    rk4_step(s[i - 1] - s[i], q[i], qm[i - 1], q[i - 1], u, up);
    p.psi[i - 1] = u;
    p.psi_p[i - 1] = up;
  }

  p.wronskian = -p.phi_p[n - 1];
  return p;
}

double greens_function(const Mesh& mesh, const FundamentalPair& pair, double s, double r) {
  auto interp = [&mesh](const ScalarField& f, double t) {
    const ScalarField& x = mesh.nodes();
    const int n = mesh.num_nodes();
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const int m = (lo + hi) / 2;
      (x[m] <= t ? lo : hi) = m;
    }
    const double w = (t - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - w) * f[lo] + w * f[hi];
  };
  const double lo = std::min(s, r), hi = std::max(s, r);
  return interp(pair.phi, lo) * interp(pair.psi, hi) / pair.phi_p[mesh.num_nodes() - 1];
}

TensionSolve solve_bvp(const Mesh& mesh, const ScalarField& q_in, const ScalarField& h,
                       double a, bool with_certificates) {
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  if (h.size() != n) throw std::invalid_argument("solve_bvp: field/mesh mismatch");
  if (!h.isFinite().all() || !std::isfinite(a))
    throw std::invalid_argument("solve_bvp: non-finite data");

  TensionSolve out;
  out.q = clip_nonneg(mesh, q_in);
  out.h = h;
  out.a = a;
  out.pair = solve_fundamental(mesh, out.q);
  const double phip1 = out.pair.phi_p[n - 1];
  if (std::abs(phip1) < 1e-14)
    throw std::runtime_error("solve_bvp: vanishing phi'(1) with nonnegative potential");

  ScalarField cum_phi_h = mesh.cumulative(out.pair.phi * h);
  ScalarField cum_psi_h = mesh.cumulative(out.pair.psi * h);
  const double total_psi_h = cum_psi_h[n - 1];
  ScalarField tail = total_psi_h - cum_psi_h;

  out.tau = (a * out.pair.phi + out.pair.psi * cum_phi_h + out.pair.phi * tail) / phip1;
  out.tau_p = (a * out.pair.phi_p + out.pair.psi_p * cum_phi_h + out.pair.phi_p * tail) / phip1;
  out.tau[0] = 0.0;

  const double E = mesh.integrate(s * out.q);           // ||s^1/2 x''||_L2^2
  const double expE = std::exp(E);
  const double sh_l1_early = mesh.integrate(s * h.abs());
  out.min_tau_over_s = ratio_minmax(mesh, out.tau, true);
  out.sc1_lower = (h >= 0.0).all() ? (a + sh_l1_early / expE) / expE : kNaN;
  if (!with_certificates) return out;

  // --- certificates -------------------------------------------------------
  auto& certs = out.certificates;

  certs.push_back(make_certificate("EstPhi.dphi_lower", 1.0, out.pair.phi_p.minCoeff()));
  certs.push_back(make_certificate("EstPhi.dphi_upper", out.pair.phi_p.maxCoeff(), expE));
  certs.push_back(make_certificate("EstPhi.phi_lower", 1.0, ratio_minmax(mesh, out.pair.phi, true)));
  certs.push_back(make_certificate("EstPhi.phi_upper", ratio_minmax(mesh, out.pair.phi, false), expE));

  certs.push_back(make_certificate("EstPsi.psi_lower", 1.0, out.pair.psi.minCoeff()));
  certs.push_back(make_certificate("EstPsi.psi_upper", out.pair.psi.maxCoeff(), expE));
  certs.push_back(make_certificate("EstPsi.dpsi_sign", out.pair.psi_p.maxCoeff(), 0.0));
  for (double alpha : {0.0, 1.0}) {
    const double e_alpha = mesh.integrate(s.pow(alpha) * out.q);
    ScalarField sa = s.pow(alpha);
    if (alpha > 0.0) sa[0] = 0.0;
    certs.push_back(make_certificate(
        alpha == 0.0 ? "EstPsi.dpsi_alpha0" : "EstPsi.dpsi_alpha1",
        (sa * out.pair.psi_p.abs()).maxCoeff(), e_alpha * expE));
  }

  {
    ScalarField w = out.pair.phi * out.pair.psi_p - out.pair.phi_p * out.pair.psi;
    const double dev = (w - out.pair.wronskian).abs().maxCoeff() / std::abs(out.pair.wronskian);
    certs.push_back(make_certificate("Wronskian", dev, 1e-6));
  }

  const double h_l1 = mesh.integrate(h.abs());
  const double sh_l1 = sh_l1_early;
  if ((h >= 0.0).all()) {
    if (a + sh_l1 / expE >= 0.0) {
      certs.push_back(make_certificate("EstSolBVP1.tau_lower", out.sc1_lower,
                                       out.min_tau_over_s));
      certs.push_back(make_certificate("EstSolBVP1.tau_upper",
                                       ratio_minmax(mesh, out.tau, false), a + h_l1));
      certs.push_back(make_certificate("EstSolBVP1.dtau_lower", a - (a + h_l1) * E,
                                       out.tau_p.minCoeff()));
      certs.push_back(make_certificate("EstSolBVP1.dtau_upper", out.tau_p.maxCoeff(), a + h_l1));
    }
  }

  // Pointwise bounds with the constant e^{2E} carried explicitly.
  for (double alpha : {0.0, 0.5, 1.0}) {
    const double h_alpha = norm_Lp(mesh, h, 1.0, alpha);
    const double e_alpha = mesh.integrate(s.pow(alpha) * out.q);
    double worst_tau = 0.0, worst_dtau = 0.0;
    for (int i = 1; i < n; ++i) {
      const double denom = std::abs(a) * s[i] + std::pow(s[i], 1.0 - alpha) * h_alpha;
      if (denom > 0.0) worst_tau = std::max(worst_tau, std::abs(out.tau[i]) / denom);
      worst_dtau = std::max(worst_dtau, std::pow(s[i], alpha) * std::abs(out.tau_p[i]));
    }
    const std::string tag = alpha == 0.0 ? "a0" : (alpha == 0.5 ? "a05" : "a1");
    certs.push_back(make_certificate("EstSolBVP2.tau_" + tag, worst_tau, expE * expE));
    certs.push_back(make_certificate(
        "EstSolBVP2.dtau_" + tag, worst_dtau,
        expE * expE * (std::abs(a) + (1.0 + e_alpha) * h_alpha)));
  }

  // Lp bounds for tau' at the endpoint weight alpha = 1 - 1/p.
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    const double alpha = 1.0 - ip;
    const double lhs = norm_Lp(mesh, out.tau_p, p, alpha);
    const double c_a = std::isinf(p) ? 1.0 : std::pow(alpha * p + 1.0, -ip);
    const double c_cal = std::isinf(p) ? 1.0 : std::pow(alpha + ip, -ip);
    const double e_alpha = mesh.integrate(s.pow(alpha) * out.q);
    const double h_w = norm_Lp(mesh, h, 1.0, alpha + ip);
    const double rhs = expE * std::abs(a) * c_a + expE * expE * (e_alpha + c_cal) * h_w;
    const std::string tag = std::isinf(p) ? "pinf" : (p == 1.0 ? "p1" : "p2");
    certs.push_back(make_certificate("EstSolBVP3." + tag, lhs, rhs));
  }

  return out;
}

TensionSolve solve_bvp_oracle(const Mesh& mesh, const ScalarField& q_in, const ScalarField& h,
                              double a) {
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  ScalarField q = clip_nonneg(mesh, q_in);

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(n);
  trip.emplace_back(0, 0, 1.0);
  rhs[0] = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    auto w = fd_weights(s[i], {s[i - 1], s[i], s[i + 1]}, 2);
    trip.emplace_back(i, i - 1, -w[0]);
    trip.emplace_back(i, i, -w[1] + q[i]);
    trip.emplace_back(i, i + 1, -w[2]);
    rhs[i] = h[i];
  }
  {
    auto w = fd_weights(s[n - 1], {s[n - 3], s[n - 2], s[n - 1]}, 1);
    trip.emplace_back(n - 1, n - 3, w[0]);
    trip.emplace_back(n - 1, n - 2, w[1]);
    trip.emplace_back(n - 1, n - 1, w[2]);
    rhs[n - 1] = a;
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_bvp_oracle: singular finite-difference system");
  Eigen::VectorXd tau = lu.solve(rhs);

  TensionSolve out;
  out.q = std::move(q);
  out.h = h;
  out.a = a;
  out.tau = tau.array();
  out.tau_p = mesh.derivative(out.tau, 1);
  out.sc1_lower = kNaN;
  out.min_tau_over_s = ratio_minmax(mesh, out.tau, true);
  return out;
}

TensionSolve tension_from_state(const Mesh& mesh, const VecField& x, const VecField& xdot,
                                const Vec3& g, double drift_warn_tol, bool with_certificates) {
  VecField xp = mesh.derivative(x, 1);
  VecField xpp = mesh.derivative(x, 2);
  VecField vp = mesh.derivative(xdot, 1);

  ScalarField q = xpp.square().rowwise().sum();
  ScalarField h = vp.square().rowwise().sum();
  const int n = mesh.num_nodes();
  const double a = -(g.x() * xp(n - 1, 0) + g.y() * xp(n - 1, 1) + g.z() * xp(n - 1, 2));

  TensionSolve out = solve_bvp(mesh, q, h, a, with_certificates);
  if (with_certificates) {
    const double drift = (xp.square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();
    out.certificates.push_back(make_certificate("ConstraintDrift", drift, drift_warn_tol));
  }
  return out;
}

Certificate dtau_dt_certificate(const Mesh& mesh, const FundamentalPair& before,
                                const FundamentalPair& after, double dt,
                                const VecField& x, const VecField& xdot) {
  if (dt <= 0.0) throw std::invalid_argument("dtau_dt_certificate: need dt > 0");
  const ScalarField& s = mesh.nodes();
  ScalarField dphi = (after.phi - before.phi) / dt;
  ScalarField dphi_p = (after.phi_p - before.phi_p) / dt;

  VecField xpp = mesh.derivative(x, 2);
  VecField vpp = mesh.derivative(xdot, 2);
  const double nx = std::sqrt(mesh.integrate(s * xpp.square().rowwise().sum()));
  const double nv = std::sqrt(mesh.integrate(s * vpp.square().rowwise().sum()));
  // Gronwall bound with the factor 2 carried from d/dt |x''|^2 = 2 xdot''.x''.
  const double rhs = 2.0 * nv * nx * std::exp(2.0 * nx * nx);

  double lhs = dphi_p.abs().maxCoeff();
  for (int i = 1; i < mesh.num_nodes(); ++i) lhs = std::max(lhs, std::abs(dphi[i]) / s[i]);
  return make_certificate("EstDtPhi", lhs, rhs);
}

}  // namespace hangsim
