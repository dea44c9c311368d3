#include "hangsim/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace hangsim {

double default_lambda(const TensionSolve& ts) {
  const int n = static_cast<int>(ts.tau.size());
  return 8.0 * (1.0 + std::abs(ts.tau[n - 1] * ts.tau_p[n - 1]));
}

DriftReport drift_energy(const Mesh& mesh, const VecField& x, const VecField& xdot,
                         const TensionSolve& ts, double lambda, double t) {
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  VecField xp = mesh.derivative(x, 1);
  VecField vp = mesh.derivative(xdot, 1);
  ScalarField h = xp.square().rowwise().sum() - 1.0;
  ScalarField hdot = 2.0 * (xp * vp).rowwise().sum();
  ScalarField hp = mesh.derivative(h, 1);

  DriftReport r;
  r.t = t;
  r.lambda = lambda;
  r.drift_max = (xp.square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();
  r.drift_energy =
      mesh.integrate(lambda * s * h.square() + ts.tau * hdot.square() +
                     ts.tau.square() * hp.square()) +
      2.0 * ts.tau[n - 1] * ts.tau_p[n - 1] * h[n - 1] * h[n - 1];
  return r;
}

StabilityReport stability_margin(const TensionSolve& ts, double c0, double t) {
  StabilityReport r;
  r.t = t;
  r.min_ratio = ts.min_tau_over_s;
  r.sc1_lower = ts.sc1_lower;
  r.satisfied = ts.min_tau_over_s >= c0;
  return r;
}

ScalarField operator_Atau(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                          const ScalarField& u) {
  if (std::abs(tau[0]) > 1e-12) throw std::invalid_argument("operator_Atau: tau(0) must vanish");
  ScalarField up = mesh.derivative(u, 1);
  ScalarField upp = mesh.derivative(u, 2);
  return -(tau * upp + tau_p * up);
}

Certificate idatau_certificate(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                               const ScalarField& u) {
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  ScalarField up = mesh.derivative(u, 1);
  ScalarField upp = mesh.derivative(u, 2);
  ScalarField lhs = -(tau * upp + tau_p * up);
  ScalarField mu = averaging(mesh, tau_p);
  // mu A_2 u + (mu - tau') u'  with  A_2 u = -(s u')' = -(u' + s u'')
  ScalarField rhs = mu * (-(up + s * upp)) + (mu - tau_p) * up;

  double scale = 0.0, worst = 0.0;
  for (int i = 2; i + 2 < n; ++i) {
    scale = std::max(scale, std::abs(lhs[i]));
    worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  }
  return make_certificate("IdAtau", worst / std::max(scale, 1e-12), 1e-6);
}

double atau_ratio(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                  const ScalarField& u) {
  const ScalarField& s = mesh.nodes();
  ScalarField up = mesh.derivative(u, 1);
  ScalarField upp = mesh.derivative(u, 2);
  const double num = norm_L2(mesh, -(tau * upp + tau_p * up));
  const double den = norm_L2(mesh, ScalarField(s * upp)) + norm_L2(mesh, up);
  return num / std::max(den, 1e-300);
}

double kinetic_energy(const Mesh& mesh, const VecField& xdot) {
  return mesh.integrate(xdot.square().rowwise().sum());
}

namespace {

// Weights for d^k/dt^k at sample j from up to three neighboring sample times.
std::vector<std::pair<int, double>> time_weights(const std::vector<Sample>& ss, int j, int k) {
  const int m = static_cast<int>(ss.size());
  if (m < 3) return {};  // too few samples to difference; treat rate as zero
  const int lo = std::clamp(j - 1, 0, m - 3);
  std::vector<double> ts = {ss[lo].t, ss[lo + 1].t, ss[lo + 2].t};
  auto w = fd_weights(ss[j].t, ts, k);
  return {{lo, w[0]}, {lo + 1, w[1]}, {lo + 2, w[2]}};
}

}  // namespace

std::vector<ApeReport> ape_track(const Mesh& mesh, const std::vector<Sample>& samples,
                                 const Vec3& g) {
  const int n = mesh.num_nodes();
  const ScalarField& s = mesh.nodes();
  std::vector<ApeReport> out;
  out.reserve(samples.size());

  for (int j = 0; j < static_cast<int>(samples.size()); ++j) {
    const Sample& smp = samples[j];
    ScalarField taud = ScalarField::Zero(n), taud_p = ScalarField::Zero(n);
    ScalarField taudd = ScalarField::Zero(n), taudd_p = ScalarField::Zero(n);
    for (auto [i, w] : time_weights(samples, j, 1)) {
      taud += w * samples[i].tension.tau;
      taud_p += w * samples[i].tension.tau_p;
    }
    for (auto [i, w] : time_weights(samples, j, 2)) {
      taudd += w * samples[i].tension.tau;
      taudd_p += w * samples[i].tension.tau_p;
    }

    const ScalarField& tau = smp.tension.tau;
    const ScalarField& tau_p = smp.tension.tau_p;
    VecField xp = mesh.derivative(smp.x, 1), xpp = mesh.derivative(smp.x, 2);
    VecField vp = mesh.derivative(smp.xdot, 1), vpp = mesh.derivative(smp.xdot, 2);

    VecField x2(n, 3), x3(n, 3), x4(n, 3);
    for (int c = 0; c < 3; ++c) x2.col(c) = tau * xpp.col(c) + tau_p * xp.col(c) + g[c];
    x2.row(n - 1) = 0.0;
    VecField x2p = mesh.derivative(x2, 1), x2pp = mesh.derivative(x2, 2);
    for (int c = 0; c < 3; ++c)
      x3.col(c) = taud * xpp.col(c) + taud_p * xp.col(c) + tau * vpp.col(c) + tau_p * vp.col(c);
    x3.row(n - 1) = 0.0;
    for (int c = 0; c < 3; ++c)
      x4.col(c) = taudd * xpp.col(c) + taudd_p * xp.col(c) + 2.0 * taud * vpp.col(c) +
                  2.0 * taud_p * vp.col(c) + tau * x2pp.col(c) + tau_p * x2p.col(c);
    x4.row(n - 1) = 0.0;

    std::vector<VecField> jets = {smp.x, smp.xdot, x2, x3, x4};
    ApeReport r;
    r.t = smp.t;
    r.triple4 = triple_bar(mesh, jets, 4);
    r.tau_ratio_min = r.tau_ratio_max = tau[1] / s[1];
    r.dtau_ratio_max = 0.0;
    for (int i = 1; i < n; ++i) {
      const double ratio = tau[i] / s[i];
      r.tau_ratio_min = std::min(r.tau_ratio_min, ratio);
      r.tau_ratio_max = std::max(r.tau_ratio_max, ratio);
      r.dtau_ratio_max = std::max(r.dtau_ratio_max, std::abs(taud[i]) / s[i]);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace hangsim
