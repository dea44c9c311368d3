#pragma once

#include "hangsim/dynamics.hpp"

namespace hangsim {

struct DriftReport {
  double t = 0.0;
  double drift_max = 0.0;    // max_s ||x'| - 1|
  double drift_energy = 0.0; // weighted energy of h = |x'|^2 - 1
  double lambda = 0.0;
};

struct StabilityReport {
  double t = 0.0;
  double min_ratio = 0.0;  // min over interior nodes of tau/s
  double sc1_lower = 0.0;  // explicit lower bound (NaN when hypotheses fail)
  bool satisfied = false;  // min_ratio >= c0
};

struct ApeReport {
  double t = 0.0;
  double triple4 = 0.0;  // |||x(t)|||_4 from jets up to d_t^4
  double tau_ratio_min = 0.0, tau_ratio_max = 0.0;
  double dtau_ratio_max = 0.0;  // max |d_t tau|/s
};

// lambda large enough that the boundary term is dominated.
double default_lambda(const TensionSolve& ts);

DriftReport drift_energy(const Mesh& mesh, const VecField& x, const VecField& xdot,
                         const TensionSolve& ts, double lambda, double t = 0.0);

StabilityReport stability_margin(const TensionSolve& ts, double c0, double t = 0.0);

// A_tau u = -(tau u')' evaluated nodewise.
ScalarField operator_Atau(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                          const ScalarField& u);

// Nodewise identity A_tau u = mu A_2 u + (mu - tau') u' with mu = M(tau'),
// checked on interior nodes, relative to the operator's own scale.
Certificate idatau_certificate(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                               const ScalarField& u);

// ||A_tau u||_L2 / (||s u''||_L2 + ||u'||_L2), the norm-equivalence ratio.
double atau_ratio(const Mesh& mesh, const ScalarField& tau, const ScalarField& tau_p,
                  const ScalarField& u);

double kinetic_energy(const Mesh& mesh, const VecField& xdot);

// Per-sample triple-bar track; time derivatives of tau by sample differences.
std::vector<ApeReport> ape_track(const Mesh& mesh, const std::vector<Sample>& samples,
                                 const Vec3& g);

}  // namespace hangsim
