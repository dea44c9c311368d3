#pragma once

#include "hangsim/mesh.hpp"
#include "hangsim/wnorms.hpp"

#include <vector>

namespace hangsim {

// Fundamental solutions of -u'' + q u = 0 with left/right initial data.
struct FundamentalPair {
  ScalarField phi, phi_p;  // phi(0)=0, phi'(0)=1
  ScalarField psi, psi_p;  // psi(1)=1, psi'(1)=0
  double wronskian = 0.0;  // constant, equals -phi'(1)
};

// Output bundle of one solve of  -tau'' + q tau = h,  tau(0)=0,  tau'(1)=a.
struct TensionSolve {
  ScalarField tau, tau_p;
  ScalarField q, h;
  double a = 0.0;
  FundamentalPair pair;
  std::vector<Certificate> certificates;
  // Explicit lower bound for tau/s when the sign hypotheses hold, else NaN.
  double sc1_lower = 0.0;
  double min_tau_over_s = 0.0;
};

// Integrates both fundamental IVPs with classical RK4 on the mesh intervals
// (coefficients interpolated cubically at midpoints).  q is clipped at 0.
FundamentalPair solve_fundamental(const Mesh& mesh, const ScalarField& q);

// G(s,r) = phi(min)psi(max)/phi'(1); phi and psi interpolated linearly.
double greens_function(const Mesh& mesh, const FundamentalPair& pair, double s, double r);

// Solution via the Green's-function representation; tau' from its own
// closed-form expression rather than by differencing tau.
TensionSolve solve_bvp(const Mesh& mesh, const ScalarField& q, const ScalarField& h, double a,
                       bool with_certificates = true);

// Independent second-order finite-difference discretization of the same BVP.
TensionSolve solve_bvp_oracle(const Mesh& mesh, const ScalarField& q, const ScalarField& h,
                              double a);

// Tension of a string state: q = |x''|^2, h = |xdot'|^2, a = -g.x'(1).
// Warns (via the returned certificate list) when |x'| drifts beyond tol.
TensionSolve tension_from_state(const Mesh& mesh, const VecField& x, const VecField& xdot,
                                const Vec3& g, double drift_warn_tol = 1e-2,
                                bool with_certificates = true);

// Bound on the time derivative of phi, checked against a centered difference
// of phi between two nearby states.
Certificate dtau_dt_certificate(const Mesh& mesh, const FundamentalPair& before,
                                const FundamentalPair& after, double dt,
                                const VecField& x, const VecField& xdot);

}  // namespace hangsim
