#pragma once

#include "hangsim/tension.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hangsim {

// Hard cap on the time step when the CFL bound degenerates (tau ~ 0).
inline constexpr double kDtMax = 1e-2;

struct SimConfig {
  int N = 200;
  double gamma = 2.0;
  int order = 2;
  Vec3 g = Vec3::Zero();   // |g| must be 0 or 1
  double dt = -1.0;        // negative = auto (CFL-resolved each step)
  double T_end = 1.0;
  double c0 = 0.0;
  bool renormalize = false;
  int sample_every = 10;
  std::string initial = "stationary";
};

struct InitialData {
  VecField x0, x1;
  // Analytic tangents when the family provides them; enables the tight
  // nodewise constraint check that mesh differentiation cannot reach.
  std::optional<VecField> x0p, x1p;
};

// Builtin families: "stationary", "rotating" / "rotating(omega)",
// "pendulum-perturbation(amplitude,mode)".
InitialData make_initial(const Mesh& mesh, const std::string& family, const Vec3& g);

// Checks x0(1)=x1(1)=0, |x0'|=1 and x0'.x1'=0 nodewise within tol.
// Uses the analytic tangents when present, mesh derivatives otherwise.
void validate_initial(const Mesh& mesh, const InitialData& data, double tol);

// xddot = tau x'' + tau' x' + g with tau from tension_from_state;
// the fixed-end node is pinned to zero acceleration.
VecField acceleration(const Mesh& mesh, const VecField& x, const VecField& xdot, const Vec3& g,
                      TensionSolve* tension_out = nullptr);

// 0.5 * min_i ds_i / sqrt(max(tau_i, tau(s_1))), capped at dt_max.
double cfl_dt(const Mesh& mesh, const ScalarField& tau, double dt_max = kDtMax);

// One classical RK4 update of (x, xdot); the BVP is re-solved per stage.
void step(const Mesh& mesh, VecField& x, VecField& xdot, double dt, const Vec3& g,
          bool renormalize = false);

// [d_t^2 x(0), d_t^3 x(0)] from the equation of motion and the tension-rate BVP.
std::pair<VecField, VecField> initial_jets(const Mesh& mesh, const InitialData& data,
                                           const Vec3& g);

struct Sample {
  double t = 0.0;
  VecField x, xdot;
  TensionSolve tension;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::string status = "completed";  // or stability_lost, nan_abort
  double dt_first = 0.0;
};

Trajectory run(const Mesh& mesh, const SimConfig& config, const InitialData& data);

}  // namespace hangsim
