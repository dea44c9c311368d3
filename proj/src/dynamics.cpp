#include "hangsim/dynamics.hpp"

#include "hangsim/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hangsim {

namespace {

struct FamilySpec {
  std::string name;
  std::vector<double> args;
};

FamilySpec parse_family(const std::string& text) {
  FamilySpec f;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    f.name = text;
    return f;
  }
  if (text.back() != ')') throw std::invalid_argument("initial: unbalanced '(' in " + text);
  f.name = text.substr(0, open);
  std::string inside = text.substr(open + 1, text.size() - open - 2);
  size_t pos = 0;
  while (pos < inside.size()) {
    size_t next = inside.find(',', pos);
    if (next == std::string::npos) next = inside.size();
    f.args.push_back(std::stod(inside.substr(pos, next - pos)));
    pos = next + 1;
  }
  return f;
}

// Position with the fixed end pinned exactly: x(s) = -int_s^1 tangent.
VecField integrate_tangent(const Mesh& mesh, const VecField& tangent) {
  const int n = mesh.num_nodes();
  VecField x(n, 3);
  for (int c = 0; c < 3; ++c) {
    ScalarField cum = mesh.cumulative(tangent.col(c));
    x.col(c) = cum - cum[n - 1];
  }
  return x;
}

VecField zero_field(const Mesh& mesh) { return VecField::Zero(mesh.num_nodes(), 3); }

}  // namespace

InitialData make_initial(const Mesh& mesh, const std::string& family, const Vec3& g) {
  const FamilySpec f = parse_family(family);
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  InitialData d;

  if (f.name == "stationary") {
    Vec3 dir = (g.norm() > 0.5) ? Vec3(g) : Vec3(1, 0, 0);
    VecField tangent(n, 3);
    for (int c = 0; c < 3; ++c) tangent.col(c) = ScalarField::Constant(n, -dir[c]);
    d.x0 = zero_field(mesh);
    for (int c = 0; c < 3; ++c) d.x0.col(c) = (1.0 - s) * dir[c];
    d.x1 = zero_field(mesh);
    d.x0p = tangent;
    d.x1p = zero_field(mesh);
    return d;
  }

  if (f.name == "rotating") {
    const double omega = f.args.empty() ? 1.0 : f.args[0];
    d.x0 = zero_field(mesh);
    d.x1 = zero_field(mesh);
    d.x0.col(0) = 1.0 - s;
    d.x1.col(1) = omega * (1.0 - s);
    VecField t0 = zero_field(mesh), t1 = zero_field(mesh);
    t0.col(0) = ScalarField::Constant(n, -1.0);
    t1.col(1) = ScalarField::Constant(n, -omega);
    d.x0p = t0;
    d.x1p = t1;
    return d;
  }

  if (f.name == "pendulum-perturbation") {
    if (std::abs(g.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("pendulum-perturbation requires |g| = 1");
    const double amplitude = f.args.empty() ? 1e-3 : f.args[0];
    const int mode = f.args.size() > 1 ? static_cast<int>(f.args[1]) : 1;
    const double k = bessel_j0_zero(mode);
    Vec3 e = (std::abs(g.x()) < 0.9) ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    e = (e - e.dot(g) * g).normalized();

    // Transverse profile y(s) = amplitude J0(k sqrt(s)); the exact-constraint
    // tangent tilts by theta = asin(y').
    VecField tangent(n, 3);
    for (int i = 0; i < n; ++i) {
      const double z = k * std::sqrt(s[i]);
      const double yp = -amplitude * 0.5 * k * k * bessel_j1_over_x(z);
      if (std::abs(yp) > 0.99)
        throw std::invalid_argument("pendulum-perturbation: amplitude too large");
      const double theta = std::asin(yp);
      const double st = std::sin(theta), ct = std::cos(theta);
      for (int c = 0; c < 3; ++c) tangent(i, c) = st * e[c] - ct * g[c];
    }
    d.x0 = integrate_tangent(mesh, tangent);
    d.x1 = zero_field(mesh);
    d.x0p = tangent;
    d.x1p = zero_field(mesh);
    return d;
  }

  throw std::invalid_argument("unknown initial family: " + f.name);
}

void validate_initial(const Mesh& mesh, const InitialData& data, double tol) {
  const int n = mesh.num_nodes();
  if (data.x0.rows() != n || data.x1.rows() != n)
    throw std::invalid_argument("initial data: field/mesh mismatch");
  if (data.x0.row(n - 1).abs().maxCoeff() > 1e-12 ||
      data.x1.row(n - 1).abs().maxCoeff() > 1e-12)
    throw std::invalid_argument("initial data: fixed end must sit at the origin");
  VecField t0 = data.x0p ? *data.x0p : mesh.derivative(data.x0, 1);
  VecField t1 = data.x1p ? *data.x1p : mesh.derivative(data.x1, 1);
  const double unit_err = (t0.square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();
  const double ortho_err = (t0 * t1).rowwise().sum().abs().maxCoeff();
  if (unit_err > tol)
    throw std::invalid_argument("initial data: |x0'| = 1 violated, max error " +
                                std::to_string(unit_err));
  if (ortho_err > tol)
    throw std::invalid_argument("initial data: x0'.x1' = 0 violated, max error " +
                                std::to_string(ortho_err));
}

VecField acceleration(const Mesh& mesh, const VecField& x, const VecField& xdot, const Vec3& g,
                      TensionSolve* tension_out) {
  TensionSolve ts = tension_from_state(mesh, x, xdot, g, 1e-2, tension_out != nullptr);
  VecField xp = mesh.derivative(x, 1);
  VecField xpp = mesh.derivative(x, 2);
  const int n = mesh.num_nodes();
  VecField a(n, 3);
  for (int c = 0; c < 3; ++c) a.col(c) = ts.tau * xpp.col(c) + ts.tau_p * xp.col(c) + g[c];
  a.row(n - 1) = 0.0;
  if (tension_out) *tension_out = std::move(ts);
  return a;
}

namespace {

// P1 Galerkin form of (tau x')' + g: solve M a = K x + g-load with the
// consistent tridiagonal mass matrix, natural boundary at the free end
// (tau(0) = 0) and a pinned fixed end. The operator pair (M, K) is symmetric,
// which keeps the graded free-end closure neutrally stable — the nodal
// high-order form in acceleration() is not, and is reserved for one-shot
// diagnostics — and interval-averaged tension makes nodal accelerations exact
// for states with linear x and cubic tau.
VecField acceleration_cons(const Mesh& mesh, const VecField& x, const VecField& xdot,
                           const Vec3& g) {
  TensionSolve ts = tension_from_state(mesh, x, xdot, g, 1e-2, false);
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();
  const int m = n - 1;  // unknowns 0..n-2; a(n-1) = 0 at the pinned end

  ScalarField tau_mid = mesh.midpoints(ts.tau);
  ScalarField h(m), tau_bar(m);
  for (int i = 0; i < m; ++i) {
    h[i] = s[i + 1] - s[i];
    // Simpson: exact interval average of the cubic interpolant of tau
    tau_bar[i] = (ts.tau[i] + 4.0 * tau_mid[i] + ts.tau[i + 1]) / 6.0;
  }

  // mass matrix rows 0..n-2 (row n-2 loses nothing: a(n-1) = 0)
  ScalarField diag(m), lower(m), upper(m);
  diag[0] = h[0] / 3.0;
  upper[0] = h[0] / 6.0;
  for (int i = 1; i < m; ++i) {
    diag[i] = (h[i - 1] + h[i]) / 3.0;
    lower[i] = h[i - 1] / 6.0;
    upper[i] = i + 1 < m ? h[i] / 6.0 : 0.0;
  }

  VecField a = VecField::Zero(n, 3);
  ScalarField rhs(m), cp(m);
  for (int c = 0; c < 3; ++c) {
    double f_prev = 0.0;
    for (int i = 0; i < m; ++i) {
      const double f = tau_bar[i] * (x(i + 1, c) - x(i, c)) / h[i];
      const double load = i == 0 ? 0.5 * h[0] : 0.5 * (h[i - 1] + h[i]);
      rhs[i] = f - f_prev + g[c] * load;
      f_prev = f;
    }
    // Thomas solve of the SPD tridiagonal system
    cp[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (int i = 1; i < m; ++i) {
      const double w = diag[i] - lower[i] * cp[i - 1];
      cp[i] = upper[i] / w;
      rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / w;
    }
    for (int i = m - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
    a.col(c).head(m) = rhs;
  }
  return a;
}

}  // namespace

double cfl_dt(const Mesh& mesh, const ScalarField& tau, double dt_max) {
  const ScalarField& s = mesh.nodes();
  const double floor = std::max(tau[1], 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < mesh.num_nodes(); ++i) {
    const double t = std::max({tau[i], tau[i + 1], floor});
    if (t > 0.0) best = std::min(best, (s[i + 1] - s[i]) / std::sqrt(t));
  }
  const double dt = 0.5 * best;
  return (std::isfinite(dt) && dt < dt_max) ? dt : dt_max;
}

void step(const Mesh& mesh, VecField& x, VecField& xdot, double dt, const Vec3& g,
          bool renormalize) {
  if (dt == 0.0) return;
  const int n = mesh.num_nodes();
  VecField k1v = acceleration_cons(mesh, x, xdot, g);
  VecField x2 = x + 0.5 * dt * xdot, v2 = xdot + 0.5 * dt * k1v;
  VecField k2v = acceleration_cons(mesh, x2, v2, g);
  VecField x3 = x + 0.5 * dt * v2, v3 = xdot + 0.5 * dt * k2v;
  VecField k3v = acceleration_cons(mesh, x3, v3, g);
  VecField x4 = x + dt * v3, v4 = xdot + dt * k3v;
  VecField k4v = acceleration_cons(mesh, x4, v4, g);

  x += dt / 6.0 * (xdot + 2.0 * v2 + 2.0 * v3 + v4);
  xdot += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  x.row(n - 1) = 0.0;
  xdot.row(n - 1) = 0.0;

  if (renormalize) {
    VecField xp = mesh.derivative(x, 1);
    ScalarField len = xp.square().rowwise().sum().sqrt();
    for (int c = 0; c < 3; ++c) xp.col(c) /= len;
    x = integrate_tangent(mesh, xp);
  }
}

std::pair<VecField, VecField> initial_jets(const Mesh& mesh, const InitialData& data,
                                           const Vec3& g) {
  validate_initial(mesh, data, data.x0p ? 1e-10 : 1e-6);
  const int n = mesh.num_nodes();

  TensionSolve t0;
  VecField x2 = acceleration(mesh, data.x0, data.x1, g, &t0);

  // Tension rate from its own BVP: same potential, data
  // h1 = 2 xdot'.xddot' - 2 (x''.xdot'') tau, a1 = -g.xdot'(1).
  VecField x0pp = mesh.derivative(data.x0, 2);
  VecField x1p = mesh.derivative(data.x1, 1);
  VecField x1pp = mesh.derivative(data.x1, 2);
  VecField x2p = mesh.derivative(x2, 1);
  ScalarField h1 = 2.0 * (x1p * x2p).rowwise().sum() -
                   2.0 * (x0pp * x1pp).rowwise().sum() * t0.tau;
  const double a1 = -(g.x() * x1p(n - 1, 0) + g.y() * x1p(n - 1, 1) + g.z() * x1p(n - 1, 2));
  TensionSolve td = solve_bvp(mesh, t0.q, h1, a1, false);

  VecField x0p = mesh.derivative(data.x0, 1);
  VecField x3(n, 3);
  for (int c = 0; c < 3; ++c)
    x3.col(c) = td.tau * x0pp.col(c) + td.tau_p * x0p.col(c) + t0.tau * x1pp.col(c) +
                t0.tau_p * x1p.col(c);
  x3.row(n - 1) = 0.0;
  return {std::move(x2), std::move(x3)};
}

Trajectory run(const Mesh& mesh, const SimConfig& config, const InitialData& data) {
  if (config.T_end <= 0.0) throw std::invalid_argument("run: T_end must be positive");
  if (config.sample_every < 1) throw std::invalid_argument("run: sample_every must be >= 1");
  const double gn = config.g.norm();
  if (std::abs(gn) > 1e-9 && std::abs(gn - 1.0) > 1e-9)
    throw std::invalid_argument("run: |g| must be 0 or 1");
  validate_initial(mesh, data, data.x0p ? 1e-10 : 1e-6);

  Trajectory out;
  VecField x = data.x0, v = data.x1;
  double t = 0.0;
  TensionSolve ts = tension_from_state(mesh, x, v, config.g);
  out.samples.push_back({t, x, v, ts});

  int lost_countdown = -1;
  long step_i = 0;
  const double t_eps = 1e-12 * std::max(1.0, config.T_end);
  while (t < config.T_end - t_eps) {
    double dt = config.dt > 0.0 ? config.dt : cfl_dt(mesh, ts.tau);
    dt = std::min(dt, config.T_end - t);
    if (out.dt_first == 0.0) out.dt_first = dt;

    step(mesh, x, v, dt, config.g, config.renormalize);
    t += dt;
    ++step_i;

    if (!x.isFinite().all() || !v.isFinite().all()) {
      out.status = "nan_abort";
      break;
    }

    const bool at_end = t >= config.T_end - t_eps;
    if (step_i % config.sample_every == 0 || at_end) {
      ts = tension_from_state(mesh, x, v, config.g);
      out.samples.push_back({t, x, v, ts});
      if (ts.min_tau_over_s < 0.0) {
        if (lost_countdown < 0) lost_countdown = 10;
        if (--lost_countdown == 0) {
          out.status = "stability_lost";
          break;
        }
      } else {
        lost_countdown = -1;
      }
    } else if (config.dt <= 0.0) {
      // auto stepping needs a fresh tension for the next CFL bound
      ts = tension_from_state(mesh, x, v, config.g, 1e-2, false);
    }
  }
  return out;
}

}  // namespace hangsim
