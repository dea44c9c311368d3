#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hangsim/tension.hpp"

#include <cmath>
#include <random>

using namespace hangsim;

namespace {
ScalarField zeros(const Mesh& m) { return ScalarField::Zero(m.num_nodes()); }
ScalarField ones(const Mesh& m) { return ScalarField::Constant(m.num_nodes(), 1.0); }
}  // namespace

TEST_CASE("fundamental pair for zero potential") {
  Mesh m = Mesh::build(100, 2.0, 2);
  FundamentalPair p = solve_fundamental(m, zeros(m));
  CHECK((p.phi - m.nodes()).abs().maxCoeff() < 1e-12);
  CHECK((p.phi_p - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((p.psi - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(p.psi_p.abs().maxCoeff() < 1e-12);
  CHECK(p.wronskian == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("fundamental pair for unit potential is hyperbolic") {
  Mesh m = Mesh::build(200, 2.0, 2);
  FundamentalPair p = solve_fundamental(m, ones(m));
  const int n = m.num_nodes();
  CHECK(p.phi_p[n - 1] == doctest::Approx(std::cosh(1.0)).epsilon(1e-8));
  CHECK((p.phi - m.nodes().sinh()).abs().maxCoeff() < 1e-8);
  CHECK((p.psi - (1.0 - m.nodes()).cosh()).abs().maxCoeff() < 1e-8);
  CHECK(p.psi[0] == doctest::Approx(std::cosh(1.0)).epsilon(1e-8));
  // explicit bound: phi'(1) <= exp(int s ds) = e^{1/2}
  CHECK(p.phi_p[n - 1] <= std::exp(0.5) + 1e-8);
}

TEST_CASE("greens function") {
  Mesh m = Mesh::build(100, 1.0, 2);
  FundamentalPair p = solve_fundamental(m, zeros(m));
  CHECK(greens_function(m, p, 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(greens_function(m, p, 0.9, 0.2) == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(greens_function(m, p, 0.0, 0.5) == doctest::Approx(0.0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mesh mq = Mesh::build(100, 1.0, 2);
  FundamentalPair pq = solve_fundamental(mq, ScalarField(mq.nodes().square()));
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(greens_function(mq, pq, a, b) ==
          doctest::Approx(greens_function(mq, pq, b, a)).epsilon(1e-10));
  }
}

TEST_CASE("bvp closed forms") {
  Mesh m = Mesh::build(200, 2.0, 2);
  ScalarField s = m.nodes();

  TensionSolve t1 = solve_bvp(m, zeros(m), zeros(m), 1.0);
  CHECK((t1.tau - s).abs().maxCoeff() < 1e-12);
  CHECK((t1.tau_p - 1.0).abs().maxCoeff() < 1e-12);

  TensionSolve t2 = solve_bvp(m, zeros(m), ones(m), 0.0);
  CHECK((t2.tau - (s - 0.5 * s.square())).abs().maxCoeff() < 1e-6);
  CHECK((t2.tau_p - (1.0 - s)).abs().maxCoeff() < 1e-6);

  const double omega = 1.7;
  TensionSolve t3 = solve_bvp(m, zeros(m), ScalarField(omega * omega * ones(m)), 0.0);
  CHECK((t3.tau - omega * omega * (s - 0.5 * s.square())).abs().maxCoeff() < 1e-5);

  CHECK(t2.tau[0] == 0.0);
  CHECK(t2.tau_p[m.num_nodes() - 1] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(t1.tau_p[m.num_nodes() - 1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("interior residual converges at the scheme order") {
  auto residual = [](int n) {
    Mesh m = Mesh::build(n, 1.0, 2);
    ScalarField q = m.nodes().square();
    ScalarField h = (2.0 * m.nodes()).sin();
    TensionSolve ts = solve_bvp(m, q, h, 0.7);
    ScalarField tau_pp = m.derivative(ts.tau, 2);
    ScalarField r = -tau_pp + q * ts.tau - h;
    double worst = 0.0;
    for (int i = 2; i + 2 < m.num_nodes(); ++i) worst = std::max(worst, std::abs(r[i]));
    return worst;
  };
  const double r100 = residual(100), r200 = residual(200);
  CHECK(r200 < 1e-3);
  CHECK(r100 / r200 > 2.5);
}

TEST_CASE("certificates hold on closed-form and random data") {
  Mesh m = Mesh::build(150, 2.0, 2);
  ScalarField q = 0.5 + m.nodes().square();
  ScalarField h = (1.0 + (3.0 * m.nodes()).cos()).square();
  TensionSolve ts = solve_bvp(m, q, h, 0.8);
  CHECK(!ts.certificates.empty());
  for (const auto& c : ts.certificates) {
    INFO(c.name, " lhs=", c.lhs, " rhs=", c.rhs);
    CHECK(c.satisfied);
  }
  // nonnegative data and a >= 0: maximum principle
  CHECK(ts.tau.minCoeff() >= -1e-12);
  CHECK(ts.min_tau_over_s >= ts.sc1_lower - 1e-8);
}

TEST_CASE("greens identity matches the solution formula") {
  Mesh m = Mesh::build(200, 1.0, 2);
  ScalarField q = 1.0 + 0.5 * m.nodes();
  ScalarField h = (2.5 * m.nodes()).sin() + 1.2;
  const double a = 0.4;
  TensionSolve ts = solve_bvp(m, q, h, a);
  const int n = m.num_nodes();
  for (double sv : {0.11, 0.43, 0.87}) {
    ScalarField kern(n);
    for (int i = 0; i < n; ++i) kern[i] = greens_function(m, ts.pair, sv, m.nodes()[i]) * h[i];
    // a G(sv,1) = a phi(sv)/phi'(1) since psi(1)=1
    const double tau_direct = a * greens_function(m, ts.pair, sv, 1.0) + m.integrate(kern);
    int lo = 0;
    while (m.nodes()[lo + 1] < sv) ++lo;
    const double w = (sv - m.nodes()[lo]) / (m.nodes()[lo + 1] - m.nodes()[lo]);
    const double tau_interp = (1.0 - w) * ts.tau[lo] + w * ts.tau[lo + 1];
    // a*phi(sv)/phi'(1) equals a*G(sv,1) since psi(1)=1
    CHECK(tau_direct == doctest::Approx(tau_interp).epsilon(5e-4));
  }
}

TEST_CASE("oracle agreement") {
  Mesh m = Mesh::build(200, 1.0, 2);
  TensionSolve lin = solve_bvp_oracle(m, zeros(m), zeros(m), 1.0);
  CHECK((lin.tau - m.nodes()).abs().maxCoeff() < 1e-10);

  TensionSolve quad = solve_bvp_oracle(m, zeros(m), ones(m), 0.0);
  int mid = 0;
  while (m.nodes()[mid] < 0.5) ++mid;
  CHECK(quad.tau[mid] == doctest::Approx(0.375).epsilon(1e-8));

  Mesh m4 = Mesh::build(200, 1.0, 4);
  ScalarField q1 = ones(m4);
  TensionSolve sh = solve_bvp(m4, q1, zeros(m4), 1.0);
  TensionSolve fd = solve_bvp_oracle(m4, q1, zeros(m4), 1.0);
  CHECK((sh.tau - fd.tau).abs().maxCoeff() < 5e-4);
}

TEST_CASE("oracle error ratio is second order") {
  double err[3];
  int idx = 0;
  for (int n : {100, 200, 400}) {
    Mesh m = Mesh::build(n, 1.0, 4);
    ScalarField q = 1.0 + m.nodes().square();
    ScalarField h = (2.0 * m.nodes()).cos();
    TensionSolve sh = solve_bvp(m, q, h, 0.3);
    TensionSolve fd = solve_bvp_oracle(m, q, h, 0.3);
    err[idx++] = (sh.tau - fd.tau).abs().maxCoeff();
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.3));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("tension from state") {
  Mesh m = Mesh::build(200, 2.0, 2);
  ScalarField s = m.nodes();
  const int n = m.num_nodes();
  Vec3 g(0, 0, -1);

  VecField x = VecField::Zero(n, 3), v = VecField::Zero(n, 3);
  x.col(2) = -(1.0 - s);  // hanging along g
  TensionSolve ts = tension_from_state(m, x, v, g);
  CHECK((ts.tau - s).abs().maxCoeff() < 1e-6);
  CHECK(ts.sc1_lower == doctest::Approx(1.0).epsilon(1e-10));

  // zero gravity, zero velocity: tau vanishes
  TensionSolve t0 = tension_from_state(m, x, v, Vec3(0, 0, 0));
  CHECK(t0.tau.abs().maxCoeff() < 1e-12);

  // rigid rotation snapshot
  VecField xr = VecField::Zero(n, 3), vr = VecField::Zero(n, 3);
  xr.col(0) = 1.0 - s;
  vr.col(1) = 1.0 - s;
  TensionSolve tr = tension_from_state(m, xr, vr, Vec3(0, 0, 0));
  CHECK((tr.tau - (s - 0.5 * s.square())).abs().maxCoeff() < 1e-6);
  CHECK(tr.sc1_lower == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(tr.min_tau_over_s == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("time-derivative certificate on a static state") {
  Mesh m = Mesh::build(100, 2.0, 2);
  ScalarField s = m.nodes();
  const int n = m.num_nodes();
  VecField x = VecField::Zero(n, 3), v = VecField::Zero(n, 3);
  x.col(0) = 1.0 - s;
  FundamentalPair p = solve_fundamental(m, ScalarField::Zero(n));
  Certificate c = dtau_dt_certificate(m, p, p, 1e-3, x, v);
  CHECK(c.lhs == doctest::Approx(0.0));
  CHECK(c.rhs == doctest::Approx(0.0));
  CHECK(c.satisfied);
}

TEST_CASE("input validation") {
  Mesh m = Mesh::build(100, 1.0, 2);
  ScalarField bad = ones(m);
  bad[3] = std::nan("");
  CHECK_THROWS(solve_fundamental(m, bad));
  CHECK_THROWS(solve_bvp(m, zeros(m), bad, 0.0));
  CHECK_THROWS(solve_bvp(m, zeros(m), zeros(m), std::nan("")));
}
