#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hangsim/bessel.hpp"
#include "hangsim/config.hpp"
#include "hangsim/dynamics.hpp"

#include <cmath>

using namespace hangsim;

TEST_CASE("config parsing") {
  SimConfig c = parse_config("N=100\ngamma=1.5\norder=4\ng=0,0,-1\ndt=auto\n"
                             "T_end=2.5\nc0=0.25\nrenormalize=true\nsample_every=5\n"
                             "initial=rotating(2.0)\n# comment\n");
  CHECK(c.N == 100);
  CHECK(c.gamma == 1.5);
  CHECK(c.order == 4);
  CHECK(c.g.z() == -1.0);
  CHECK(c.dt == -1.0);
  CHECK(c.T_end == 2.5);
  CHECK(c.c0 == 0.25);
  CHECK(c.renormalize);
  CHECK(c.sample_every == 5);
  CHECK(c.initial == "rotating(2.0)");

  CHECK(parse_config("dt=0.001").dt == 0.001);
  CHECK(parse_config("g=0,0,0").g.norm() == 0.0);
}

TEST_CASE("config rejects bad input with line numbers") {
  auto message_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("g=0,0,-2").find("line 1") != std::string::npos);
  CHECK(message_of("N=100\nwhatever=3").find("line 2") != std::string::npos);
  CHECK(message_of("N=100\nwhatever=3").find("unknown key") != std::string::npos);
  CHECK(message_of("dt=-0.5").find("dt") != std::string::npos);
  CHECK(message_of("N=banana").find("not a number") != std::string::npos);
  CHECK(message_of("renormalize=maybe") != "");
  CHECK(message_of("order=3") != "");
  CHECK_NOTHROW(parse_config("g=0,0,-1"));
}

TEST_CASE("builtin families satisfy the constraints") {
  Mesh m = Mesh::build(200, 2.0, 2);
  Vec3 g(0, 0, -1);
  for (const char* fam : {"stationary", "rotating", "rotating(0.7)",
                          "pendulum-perturbation(0.001,1)"}) {
    InitialData d = make_initial(m, fam, g);
    CHECK_NOTHROW(validate_initial(m, d, 1e-10));
  }
  CHECK_THROWS(make_initial(m, "unknown-family", g));
  CHECK_THROWS(make_initial(m, "pendulum-perturbation(0.5,1)", Vec3(0, 0, 0)));
}

TEST_CASE("acceleration closed forms") {
  Mesh m = Mesh::build(200, 2.0, 2);
  ScalarField s = m.nodes();
  const int n = m.num_nodes();
  Vec3 g(0, 0, -1);

  InitialData stat = make_initial(m, "stationary", g);
  VecField a = acceleration(m, stat.x0, stat.x1, g);
  CHECK(a.abs().maxCoeff() < 1e-6);

  InitialData rot = make_initial(m, "rotating", Vec3(0, 0, 0));
  VecField ar = acceleration(m, rot.x0, rot.x1, Vec3(0, 0, 0));
  CHECK((ar.col(0) + (1.0 - s)).abs().maxCoeff() < 1e-6);
  CHECK(ar.col(1).abs().maxCoeff() < 1e-10);

  // zero gravity and zero velocity: tau = 0, no force
  VecField zero_v = VecField::Zero(n, 3);
  VecField a0 = acceleration(m, rot.x0, zero_v, Vec3(0, 0, 0));
  CHECK(a0.abs().maxCoeff() < 1e-12);
}

TEST_CASE("cfl bound") {
  Mesh m = Mesh::build(100, 1.0, 2);
  ScalarField tau = m.nodes();
  CHECK(cfl_dt(m, tau) == doctest::Approx(5e-3).epsilon(1e-10));

  Mesh m2 = Mesh::build(200, 1.0, 2);
  CHECK(cfl_dt(m2, ScalarField(m2.nodes())) == doctest::Approx(2.5e-3).epsilon(1e-10));

  CHECK(cfl_dt(m, ScalarField::Zero(m.num_nodes())) == kDtMax);
}

TEST_CASE("step basics") {
  Mesh m = Mesh::build(100, 2.0, 2);
  Vec3 g(0, 0, -1);
  InitialData d = make_initial(m, "stationary", g);
  VecField x = d.x0, v = d.x1;
  step(m, x, v, 0.0, g);
  CHECK((x - d.x0).abs().maxCoeff() == 0.0);

  for (int i = 0; i < 100; ++i) step(m, x, v, 2e-3, g);
  CHECK((x - d.x0).abs().maxCoeff() < 1e-6);
}

TEST_CASE("initial jets for the rotating string") {
  Mesh m = Mesh::build(400, 2.0, 2);
  ScalarField s = m.nodes();
  InitialData d = make_initial(m, "rotating", Vec3(0, 0, 0));
  auto [x2, x3] = initial_jets(m, d, Vec3(0, 0, 0));
  CHECK((x2.col(0) + (1.0 - s)).abs().maxCoeff() < 1e-6);
  CHECK(x2.col(1).abs().maxCoeff() < 1e-8);
  CHECK((x3.col(1) + (1.0 - s)).abs().maxCoeff() < 1e-5);
  CHECK(x3.col(0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("initial jets vanish at equilibrium") {
  Mesh m = Mesh::build(100, 2.0, 2);
  Vec3 g(0, 0, -1);
  InitialData d = make_initial(m, "stationary", g);
  auto [x2, x3] = initial_jets(m, d, g);
  CHECK(x2.abs().maxCoeff() < 1e-10);
  CHECK(x3.abs().maxCoeff() < 1e-10);
}

TEST_CASE("special case run stays static with zero tension") {
  Mesh m = Mesh::build(64, 2.0, 2);
  SimConfig cfg;
  cfg.N = 64;
  cfg.g = Vec3(0, 0, 0);
  cfg.T_end = 0.5;
  cfg.initial = "rotating(0)";  // x1 = 0
  InitialData d = make_initial(m, cfg.initial, cfg.g);
  Trajectory tr = run(m, cfg, d);
  CHECK(tr.status == "completed");
  for (const auto& smp : tr.samples) {
    CHECK(smp.tension.tau.abs().maxCoeff() < 1e-10);
    CHECK((smp.x - d.x0).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("run validates configuration") {
  Mesh m = Mesh::build(64, 2.0, 2);
  SimConfig cfg;
  cfg.g = Vec3(0, 0, -0.5);
  InitialData d = make_initial(m, "stationary", Vec3(0, 0, -1));
  CHECK_THROWS(run(m, cfg, d));
  cfg.g = Vec3(0, 0, -1);
  cfg.T_end = -1.0;
  CHECK_THROWS(run(m, cfg, d));
}

TEST_CASE("bessel oracle") {
  CHECK(bessel_j0_zero(1) == doctest::Approx(2.4048255576957728).epsilon(1e-12));
  CHECK(bessel_j0_zero(2) == doctest::Approx(5.5200781102863106).epsilon(1e-12));
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j1(0.0) == 0.0);
  // Wronskian-style identity J0' = -J1 via finite difference
  const double x = 1.3, h = 1e-6;
  CHECK((bessel_j0(x + h) - bessel_j0(x - h)) / (2 * h) ==
        doctest::Approx(-bessel_j1(x)).epsilon(1e-8));
}
