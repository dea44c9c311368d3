#include "hangsim/verify.hpp"

#include "hangsim/diagnostics.hpp"
#include "hangsim/tension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <thread>

namespace hangsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kLemmaOrder[] = {"EstPhi",     "EstPsi",     "EstDtPhi", "EstSolBVP1",
                             "EstSolBVP2", "EstSolBVP3", "CalIneq",  "EstM",
                             "WEM1",       "Wronskian",  "GreenSym", "IdAtau"};

ScalarField smooth_field(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  std::uniform_int_distribution<int> kd(1, 3);
  const ScalarField& s = mesh.nodes();
  const double c0 = c(rng), c1 = c(rng), c2 = c(rng), c3 = c(rng), c4 = c(rng);
  const int k = kd(rng);
  return c0 + c1 * s + c2 * s.square() + c3 * s.cube() + c4 * (kPi * k * s).sin();
}

// One trial's certificates; names are canonicalized by their prefix.
std::vector<Certificate> run_trial(unsigned long seed, int trial) {
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<unsigned long>(trial));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int N = 100 + 40 * (trial % 3);
  const double gamma = (trial % 2 == 0) ? 1.0 : 2.0;
  Mesh mesh = Mesh::build(N, gamma, 4);
  const ScalarField& s = mesh.nodes();
  const int n = mesh.num_nodes();

  std::vector<Certificate> certs;
  auto take = [&certs](const TensionSolve& ts) {
    for (const Certificate& c : ts.certificates)
      if (c.name != "ConstraintDrift") certs.push_back(c);
  };

  ScalarField q = smooth_field(mesh, rng).square();
  ScalarField h_pos = smooth_field(mesh, rng).square();
  ScalarField h_signed = smooth_field(mesh, rng);
  const double a = -1.0 + 3.0 * unif(rng);

  TensionSolve ts1 = solve_bvp(mesh, q, h_pos, std::abs(a));
  take(ts1);
  TensionSolve ts2 = solve_bvp(mesh, q, h_signed, a);
  take(ts2);

  // Green-kernel symmetry on random point pairs.
  {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double sa = unif(rng), sb = unif(rng);
      worst = std::max(worst, std::abs(greens_function(mesh, ts1.pair, sa, sb) -
                                       greens_function(mesh, ts1.pair, sb, sa)));
    }
    certs.push_back(make_certificate("GreenSym", worst, 1e-10));
  }

  // Time derivative of phi along a one-parameter family of unit tangents.
  {
    std::uniform_int_distribution<int> kd(1, 3);
    const double b1 = 0.4 * unif(rng), b2 = 0.3 * unif(rng), b3 = 0.2 + 0.5 * unif(rng);
    const int k = kd(rng), j = kd(rng);
    ScalarField th0 = b1 * (kPi * k * s).sin() + b2 * s.square();
    ScalarField th0p = b1 * kPi * k * (kPi * k * s).cos() + 2.0 * b2 * s;
    ScalarField th1 = b3 * (kPi * j * s).cos();
    ScalarField th1p = -b3 * kPi * j * (kPi * j * s).sin();

    VecField x(n, 3), xdot(n, 3);
    {
      VecField tangent(n, 3), dtangent(n, 3);
      tangent.col(0) = th0.cos();
      tangent.col(1) = th0.sin();
      tangent.col(2) = 0.0;
      dtangent.col(0) = -th1 * th0.sin();
      dtangent.col(1) = th1 * th0.cos();
      dtangent.col(2) = 0.0;
      for (int c = 0; c < 3; ++c) {
        ScalarField cum = mesh.cumulative(tangent.col(c));
        x.col(c) = cum - cum[n - 1];
        cum = mesh.cumulative(dtangent.col(c));
        xdot.col(c) = cum - cum[n - 1];
      }
    }
    const double delta = 1e-4;
    ScalarField q_m = (th0p - 0.5 * delta * th1p).square();
    ScalarField q_p = (th0p + 0.5 * delta * th1p).square();
    FundamentalPair before = solve_fundamental(mesh, q_m);
    FundamentalPair after = solve_fundamental(mesh, q_p);
    certs.push_back(dtau_dt_certificate(mesh, before, after, delta, x, xdot));
  }

  // Hardy-type and averaging inequalities on random parameters.
  {
    const double ps[3] = {1.0, 2.0, kInf};
    for (int i = 0; i < 3; ++i) {
      const double p = ps[static_cast<int>(3.0 * unif(rng)) % 3];
      const double alpha = 0.1 + 1.9 * unif(rng);
      certs.push_back(cert_calineq(mesh, h_signed, alpha, p));
    }
    for (int i = 0; i < 3; ++i) {
      const double p = ps[static_cast<int>(3.0 * unif(rng)) % 3];
      const double alpha = 2.0 * unif(rng);
      const double beta = 0.95 * alpha * unif(rng);
      certs.push_back(cert_estM(mesh, smooth_field(mesh, rng), alpha, beta, p));
    }
  }

  {
    auto c = cert_wem1(mesh, smooth_field(mesh, rng), trial % 5);
    c.name = "WEM1";
    certs.push_back(c);
  }

  certs.push_back(idatau_certificate(mesh, ts2.tau, ts2.tau_p, smooth_field(mesh, rng)));
  return certs;
}

std::string canonical(const std::string& name) {
  const auto dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

}  // namespace

std::vector<LemmaResult> verify_lemmas(unsigned long seed, int trials, int threads) {
  if (threads <= 0) {
    threads = 1;
    if (const char* env = std::getenv("HANGSIM_THREADS")) {
      threads = std::max(1, std::atoi(env));
    }
  }
  threads = std::min(threads, std::max(1, trials));

  std::vector<std::vector<Certificate>> per_trial(trials);
  auto worker = [&](int first) {
    for (int t = first; t < trials; t += threads) per_trial[t] = run_trial(seed, t);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  std::map<std::string, LemmaResult> agg;
  for (const char* name : kLemmaOrder) agg[name] = {name, true, kInf, 0};
  for (int t = 0; t < trials; ++t) {
    for (const Certificate& c : per_trial[t]) {
      auto it = agg.find(canonical(c.name));
      if (it == agg.end()) continue;
      LemmaResult& r = it->second;
      r.pass = r.pass && c.satisfied;
      r.worst_slack = std::min(r.worst_slack, c.slack);
      ++r.checks;
    }
  }

  std::vector<LemmaResult> out;
  for (const char* name : kLemmaOrder) out.push_back(agg[name]);
  return out;
}

}  // namespace hangsim
