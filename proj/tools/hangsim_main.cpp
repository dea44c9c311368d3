#include "hangsim/config.hpp"
#include "hangsim/csvio.hpp"
#include "hangsim/diagnostics.hpp"
#include "hangsim/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 ok, 1 verification failure, 2 usage error,
// 3 malformed config/data, 4 missing file, 5 numerical failure.
enum ExitCode { kOk = 0, kVerifyFail = 1, kUsage = 2, kBadConfig = 3, kMissingFile = 4,
                kNumerical = 5 };

json certificates_json(const std::vector<hangsim::Certificate>& certs) {
  json arr = json::array();
  for (const auto& c : certs) {
    arr.push_back({{"name", c.name},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"slack", c.slack},
                   {"satisfied", c.satisfied}});
  }
  return arr;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const auto t_start = std::chrono::system_clock::now();
  const auto wall0 = std::chrono::steady_clock::now();

  hangsim::SimConfig cfg = hangsim::parse_config_file(config_path);
  std::filesystem::create_directories(out_dir);

  hangsim::Mesh mesh = [&]() {
    if (cfg.initial.rfind("csv:", 0) == 0) {
      auto [m, d] = hangsim::read_initial_csv(cfg.initial.substr(4), cfg.order);
      return m;
    }
    return hangsim::Mesh::build(cfg.N, cfg.gamma, cfg.order);
  }();
  hangsim::InitialData data;
  std::string provenance;
  if (cfg.initial.rfind("csv:", 0) == 0) {
    const std::string path = cfg.initial.substr(4);
    auto [m, d] = hangsim::read_initial_csv(path, cfg.order);
    data = std::move(d);
    provenance = "csv " + path + " fnv1a:" + hangsim::file_hash(path);
    hangsim::validate_initial(mesh, data, 1e-6);
  } else {
    data = hangsim::make_initial(mesh, cfg.initial, cfg.g);
    provenance = "builtin " + cfg.initial;
  }

  hangsim::Trajectory traj = hangsim::run(mesh, cfg, data);
  hangsim::write_trajectory_csv(out_dir + "/trajectory.csv", mesh, traj.samples);

  auto ape = hangsim::ape_track(mesh, traj.samples, cfg.g);
  std::vector<hangsim::MonitorRow> rows;
  for (size_t i = 0; i < traj.samples.size(); ++i) {
    const hangsim::Sample& smp = traj.samples[i];
    const double lambda = hangsim::default_lambda(smp.tension);
    auto drift = hangsim::drift_energy(mesh, smp.x, smp.xdot, smp.tension, lambda, smp.t);
    rows.push_back({smp.t, drift.drift_max, drift.drift_energy, smp.tension.min_tau_over_s,
                    smp.tension.sc1_lower, hangsim::kinetic_energy(mesh, smp.xdot),
                    ape[i].triple4});
  }
  hangsim::write_monitors_csv(out_dir + "/monitors.csv", rows);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  const auto start_time = std::chrono::system_clock::to_time_t(t_start);
  char timestr[32];
  std::strftime(timestr, sizeof(timestr), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&start_time));

  json manifest = {
      {"version", "1.0.0"},
      {"config",
       {{"N", cfg.N},
        {"gamma", cfg.gamma},
        {"order", cfg.order},
        {"g", {cfg.g.x(), cfg.g.y(), cfg.g.z()}},
        {"dt", cfg.dt > 0 ? json(cfg.dt) : json("auto")},
        {"T_end", cfg.T_end},
        {"c0", cfg.c0},
        {"renormalize", cfg.renormalize},
        {"sample_every", cfg.sample_every},
        {"initial", cfg.initial}}},
      {"mesh",
       {{"nodes", mesh.num_nodes()},
        {"grading", mesh.grading()},
        {"order", mesh.order()},
        {"min_spacing", mesh.min_spacing()}}},
      {"input", provenance},
      {"wall_clock", {{"started", timestr}, {"seconds", seconds}}}};
  json summary = {{"status", traj.status},
                  {"samples", traj.samples.size()},
                  {"dt_first", traj.dt_first},
                  {"manifest", manifest}};
  std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";

  std::cout << "status " << traj.status << ", " << traj.samples.size() << " samples -> "
            << out_dir << "\n";
  return traj.status == "nan_abort" ? kNumerical : kOk;
}

int cmd_bvp_solve(const std::string& in_path, double a, const std::string& out_dir, int order) {
  auto input = hangsim::read_bvp_csv(in_path, order);
  hangsim::TensionSolve ts = hangsim::solve_bvp(input.mesh, input.q, input.h, a);
  std::filesystem::create_directories(out_dir);
  hangsim::write_bvp_csv(out_dir + "/bvp.csv", input.mesh, ts);
  json cert = {{"a", a},
               {"sc1_lower", ts.sc1_lower},
               {"min_tau_over_s", ts.min_tau_over_s},
               {"certificates", certificates_json(ts.certificates)}};
  std::ofstream(out_dir + "/certificates.json") << cert.dump(2) << "\n";
  std::cout << "wrote " << out_dir << "/bvp.csv\n";
  return kOk;
}

int cmd_norms(const std::string& in_path, int m, double eps, int order) {
  hangsim::CsvTable t = hangsim::read_csv(in_path);
  const int is = t.column("s"), iu = t.column("u");
  if (is < 0 || iu < 0) throw std::runtime_error(in_path + ": need columns s,u");
  std::vector<double> nodes(t.rows.size());
  hangsim::ScalarField u(t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    nodes[i] = t.rows[i][is];
    u[i] = t.rows[i][iu];
  }
  hangsim::Mesh mesh = hangsim::Mesh::from_nodes(std::move(nodes), order);
  hangsim::NormReport r = hangsim::norm_report(mesh, u, m, eps);
  json out;
  for (const auto& [k, v] : r.values) out[k] = v;
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_verify(unsigned long seed, int trials) {
  auto results = hangsim::verify_lemmas(seed, trials);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-12s %s  worst_slack=%.6e  checks=%d\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.worst_slack, r.checks);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kOk : kVerifyFail;
}

int cmd_jets(const std::string& data_path, const std::string& g_spec, int order) {
  hangsim::Vec3 g(0, 0, 0);
  if (!g_spec.empty()) {
    double c[3];
    if (std::sscanf(g_spec.c_str(), "%lf,%lf,%lf", &c[0], &c[1], &c[2]) != 3)
      throw std::invalid_argument("jets: --g expects three comma-separated reals");
    g = hangsim::Vec3(c[0], c[1], c[2]);
  }
  auto [mesh, data] = hangsim::read_initial_csv(data_path, order);
  auto [x2, x3] = hangsim::initial_jets(mesh, data, g);
  std::cout << "node,s,ddx1,ddx2,ddx3,dddx1,dddx2,dddx3\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    std::cout << i << ',' << hangsim::format_double(mesh.nodes()[i]);
    for (int c = 0; c < 3; ++c) std::cout << ',' << hangsim::format_double(x2(i, c));
    for (int c = 0; c < 3; ++c) std::cout << ',' << hangsim::format_double(x3(i, c));
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hangsim: inextensible hanging string simulator and estimate checker"};
  app.require_subcommand(1);

  std::string config_path, out_dir, in_path, data_path, g_spec;
  double a = 0.0, eps = 0.25;
  int m = 4, order = 4;
  unsigned long seed = 1;
  int trials = 100;

  auto* sim = app.add_subcommand("simulate", "advance the string and record monitors");
  sim->add_option("--config", config_path, "plain-text key=value config")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* bvp = app.add_subcommand("bvp-solve", "solve one tension BVP from CSV data");
  bvp->add_option("--in", in_path, "CSV with columns s,q,h")->required();
  bvp->add_option("--a", a, "right-end slope datum")->required();
  bvp->add_option("--out", out_dir, "output directory")->required();
  bvp->add_option("--order", order, "stencil order (2 or 4)");

  auto* norms = app.add_subcommand("norms", "weighted-norm report for a scalar field");
  norms->add_option("--in", in_path, "CSV with columns s,u")->required();
  norms->add_option("--m", m, "highest norm index");
  norms->add_option("--eps", eps, "epsilon for the X_eps norms");
  norms->add_option("--order", order, "stencil order (2 or 4)");

  auto* verify = app.add_subcommand("verify-lemmas", "randomized certificate suite");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--trials", trials, "number of randomized trials");

  auto* jets = app.add_subcommand("jets", "initial time-derivative jets from data");
  jets->add_option("--data", data_path, "CSV with columns s,x1,x2,x3,v1,v2,v3")->required();
  jets->add_option("--g", g_spec, "gravity vector, three comma-separated reals");
  jets->add_option("--order", order, "stencil order (2 or 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (bvp->parsed()) return cmd_bvp_solve(in_path, a, out_dir, order);
    if (norms->parsed()) return cmd_norms(in_path, m, eps, order);
    if (verify->parsed()) return cmd_verify(seed, trials);
    if (jets->parsed()) return cmd_jets(data_path, g_spec, order);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("cannot open file") != std::string::npos ? kMissingFile : kNumerical;
  }
  return kUsage;
}
