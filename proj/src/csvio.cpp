#include "hangsim/csvio.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hangsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("trailing garbage");
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed number '" + cell + "'");
      }
    }
    if (row.size() != t.header.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Mesh& mesh,
                          const std::vector<Sample>& samples) {
  auto out = open_out(path);
  out << "t,node,s,x1,x2,x3,v1,v2,v3,tau,tau_prime\n";
  for (const Sample& smp : samples) {
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      out << format_double(smp.t) << ',' << i << ',' << format_double(mesh.nodes()[i]);
      for (int c = 0; c < 3; ++c) out << ',' << format_double(smp.x(i, c));
      for (int c = 0; c < 3; ++c) out << ',' << format_double(smp.xdot(i, c));
      out << ',' << format_double(smp.tension.tau[i]) << ','
          << format_double(smp.tension.tau_p[i]) << '\n';
    }
  }
}

void write_monitors_csv(const std::string& path, const std::vector<MonitorRow>& rows) {
  auto out = open_out(path);
  out << "t,drift_max,drift_energy,min_tau_over_s,sc1_lower,kinetic,triplebar4\n";
  for (const MonitorRow& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.drift_max) << ','
        << format_double(r.drift_energy) << ',' << format_double(r.min_tau_over_s) << ','
        << format_double(r.sc1_lower) << ',' << format_double(r.kinetic) << ','
        << format_double(r.triplebar4) << '\n';
  }
}

void write_bvp_csv(const std::string& path, const Mesh& mesh, const TensionSolve& ts) {
  auto out = open_out(path);
  out << "s,tau,tau_prime,phi,psi\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out << format_double(mesh.nodes()[i]) << ',' << format_double(ts.tau[i]) << ','
        << format_double(ts.tau_p[i]) << ',' << format_double(ts.pair.phi[i]) << ','
        << format_double(ts.pair.psi[i]) << '\n';
  }
}

std::pair<Mesh, InitialData> read_initial_csv(const std::string& path, int order) {
  CsvTable t = read_csv(path);
  const char* cols[7] = {"s", "x1", "x2", "x3", "v1", "v2", "v3"};
  int idx[7];
  for (int c = 0; c < 7; ++c) {
    idx[c] = t.column(cols[c]);
    if (idx[c] < 0) throw std::runtime_error(path + ": missing column " + cols[c]);
  }
  const int n = static_cast<int>(t.rows.size());
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = t.rows[i][idx[0]];
  Mesh mesh = Mesh::from_nodes(std::move(nodes), order);
  InitialData d;
  d.x0.resize(n, 3);
  d.x1.resize(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) {
      d.x0(i, c) = t.rows[i][idx[1 + c]];
      d.x1(i, c) = t.rows[i][idx[4 + c]];
    }
  return {std::move(mesh), std::move(d)};
}

BvpInput read_bvp_csv(const std::string& path, int order) {
  CsvTable t = read_csv(path);
  const int is = t.column("s"), iq = t.column("q"), ih = t.column("h");
  if (is < 0 || iq < 0 || ih < 0)
    throw std::runtime_error(path + ": need columns s,q,h");
  const int n = static_cast<int>(t.rows.size());
  std::vector<double> nodes(n);
  ScalarField q(n), h(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = t.rows[i][is];
    q[i] = t.rows[i][iq];
    h[i] = t.rows[i][ih];
  }
  return {Mesh::from_nodes(std::move(nodes), order), std::move(q), std::move(h)};
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hangsim
