#pragma once

#include "hangsim/dynamics.hpp"

#include <string>
#include <vector>

namespace hangsim {

// 17 significant digits, '.' decimal point, locale independent.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

struct MonitorRow {
  double t, drift_max, drift_energy, min_tau_over_s, sc1_lower, kinetic, triplebar4;
};

void write_trajectory_csv(const std::string& path, const Mesh& mesh,
                          const std::vector<Sample>& samples);
void write_monitors_csv(const std::string& path, const std::vector<MonitorRow>& rows);
void write_bvp_csv(const std::string& path, const Mesh& mesh, const TensionSolve& ts);

// Initial-state CSV with columns s,x1,x2,x3,v1,v2,v3; the mesh is rebuilt
// from the s column.
std::pair<Mesh, InitialData> read_initial_csv(const std::string& path, int order);

// BVP data CSV with columns s,q,h.
struct BvpInput {
  Mesh mesh;
  ScalarField q, h;
};
BvpInput read_bvp_csv(const std::string& path, int order);

// FNV-1a over the raw bytes, for input provenance records.
std::string file_hash(const std::string& path);

}  // namespace hangsim
