#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <vector>

namespace hangsim {

using ScalarField = Eigen::ArrayXd;
// One R^3 sample per node, stored row-wise.
using VecField = Eigen::Array<double, Eigen::Dynamic, 3>;
using Vec3 = Eigen::Vector3d;

// Discretization of the arc-length interval [0,1].
//
// Nodes may be graded toward the degenerate free end s=0 via s_i = (i/N)^gamma.
// Quadrature weights and the derivative stencils are assembled once at
// construction; the mesh is immutable afterwards and safe to share.
class Mesh {
public:
  // N >= 16, gamma >= 1, order in {2,4}.
  static Mesh build(int n_intervals, double gamma, int order);
  // Mesh over explicitly given nodes (e.g. read back from a CSV).
  static Mesh from_nodes(std::vector<double> nodes, int order);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_intervals() const { return num_nodes() - 1; }
  const ScalarField& nodes() const { return nodes_; }
  const ScalarField& weights() const { return weights_; }
  double grading() const { return gamma_; }
  int order() const { return order_; }

  double integrate(const ScalarField& f) const;
  // cumulative(f)[i] = integral of f over [0, s_i].
  ScalarField cumulative(const ScalarField& f) const;

  // Nodal k-th derivative, k in 1..4.  One-sided stencils at the ends.
  ScalarField derivative(const ScalarField& f, int k) const;
  VecField derivative(const VecField& f, int k) const;

  // f interpolated at interval midpoints (cubic, used by the IVP integrator).
  ScalarField midpoints(const ScalarField& f) const;

  double min_spacing() const { return min_spacing_; }
  bool same_as(const Mesh& other) const { return this == &other; }

private:
  Mesh() = default;
  void assemble(int order);

  ScalarField nodes_;
  ScalarField weights_;
  // interval_w_.row(i) holds the node weights of the rule for
  // the integral over [s_i, s_{i+1}].
  Eigen::SparseMatrix<double, Eigen::RowMajor> interval_w_;
  std::array<Eigen::SparseMatrix<double, Eigen::RowMajor>, 4> deriv_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> mid_;
  double gamma_ = 1.0;
  int order_ = 2;
  double min_spacing_ = 0.0;
};

// Finite-difference weights on arbitrary nodes (Fornberg's recursion):
// weights w such that sum_j w_j f(x_j) approximates f^(k)(x0).
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int k);

}  // namespace hangsim
