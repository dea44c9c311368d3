#include "hangsim/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace hangsim {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int k) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<std::vector<double>>> d(
      n + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(k + 1, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i <= n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      for (int m = 0; m <= std::min(i, k); ++m) {
        d[i][j][m] = ((x[i] - x0) * d[i - 1][j][m] -
                      (m > 0 ? m * d[i - 1][j][m - 1] : 0.0)) /
                     c3;
      }
    }
    for (int m = 0; m <= std::min(i, k); ++m) {
      d[i][i][m] = (c1 / c2) * ((m > 0 ? m * d[i - 1][i - 1][m - 1] : 0.0) -
                                (x[i - 1] - x0) * d[i - 1][i - 1][m]);
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = d[n][j][k];
  return w;
}

namespace {

// Integral over [a,b] of the Lagrange basis polynomials on the given nodes,
// by Gauss-Legendre (3 points, exact through degree 5).
std::vector<double> lagrange_integrals(double a, double b, const std::vector<double>& x) {
  static const double gx[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
  static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const int n = static_cast<int>(x.size());
  std::vector<double> out(n, 0.0);
  const double half = 0.5 * (b - a), midp = 0.5 * (a + b);
  for (int g = 0; g < 3; ++g) {
    const double t = midp + half * gx[g];
    for (int j = 0; j < n; ++j) {
      double l = 1.0;
      for (int i = 0; i < n; ++i)
        if (i != j) l *= (t - x[i]) / (x[j] - x[i]);
      out[j] += gw[g] * half * l;
    }
  }
  return out;
}

// Lagrange evaluation weights at point t on the given nodes.
std::vector<double> lagrange_eval(double t, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double l = 1.0;
    for (int i = 0; i < n; ++i)
      if (i != j) l *= (t - x[i]) / (x[j] - x[i]);
    out[j] = l;
  }
  return out;
}

}  // namespace

Mesh Mesh::build(int n_intervals, double gamma, int order) {
  if (n_intervals < 16) throw std::invalid_argument("mesh: N must be at least 16");
  if (!std::isfinite(gamma) || gamma < 1.0)
    throw std::invalid_argument("mesh: grading exponent must be finite and >= 1");
  if (order != 2 && order != 4) throw std::invalid_argument("mesh: order must be 2 or 4");
  Mesh m;
  m.nodes_.resize(n_intervals + 1);
  for (int i = 0; i <= n_intervals; ++i)
    m.nodes_[i] = std::pow(static_cast<double>(i) / n_intervals, gamma);
  m.nodes_[0] = 0.0;
  m.nodes_[n_intervals] = 1.0;
  m.gamma_ = gamma;
  m.assemble(order);
  return m;
}

Mesh Mesh::from_nodes(std::vector<double> nodes, int order) {
  if (static_cast<int>(nodes.size()) < 17)
    throw std::invalid_argument("mesh: need at least 17 nodes");
  if (order != 2 && order != 4) throw std::invalid_argument("mesh: order must be 2 or 4");
  for (size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("mesh: nodes must be strictly increasing");
  if (nodes.front() != 0.0 || nodes.back() != 1.0)
    throw std::invalid_argument("mesh: nodes must span [0,1] exactly");
  Mesh m;
  m.nodes_ = Eigen::Map<Eigen::ArrayXd>(nodes.data(), nodes.size());
  m.gamma_ = 0.0;  // unknown grading
  m.assemble(order);
  return m;
}

void Mesh::assemble(int order) {
  order_ = order;
  const int n = num_nodes();
  const int ni = n - 1;

  min_spacing_ = 1.0;
  for (int i = 1; i < n; ++i) min_spacing_ = std::min(min_spacing_, nodes_[i] - nodes_[i - 1]);

  // Per-interval quadrature: linear (trapezoid) for order 2, cubic for order 4.
  const int qpts = (order == 2) ? 2 : 4;
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < ni; ++i) {
      int lo = std::clamp(i - (qpts - 2) / 2, 0, n - qpts);
      std::vector<double> xs(nodes_.data() + lo, nodes_.data() + lo + qpts);
      auto w = lagrange_integrals(nodes_[i], nodes_[i + 1], xs);
      for (int j = 0; j < qpts; ++j) trip.emplace_back(i, lo + j, w[j]);
    }
    interval_w_.resize(ni, n);
    interval_w_.setFromTriplets(trip.begin(), trip.end());
  }
  weights_ = ScalarField::Zero(n);
  for (int i = 0; i < ni; ++i)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(interval_w_, i); it; ++it)
      weights_[it.col()] += it.value();

  // Derivative operators D1..D4, contiguous stencils of k+order points.
  for (int k = 1; k <= 4; ++k) {
    const int npts = std::min(k + order, n);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) {
      int lo = std::clamp(i - (npts - 1) / 2, 0, n - npts);
      std::vector<double> xs(nodes_.data() + lo, nodes_.data() + lo + npts);
      auto w = fd_weights(nodes_[i], xs, k);
      for (int j = 0; j < npts; ++j) trip.emplace_back(i, lo + j, w[j]);
    }
    deriv_[k - 1].resize(n, n);
    deriv_[k - 1].setFromTriplets(trip.begin(), trip.end());
  }

  // Cubic interpolation to interval midpoints.
  {
    const int npts = std::min(4, n);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < ni; ++i) {
      int lo = std::clamp(i - 1, 0, n - npts);
      std::vector<double> xs(nodes_.data() + lo, nodes_.data() + lo + npts);
      auto w = lagrange_eval(0.5 * (nodes_[i] + nodes_[i + 1]), xs);
      for (int j = 0; j < npts; ++j) trip.emplace_back(i, lo + j, w[j]);
    }
    mid_.resize(ni, n);
    mid_.setFromTriplets(trip.begin(), trip.end());
  }
}

double Mesh::integrate(const ScalarField& f) const {
  if (f.size() != num_nodes()) throw std::invalid_argument("integrate: field/mesh mismatch");
  return (weights_ * f).sum();
}

ScalarField Mesh::cumulative(const ScalarField& f) const {
  if (f.size() != num_nodes()) throw std::invalid_argument("cumulative: field/mesh mismatch");
  Eigen::VectorXd per = interval_w_ * f.matrix();
  ScalarField out(num_nodes());
  out[0] = 0.0;
  for (int i = 0; i < num_intervals(); ++i) out[i + 1] = out[i] + per[i];
  return out;
}

ScalarField Mesh::derivative(const ScalarField& f, int k) const {
  if (k < 1 || k > 4) throw std::invalid_argument("derivative: order k must be in 1..4");
  if (f.size() != num_nodes()) throw std::invalid_argument("derivative: field/mesh mismatch");
  return deriv_[k - 1] * f.matrix();
}

VecField Mesh::derivative(const VecField& f, int k) const {
  if (k < 1 || k > 4) throw std::invalid_argument("derivative: order k must be in 1..4");
  if (f.rows() != num_nodes()) throw std::invalid_argument("derivative: field/mesh mismatch");
  VecField out(f.rows(), 3);
  out.matrix() = deriv_[k - 1] * f.matrix();
  return out;
}

ScalarField Mesh::midpoints(const ScalarField& f) const {
  if (f.size() != num_nodes()) throw std::invalid_argument("midpoints: field/mesh mismatch");
  return mid_ * f.matrix();
}

}  // namespace hangsim
