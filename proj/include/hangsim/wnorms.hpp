#pragma once

#include "hangsim/mesh.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace hangsim {

// Result of one explicit-constant inequality check.
struct Certificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool satisfied = false;
};

// Relative slack tolerance used everywhere an inequality is certified.
inline constexpr double kCertTol = 1e-8;

Certificate make_certificate(std::string name, double lhs, double rhs);

// Weighted Lebesgue norm ||s^alpha u||_Lp (p = inf -> node max).
double norm_Lp(const Mesh& mesh, const ScalarField& u, double p, double alpha = 0.0);
double norm_L2(const Mesh& mesh, const ScalarField& u);
double norm_Linf(const ScalarField& u);

// Weighted Sobolev norms.  derivs[j] must hold the j-th derivative of u
// (derivs[0] = u); the overloads taking just u differentiate on the mesh.
double norm_X_derivs(const Mesh& mesh, std::span<const ScalarField> derivs, int m);
double norm_Y_derivs(const Mesh& mesh, std::span<const ScalarField> derivs, int m);
double norm_X(const Mesh& mesh, const ScalarField& u, int m);
double norm_Y(const Mesh& mesh, const ScalarField& u, int m);
double norm_Xeps(const Mesh& mesh, const ScalarField& u, int k, double eps);

// Component-summed norms for R^3-valued fields.
double norm_X(const Mesh& mesh, const VecField& u, int m);

// Averaging operator (M u)(s) = (1/s) int_0^s u; value u(0) at s=0.
ScalarField averaging(const Mesh& mesh, const ScalarField& u);
VecField averaging(const Mesh& mesh, const VecField& u);

// U_alpha(s) = s^{-(alpha+1)} int_0^s sigma^alpha u(sigma) dsigma,
// with the continuous limit u(0)/(alpha+1) at s=0.  The weighted integrand
// is integrated in closed form against the piecewise-linear interpolant of u,
// so fractional alpha does not degrade accuracy near the degenerate end.
ScalarField weighted_average(const Mesh& mesh, const ScalarField& u, double alpha);

// Derivatives of Mu without differencing: ds^j (Mu) = U_j applied to ds^j u.
std::vector<ScalarField> averaging_derivs(const Mesh& mesh, const ScalarField& u, int max_order);

// Explicit-constant inequality certificates.
// CalIneq: ||s^a H||_Lp <= (a+1/p)^{-1/p} ||s^{a+1/p} h||_L1, H(s) = int_s^1 h.
Certificate cert_calineq(const Mesh& mesh, const ScalarField& h, double alpha, double p);
// EstM: ||s^b U_a||_Lp <= (a-b+1-1/p)^{-1} ||s^b u||_Lp.
Certificate cert_estM(const Mesh& mesh, const ScalarField& u, double alpha, double beta, double p);
// WEM1: ||Mu||_{X^m} <= 2 ||u||_{X^m}.
Certificate cert_wem1(const Mesh& mesh, const ScalarField& u, int m);

std::vector<Certificate> check_inequalities(const Mesh& mesh, const ScalarField& u,
                                            double p, double alpha, double beta);

// Flat map of every norm of one field at one instant.
struct NormReport {
  std::string field;
  double t = 0.0;
  std::map<std::string, double> values;
};

// Populates L2, Linf, X0..X{min(m,4)}, Y0..Y{min(m,3)} and, with eps > 0,
// Xeps1..Xeps3 plus the eps entry itself.
NormReport norm_report(const Mesh& mesh, const ScalarField& u, int m, double eps = 0.25);

// Sum over time-derivative fields: |||u|||_m^2 = sum_j ||jets[j]||_{X^{m-j}}^2.
double triple_bar(const Mesh& mesh, std::span<const ScalarField> jets, int m);
double triple_bar(const Mesh& mesh, std::span<const VecField> jets, int m);

}  // namespace hangsim
