// Independent reference computations shared by the unit tests and the
// acceptance run.
#pragma once

#include <gsl/gsl_sf_airy.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "bsq/scattering.hpp"

namespace oracle {

using bsq::cplx;
using bsq::InitialData;
using bsq::Mat3;

inline double ai(double y) { return gsl_sf_airy_Ai(y, GSL_PREC_DOUBLE); }
inline double ai_prime(double y) { return gsl_sf_airy_Ai_deriv(y, GSL_PREC_DOUBLE); }

inline double left_tail(double y) {
  double y3 = y * y * y;
  return std::sqrt(-y / 2) * (1 + 1 / (8 * y3) - 73 / (128 * y3 * y3) + 10657 / (1024 * y3 * y3 * y3));
}

// Chebyshev collocation with Newton iteration for u'' = y u + 2u^3 on [-a, a],
// u(a) = Ai(a), u(-a) from the left asymptotic series; returns u(0)
inline double collocation_u0(double a, int n) {
  // Chebyshev points x_j = cos(pi j / n) and the differentiation matrix
  Eigen::VectorXd x(n + 1);
  for (int j = 0; j <= n; ++j) x[j] = std::cos(M_PI * j / n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto c = [&](int j) { return (j == 0 || j == n ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) D(i, j) = c(i) / c(j) / (x[i] - x[j]);
  for (int i = 0; i <= n; ++i) D(i, i) = -(D.row(i).sum());
  Eigen::MatrixXd D2 = D * D / (a * a);
  Eigen::VectorXd y = a * x;
  Eigen::VectorXd u(n + 1);
  for (int j = 0; j <= n; ++j) u[j] = y[j] > 0 ? ai(y[j]) : left_tail(std::min(y[j], -1.0)) * std::min(1.0, -y[j]);
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd F = D2 * u - (y.array() * u.array() + 2 * u.array().cube()).matrix();
    Eigen::MatrixXd J = D2;
    for (int j = 0; j <= n; ++j) J(j, j) -= y[j] + 6 * u[j] * u[j];
    F[0] = u[0] - ai(a);
    F[n] = u[n] - left_tail(-a);
    J.row(0).setZero();
    J.row(n).setZero();
    J(0, 0) = 1;
    J(n, n) = 1;
    Eigen::VectorXd du = J.partialPivLu().solve(F);
    u -= du;
    if (du.cwiseAbs().maxCoeff() < 1e-14) break;
  }
  // barycentric interpolation at x = 0
  double num = 0, den = 0;
  for (int j = 0; j <= n; ++j) {
    if (std::abs(x[j]) < 1e-15) return u[j];
    double w = 1.0 / c(j) / (0.0 - x[j]);
    num += w * u[j];
    den += w;
  }
  return num / den;
}

inline InitialData smooth_bump(double eps, int n) {
  InitialData d;
  double xmax = 9.0;
  for (int i = 0; i < n; ++i) {
    double x = -xmax + 2 * xmax * i / (n - 1);
    d.x.push_back(x);
    d.u0.push_back(eps * std::exp(-x * x));
    d.v0.push_back(eps * (0.5 - x) * std::exp(-x * x));
  }
  return d;
}

// first Born term -int e^{-x(l_i - l_j)} U_ij dx by composite Simpson
inline Mat3 born_term(const InitialData& d, cplx k) {
  auto U = bsq::build_potential(d, k);
  std::array<cplx, 3> l = {bsq::l_of(1, k), bsq::l_of(2, k), bsq::l_of(3, k)};
  Mat3 acc = Mat3::Zero();
  std::size_t n = d.size();
  double h = d.dx();
  for (std::size_t m = 0; m < n; ++m) {
    double w = (m == 0 || m + 1 == n) ? 1.0 : (m % 2 ? 4.0 : 2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc(i, j) += w * std::exp(-d.x[m] * (l[i] - l[j])) * U[m](i, j);
  }
  return -acc * h / 3.0;
}

}  // namespace oracle
