#pragma once

#include <vector>

#include "bsq/spectral.hpp"

namespace bsq {

// Explicit solution of the 3x3 RH problem with jump across the line
// e^{i pi/6} R (oriented from e^{-5 i pi/6} infinity to e^{i pi/6} infinity).
// Only entries (1,2) and (3,2) differ from the identity.
struct ErrorFunctionModel {
  double y_tilde = 0.0;
  cplx s;
  cplx w;
  Mat3 value = Mat3::Identity();
};

enum class LineSide { automatic, plus, minus };

// side selects the boundary value for w on the line; automatic picks by arg w
ErrorFunctionModel eval_mW(double y_tilde, cplx s, cplx w, LineSide side = LineSide::automatic);

// I + s e^{3 i (1 + y) w^2} (E12 - E32)
Mat3 jump_vW(double y_tilde, cplx s, cplx w);

// max entry of |m_+ - m_- v| at w on the line
double jump_residual(double y_tilde, cplx s, cplx w);

// m^W(w) - Sigma m^W(-w) Sigma, max entry
double symmetry_residual(double y_tilde, cplx s, cplx w);

// coefficient c_j with m_{2j+1} = c_j (E12 - E32)
cplx mW_coefficient(double y_tilde, cplx s, int j);

// (1,2) entry coefficients of w (m - I) = c0 + c1 / w^2 + c2 / w^4 fitted
// from samples on the ray arg w = phi at the given radii (three radii)
std::vector<cplx> mW_richardson(double y_tilde, cplx s, double phi, const std::vector<double>& radii);

// max over nonconstant entries of |d/dx - (1/i) d/dy| by centered differences
double cauchy_riemann_residual(double y_tilde, cplx s, cplx w, double h = 1e-5);

}  // namespace bsq
