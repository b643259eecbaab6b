#include "bsq/error_model.hpp"

#include <cmath>

#include "bsq/special.hpp"

namespace bsq {

namespace {

// angle of w measured in (-5pi/6, 7pi/6]
double arg_shifted(cplx w) {
  double a = std::arg(w);
  if (a <= -5.0 * pi / 6.0) a += 2.0 * pi;
  return a;
}

cplx entry12(double yt, cplx s, cplx w, bool plus) {
  cplx z = std::polar(1.0, pi / 4.0) * w * sqrt3 * std::sqrt(1.0 + yt);
  // e^{z^2}(erf z - 1) = -w(i z),  e^{z^2}(erf z + 1) = w(-i z)
  if (plus) return 0.5 * s * faddeeva(-I * z);
  return -0.5 * s * faddeeva(I * z);
}

Mat3 assemble(cplx e) {
  Mat3 m = Mat3::Identity();
  m(0, 1) = e;
  m(2, 1) = -e;
  return m;
}

}  // namespace

ErrorFunctionModel eval_mW(double y_tilde, cplx s, cplx w, LineSide side) {
  if (!(y_tilde > -1.0)) throw Error(ErrorCode::domain, "y_tilde must exceed -1");
  bool plus;
  if (side == LineSide::automatic) {
    double a = arg_shifted(w);
    plus = a > pi / 6.0;
  } else {
    plus = side == LineSide::plus;
  }
  ErrorFunctionModel m;
  m.y_tilde = y_tilde;
  m.s = s;
  m.w = w;
  m.value = assemble(entry12(y_tilde, s, w, plus));
  return m;
}

Mat3 jump_vW(double y_tilde, cplx s, cplx w) {
  return assemble(s * std::exp(3.0 * I * (1.0 + y_tilde) * w * w));
}

double jump_residual(double y_tilde, cplx s, cplx w) {
  Mat3 mp = eval_mW(y_tilde, s, w, LineSide::plus).value;
  Mat3 mm = eval_mW(y_tilde, s, w, LineSide::minus).value;
  return (mp - mm * jump_vW(y_tilde, s, w)).cwiseAbs().maxCoeff();
}

double symmetry_residual(double y_tilde, cplx s, cplx w) {
  Mat3 sig = Mat3::Zero();
  sig(0, 2) = sig(2, 0) = sig(1, 1) = 1.0;
  Mat3 a = eval_mW(y_tilde, s, w).value;
  Mat3 b = sig * eval_mW(y_tilde, s, -w).value * sig;
  return (a - b).cwiseAbs().maxCoeff();
}

cplx mW_coefficient(double y_tilde, cplx s, int j) {
  double prod = 1.0;
  for (int i = 1; i <= j; ++i) prod *= 0.5 - i;
  cplx den = std::polar(1.0, pi / 4.0 * (2 * j + 1)) * std::pow(3.0 * (1.0 + y_tilde), j + 0.5);
  return -s / (2.0 * std::sqrt(pi)) * prod / den;
}

std::vector<cplx> mW_richardson(double y_tilde, cplx s, double phi, const std::vector<double>& radii) {
  if (radii.size() != 3) throw Error(ErrorCode::invalid_argument, "Richardson fit needs three radii");
  Eigen::Matrix3cd A;
  Eigen::Vector3cd b;
  for (int i = 0; i < 3; ++i) {
    cplx w = std::polar(radii[i], phi);
    cplx q = 1.0 / (w * w);
    A(i, 0) = 1.0;
    A(i, 1) = q;
    A(i, 2) = q * q;
    b(i) = w * eval_mW(y_tilde, s, w).value(0, 1);
  }
  Eigen::Vector3cd c = A.fullPivLu().solve(b);
  return {c(0), c(1), c(2)};
}

double cauchy_riemann_residual(double y_tilde, cplx s, cplx w, double h) {
  auto e = [&](cplx p) { return eval_mW(y_tilde, s, p).value(0, 1); };
  cplx dx = (e(w + h) - e(w - h)) / (2.0 * h);
  cplx dy = (e(w + I * h) - e(w - I * h)) / (2.0 * h);
  // the (3,2) entry is the negative of (1,2)
  return std::abs(dx + I * dy) / std::max(1.0, std::abs(dx));
}

}  // namespace bsq
