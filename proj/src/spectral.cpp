#include "bsq/spectral.hpp"

#include <cmath>

namespace bsq {

namespace {

cplx wpow(int j) {
  switch (((j % 3) + 3) % 3) {
    case 0: return 1.0;
    case 1: return omega;
    default: return omega2;
  }
}

void check_nonzero(cplx k) {
  if (k == 0.0) throw Error(ErrorCode::domain, "k = 0 is a pole of l_j and z_j");
}

}  // namespace

cplx kappa(int j) { return std::polar(1.0, pi * (j - 1) / 3.0); }

cplx l_of(int j, cplx k) {
  cplx a = wpow(j) * k;
  return I * (a + 1.0 / a) / (2.0 * sqrt3);
}

cplx z_of(int j, cplx k) {
  cplx a = wpow(j) * k;
  cplx a2 = a * a;
  return I * (a2 + 1.0 / a2) / (4.0 * sqrt3);
}

cplx dl_of(int j, cplx k) {
  cplx w = wpow(j);
  return I * (w - 1.0 / (w * k * k)) / (2.0 * sqrt3);
}

cplx dz_of(int j, cplx k) {
  cplx w2 = wpow(2 * j);
  return I * (2.0 * w2 * k - 2.0 / (w2 * k * k * k)) / (4.0 * sqrt3);
}

cplx d2l_of(int j, cplx k) {
  cplx w = wpow(j);
  return I * (2.0 / (w * k * k * k)) / (2.0 * sqrt3);
}

cplx d2z_of(int j, cplx k) {
  cplx w2 = wpow(2 * j);
  cplx k2 = k * k;
  return I * (2.0 * w2 + 6.0 / (w2 * k2 * k2)) / (4.0 * sqrt3);
}

SpectralPoint eval_lz(cplx k) {
  check_nonzero(k);
  SpectralPoint sp;
  sp.k = k;
  for (int j = 1; j <= 3; ++j) {
    sp.l[j - 1] = l_of(j, k);
    sp.z[j - 1] = z_of(j, k);
  }
  return sp;
}

int nearest_kappa(cplx k, double* dist) {
  int best = 1;
  double bd = 1e300;
  for (int j = 1; j <= 6; ++j) {
    double d = std::abs(k - kappa(j));
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  if (dist) *dist = bd;
  return best;
}

double singular_distance(cplx k) {
  double d;
  nearest_kappa(k, &d);
  return std::min(d, std::abs(k));
}

PMatrix eval_P(cplx k) {
  check_nonzero(k);
  auto sp = eval_lz(k);
  PMatrix out;
  for (int j = 0; j < 3; ++j) {
    out.P(0, j) = 1.0;
    out.P(1, j) = sp.l[j];
    out.P(2, j) = sp.l[j] * sp.l[j];
  }
  cplx k3 = k * k * k;
  out.det = I * (omega2 - omega) * (1.0 - k3 * k3) / (8.0 * sqrt3 * k3);
  double d;
  out.nearest_kappa = nearest_kappa(k, &d);
  out.singular = d < eps_sing;
  return out;
}

Mat3 P_inverse(cplx k) {
  double d;
  int j = nearest_kappa(k, &d);
  if (std::abs(k) < eps_sing)
    throw Error(ErrorCode::singular, "k within the exclusion radius of 0");
  if (d < eps_sing)
    throw Error(ErrorCode::singular,
                "P(k) singular: k within " + std::to_string(eps_sing) + " of kappa_" + std::to_string(j));
  auto sp = eval_lz(k);
  // inverse of the Vandermonde matrix in the l_j via Lagrange basis coefficients
  Mat3 inv;
  for (int i = 0; i < 3; ++i) {
    cplx a = sp.l[(i + 1) % 3], b = sp.l[(i + 2) % 3];
    cplx den = (sp.l[i] - a) * (sp.l[i] - b);
    inv(i, 0) = a * b / den;
    inv(i, 1) = -(a + b) / den;
    inv(i, 2) = 1.0 / den;
  }
  return inv;
}

PhaseValue eval_phase(double zeta, cplx k, PhasePair pair) {
  check_nonzero(k);
  int i = 2, j = 1;
  if (pair == PhasePair::p31) { i = 3; j = 1; }
  if (pair == PhasePair::p32) { i = 3; j = 2; }
  PhaseValue pv;
  pv.zeta = zeta;
  pv.pair = pair;
  pv.value = (l_of(i, k) - l_of(j, k)) * zeta + (z_of(i, k) - z_of(j, k));
  pv.dk = (dl_of(i, k) - dl_of(j, k)) * zeta + (dz_of(i, k) - dz_of(j, k));
  pv.dkk = (d2l_of(i, k) - d2l_of(j, k)) * zeta + (d2z_of(i, k) - d2z_of(j, k));
  return pv;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::subsonic: return "subsonic";
    case Regime::midrange: return "midrange";
    case Regime::transition: return "transition";
    case Regime::supersonic: return "supersonic";
  }
  return "?";
}

SaddleConfig saddle_points(double zeta) {
  if (!(zeta >= 0.0)) throw Error(ErrorCode::domain, "saddle points need zeta >= 0");
  SaddleConfig sc;
  sc.zeta = zeta;
  const double tol1 = 1e-12;
  if (std::abs(zeta - 1.0) <= tol1) {
    sc.k1 = omega;
    sc.k2 = omega2;
    sc.k3 = sc.k4 = 1.0;
    sc.regime = Regime::transition;
    return sc;
  }
  double q = std::sqrt(8.0 + zeta * zeta);
  // zeta*q - zeta^2 without cancellation
  double zq_minus_z2 = 8.0 * zeta / (q + zeta);
  double inner12 = 4.0 + zq_minus_z2;                   // 4 - zeta^2 + zeta q
  double inner34 = 16.0 * (zeta * zeta - 1.0) / (zq_minus_z2 + 4.0);  // -4 + zeta^2 + zeta q
  double a = -8.0 / (zeta + q);  // zeta - q
  double b = std::sqrt(2.0) * std::sqrt(inner12);
  sc.k1 = cplx(a, b) / 4.0;
  sc.k2 = cplx(a, -b) / 4.0;
  double c = zeta + q;
  if (inner34 < 0.0) {
    double d = std::sqrt(2.0) * std::sqrt(-inner34);
    sc.k3 = cplx(c, d) / 4.0;
    sc.k4 = cplx(c, -d) / 4.0;
  } else {
    double d = std::sqrt(2.0) * std::sqrt(inner34);
    sc.k3 = (c + d) / 4.0;
    sc.k4 = (c - d) / 4.0;
  }
  if (zeta < 1.0 / sqrt3)
    sc.regime = Regime::subsonic;
  else if (zeta < 1.0)
    sc.regime = Regime::midrange;
  else
    sc.regime = Regime::supersonic;
  return sc;
}

cplx rtilde(cplx k) {
  cplx k2 = k * k;
  cplx den = 1.0 - omega2 * k2;
  if (std::abs(den) < 1e-14) throw Error(ErrorCode::domain, "rtilde has a pole at +-omega^2");
  return (omega2 - k2) / den;
}

}  // namespace bsq
