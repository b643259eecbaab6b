#include "bsq/special.hpp"

#include <array>
#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_airy.h>
#include <gsl/gsl_sf_gamma.h>

namespace bsq {

namespace {

// Weideman's rational expansion in (L + iz)/(L - iz), upper half plane
constexpr int kTerms = 40;

struct Weideman {
  double L;
  std::array<double, kTerms> a;  // highest power first

  Weideman() {
    const int M = 2 * kTerms, M2 = 2 * M;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    // samples of exp(-t^2)(L^2 + t^2) at t = L tan(theta/2), fftshifted
    std::vector<double> fs(M2, 0.0);
    for (int k = -M + 1; k < M; ++k) {
      double t = L * std::tan(0.5 * k * pi / M);
      fs[(k + M2) % M2] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= kTerms; ++n) {
      double acc = 0.0;
      for (int m = 0; m < M2; ++m) acc += fs[m] * std::cos(2.0 * pi * n * m / M2);
      a[kTerms - n] = acc / M2;
    }
  }

  cplx eval(cplx z) const {
    cplx d = L - I * z;
    cplx Z = (L + I * z) / d;
    cplx p = 0.0;
    for (double c : a) p = p * Z + c;
    return 2.0 * p / (d * d) + 1.0 / (std::sqrt(pi) * d);
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

// Laplace continued fraction, accurate for large |z| with Im z >= 0
cplx faddeeva_cf(cplx z) {
  cplx r = 0.0;
  for (int k = 60; k >= 1; --k) r = (0.5 * k) / (z - r);
  return I / std::sqrt(pi) / (z - r);
}

cplx faddeeva_upper(cplx z) { return std::abs(z) < 8.0 ? weideman().eval(z) : faddeeva_cf(z); }

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx erfcx(cplx z) { return faddeeva(I * z); }

cplx erf(cplx z) {
  if (z.real() < 0.0) return -erf(-z);
  if (std::abs(z) < 0.5) {
    // Maclaurin series, avoids cancellation in 1 - exp(-z^2) w
    cplx z2 = z * z, term = z, sum = z;
    for (int n = 1; n < 40; ++n) {
      term *= -z2 / double(n);
      cplx add = term / double(2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return 2.0 / std::sqrt(pi) * sum;
  }
  return 1.0 - std::exp(-z * z) * faddeeva(I * z);
}

double arg_gamma_i(double nu) {
  gsl_sf_result lnr, arg;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  int st = gsl_sf_lngamma_complex_e(0.0, nu, &lnr, &arg);
  gsl_set_error_handler(old);
  if (st != GSL_SUCCESS) throw Error(ErrorCode::domain, "Gamma(i nu) undefined at nu = " + std::to_string(nu));
  return std::remainder(arg.val, 2.0 * pi);
}

double airy_ai(double x) { return gsl_sf_airy_Ai(x, GSL_PREC_DOUBLE); }
double airy_ai_prime(double x) { return gsl_sf_airy_Ai_deriv(x, GSL_PREC_DOUBLE); }

}  // namespace bsq
