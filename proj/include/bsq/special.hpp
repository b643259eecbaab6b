#pragma once

#include "bsq/spectral.hpp"

namespace bsq {

// Faddeeva function w(z) = exp(-z^2) erfc(-i z)
cplx faddeeva(cplx z);
// exp(z^2) erfc(z)
cplx erfcx(cplx z);
cplx erf(cplx z);

// arg Gamma(i nu) in (-pi, pi]
double arg_gamma_i(double nu);

double airy_ai(double x);
double airy_ai_prime(double x);

}  // namespace bsq
