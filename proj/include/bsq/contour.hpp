#pragma once

#include <functional>

#include "bsq/spectral.hpp"

namespace bsq {

struct QuadOptions {
  double epsabs = 1e-13;
  double epsrel = 1e-11;
  int limit = 400;
  double dist_min = 1e-9;  // closest allowed approach of k to an open arc
};

// adaptive quadrature of a complex integrand over [a, b] (b < a allowed)
cplx integrate(const std::function<cplx(double)>& fn, double a, double b, const QuadOptions& opt = {});
double integrate_real(const std::function<double(double)>& fn, double a, double b, const QuadOptions& opt = {});

// Branches of ln(k - s) for s = e^{i ts} and k = e^{i phi} on the unit circle.
//  up:   cut leaves s toward +i infinity; arg of the positive direction is 2 pi
//  down: cut leaves s toward -infinity;   arg of the positive direction is 0
enum class LogBranch { up, down };
const char* branch_name(LogBranch b);
cplx branch_log(double phi, double ts, LogBranch b);

// A path along the unit circle from angle a to angle b (clockwise if b < a)
// carrying a real density g(theta) with derivative dg.
struct Arc {
  double a = 0.0, b = 0.0;
  std::function<double(double)> g, dg;
};

// (1/2 pi i) int g(s)/(s - k) ds
cplx cauchy_log(const Arc& arc, cplx k, const QuadOptions& opt = {});
// (1/2 pi i) int ln_s(k - s) dg(s), k = e^{i phi}
cplx stieltjes(const Arc& arc, double phi, LogBranch br, const QuadOptions& opt = {});
// Principal value of the same integral when the density has a logarithmic
// zero at the end point b: arc.g, arc.dg hold the regular part
// g(theta) - 2 ln|2 sin((theta - b)/2)|, and the divergent boundary term
// ln_{s(b)}(k - s(b)) g(b - eps) is removed.
cplx stieltjes_pv(const Arc& arc, double phi, LogBranch br, const QuadOptions& opt = {});

// true when e^{i phi} lies on the closed arc
bool on_arc(const Arc& arc, double phi, double tol = 0.0);

}  // namespace bsq
