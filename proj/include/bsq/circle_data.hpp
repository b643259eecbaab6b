#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bsq/scattering.hpp"

namespace bsq {

// Reflection data as smooth functions of the angle on the unit circle.
// r2 is rebuilt from r1 through r2 = rtilde * conj(r1), so only r1 is
// interpolated; r1 is smooth across the excluded arcs.
class CircleData {
 public:
  // periodic cubic splines of r1 through the non-excluded table samples
  explicit CircleData(const ReflectionTable& t);
  // closed-form r1 and d r1 / d theta
  CircleData(std::function<cplx(double)> r1, std::function<cplx(double)> dr1);
  ~CircleData();
  CircleData(CircleData&&) noexcept;
  CircleData& operator=(CircleData&&) noexcept;

  cplx r1(double th) const;
  cplx dr1(double th) const;
  cplx r2(double th) const;

  double one_plus_r1r2(double th) const;
  double d_one_plus_r1r2(double th) const;
  // throws Error(domain) when the argument is not positive
  double log_one_plus_r1r2(double th) const;
  double dlog_one_plus_r1r2(double th) const;

  double f(double th) const;
  double df(double th) const;
  // ln f, -inf at the zeros of f
  double log_f(double th) const;
  double dlog_f(double th) const;
  // ln f(th) - 2 ln|2 sin((th - z)/2)| and its derivative; smooth near th = z
  // when z is one of the zeros of f
  double log_f_regular(double th, double z) const;
  double dlog_f_regular(double th, double z) const;

  // angles in [0, 2 pi) where f has a double zero (0, 2pi/3, pi, 5pi/3 for
  // generic data, none for vanishing reflection)
  const std::vector<double>& f_zeros() const { return zeros_; }
  bool f_vanishes_at(double z) const;
  // half-width of the arcs around the zeros where ln f comes from the spline
  // of the regular part instead of from f itself
  double guard() const { return guard_; }

  // f(z) below this at a candidate angle counts as a double zero; interpolated
  // data cannot reach exact zero across an excluded arc
  static constexpr double zero_tol = 0.05;

 private:
  struct Spline;
  void build_log_f();
  double h(double th) const;
  double dh(double th) const;

  std::function<cplx(double)> r1_, dr1_;
  std::unique_ptr<Spline> re_, im_, hs_;
  std::vector<double> zeros_;
  double guard_ = 0.01;
};

// rtilde on the circle as a real function of the angle, and its derivative
double rtilde_theta(double th);
double drtilde_theta(double th);

// angle reduced to [0, 2 pi)
double wrap_angle(double th);

}  // namespace bsq
