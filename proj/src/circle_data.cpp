#include "bsq/circle_data.hpp"

#include <algorithm>
#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

namespace bsq {

double wrap_angle(double th) {
  double w = std::fmod(th, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  if (w >= 2.0 * pi) w = 0.0;
  return w;
}

double rtilde_theta(double th) { return -std::sin(2.0 * pi / 3.0 - th) / std::sin(2.0 * pi / 3.0 + th); }

double drtilde_theta(double th) {
  double d = std::sin(2.0 * pi / 3.0 + th);
  return -0.5 * sqrt3 / (d * d);
}

// periodic cubic spline on [x0, x0 + 2 pi)
struct CircleData::Spline {
  gsl_spline* sp = nullptr;
  double x0 = 0.0;

  Spline(std::vector<double> x, std::vector<double> y) {
    x0 = x.front();
    x.push_back(x0 + 2.0 * pi);
    y.push_back(y.front());
    sp = gsl_spline_alloc(gsl_interp_cspline_periodic, x.size());
    gsl_spline_init(sp, x.data(), y.data(), x.size());
  }
  ~Spline() { gsl_spline_free(sp); }
  Spline(const Spline&) = delete;
  Spline& operator=(const Spline&) = delete;

  double reduce(double th) const {
    double t = x0 + wrap_angle(th - x0);
    return std::min(t, x0 + 2.0 * pi);
  }
  double eval(double th) const { return gsl_spline_eval(sp, reduce(th), nullptr); }
  double deriv(double th) const { return gsl_spline_eval_deriv(sp, reduce(th), nullptr); }
};

namespace {

struct GslQuiet {
  gsl_error_handler_t* old;
  GslQuiet() : old(gsl_set_error_handler_off()) {}
  ~GslQuiet() { gsl_set_error_handler(old); }
};

double abs2(cplx z) { return std::norm(z); }

}  // namespace

CircleData::CircleData(const ReflectionTable& t) {
  std::vector<double> x, yr, yi;
  for (const auto& c : t.circle) {
    if (c.excluded || !std::isfinite(c.r1.real()) || !std::isfinite(c.r1.imag())) continue;
    x.push_back(c.theta);
    yr.push_back(c.r1.real());
    yi.push_back(c.r1.imag());
  }
  if (x.size() < 8) throw Error(ErrorCode::insufficient_data, "reflection table has fewer than 8 usable circle samples");
  GslQuiet q;
  re_ = std::make_unique<Spline>(x, yr);
  im_ = std::make_unique<Spline>(x, yi);
  // capture the splines, not this, so moves stay valid
  const Spline* re = re_.get();
  const Spline* im = im_.get();
  r1_ = [re, im](double th) { return cplx(re->eval(th), im->eval(th)); };
  dr1_ = [re, im](double th) { return cplx(re->deriv(th), im->deriv(th)); };
  // the splines bridge the excluded arcs, so ln f is rebuilt from outside them
  guard_ = std::max(guard_, t.plan.exclusion + 2.0 * pi / std::max(t.plan.n_circle, 6));
  build_log_f();
}

CircleData::CircleData(std::function<cplx(double)> r1, std::function<cplx(double)> dr1)
    : r1_(std::move(r1)), dr1_(std::move(dr1)) {
  build_log_f();
}

CircleData::~CircleData() = default;
CircleData::CircleData(CircleData&&) noexcept = default;
CircleData& CircleData::operator=(CircleData&&) noexcept = default;

cplx CircleData::r1(double th) const { return r1_(th); }
cplx CircleData::dr1(double th) const { return dr1_(th); }
cplx CircleData::r2(double th) const { return rtilde_theta(th) * std::conj(r1_(th)); }

double CircleData::one_plus_r1r2(double th) const { return 1.0 + rtilde_theta(th) * abs2(r1_(th)); }

double CircleData::d_one_plus_r1r2(double th) const {
  cplx r = r1_(th), dr = dr1_(th);
  return drtilde_theta(th) * abs2(r) + rtilde_theta(th) * 2.0 * std::real(std::conj(r) * dr);
}

double CircleData::log_one_plus_r1r2(double th) const {
  double v = one_plus_r1r2(th);
  if (!(v > 0.0))
    throw Error(ErrorCode::domain, "1 + r1 r2 is not positive at theta = " + std::to_string(th));
  return std::log(v);
}

double CircleData::dlog_one_plus_r1r2(double th) const { return d_one_plus_r1r2(th) / one_plus_r1r2(th); }

// f = 1 + [sin(th) |r1(th')|^2 - sin(2pi/3 - th) |r1(th)|^2] / sin(2pi/3 + th),
// th' = -th - 4pi/3; the quotient form keeps the cancellation of the two
// rtilde poles explicit
double CircleData::f(double th) const {
  double tp = -th - 4.0 * pi / 3.0;
  double num = std::sin(th) * abs2(r1_(tp)) - std::sin(2.0 * pi / 3.0 - th) * abs2(r1_(th));
  return 1.0 + num / std::sin(2.0 * pi / 3.0 + th);
}

double CircleData::df(double th) const {
  double tp = -th - 4.0 * pi / 3.0;
  cplx a = r1_(tp), da = -dr1_(tp);
  cplx b = r1_(th), db = dr1_(th);
  double A = abs2(a), dA = 2.0 * std::real(std::conj(a) * da);
  double B = abs2(b), dB = 2.0 * std::real(std::conj(b) * db);
  double s1 = std::sin(th), c1 = std::cos(th);
  double s2 = std::sin(2.0 * pi / 3.0 - th), c2 = std::cos(2.0 * pi / 3.0 - th);
  double D = std::sin(2.0 * pi / 3.0 + th), dD = std::cos(2.0 * pi / 3.0 + th);
  double N = s1 * A - s2 * B;
  double dN = c1 * A + s1 * dA + c2 * B - s2 * dB;
  return (dN * D - N * dD) / (D * D);
}

bool CircleData::f_vanishes_at(double z) const {
  for (double w : zeros_)
    if (std::abs(std::remainder(w - z, 2.0 * pi)) < 1e-12) return true;
  return false;
}

void CircleData::build_log_f() {
  zeros_.clear();
  for (double z : {0.0, 2.0 * pi / 3.0, pi, 5.0 * pi / 3.0})
    if (std::abs(f(z)) < zero_tol) zeros_.push_back(z);
  if (zeros_.empty()) return;

  const int M = 4096;
  const double guard = guard_;
  std::vector<double> x, y;
  for (int m = 0; m < M; ++m) {
    double th = 2.0 * pi * m / M;
    bool skip = false;
    for (double z : zeros_) skip |= std::abs(std::remainder(th - z, 2.0 * pi)) < guard;
    for (double p : {pi / 3.0, 4.0 * pi / 3.0}) skip |= std::abs(std::remainder(th - p, 2.0 * pi)) < guard;
    if (skip) continue;
    double fv = f(th);
    if (!(fv > 0.0))
      throw Error(ErrorCode::inconsistent, "f is not positive at theta = " + std::to_string(th));
    double v = std::log(fv);
    for (double z : zeros_) v -= 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (th - z))));
    x.push_back(th);
    y.push_back(v);
  }
  GslQuiet q;
  hs_ = std::make_unique<Spline>(x, y);
}

double CircleData::h(double th) const { return hs_->eval(th); }
double CircleData::dh(double th) const { return hs_->deriv(th); }

double CircleData::log_f(double th) const {
  if (zeros_.empty()) {
    double v = f(th);
    if (!(v > 0.0)) throw Error(ErrorCode::domain, "f is not positive at theta = " + std::to_string(th));
    return std::log(v);
  }
  double v = h(th);
  for (double z : zeros_) v += 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (th - z))));
  return v;
}

double CircleData::dlog_f(double th) const {
  if (zeros_.empty()) return df(th) / f(th);
  double v = dh(th);
  for (double z : zeros_) v += 1.0 / std::tan(0.5 * (th - z));
  return v;
}

double CircleData::log_f_regular(double th, double z) const {
  if (!f_vanishes_at(z)) return log_f(th) - 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (th - z))));
  double v = h(th);
  for (double w : zeros_)
    if (std::abs(std::remainder(w - z, 2.0 * pi)) > 1e-12)
      v += 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (th - w))));
  return v;
}

double CircleData::dlog_f_regular(double th, double z) const {
  if (!f_vanishes_at(z)) return dlog_f(th) - 1.0 / std::tan(0.5 * (th - z));
  double v = dh(th);
  for (double w : zeros_)
    if (std::abs(std::remainder(w - z, 2.0 * pi)) > 1e-12) v += 1.0 / std::tan(0.5 * (th - w));
  return v;
}

}  // namespace bsq
