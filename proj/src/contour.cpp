#include "bsq/contour.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "bsq/circle_data.hpp"

namespace bsq {

namespace {

struct Workspace {
  gsl_integration_workspace* w;
  explicit Workspace(int n) : w(gsl_integration_workspace_alloc(n)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
};

double qags(const std::function<double(double)>& fn, double a, double b, const QuadOptions& opt) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  F.params = const_cast<std::function<double(double)>*>(&fn);
  Workspace ws(opt.limit);
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  // roundoff detection in qags trips on kinks of the interpolated data; on
  // failure the interval is bisected and the pieces retried
  std::function<std::pair<double, double>(double, double, int)> run = [&](double lo, double hi, int depth) {
    double res = 0.0, err = 0.0;
    int st = gsl_integration_qags(&F, lo, hi, opt.epsabs, opt.epsrel, opt.limit, ws.w, &res, &err);
    if (st == GSL_SUCCESS || err < opt.epsabs + opt.epsrel * std::abs(res)) return std::make_pair(res, err);
    if (depth >= 6) {
      if (err < 1e3 * opt.epsabs + 1e3 * opt.epsrel * std::abs(res)) return std::make_pair(res, err);
      gsl_set_error_handler(old);
      char buf[160];
      std::snprintf(buf, sizeof buf, "arc quadrature failed on [%.6g, %.6g]: %s, error estimate %.3g", lo, hi,
                    gsl_strerror(st), err);
      throw Error(ErrorCode::no_convergence, buf);
    }
    double mid = 0.5 * (lo + hi);
    auto l = run(lo, mid, depth + 1);
    auto r = run(mid, hi, depth + 1);
    return std::make_pair(l.first + r.first, l.second + r.second);
  };
  auto out = run(a, b, 0);
  gsl_set_error_handler(old);
  return sign * out.first;
}

}  // namespace

double integrate_real(const std::function<double(double)>& fn, double a, double b, const QuadOptions& opt) {
  return qags(fn, a, b, opt);
}

cplx integrate(const std::function<cplx(double)>& fn, double a, double b, const QuadOptions& opt) {
  double re = qags([&](double x) { return fn(x).real(); }, a, b, opt);
  double im = qags([&](double x) { return fn(x).imag(); }, a, b, opt);
  return {re, im};
}

const char* branch_name(LogBranch b) { return b == LogBranch::up ? "ln_s" : "tilde ln_s"; }

cplx branch_log(double phi, double ts, LogBranch b) {
  // k - s = e^{i(phi+ts)/2} 2i sin((phi-ts)/2), phi taken on the side of s
  // that keeps the cut off the rest of the circle
  if (b == LogBranch::up) {
    double p = ts + wrap_angle(phi - ts);
    double m = 2.0 * std::sin(0.5 * (p - ts));
    return {std::log(m), 0.5 * (p + ts) + 0.5 * pi};
  }
  double p = ts - wrap_angle(ts - phi);
  double m = -2.0 * std::sin(0.5 * (p - ts));
  return {std::log(m), 0.5 * (p + ts) - 0.5 * pi};
}

bool on_arc(const Arc& arc, double phi, double tol) {
  double lo = std::min(arc.a, arc.b), hi = std::max(arc.a, arc.b);
  double p = lo + wrap_angle(phi - lo);
  return p >= lo - tol && p <= hi + tol;
}

cplx cauchy_log(const Arc& arc, cplx k, const QuadOptions& opt) {
  if (std::abs(std::abs(k) - 1.0) < opt.dist_min && on_arc(arc, std::arg(k), opt.dist_min))
    throw Error(ErrorCode::near_zero, "Cauchy integral evaluated on its own arc");
  double lo = std::min(arc.a, arc.b), hi = std::max(arc.a, arc.b);
  double tk = lo + wrap_angle(std::arg(k) - lo);
  bool near = std::abs(std::abs(k) - 1.0) < 0.25 && tk > lo && tk < hi;
  if (!near) {
    // (1/2 pi i) g(s)/(s-k) ds with s = e^{i th}, ds = i s dth
    return integrate(
               [&](double th) {
                 cplx s = std::polar(1.0, th);
                 return arc.g(th) * s / (s - k);
               },
               arc.a, arc.b, opt) /
           (2.0 * pi);
  }
  // k close to the interior of the arc: subtract g at the nearest point and
  // integrate ds/(s-k) exactly, split there so each piece subtends less than pi
  double g0 = arc.g(tk);
  cplx s0 = std::polar(1.0, tk);
  cplx rest = integrate(
      [&](double th) {
        cplx s = std::polar(1.0, th);
        return (arc.g(th) - g0) * s / (s - k);
      },
      arc.a, tk, opt) +
              integrate(
                  [&](double th) {
                    cplx s = std::polar(1.0, th);
                    return (arc.g(th) - g0) * s / (s - k);
                  },
                  tk, arc.b, opt);
  cplx sa = std::polar(1.0, arc.a), sb = std::polar(1.0, arc.b);
  cplx J = std::log((sb - k) / (s0 - k)) + std::log((s0 - k) / (sa - k));
  return rest / (2.0 * pi) + g0 * J / (2.0 * pi * I);
}

cplx stieltjes(const Arc& arc, double phi, LogBranch br, const QuadOptions& opt) {
  return integrate([&](double th) { return branch_log(phi, th, br) * arc.dg(th); }, arc.a, arc.b, opt) /
         (2.0 * pi * I);
}

cplx stieltjes_pv(const Arc& arc, double phi, LogBranch br, const QuadOptions& opt) {
  double t0 = arc.b;
  cplx L0 = branch_log(phi, t0, br);
  cplx smooth = integrate([&](double th) { return branch_log(phi, th, br) * arc.dg(th); }, arc.a, t0, opt);
  cplx sing = integrate(
      [&](double th) {
        double d = 0.5 * (th - t0);
        if (d == 0.0) return cplx(0.0);
        return (branch_log(phi, th, br) - L0) / std::tan(d);
      },
      arc.a, t0, opt);
  cplx bnd = L0 * (arc.g(t0) + 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (arc.a - t0)))));
  return (smooth + sing - bnd) / (2.0 * pi * I);
}

}  // namespace bsq
