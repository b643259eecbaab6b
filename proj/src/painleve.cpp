#include "bsq/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <gsl/gsl_spline.h>

#include "bsq/spectral.hpp"
#include "bsq/special.hpp"

namespace bsq {

struct HastingsMcLeod::Interp {
  gsl_spline* u = nullptr;
  gsl_spline* up = nullptr;
  Interp(const std::vector<double>& y, const std::vector<double>& a, const std::vector<double>& b) {
    u = gsl_spline_alloc(gsl_interp_cspline, y.size());
    up = gsl_spline_alloc(gsl_interp_cspline, y.size());
    gsl_spline_init(u, y.data(), a.data(), y.size());
    gsl_spline_init(up, y.data(), b.data(), y.size());
  }
  ~Interp() {
    gsl_spline_free(u);
    gsl_spline_free(up);
  }
};

HastingsMcLeod::HastingsMcLeod() = default;
HastingsMcLeod::~HastingsMcLeod() = default;
HastingsMcLeod::HastingsMcLeod(HastingsMcLeod&&) noexcept = default;
HastingsMcLeod& HastingsMcLeod::operator=(HastingsMcLeod&&) noexcept = default;

void HastingsMcLeod::build_interpolant() { interp_ = std::make_unique<Interp>(y, u, u_prime); }

double hm_left_tail(double y) {
  double y3 = y * y * y;
  double s = 1.0 + 1.0 / (8.0 * y3) - 73.0 / (128.0 * y3 * y3) + 10657.0 / (1024.0 * y3 * y3 * y3);
  return std::sqrt(-0.5 * y) * s;
}

double hm_left_tail_prime(double y) {
  double y3 = y * y * y;
  double s = 1.0 + 1.0 / (8.0 * y3) - 73.0 / (128.0 * y3 * y3) + 10657.0 / (1024.0 * y3 * y3 * y3);
  double ds = -3.0 / (8.0 * y3 * y) + 6.0 * 73.0 / (128.0 * y3 * y3 * y) - 9.0 * 10657.0 / (1024.0 * y3 * y3 * y3 * y);
  double r = std::sqrt(-0.5 * y);
  return -0.25 / r * s + r * ds;
}

double HastingsMcLeod::u_at(double yy) const {
  if (yy > y.back()) return airy_ai(yy);
  if (yy < y.front()) return hm_left_tail(yy);
  return gsl_spline_eval(interp_->u, yy, nullptr);
}

double HastingsMcLeod::u_prime_at(double yy) const {
  if (yy > y.back()) return airy_ai_prime(yy);
  if (yy < y.front()) return hm_left_tail_prime(yy);
  return gsl_spline_eval(interp_->up, yy, nullptr);
}

double HastingsMcLeod::ode_residual() const {
  std::size_t n = y.size();
  double h = y[1] - y[0];
  double r = 0.0;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    double d2 = (2.0 * (u[i - 3] + u[i + 3]) - 27.0 * (u[i - 2] + u[i + 2]) + 270.0 * (u[i - 1] + u[i + 1]) -
                 490.0 * u[i]) /
                (180.0 * h * h);
    r = std::max(r, std::abs(d2 - y[i] * u[i] - 2.0 * u[i] * u[i] * u[i]));
  }
  return r;
}

HastingsMcLeod solve_hastings_mcleod(double y_max, int n, const HMOptions& opt) {
  if (y_max < 6.0) throw Error(ErrorCode::invalid_argument, "y_max must be at least 6");
  if (n < 200) throw Error(ErrorCode::invalid_argument, "n must be at least 200");
  HastingsMcLeod hm;
  hm.y.resize(n);
  hm.u.resize(n);
  double h = 2.0 * y_max / (n - 1);
  for (int i = 0; i < n; ++i) {
    double y = -y_max + i * h;
    hm.y[i] = y;
    double a0 = airy_ai(0.0);
    hm.u[i] = y >= 0.0 ? airy_ai(y) : std::sqrt(a0 * a0 - 0.5 * y);
  }
  hm.u.front() = hm_left_tail(-y_max);
  hm.u.back() = airy_ai(y_max);

  // Numerov: u_{i+1} - 2u_i + u_{i-1} = h^2/12 (F_{i+1} + 10 F_i + F_{i-1}),
  // F = y u + 2 u^3; the residual is reported divided by h^2
  auto& u = hm.u;
  const auto& y = hm.y;
  int m = n - 2;
  std::vector<double> R(m), lo(m), di(m), up(m), F(n), dF(n);
  double c = h * h / 12.0;
  auto residual = [&]() {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      F[i] = y[i] * u[i] + 2.0 * u[i] * u[i] * u[i];
      dF[i] = y[i] + 6.0 * u[i] * u[i];
    }
    for (int k = 0; k < m; ++k) {
      int i = k + 1;
      R[k] = u[i + 1] - 2.0 * u[i] + u[i - 1] - c * (F[i + 1] + 10.0 * F[i] + F[i - 1]);
      r = std::max(r, std::abs(R[k]) / (h * h));
    }
    return r;
  };
  double res = residual();
  for (int it = 0; it < opt.max_newton; ++it) {
    hm.newton_iterations = it;
    hm.newton_residual = res;
    if (res < opt.newton_tol) {
      hm.converged = true;
      break;
    }
    for (int k = 0; k < m; ++k) {
      int i = k + 1;
      lo[k] = 1.0 - c * dF[i - 1];
      di[k] = -2.0 - 10.0 * c * dF[i];
      up[k] = 1.0 - c * dF[i + 1];
    }
    // Thomas algorithm for J du = -R
    std::vector<double> cp(m), dp(m);
    cp[0] = up[0] / di[0];
    dp[0] = -R[0] / di[0];
    for (int k = 1; k < m; ++k) {
      double den = di[k] - lo[k] * cp[k - 1];
      cp[k] = up[k] / den;
      dp[k] = (-R[k] - lo[k] * dp[k - 1]) / den;
    }
    std::vector<double> du(m);
    du[m - 1] = dp[m - 1];
    for (int k = m - 2; k >= 0; --k) du[k] = dp[k] - cp[k] * du[k + 1];
    // damped step: halve until the residual decreases
    std::vector<double> u0 = u;
    double lambda = 1.0, rnew = res;
    for (int tries = 0; tries < 30; ++tries) {
      for (int k = 0; k < m; ++k) u[k + 1] = u0[k + 1] + lambda * du[k];
      rnew = residual();
      if (rnew < res) break;
      lambda *= 0.5;
    }
    if (!(rnew < res)) {
      u = u0;
      residual();
      break;
    }
    res = rnew;
  }
  if (!hm.converged) {
    // stalled at the rounding floor of the second difference
    hm.newton_residual = res;
    double floor = 400.0 * std::numeric_limits<double>::epsilon() / (h * h);
    if (res < std::max(opt.newton_tol, floor)) hm.converged = true;
  }
  if (!hm.converged)
    throw Error(ErrorCode::no_convergence,
                "Hastings-McLeod Newton iteration stalled at residual " + std::to_string(res) +
                    "; try a larger n or continuation in y_max");

  // derivative: sixth-order central differences, one-sided near the ends
  hm.u_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n) {
      hm.u_prime[i] = (-(u[i - 3]) + 9.0 * u[i - 2] - 45.0 * u[i - 1] + 45.0 * u[i + 1] - 9.0 * u[i + 2] + u[i + 3]) /
                      (60.0 * h);
    } else if (i < 3) {
      hm.u_prime[i] = (-147.0 * u[i] + 360.0 * u[i + 1] - 450.0 * u[i + 2] + 400.0 * u[i + 3] - 225.0 * u[i + 4] +
                       72.0 * u[i + 5] - 10.0 * u[i + 6]) /
                      (60.0 * h);
    } else {
      hm.u_prime[i] = (147.0 * u[i] - 360.0 * u[i - 1] + 450.0 * u[i - 2] - 400.0 * u[i - 3] + 225.0 * u[i - 4] -
                       72.0 * u[i - 5] + 10.0 * u[i - 6]) /
                      (60.0 * h);
    }
  }
  hm.build_interpolant();
  return hm;
}

double eval_uP(const HastingsMcLeod& hm, double y) {
  static const double c = std::cbrt(4.0) * std::cbrt(3.0);
  double u = hm.u_at(y);
  return c * (hm.u_prime_at(y) - u * u);
}

}  // namespace bsq
