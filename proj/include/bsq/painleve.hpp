#pragma once

#include <memory>
#include <vector>

namespace bsq {

struct HMOptions {
  double newton_tol = 1e-10;  // max norm of the discrete residual
  int max_newton = 60;
};

// Hastings-McLeod solution of u'' = y u + 2 u^3 on [-y_max, y_max]
// (fourth-order Numerov discretization, Newton iteration)
class HastingsMcLeod {
 public:
  std::vector<double> y, u, u_prime;
  bool converged = false;
  int newton_iterations = 0;
  double newton_residual = 0.0;

  HastingsMcLeod();
  ~HastingsMcLeod();
  HastingsMcLeod(HastingsMcLeod&&) noexcept;
  HastingsMcLeod& operator=(HastingsMcLeod&&) noexcept;

  double y_max() const { return y.back(); }
  // interpolated inside the grid, asymptotic tails outside
  double u_at(double yy) const;
  double u_prime_at(double yy) const;
  // max |u'' - y u - 2 u^3| over interior nodes, u'' by sixth-order differences
  double ode_residual() const;

  void build_interpolant();

 private:
  struct Interp;
  std::unique_ptr<Interp> interp_;
};

HastingsMcLeod solve_hastings_mcleod(double y_max = 8.0, int n = 4001, const HMOptions& opt = {});

// sqrt(-y/2)(1 + 1/(8y^3) - 73/(128y^6) + 10657/(1024y^9)), y < 0
double hm_left_tail(double y);
double hm_left_tail_prime(double y);

// 2^{2/3} 3^{1/3} (u' - u^2)
double eval_uP(const HastingsMcLeod& hm, double y);

}  // namespace bsq
