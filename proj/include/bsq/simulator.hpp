#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bsq/spectral.hpp"

namespace bsq {

// Periodic pseudo-spectral solver for u_tt = u_xx + (u^2)_xx + u_xxxx written
// as u_t = v_x, v_t = u_x + (u^2)_x + u_xxx on [-L, L).
struct SimConfig {
  double L = 4800.0;  // half-length of the periodic box
  int N = 16384;      // grid points, power of two
  double dt = 0.025;
  bool damping = true;
  double kappa_c = 1.0;  // filter acts above this wavenumber
  double p = 0.5;
  double gamma = 10.0;
  // also remove the linear growth rate sqrt(kappa^4 - kappa^2) of the modes
  // above |kappa| = 1 at every step
  bool cancel_growth = true;
  double dealias = 2.0 / 3.0;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  double tail_guard = 1e-6;  // 0 disables the edge amplitude check
  double mean_tol = 1e-10;   // allowed |int u1 dx| relative to int |u1| dx
  // optional absorbing layer of this width inside each end of the box; the
  // fields are multiplied by exp(-sponge_strength s(x) dt) after each step,
  // s rising smoothly from 0 to 1 across the layer. 0 disables it.
  double sponge_width = 0.0;
  double sponge_strength = 1.0;

  void validate() const;
};

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> x, u, v;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  // u0 and u1 = u_t(0) on the grid; v is the mean-free antiderivative of u1
  void init(const std::vector<double>& u0, const std::vector<double>& u1);
  // sets both fields directly
  void init_fields(const std::vector<double>& u, const std::vector<double>& v);

  void step();
  // advances to t_end (nearest step) and returns the requested snapshots
  std::vector<FieldSnapshot> run(double t_end, const std::vector<double>& snapshot_times = {});

  FieldSnapshot snapshot() const;
  double time() const;
  const SimConfig& config() const;
  std::vector<double> grid() const;
  std::vector<double> wavenumbers() const;  // kappa_m, m = 0..N/2

  // spectral coefficients (unnormalized r2c layout, length N/2 + 1)
  std::vector<cplx> u_hat() const;
  std::vector<cplx> v_hat() const;
  void set_hat(const std::vector<cplx>& uh, const std::vector<cplx>& vh);

  // integral of u over the box
  double mass() const;
  // sum over 0 < |kappa| < 1 of |v_hat|^2 + (1 - kappa^2)|u_hat|^2
  double linear_energy() const;
  // multiplier applied to mode kappa after every step
  double filter(double kappa) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> p_;
};

}  // namespace bsq
