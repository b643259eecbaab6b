#include "bsq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include <fftw3.h>

namespace bsq {

namespace {
std::mutex plan_mutex;  // fftw planning is not thread safe
}

void SimConfig::validate() const {
  if (N < 8 || (N & (N - 1)) != 0) throw Error(ErrorCode::invalid_argument, "N must be a power of two >= 8");
  if (!(L > 0.0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
  if (damping && !(kappa_c >= 1.0)) throw Error(ErrorCode::invalid_argument, "kappa_c must be >= 1");
  if (!(dealias > 0.0 && dealias <= 1.0)) throw Error(ErrorCode::invalid_argument, "dealias must be in (0, 1]");
  if (gamma < 0.0 || p < 0.0) throw Error(ErrorCode::invalid_argument, "filter gamma and p must be nonnegative");
  if (sponge_width < 0.0 || sponge_width >= L || sponge_strength < 0.0)
    throw Error(ErrorCode::invalid_argument, "sponge width must lie in [0, L) with nonnegative strength");
}

struct Simulator::Impl {
  SimConfig cfg;
  int N, M;  // M = N/2 + 1
  double t = 0.0;
  long steps = 0;
  std::vector<double> kap, filt, mask;
  std::vector<double> sponge;  // empty when disabled
  std::vector<cplx> uh, vh;
  // scratch
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<cplx> k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, tu, tv;

  explicit Impl(const SimConfig& c) : cfg(c) {
    cfg.validate();
    N = cfg.N;
    M = N / 2 + 1;
    kap.resize(M);
    filt.resize(M);
    mask.resize(M);
    double kmax = pi * (N / 2) / cfg.L;
    for (int m = 0; m < M; ++m) {
      kap[m] = pi * m / cfg.L;
      mask[m] = kap[m] <= cfg.dealias * kmax ? 1.0 : 0.0;
      filt[m] = filter_of(kap[m]);
    }
    if (cfg.sponge_width > 0.0 && cfg.sponge_strength > 0.0) {
      sponge.resize(N);
      for (int j = 0; j < N; ++j) {
        double x = -cfg.L + 2.0 * cfg.L * j / N;
        double s = std::clamp((std::abs(x) - (cfg.L - cfg.sponge_width)) / cfg.sponge_width, 0.0, 1.0);
        s = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
        sponge[j] = std::exp(-cfg.sponge_strength * s * cfg.dt);
      }
    }
    uh.assign(M, 0.0);
    vh.assign(M, 0.0);
    for (auto* v : {&k1u, &k1v, &k2u, &k2v, &k3u, &k3v, &k4u, &k4v, &tu, &tv}) v->assign(M, 0.0);
    rbuf = fftw_alloc_real(N);
    cbuf = fftw_alloc_complex(M);
    std::lock_guard<std::mutex> g(plan_mutex);
    fwd = fftw_plan_dft_r2c_1d(N, rbuf, cbuf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(N, cbuf, rbuf, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> g(plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }

  double filter_of(double k) const {
    if (!cfg.damping) return 1.0;
    double rate = 0.0;
    double a = std::abs(k);
    if (a > cfg.kappa_c) rate += cfg.gamma * std::pow(a - cfg.kappa_c, cfg.p);
    if (cfg.cancel_growth && a > 1.0) rate += std::sqrt(a * a * a * a - a * a);
    return rate == 0.0 ? 1.0 : std::exp(-rate * cfg.dt);
  }

  void to_real(const std::vector<cplx>& h, std::vector<double>& out, bool masked) {
    for (int m = 0; m < M; ++m) {
      cplx c = masked ? h[m] * mask[m] : h[m];
      cbuf[m][0] = c.real() / N;
      cbuf[m][1] = c.imag() / N;
    }
    fftw_execute(bwd);
    out.assign(rbuf, rbuf + N);
  }

  void rhs(const std::vector<cplx>& u, const std::vector<cplx>& v, std::vector<cplx>& du, std::vector<cplx>& dv) {
    for (int m = 0; m < M; ++m) {
      cplx c = u[m] * mask[m];
      cbuf[m][0] = c.real() / N;
      cbuf[m][1] = c.imag() / N;
    }
    fftw_execute(bwd);
    for (int j = 0; j < N; ++j) rbuf[j] *= rbuf[j];
    fftw_execute(fwd);
    for (int m = 0; m < M; ++m) {
      double k = kap[m];
      cplx sq(cbuf[m][0] * mask[m], cbuf[m][1] * mask[m]);
      if (m == N / 2) {  // Nyquist derivative taken as zero
        du[m] = 0.0;
        dv[m] = 0.0;
        continue;
      }
      du[m] = I * k * v[m];
      dv[m] = I * k * (u[m] - k * k * u[m] + sq);
    }
  }

  void step() {
    const double h = cfg.dt;
    rhs(uh, vh, k1u, k1v);
    for (int m = 0; m < M; ++m) {
      tu[m] = uh[m] + 0.5 * h * k1u[m];
      tv[m] = vh[m] + 0.5 * h * k1v[m];
    }
    rhs(tu, tv, k2u, k2v);
    for (int m = 0; m < M; ++m) {
      tu[m] = uh[m] + 0.5 * h * k2u[m];
      tv[m] = vh[m] + 0.5 * h * k2v[m];
    }
    rhs(tu, tv, k3u, k3v);
    for (int m = 0; m < M; ++m) {
      tu[m] = uh[m] + h * k3u[m];
      tv[m] = vh[m] + h * k3v[m];
    }
    rhs(tu, tv, k4u, k4v);
    for (int m = 0; m < M; ++m) {
      uh[m] += h / 6.0 * (k1u[m] + 2.0 * k2u[m] + 2.0 * k3u[m] + k4u[m]);
      vh[m] += h / 6.0 * (k1v[m] + 2.0 * k2v[m] + 2.0 * k3v[m] + k4v[m]);
      uh[m] *= filt[m];
      vh[m] *= filt[m];
    }
    if (!sponge.empty()) {
      absorb(uh);
      absorb(vh);
    }
    t = double(++steps) * h;
  }

  void absorb(std::vector<cplx>& h) {
    for (int m = 0; m < M; ++m) {
      cbuf[m][0] = h[m].real() / N;
      cbuf[m][1] = h[m].imag() / N;
    }
    fftw_execute(bwd);
    for (int j = 0; j < N; ++j) rbuf[j] *= sponge[j];
    fftw_execute(fwd);
    for (int m = 0; m < M; ++m) h[m] = cplx(cbuf[m][0], cbuf[m][1]);
  }

  void forward(const std::vector<double>& f, std::vector<cplx>& h) {
    if ((int)f.size() != N) throw Error(ErrorCode::invalid_argument, "field length differs from N");
    std::copy(f.begin(), f.end(), rbuf);
    fftw_execute(fwd);
    h.resize(M);
    for (int m = 0; m < M; ++m) h[m] = cplx(cbuf[m][0], cbuf[m][1]);
  }

  void check_health() {
    double worst = 0.0;
    int wm = 0;
    bool bad = false;
    for (int m = 0; m < M; ++m) {
      double a = std::abs(uh[m]) + std::abs(vh[m]);
      if (!std::isfinite(a)) bad = true;
      else if (a > worst) {
        worst = a;
        wm = m;
      }
    }
    if (bad || worst > 1e6 * N)
      throw Error(ErrorCode::instability, "simulation blew up at t = " + std::to_string(t) +
                                              "; largest mode kappa = " + std::to_string(kap[wm]));
    if (cfg.tail_guard > 0.0) {
      std::vector<double> u;
      to_real(uh, u, false);
      int w = std::max(2, N / 512);
      double edge = 0.0;
      for (int j = 0; j < w; ++j) edge = std::max({edge, std::abs(u[j]), std::abs(u[N - 1 - j])});
      if (edge > cfg.tail_guard)
      {
        char msg[160];
        std::snprintf(msg, sizeof msg, "|u| at the domain edge reached %.3g (guard %.3g) at t = %.6g (periodic wrap-around)",
                      edge, cfg.tail_guard, t);
        throw Error(ErrorCode::instability, msg);
      }
    }
  }
};

Simulator::Simulator(const SimConfig& cfg) : p_(std::make_unique<Impl>(cfg)) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::init(const std::vector<double>& u0, const std::vector<double>& u1) {
  auto& P = *p_;
  if ((int)u0.size() != P.N || (int)u1.size() != P.N)
    throw Error(ErrorCode::invalid_argument, "initial data length differs from N");
  double s = 0.0, sa = 0.0;
  for (double w : u1) {
    s += w;
    sa += std::abs(w);
  }
  if (std::abs(s) > P.cfg.mean_tol * std::max(sa, 1.0))
    throw Error(ErrorCode::invalid_argument,
                "int u1 dx = " + std::to_string(s * 2.0 * P.cfg.L / P.N) +
                    " is not zero; the mass would grow linearly in t");
  P.forward(u0, P.uh);
  std::vector<cplx> h1;
  P.forward(u1, h1);
  P.vh.assign(P.M, 0.0);
  for (int m = 1; m < P.M - 1; ++m) P.vh[m] = h1[m] / (I * P.kap[m]);
  P.t = 0.0;
  P.steps = 0;
}

void Simulator::init_fields(const std::vector<double>& u, const std::vector<double>& v) {
  p_->forward(u, p_->uh);
  p_->forward(v, p_->vh);
  p_->t = 0.0;
  p_->steps = 0;
}

void Simulator::step() { p_->step(); }

std::vector<FieldSnapshot> Simulator::run(double t_end, const std::vector<double>& snapshot_times) {
  auto& P = *p_;
  long n = std::lround((t_end - P.t) / P.cfg.dt);
  if (n < 0) throw Error(ErrorCode::invalid_argument, "t_end lies before the current time");
  long start = std::lround(P.t / P.cfg.dt);
  std::vector<std::pair<long, size_t>> marks;
  for (size_t i = 0; i < snapshot_times.size(); ++i) {
    long s = std::lround(snapshot_times[i] / P.cfg.dt) - start;
    marks.push_back({std::clamp(s, 0L, n), i});
  }
  std::vector<FieldSnapshot> out(snapshot_times.size());
  auto take = [&](long s) {
    for (auto& [ms, i] : marks)
      if (ms == s) out[i] = snapshot();
  };
  take(0);
  for (long s = 1; s <= n; ++s) {
    P.step();
    if (s % 50 == 0 || s == n) P.check_health();
    take(s);
  }
  return out;
}

FieldSnapshot Simulator::snapshot() const {
  FieldSnapshot s;
  s.t = p_->t;
  s.x = grid();
  p_->to_real(p_->uh, s.u, false);
  p_->to_real(p_->vh, s.v, false);
  return s;
}

double Simulator::time() const { return p_->t; }
const SimConfig& Simulator::config() const { return p_->cfg; }

std::vector<double> Simulator::grid() const {
  std::vector<double> x(p_->N);
  for (int j = 0; j < p_->N; ++j) x[j] = -p_->cfg.L + 2.0 * p_->cfg.L * j / p_->N;
  return x;
}

std::vector<double> Simulator::wavenumbers() const { return p_->kap; }
std::vector<cplx> Simulator::u_hat() const { return p_->uh; }
std::vector<cplx> Simulator::v_hat() const { return p_->vh; }

void Simulator::set_hat(const std::vector<cplx>& uh, const std::vector<cplx>& vh) {
  if ((int)uh.size() != p_->M || (int)vh.size() != p_->M)
    throw Error(ErrorCode::invalid_argument, "spectral arrays must have N/2 + 1 entries");
  p_->uh = uh;
  p_->vh = vh;
}

double Simulator::mass() const { return p_->uh[0].real() * 2.0 * p_->cfg.L / p_->N; }

double Simulator::linear_energy() const {
  double e = 0.0;
  for (int m = 1; m < p_->M; ++m) {
    double k = p_->kap[m];
    if (k >= 1.0) break;
    e += std::norm(p_->vh[m]) + (1.0 - k * k) * std::norm(p_->uh[m]);
  }
  return e;
}

double Simulator::filter(double kappa) const { return p_->filter_of(kappa); }

}  // namespace bsq
