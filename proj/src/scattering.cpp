#include "bsq/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <gsl/gsl_spline.h>

namespace bsq {

// ---------------------------------------------------------------- data

void InitialData::validate() const {
  std::size_t n = x.size();
  if (n < 8 || u0.size() != n || v0.size() != n)
    throw Error(ErrorCode::invalid_argument, "initial data needs at least 8 points and equal column lengths");
  double h = x[1] - x[0];
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "x grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    double hi = x[i] - x[i - 1];
    if (std::abs(hi - h) > 1e-9 * std::max(std::abs(h), std::abs(x[i]) * 1e-3 + h))
      throw Error(ErrorCode::invalid_argument, "x grid is not uniform at row " + std::to_string(i));
  }
  for (std::size_t i : {std::size_t(0), n - 1}) {
    if (std::abs(u0[i]) > decay_tail || std::abs(v0[i]) > decay_tail)
      throw Error(ErrorCode::invalid_argument, "initial data does not decay to the tail threshold at the grid ends");
  }
}

std::vector<double> InitialData::u0x() const {
  std::size_t n = u0.size();
  std::vector<double> d(n);
  double h12 = 12.0 * dx();
  const auto& f = u0;
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / h12;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h12;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h12;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / h12;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / h12;
  return d;
}

InitialData compact_example_data(int n) {
  InitialData d;
  d.x.resize(n);
  d.u0.resize(n);
  d.v0.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -1.0 + 2.0 * i / (n - 1);
    double b = (1.0 - x * x) * (1.0 - x * x);
    double g = std::exp(-x * x);
    d.x[i] = x;
    d.u0[i] = -g * b;
    d.v0[i] = 2.0 * (g + 5.0 * (x - 0.2)) * b;
  }
  d.u0.front() = d.u0.back() = 0.0;
  d.v0.front() = d.v0.back() = 0.0;
  return d;
}

InitialData gaussian_data(double amp, double width, double xmax, int n) {
  InitialData d;
  d.x.resize(n);
  d.u0.resize(n);
  d.v0.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = -xmax + 2.0 * xmax * i / (n - 1);
    d.x[i] = x;
    d.u0[i] = amp * std::exp(-width * x * x);
  }
  return d;
}

InitialData scaled(const InitialData& d, double eps) {
  InitialData out = d;
  for (auto& v : out.u0) v *= eps;
  for (auto& v : out.v0) v *= eps;
  return out;
}

std::vector<double> sample_field(const InitialData& d, const std::vector<double>& u, const std::vector<double>& xs) {
  if (u.size() != d.x.size() || d.x.size() < 4) throw Error(ErrorCode::invalid_argument, "field and grid sizes differ");
  gsl_interp* ip = gsl_interp_alloc(gsl_interp_cspline, d.x.size());
  gsl_interp_accel* acc = gsl_interp_accel_alloc();
  gsl_interp_init(ip, d.x.data(), u.data(), d.x.size());
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] >= d.x.front() && xs[i] <= d.x.back()) out[i] = gsl_interp_eval(ip, d.x.data(), u.data(), xs[i], acc);
  gsl_interp_accel_free(acc);
  gsl_interp_free(ip);
  return out;
}

InitialData resample(const InitialData& d, double xmax, int n) {
  if (!(xmax > 0.0) || n < 8) throw Error(ErrorCode::invalid_argument, "resampling needs xmax > 0 and n >= 8");
  InitialData out;
  out.decay_tail = d.decay_tail;
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = -xmax + 2.0 * xmax * i / (n - 1);
  out.u0 = sample_field(d, d.u0, out.x);
  out.v0 = sample_field(d, d.v0, out.x);
  return out;
}

// ---------------------------------------------------------------- potential

std::vector<PotentialRow> potential_rows(const InitialData& d) {
  auto ux = d.u0x();
  std::vector<PotentialRow> rows(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    rows[i].x = d.x[i];
    rows[i].n31 = cplx(-ux[i] / 4.0, -d.v0[i] / (4.0 * sqrt3));
    rows[i].n32 = -d.u0[i] / 2.0;
  }
  return rows;
}

namespace {

struct KData {
  std::array<cplx, 3> l;
  std::array<cplx, 3> c;  // third column of P^{-1}
};

KData kdata(cplx k) {
  P_inverse(k);  // refuses the singular set
  KData kd;
  auto sp = eval_lz(k);
  kd.l = sp.l;
  for (int i = 0; i < 3; ++i) {
    cplx a = kd.l[(i + 1) % 3], b = kd.l[(i + 2) % 3];
    kd.c[i] = 1.0 / ((kd.l[i] - a) * (kd.l[i] - b));
  }
  return kd;
}

}  // namespace

Mat3 potential_at(const PotentialRow& row, cplx k) {
  KData kd = kdata(k);
  Mat3 U;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) U(i, j) = kd.c[i] * (row.n31 + row.n32 * kd.l[j]);
  return U;
}

std::vector<Mat3> build_potential(const InitialData& d, cplx k) {
  auto rows = potential_rows(d);
  KData kd = kdata(k);
  std::vector<Mat3> out(rows.size());
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[n](i, j) = kd.c[i] * (rows[n].n31 + rows[n].n32 * kd.l[j]);
  return out;
}

// ---------------------------------------------------------------- Volterra

namespace {

// mu_p(z) = int_0^1 exp(-z t) t^p dt, p = 0..3
std::array<cplx, 4> moments(cplx z) {
  std::array<cplx, 4> mu{};
  if (std::abs(z) < 1.0) {
    for (int p = 0; p < 4; ++p) {
      cplx term = 1.0, sum = 0.0;
      for (int n = 0; n < 30; ++n) {
        sum += term / double(n + p + 1);
        term *= -z / double(n + 1);
      }
      mu[p] = sum;
    }
  } else {
    cplx e = std::exp(-z);
    mu[0] = (1.0 - e) / z;
    for (int p = 1; p < 4; ++p) mu[p] = (double(p) * mu[p - 1] - e) / z;
  }
  return mu;
}

// exponential product weights for cubic Lagrange interpolation on the nodes
// 0, h, 2h, 3h, integrated against exp(-a s) over the q-th interval [qh, (q+1)h]
// (s measured from the interval's left end)
struct RowWeights {
  cplx E;                                // exp(-a h)
  std::array<std::array<cplx, 4>, 3> w;  // w[q][m]
};

RowWeights row_weights(cplx a, double h) {
  RowWeights rw;
  cplx z = a * h;
  rw.E = std::exp(-z);
  auto mu = moments(z);
  static const double cub[4][4] = {{1, -11.0 / 6.0, 1, -1.0 / 6.0},
                                   {0, 3, -2.5, 0.5},
                                   {0, -1.5, 2, -0.5},
                                   {0, 1.0 / 3.0, -0.5, 1.0 / 6.0}};
  static const double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int q = 0; q < 3; ++q)
    for (int m = 0; m < 4; ++m) {
      // coefficients of L_m(s + q) in powers of s
      double c[4] = {0, 0, 0, 0};
      for (int p = 0; p < 4; ++p)
        for (int r = 0; r <= p; ++r) c[r] += cub[m][p] * binom[p][r] * std::pow(double(q), p - r);
      cplx acc = 0.0;
      for (int r = 0; r < 4; ++r) acc += c[r] * mu[r];
      rw.w[q][m] = acc * h;
    }
  return rw;
}

struct ColumnResult {
  std::array<cplx, 3> J0;  // int_{x0}^inf exp(-(x'-x0) a_i) F_i dx'
  int iterations = 1;
  double residual = 0.0;
  bool converged = true;
};

// Y_i(x) = delta_ij - int_x^inf exp(-(x'-x) a_i) F_i(x') dx',
// F = U Y for X and F = -U^T Y for X^A, with U = c w^T.
class ColumnSolver {
 public:
  ColumnSolver(const std::vector<PotentialRow>& rows, double h, const KData& kd, Eigenfunction which, int col)
      : rows_(rows), h_(h), kd_(kd), which_(which), j_(col - 1) {
    for (int i = 0; i < 3; ++i) {
      cplx d = kd.l[i] - kd.l[j_];
      a_[i] = which == Eigenfunction::X ? d : -d;
      rw_[i] = row_weights(a_[i], h);
    }
  }

  const std::array<cplx, 3>& a() const { return a_; }

  std::array<cplx, 3> w_at(std::size_t n) const {
    std::array<cplx, 3> w;
    for (int i = 0; i < 3; ++i) w[i] = rows_[n].n31 + rows_[n].n32 * kd_.l[i];
    return w;
  }

  Vec3 apply(std::size_t n, const Vec3& Y) const {
    auto w = w_at(n);
    Vec3 F;
    if (which_ == Eigenfunction::X) {
      cplx s = w[0] * Y[0] + w[1] * Y[1] + w[2] * Y[2];
      for (int i = 0; i < 3; ++i) F[i] = kd_.c[i] * s;
    } else {
      cplx s = kd_.c[0] * Y[0] + kd_.c[1] * Y[1] + kd_.c[2] * Y[2];
      for (int i = 0; i < 3; ++i) F[i] = -w[i] * s;
    }
    return F;
  }

  // (I + D G_n) Y = b for the implicit step
  Vec3 implicit_solve(std::size_t n, const Vec3& b, const Vec3& D) const {
    auto w = w_at(n);
    if (which_ == Eigenfunction::X) {
      // G = c w^T
      Vec3 p;
      for (int i = 0; i < 3; ++i) p[i] = D[i] * kd_.c[i];
      cplx wb = w[0] * b[0] + w[1] * b[1] + w[2] * b[2];
      cplx wp = w[0] * p[0] + w[1] * p[1] + w[2] * p[2];
      return b - p * (wb / (1.0 + wp));
    }
    // G = -w c^T
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = D[i] * w[i];
    cplx cb = kd_.c[0] * b[0] + kd_.c[1] * b[1] + kd_.c[2] * b[2];
    cplx cp = kd_.c[0] * p[0] + kd_.c[1] * p[1] + kd_.c[2] * p[2];
    return b + p * (cb / (1.0 - cp));
  }

  // one sweep from the right edge. Without Yprev the discrete equations are
  // solved exactly by implicit marching; with Yprev one Neumann step is taken.
  ColumnResult sweep(std::vector<Vec3>* Yout, const std::vector<Vec3>* Yprev) const {
    std::size_t N = rows_.size();
    std::vector<Vec3> F(N), Y(N);
    std::vector<Vec3> J(N);
    Vec3 ej = Vec3::Zero();
    ej[j_] = 1.0;
    auto source = [&](std::size_t n) -> const Vec3& { return Yprev ? (*Yprev)[n] : Y[n]; };

    // local integral over [x_n, x_{n+1}] using the stencil starting at node s0
    auto local = [&](std::size_t n, std::size_t s0, bool skip_self) {
      int q = int(n - s0);
      Vec3 acc;
      for (int i = 0; i < 3; ++i) {
        cplx v = rw_[i].E * J[n + 1][i];
        for (int m = 0; m < 4; ++m) {
          if (skip_self && s0 + m == n) continue;
          v += rw_[i].w[q][m] * F[s0 + m][i];
        }
        acc[i] = v;
      }
      return acc;
    };

    Y[N - 1] = ej;
    J[N - 1] = Vec3::Zero();
    F[N - 1] = apply(N - 1, source(N - 1));

    // starting block: nodes N-4..N-2 share the stencil N-4..N-1
    std::size_t s0 = N - 4;
    for (std::size_t n = s0; n < N - 1; ++n) {
      Y[n] = ej;
      F[n] = apply(n, source(n));
    }
    for (int it = 0; it < 60; ++it) {
      double change = 0.0;
      for (std::size_t n = N - 1; n-- > s0;) {
        Vec3 Jn = local(n, s0, false);
        Vec3 Yn = ej - Jn;
        change = std::max(change, (Yn - Y[n]).cwiseAbs().maxCoeff());
        Y[n] = Yn;
        J[n] = Jn;
        F[n] = apply(n, source(n));
      }
      if (Yprev || change < 1e-16) break;
    }

    for (std::size_t n = s0; n-- > 0;) {
      if (Yprev) {
        F[n] = apply(n, (*Yprev)[n]);
        J[n] = local(n, n, false);
        Y[n] = ej - J[n];
      } else {
        Vec3 Jn = local(n, n, true);
        Vec3 D;
        for (int i = 0; i < 3; ++i) D[i] = rw_[i].w[0][0];
        Y[n] = implicit_solve(n, ej - Jn, D);
        F[n] = apply(n, Y[n]);
        J[n] = ej - Y[n];
      }
    }
    if (Yout) *Yout = Y;
    ColumnResult res;
    for (int i = 0; i < 3; ++i) res.J0[i] = J[0][i];
    return res;
  }

  ColumnResult solve(const VolterraOptions& opt) const {
    if (opt.method == VolterraMethod::march) return sweep(nullptr, nullptr);
    std::size_t N = rows_.size();
    Vec3 ej = Vec3::Zero();
    ej[j_] = 1.0;
    std::vector<Vec3> Yold(N, ej), Ynew(N);
    ColumnResult res;
    for (int it = 1; it <= opt.max_iter; ++it) {
      res = sweep(&Ynew, &Yold);
      double diff = 0.0;
      for (std::size_t n = 0; n < N; ++n) diff = std::max(diff, (Ynew[n] - Yold[n]).cwiseAbs().maxCoeff());
      std::swap(Yold, Ynew);
      res.iterations = it;
      res.residual = diff;
      if (diff < opt.tol) {
        res.converged = true;
        return res;
      }
    }
    res.converged = false;
    return res;
  }

 private:
  const std::vector<PotentialRow>& rows_;
  double h_;
  KData kd_;
  Eigenfunction which_;
  int j_;
  std::array<cplx, 3> a_;
  std::array<RowWeights, 3> rw_;
};

ScatteringSample solve_rows(const std::vector<PotentialRow>& rows, double h, cplx k, Eigenfunction which,
                            const std::vector<int>& columns, const VolterraOptions& opt) {
  KData kd = kdata(k);
  ScatteringSample out;
  out.k = k;
  double x0 = rows.front().x;
  for (int col : columns) {
    if (col < 1 || col > 3) throw Error(ErrorCode::invalid_argument, "column index must be 1..3");
    ColumnSolver cs(rows, h, kd, which, col);
    ColumnResult r = cs.solve(opt);
    for (int i = 0; i < 3; ++i) {
      cplx delta = (i == col - 1) ? 1.0 : 0.0;
      out.s(i, col - 1) = delta - std::exp(-x0 * cs.a()[i]) * r.J0[i];
    }
    out.iterations = std::max(out.iterations, r.iterations);
    out.residual = std::max(out.residual, r.residual);
    out.converged = out.converged && r.converged;
  }
  return out;
}

}  // namespace

ScatteringSample solve_volterra(const InitialData& d, cplx k, Eigenfunction which, const std::vector<int>& columns,
                                const VolterraOptions& opt) {
  auto rows = potential_rows(d);
  auto out = solve_rows(rows, d.dx(), k, which, columns, opt);
  if (!out.converged)
    throw Error(ErrorCode::no_convergence,
                "Volterra iteration did not converge, last residual " + std::to_string(out.residual));
  return out;
}

// ---------------------------------------------------------------- tables

bool in_exclusion(double theta, double radius) {
  for (int j = 0; j < 6; ++j) {
    double c = j * pi / 3.0;
    double d = std::remainder(theta - c, 2.0 * pi);
    if (std::abs(d) < radius) return true;
  }
  return false;
}

namespace {

template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  unsigned nt = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, unsigned(std::max<std::size_t>(n, 1)));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

ReflectionTable reflection_coefficients(const InitialData& d, const SamplingPlan& plan, const VolterraOptions& opt) {
  d.validate();
  if (plan.n_circle < 6 || plan.n_circle % 6 != 0)
    throw Error(ErrorCode::invalid_argument, "circle sample count must be a positive multiple of 6");
  auto rows = potential_rows(d);
  double h = d.dx();
  ReflectionTable t;
  t.plan = plan;
  t.n_grid = int(d.size());
  t.x_min = d.x.front();
  t.x_max = d.x.back();
  t.circle.resize(plan.n_circle);
  t.ray.resize(plan.n_ray);
  std::vector<int> cols = plan.full_matrix ? std::vector<int>{1, 2, 3} : std::vector<int>{1, 2};
  std::size_t nc = t.circle.size();
  parallel_for(nc + t.ray.size(), plan.threads, [&](std::size_t idx) {
    if (idx < nc) {
      CircleSample& cs = t.circle[idx];
      cs.theta = 2.0 * pi * double(idx) / double(plan.n_circle);
      if (in_exclusion(cs.theta, std::max(plan.exclusion, eps_sing))) {
        cs.excluded = true;
        cs.status = "excluded";
        return;
      }
      cplx k = std::polar(1.0, cs.theta);
      try {
        auto sx = solve_rows(rows, h, k, Eigenfunction::X, cols, opt);
        auto sa = solve_rows(rows, h, k, Eigenfunction::XA, cols, opt);
        cs.converged = sx.converged && sa.converged;
        cs.s11 = sx.s(0, 0);
        cs.r1 = sx.s(0, 1) / sx.s(0, 0);
        cs.r2 = sa.s(0, 1) / sa.s(0, 0);
        if (plan.full_matrix) {
          cs.s = sx.s;
          cs.sA = sa.s;
        }
        if (!cs.converged) cs.status = "no_convergence";
        if (std::abs(sx.s(0, 0)) < opt.tol_zero || std::abs(sa.s(0, 0)) < opt.tol_zero) cs.status = "near_zero";
      } catch (const Error& e) {
        cs.status = "error";
      }
    } else {
      RaySample& rs = t.ray[idx - nc];
      double f = plan.n_ray > 1 ? double(idx - nc) / double(plan.n_ray - 1) : 0.0;
      rs.tau = plan.tau_min + (plan.tau_max - plan.tau_min) * f;
      cplx k(0.0, rs.tau);
      try {
        auto sx = solve_rows(rows, h, k, Eigenfunction::X, {1, 2}, opt);
        rs.converged = sx.converged;
        rs.s11 = sx.s(0, 0);
        rs.r1 = sx.s(0, 1) / sx.s(0, 0);
        if (!rs.converged) rs.status = "no_convergence";
        if (std::abs(sx.s(0, 0)) < opt.tol_zero) rs.status = "near_zero";
      } catch (const Error& e) {
        rs.status = "error";
      }
    }
  });
  return t;
}

// ---------------------------------------------------------------- verification

namespace {

struct Grid {
  const ReflectionTable& t;
  int M;
  int idx(long m) const { return int(((m % M) + M) % M); }
  bool ok(long m) const {
    const auto& s = t.circle[idx(m)];
    return !s.excluded && s.status == "ok";
  }
  cplx r1(long m) const { return t.circle[idx(m)].r1; }
  cplx r2(long m) const { return t.circle[idx(m)].r2; }
};

void finish(CheckResult& c) { c.pass = c.samples > 0 && c.max_residual <= c.tolerance; }

bool in_arc(double theta, double lo, double hi) { return theta > lo && theta < hi; }

}  // namespace

std::vector<double> f_on_grid(const ReflectionTable& t, std::vector<double>* imag_part) {
  int M = int(t.circle.size());
  Grid g{t, M};
  std::vector<double> f(M, NAN);
  if (imag_part) imag_part->assign(M, NAN);
  for (int m = 0; m < M; ++m) {
    long mm = -long(m) - 2 * M / 3;
    if (!g.ok(m) || !g.ok(mm)) continue;
    cplx v = 1.0 + g.r1(m) * g.r2(m) + g.r1(mm) * g.r2(mm);
    f[m] = v.real();
    if (imag_part) (*imag_part)[m] = v.imag();
  }
  return f;
}

std::vector<CheckResult> verify_identities(const ReflectionTable& t, const VerifyTolerances& tol) {
  int M = int(t.circle.size());
  if (M == 0 || M % 6 != 0) throw Error(ErrorCode::invalid_argument, "verification needs a circle grid that is a multiple of 6");
  Grid g{t, M};
  const int M3 = M / 3;
  std::vector<CheckResult> out;

  CheckResult rel{"circle_relation", 0, tol.identity, true, 0, ""};
  CheckResult alt{"r2_alternative_form", 0, tol.identity, true, 0, ""};
  CheckResult conj{"conjugate_symmetry", 0, tol.identity, true, 0, ""};
  CheckResult fs{"f_equals_inverse_abs_s11_squared", 0, tol.identity, true, 0, ""};
  CheckResult fim{"f_imaginary_part", 0, tol.imag, true, 0, ""};
  CheckResult fpos{"f_nonnegative", 0, tol.inequality, true, 0, ""};
  CheckResult fle1{"f_at_most_one", 0, tol.inequality, true, 0, ""};
  CheckResult pos{"one_plus_r1r2_positive", 0, tol.inequality, true, 0, ""};
  CheckResult lnn{"minus_log_one_plus_r1r2_nonnegative", 0, tol.inequality, true, 0, ""};
  CheckResult nh1{"nu_hat_1_nonnegative", 0, tol.inequality, true, 0, ""};
  CheckResult nh2{"nu_hat_2_nonnegative", 0, tol.inequality, true, 0, ""};
  CheckResult zeros{"f_vanishes_at_1_omega", 0, 0.0, true, 0, ""};

  std::vector<double> fim_v;
  auto f = f_on_grid(t, &fim_v);
  auto fidx = [&](long m) { return f[g.idx(m)]; };
  auto onep = [&](long m) { return 1.0 + g.r1(m) * g.r2(m); };

  for (int m = 0; m < M; ++m) {
    if (!g.ok(m)) continue;
    double th = t.circle[m].theta;
    cplx k = std::polar(1.0, th);
    if (g.ok(-m - M3) && g.ok(m + M3) && g.ok(m + 2 * M3) && g.ok(-m)) {
      cplx res = g.r1(-m - M3) + g.r2(m + M3) + g.r1(m + 2 * M3) * g.r2(-m);
      rel.max_residual = std::max(rel.max_residual, std::abs(res));
      rel.samples++;
      cplx den = 1.0 - g.r1(m + M3) * g.r1(-m - M3);
      cplx alt_r2 = (g.r1(m + M3) * g.r1(m + 2 * M3) - g.r1(-m)) / den;
      alt.max_residual = std::max(alt.max_residual, std::abs(alt_r2 - g.r2(m)));
      alt.samples++;
    }
    try {
      cplx res = g.r2(m) - rtilde(k) * std::conj(g.r1(m));
      conj.max_residual = std::max(conj.max_residual, std::abs(res));
      conj.samples++;
    } catch (const Error&) {
    }
    if (!std::isnan(f[m])) {
      if (!std::isnan(t.circle[m].s11.real())) {
        double inv = 1.0 / std::norm(t.circle[m].s11);
        fs.max_residual = std::max(fs.max_residual, std::abs(f[m] - inv));
        fs.samples++;
      }
      fim.max_residual = std::max(fim.max_residual, std::abs(fim_v[m]));
      fim.samples++;
      fpos.max_residual = std::max(fpos.max_residual, std::max(0.0, -f[m]));
      fpos.samples++;
      if (in_arc(th, 2 * pi / 3, pi) || in_arc(th, 5 * pi / 3, 2 * pi)) {
        fle1.max_residual = std::max(fle1.max_residual, std::max(0.0, f[m] - 1.0));
        fle1.samples++;
      }
    }
    if (in_arc(th, pi / 3, pi) || in_arc(th, 4 * pi / 3, 2 * pi)) {
      cplx v = onep(m);
      pos.max_residual = std::max(pos.max_residual, std::max(0.0, -v.real()));
      pos.samples++;
    }
    if (in_arc(th, 5 * pi / 3, 2 * pi)) {
      double v = -std::log(onep(m).real()) / (2 * pi);
      lnn.max_residual = std::max(lnn.max_residual, std::max(0.0, -v));
      lnn.samples++;
      double fw = fidx(m + M3);
      if (!std::isnan(fw) && g.ok(m + M3)) {
        double nu3 = -std::log(fw) / (2 * pi);
        double nu1 = -std::log(onep(m + M3).real()) / (2 * pi);
        nh1.max_residual = std::max(nh1.max_residual, std::max(0.0, -(nu3 - nu1)));
        nh1.samples++;
      }
    }
    if (in_arc(th, pi, 4 * pi / 3)) {
      double fw = fidx(m + M3), fw2 = fidx(m + 2 * M3);
      if (!std::isnan(fw) && !std::isnan(fw2) && g.ok(m + 2 * M3)) {
        double nu2 = -std::log(onep(m + 2 * M3).real()) / (2 * pi);
        double nu3 = -std::log(fw) / (2 * pi);
        double nu4 = -std::log(fw2) / (2 * pi);
        nh2.max_residual = std::max(nh2.max_residual, std::max(0.0, -(nu2 + nu3 - nu4)));
        nh2.samples++;
      }
    }
  }

  // f decreases monotonically over the five nearest samples toward each zero;
  // reflectionless data has f = 1 and no zeros
  double rmax = 0.0;
  for (auto& c : t.circle)
    if (!c.excluded && c.converged) rmax = std::max(rmax, std::abs(c.r1));
  int violations = 0;
  double fmin_near = 0.0;
  for (int z : {0, M / 3, M / 2, 5 * M / 6}) {
    if (rmax < 1e-12) break;
    for (int dir : {-1, 1}) {
      long m = z;
      int guard = 0;
      while ((std::isnan(fidx(m)) || !g.ok(m)) && guard++ < M / 2) m += dir;
      std::vector<double> seq;
      for (int q = 0; q < 5; ++q) seq.push_back(fidx(m + long(q) * dir));
      for (int q = 0; q + 1 < 5; ++q)
        if (!(seq[q] < seq[q + 1])) violations++;
      fmin_near = std::max(fmin_near, seq[0]);
      zeros.samples += 5;
    }
  }
  zeros.max_residual = violations;
  zeros.note = rmax < 1e-12 ? "reflection vanishes, f = 1 has no zeros"
                            : "largest f at the sample nearest a zero: " + std::to_string(fmin_near);
  if (fs.samples == 0) fs.note = "table carries no s11 values";

  for (auto* c : {&rel, &alt, &conj, &fs, &fim, &fpos, &fle1, &pos, &lnn, &nh1, &nh2, &zeros}) {
    finish(*c);
    if (c == &zeros && rmax < 1e-12) c->pass = true;
    out.push_back(*c);
  }

  if (t.plan.full_matrix) {
    // s(k) = B s(1/k) B and s(k) = A s(omega k) A^{-1}
    Mat3 A, B;
    A << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    B << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    CheckResult sb{"s_symmetry_B", 0, tol.identity, true, 0, ""};
    CheckResult sa{"s_symmetry_A", 0, tol.identity, true, 0, ""};
    for (int m = 0; m < M; ++m) {
      if (!g.ok(m)) continue;
      if (g.ok(-m)) {
        Mat3 d = t.circle[m].s - B * t.circle[g.idx(-m)].s * B;
        sb.max_residual = std::max(sb.max_residual, d.cwiseAbs().maxCoeff());
        sb.samples++;
      }
      if (g.ok(m + M3)) {
        Mat3 d = t.circle[m].s - A * t.circle[g.idx(m + M3)].s * A.inverse();
        sa.max_residual = std::max(sa.max_residual, d.cwiseAbs().maxCoeff());
        sa.samples++;
      }
    }
    finish(sb);
    finish(sa);
    out.push_back(sb);
    out.push_back(sa);
  }
  return out;
}

// ---------------------------------------------------------------- blow-up

BlowupEstimate estimate_blowup_T(const std::vector<RaySample>& ray, const BlowupOptions& opt) {
  BlowupEstimate est;
  est.tau_lo = opt.tau_lo;
  est.tau_hi = opt.tau_hi;
  std::vector<double> tau, y;
  int in_window = 0;
  for (const auto& s : ray) {
    if (s.tau < opt.tau_lo - 1e-12 || s.tau > opt.tau_hi + 1e-12) continue;
    in_window++;
    double a = std::abs(s.r1);
    if (!(a > opt.noise_floor)) continue;
    tau.push_back(s.tau);
    y.push_back(-std::log(a));
  }
  est.samples = int(tau.size());
  if (in_window < 4) throw Error(ErrorCode::insufficient_data, "fewer than 4 ray samples inside the fit window");
  if (tau.empty()) {
    est.T_est = std::numeric_limits<double>::infinity();
    return est;
  }
  if (tau.size() < 4) throw Error(ErrorCode::insufficient_data, "fewer than 4 ray samples above the noise floor");
  // -ln|r1(i tau)| = T/(4 tau^2) + p (-ln tau) + c
  Eigen::MatrixXd Am(tau.size(), 3);
  Eigen::VectorXd b(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    Am(i, 0) = 1.0 / (4.0 * tau[i] * tau[i]);
    Am(i, 1) = -std::log(tau[i]);
    Am(i, 2) = 1.0;
    b[i] = y[i];
  }
  Eigen::VectorXd sol = Am.colPivHouseholderQr().solve(b);
  est.T_est = std::max(0.0, sol[0]);
  // a Gaussian term below the rounding level of every sample is no evidence
  double ymax = b.cwiseAbs().maxCoeff(), tmin = *std::min_element(tau.begin(), tau.end());
  if (est.T_est / (4.0 * tmin * tmin) < 1e-12 * std::max(1.0, ymax)) est.T_est = 0.0;
  est.poly_exponent = sol[1];
  est.residual = (Am * sol - b).cwiseAbs().maxCoeff();
  return est;
}

}  // namespace bsq
