#include "bsq.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>

#include "bsq/asymptotics.hpp"
#include "bsq/circle_data.hpp"
#include "bsq/compare.hpp"
#include "bsq/io.hpp"
#include "bsq/painleve.hpp"
#include "bsq/scattering.hpp"
#include "bsq/simulator.hpp"
#include "json.hpp"

using namespace bsq;
namespace fs = std::filesystem;

struct bsq_initial_data {
  InitialData d;
};
struct bsq_reflection {
  ReflectionTable t;
};
struct bsq_hm {
  HastingsMcLeod h;
};
struct bsq_asym {
  ReflectionTable table;
  std::unique_ptr<CircleData> cd;
  HastingsMcLeod hm;
  AsymptoticConfig cfg;
};
struct bsq_sim {
  std::unique_ptr<Simulator> s;
  std::string data_hash;
};

namespace {

thread_local std::string last_error;

template <class F>
bsq_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return BSQ_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<bsq_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BSQ_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BSQ_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

HastingsMcLeod copy_hm(const HastingsMcLeod& h) {
  HastingsMcLeod c;
  c.y = h.y;
  c.u = h.u;
  c.u_prime = h.u_prime;
  c.converged = h.converged;
  c.newton_iterations = h.newton_iterations;
  c.newton_residual = h.newton_residual;
  c.build_interpolant();
  return c;
}

SimConfig to_cpp(const bsq_sim_config& c) {
  SimConfig s;
  s.L = c.L;
  s.N = c.N;
  s.dt = c.dt;
  s.damping = c.damping != 0;
  s.kappa_c = c.kappa_c;
  s.p = c.p;
  s.gamma = c.gamma;
  s.cancel_growth = c.cancel_growth != 0;
  s.dealias = c.dealias;
  s.tail_guard = c.tail_guard;
  s.sponge_width = c.sponge_width;
  s.sponge_strength = c.sponge_strength;
  s.mean_tol = c.mean_tol;
  s.t_end = c.t_end;
  return s;
}

void from_cpp(const SimConfig& s, bsq_sim_config& c) {
  c.L = s.L;
  c.N = s.N;
  c.dt = s.dt;
  c.damping = s.damping;
  c.kappa_c = s.kappa_c;
  c.p = s.p;
  c.gamma = s.gamma;
  c.cancel_growth = s.cancel_growth;
  c.dealias = s.dealias;
  c.tail_guard = s.tail_guard;
  c.sponge_width = s.sponge_width;
  c.sponge_strength = s.sponge_strength;
  c.mean_tol = s.mean_tol;
  c.t_end = s.t_end;
}

}  // namespace

extern "C" {

const char* bsq_last_error(void) { return last_error.c_str(); }

const char* bsq_status_name(bsq_status s) {
  switch (s) {
    case BSQ_OK: return "ok";
    case BSQ_E_DOMAIN: return "domain";
    case BSQ_E_SINGULAR: return "singular";
    case BSQ_E_NO_CONVERGENCE: return "no_convergence";
    case BSQ_E_NEAR_ZERO: return "near_zero";
    case BSQ_E_IO: return "io";
    case BSQ_E_INCONSISTENT: return "inconsistent";
    case BSQ_E_INSUFFICIENT_DATA: return "insufficient_data";
    case BSQ_E_INSTABILITY: return "instability";
    case BSQ_E_INVALID_ARGUMENT: return "invalid_argument";
    case BSQ_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* bsq_version(void) { return "1.0.0"; }

// ---------------------------------------------------------------- initial data

bsq_status bsq_initial_read(const char* path, bsq_initial_data** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto d = std::make_unique<bsq_initial_data>();
    d->d = io::read_initial_data(path);
    *out = d.release();
  });
}

bsq_status bsq_initial_from_arrays(const double* x, const double* u0, const double* v0, size_t n,
                                   bsq_initial_data** out) {
  return guard([&] {
    need(x, "x");
    need(u0, "u0");
    need(v0, "v0");
    need(out, "out");
    auto d = std::make_unique<bsq_initial_data>();
    d->d.x.assign(x, x + n);
    d->d.u0.assign(u0, u0 + n);
    d->d.v0.assign(v0, v0 + n);
    d->d.validate();
    *out = d.release();
  });
}

bsq_status bsq_initial_gaussian(double amp, double width, double xmax, int n, bsq_initial_data** out) {
  return guard([&] {
    need(out, "out");
    auto d = std::make_unique<bsq_initial_data>();
    d->d = gaussian_data(amp, width, xmax, n);
    *out = d.release();
  });
}

bsq_status bsq_initial_compact_example(int n, bsq_initial_data** out) {
  return guard([&] {
    need(out, "out");
    auto d = std::make_unique<bsq_initial_data>();
    d->d = compact_example_data(n);
    *out = d.release();
  });
}

bsq_status bsq_initial_resample(const bsq_initial_data* d, double xmax, int n, bsq_initial_data** out) {
  return guard([&] {
    need(d, "data");
    need(out, "out");
    auto r = std::make_unique<bsq_initial_data>();
    r->d = resample(d->d, xmax, n);
    *out = r.release();
  });
}

bsq_status bsq_initial_write(const bsq_initial_data* d, const char* path) {
  return guard([&] {
    need(d, "data");
    need(path, "path");
    io::write_file(path, io::initial_data_csv(d->d));
  });
}

size_t bsq_initial_size(const bsq_initial_data* d) { return d ? d->d.size() : 0; }

bsq_status bsq_initial_arrays(const bsq_initial_data* d, double* x, double* u0, double* v0) {
  return guard([&] {
    need(d, "data");
    if (x) std::copy(d->d.x.begin(), d->d.x.end(), x);
    if (u0) std::copy(d->d.u0.begin(), d->d.u0.end(), u0);
    if (v0) std::copy(d->d.v0.begin(), d->d.v0.end(), v0);
  });
}

bsq_status bsq_initial_hash(const bsq_initial_data* d, char out[17]) {
  return guard([&] {
    need(d, "data");
    need(out, "out");
    std::string h = io::data_hash(d->d);
    std::memcpy(out, h.c_str(), 17);
  });
}

void bsq_initial_free(bsq_initial_data* d) { delete d; }

// ---------------------------------------------------------------- reflection

void bsq_sampling_default(bsq_sampling* s) {
  if (!s) return;
  SamplingPlan p;
  VolterraOptions v;
  s->n_circle = p.n_circle;
  s->exclusion = p.exclusion;
  s->n_ray = p.n_ray;
  s->tau_min = p.tau_min;
  s->tau_max = p.tau_max;
  s->tol = v.tol;
  s->threads = p.threads;
}

bsq_status bsq_scatter(const bsq_initial_data* d, const bsq_sampling* s, bsq_reflection** out) {
  return guard([&] {
    need(d, "data");
    need(out, "out");
    bsq_sampling def;
    bsq_sampling_default(&def);
    if (!s) s = &def;
    if (!(s->tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    SamplingPlan p;
    p.n_circle = s->n_circle;
    p.exclusion = s->exclusion;
    p.n_ray = s->n_ray;
    p.tau_min = s->tau_min;
    p.tau_max = s->tau_max;
    p.threads = s->threads;
    VolterraOptions v;
    v.tol = s->tol;
    d->d.validate();
    auto r = std::make_unique<bsq_reflection>();
    r->t = reflection_coefficients(d->d, p, v);
    r->t.data_hash = io::data_hash(d->d);
    *out = r.release();
  });
}

int bsq_reflection_failures(const bsq_reflection* r) {
  if (!r) return -1;
  int n = 0;
  for (auto& c : r->t.circle)
    if (!c.excluded && !c.converged) n++;
  for (auto& c : r->t.ray)
    if (!c.converged) n++;
  return n;
}

bsq_status bsq_reflection_write(const bsq_reflection* r, const char* path) {
  return guard([&] {
    need(r, "reflection");
    need(path, "path");
    io::write_file(path, io::reflection_csv(r->t));
    io::write_file(io::ray_path_for(path), io::ray_csv(r->t));
  });
}

bsq_status bsq_reflection_read(const char* path, bsq_reflection** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto r = std::make_unique<bsq_reflection>();
    r->t = io::read_reflection(path);
    *out = r.release();
  });
}

size_t bsq_reflection_size(const bsq_reflection* r) { return r ? r->t.circle.size() : 0; }

bsq_status bsq_reflection_sample(const bsq_reflection* r, size_t i, double* theta, double r1[2], double r2[2]) {
  return guard([&] {
    need(r, "reflection");
    if (i >= r->t.circle.size()) throw Error(ErrorCode::invalid_argument, "sample index out of range");
    auto& c = r->t.circle[i];
    if (theta) *theta = c.theta;
    if (r1) {
      r1[0] = c.r1.real();
      r1[1] = c.r1.imag();
    }
    if (r2) {
      r2[0] = c.r2.real();
      r2[1] = c.r2.imag();
    }
  });
}

void bsq_reflection_free(bsq_reflection* r) { delete r; }

bsq_status bsq_verify(const bsq_reflection* r, double tol_identity, double tol_inequality, const char* report_path,
                      int* all_pass) {
  return guard([&] {
    need(r, "reflection");
    if (!(tol_identity > 0.0) || !(tol_inequality > 0.0))
      throw Error(ErrorCode::invalid_argument, "tolerances must be positive");
    VerifyTolerances tol;
    tol.identity = tol_identity;
    tol.inequality = tol_inequality;
    auto checks = verify_identities(r->t, tol);
    bool ok = true;
    for (auto& c : checks) ok = ok && c.pass;
    if (all_pass) *all_pass = ok;
    if (report_path) io::write_file(report_path, io::verify_json(checks, r->t, tol));
  });
}

bsq_status bsq_blowup(const char* ray_path, double tau_lo, double tau_hi, double noise_floor, const char* report_path,
                      double* T_est) {
  return guard([&] {
    need(ray_path, "ray path");
    io::Meta meta;
    auto ray = io::parse_ray(io::read_file(ray_path), ray_path, &meta);
    BlowupOptions o;
    o.tau_lo = tau_lo;
    o.tau_hi = tau_hi;
    o.noise_floor = noise_floor;
    auto e = estimate_blowup_T(ray, o);
    if (T_est) *T_est = e.T_est;
    if (report_path) {
      nlohmann::ordered_json j;
      if (std::isinf(e.T_est)) j["T_est"] = "inf";
      else j["T_est"] = e.T_est;
      j["poly_exponent"] = e.poly_exponent;
      j["fit_residual"] = e.residual;
      j["samples"] = e.samples;
      j["tau_window"] = {e.tau_lo, e.tau_hi};
      j["noise_floor"] = noise_floor;
      j["data_hash"] = meta.count("data_hash") ? meta.at("data_hash") : "";
      io::write_file(report_path, j.dump(2) + "\n");
    }
  });
}

// ---------------------------------------------------------------- Hastings-McLeod

bsq_status bsq_painleve(double y_max, int n, bsq_hm** out) {
  return guard([&] {
    need(out, "out");
    auto h = std::make_unique<bsq_hm>();
    h->h = solve_hastings_mcleod(y_max, n);
    if (!h->h.converged)
      throw Error(ErrorCode::no_convergence,
                  "Newton iteration stalled at residual " + io::fmt(h->h.newton_residual));
    *out = h.release();
  });
}

bsq_status bsq_hm_read(const char* path, bsq_hm** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto t = io::parse_csv(io::read_file(path), path);
    int cy = t.column("y"), cu = t.column("u"), cp = t.column("u_prime");
    if (cy < 0 || cu < 0 || cp < 0) throw Error(ErrorCode::io, std::string(path) + ": expected columns y,u,u_prime");
    auto h = std::make_unique<bsq_hm>();
    for (auto& r : t.rows) {
      h->h.y.push_back(r[cy]);
      h->h.u.push_back(r[cu]);
      h->h.u_prime.push_back(r[cp]);
    }
    if (h->h.y.size() < 16) throw Error(ErrorCode::io, std::string(path) + ": table too short");
    h->h.converged = true;
    h->h.build_interpolant();
    *out = h.release();
  });
}

bsq_status bsq_hm_write(const bsq_hm* h, const char* path) {
  return guard([&] {
    need(h, "hm");
    need(path, "path");
    io::write_file(path, io::hm_csv(h->h, {{"y_max", io::fmt(h->h.y_max())},
                                           {"n", std::to_string(h->h.y.size())},
                                           {"ode_residual", io::fmt(h->h.ode_residual())}}));
  });
}

bsq_status bsq_hm_eval(const bsq_hm* h, double y, double* u, double* u_prime, double* u_P) {
  return guard([&] {
    need(h, "hm");
    if (u) *u = h->h.u_at(y);
    if (u_prime) *u_prime = h->h.u_prime_at(y);
    if (u_P) *u_P = eval_uP(h->h, y);
  });
}

bsq_status bsq_hm_diagnostics(const bsq_hm* h, double* ode_residual, int* converged) {
  return guard([&] {
    need(h, "hm");
    if (ode_residual) *ode_residual = h->h.ode_residual();
    if (converged) *converged = h->h.converged;
  });
}

void bsq_hm_free(bsq_hm* h) { delete h; }

// ---------------------------------------------------------------- asymptotics

void bsq_asym_config_default(bsq_asym_config* c) {
  if (!c) return;
  AsymptoticConfig a;
  c->t_min = a.t_min;
  c->front_M = a.front_M;
  c->far_zeta = a.far_zeta;
  c->edge_band = a.edge_band;
}

bsq_status bsq_asym_create(const bsq_reflection* r, const bsq_hm* h, const bsq_asym_config* c, bsq_asym** out) {
  return guard([&] {
    need(r, "reflection");
    need(h, "hm");
    need(out, "out");
    auto a = std::make_unique<bsq_asym>();
    a->table = r->t;
    a->cd = std::make_unique<CircleData>(a->table);
    a->hm = copy_hm(h->h);
    if (c) {
      a->cfg.t_min = c->t_min;
      a->cfg.front_M = c->front_M;
      a->cfg.far_zeta = c->far_zeta;
      a->cfg.edge_band = c->edge_band;
    }
    *out = a.release();
  });
}

bsq_status bsq_asym_eval(const bsq_asym* a, double x, double t, double* u, int* sector, int* extrapolated) {
  return guard([&] {
    need(a, "asym");
    auto v = u_asymptotic(*a->cd, a->hm, x, t, a->cfg);
    if (u) *u = v.u;
    if (sector) *sector = int(v.sector) + 1;
    if (extrapolated) *extrapolated = v.extrapolated;
  });
}

bsq_status bsq_asym_write(const bsq_asym* a, const double* times, size_t n_times, double xmin, double xmax, double dx,
                          const char* path) {
  return guard([&] {
    need(a, "asym");
    need(times, "times");
    need(path, "path");
    if (!(dx > 0.0) || !(xmax >= xmin)) throw Error(ErrorCode::invalid_argument, "need dx > 0 and xmax >= xmin");
    std::vector<io::AsymptoteRow> rows;
    long n = std::lround(std::floor((xmax - xmin) / dx + 1e-9)) + 1;
    for (size_t k = 0; k < n_times; ++k)
      for (long i = 0; i < n; ++i) {
        double x = xmin + dx * double(i);
        auto v = u_asymptotic(*a->cd, a->hm, x, times[k], a->cfg);
        rows.push_back({x, times[k], v.u, v.sector, v.extrapolated});
      }
    io::Meta m{{"data_hash", a->table.data_hash},
               {"front_M", io::fmt(a->cfg.front_M)},
               {"far_zeta", io::fmt(a->cfg.far_zeta)},
               {"edge_band", io::fmt(a->cfg.edge_band)},
               {"n_circle", std::to_string(a->table.circle.size())},
               {"exclusion", io::fmt(a->table.plan.exclusion)},
               {"hm_y_max", io::fmt(a->hm.y_max())},
               {"quad_epsrel", io::fmt(a->cfg.quad.epsrel)}};
    io::write_file(path, io::asymptote_csv(rows, m));
  });
}

void bsq_asym_free(bsq_asym* a) { delete a; }

// ---------------------------------------------------------------- simulation

void bsq_sim_config_default(bsq_sim_config* c) {
  if (c) from_cpp(SimConfig{}, *c);
}

bsq_status bsq_sim_config_read(const char* path, bsq_sim_config* c, double* times, size_t* n_times,
                               char* initial_path, size_t initial_cap) {
  return guard([&] {
    need(path, "path");
    need(c, "config");
    auto kv = io::parse_key_values(io::read_file(path), path);
    SimConfig s = to_cpp(*c);
    io::apply_sim_config(kv, s);
    from_cpp(s, *c);
    if (n_times) {
      std::size_t cap = *n_times;
      *n_times = s.snapshot_times.size();
      if (times)
        for (std::size_t i = 0; i < std::min(cap, s.snapshot_times.size()); ++i) times[i] = s.snapshot_times[i];
    }
    if (initial_path && initial_cap > 0) {
      std::string ip = kv.count("initial") ? kv.at("initial") : "";
      if (ip.size() + 1 > initial_cap) throw Error(ErrorCode::invalid_argument, "initial path buffer too small");
      std::memcpy(initial_path, ip.c_str(), ip.size() + 1);
    }
  });
}

bsq_status bsq_sim_create(const bsq_sim_config* c, bsq_sim** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    auto s = std::make_unique<bsq_sim>();
    s->s = std::make_unique<Simulator>(to_cpp(*c));
    *out = s.release();
  });
}

size_t bsq_sim_size(const bsq_sim* s) { return s ? size_t(s->s->config().N) : 0; }

bsq_status bsq_sim_grid(const bsq_sim* s, double* x) {
  return guard([&] {
    need(s, "sim");
    need(x, "x");
    auto g = s->s->grid();
    std::copy(g.begin(), g.end(), x);
  });
}

bsq_status bsq_sim_init(bsq_sim* s, const double* u0, const double* u1) {
  return guard([&] {
    need(s, "sim");
    need(u0, "u0");
    need(u1, "u1");
    std::size_t n = s->s->config().N;
    s->s->init(std::vector<double>(u0, u0 + n), std::vector<double>(u1, u1 + n));
    s->data_hash.clear();
  });
}

bsq_status bsq_sim_init_data(bsq_sim* s, const bsq_initial_data* d) {
  return guard([&] {
    need(s, "sim");
    need(d, "data");
    d->d.validate();
    auto x = s->s->grid();
    double L = s->s->config().L;
    if (d->d.x.front() < -L || d->d.x.back() > L)
      throw Error(ErrorCode::invalid_argument, "initial data extends beyond the periodic box");
    s->s->init_fields(sample_field(d->d, d->d.u0, x), sample_field(d->d, d->d.v0, x));
    s->data_hash = io::data_hash(d->d);
  });
}

bsq_status bsq_sim_step(bsq_sim* s, int n_steps) {
  return guard([&] {
    need(s, "sim");
    for (int i = 0; i < n_steps; ++i) s->s->step();
  });
}

bsq_status bsq_sim_fields(const bsq_sim* s, double* t, double* u, double* v) {
  return guard([&] {
    need(s, "sim");
    auto sn = s->s->snapshot();
    if (t) *t = sn.t;
    if (u) std::copy(sn.u.begin(), sn.u.end(), u);
    if (v) std::copy(sn.v.begin(), sn.v.end(), v);
  });
}

double bsq_sim_mass(const bsq_sim* s) { return s ? s->s->mass() : std::numeric_limits<double>::quiet_NaN(); }

bsq_status bsq_sim_run(bsq_sim* s, double t_end, const double* times, size_t n_times, const char* out_dir) {
  return guard([&] {
    need(s, "sim");
    std::vector<double> ts;
    if (times) ts.assign(times, times + n_times);
    if (ts.empty()) ts.push_back(t_end);
    auto snaps = s->s->run(t_end, ts);
    if (!out_dir) return;
    fs::create_directories(out_dir);
    io::Meta meta = io::sim_config_meta(s->s->config());
    meta.erase("t_end");
    meta.erase("snapshot_times");
    meta["data_hash"] = s->data_hash;
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
      meta["requested_t"] = io::fmt(ts[k]);
      io::write_file((fs::path(out_dir) / name).string(), io::snapshot_csv(snaps[k], meta));
    }
  });
}

void bsq_sim_free(bsq_sim* s) { delete s; }

// ---------------------------------------------------------------- comparison

bsq_status bsq_compare(const char* sim_dir, const char* asym_path, const char* report_path, int* slow_front_flag) {
  return guard([&] {
    need(sim_dir, "sim dir");
    need(asym_path, "asym path");
    if (!fs::is_directory(sim_dir)) throw Error(ErrorCode::io, std::string("not a directory: ") + sim_dir);
    io::Meta am;
    auto rows = io::parse_asymptote(io::read_file(asym_path), asym_path, &am);
    std::string hash = am.count("data_hash") ? am.at("data_hash") : "";
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(sim_dir))
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<CompareSlice> slices;
    for (auto& f : files) {
      io::Meta sm;
      CompareSlice sl;
      sl.sim = io::parse_snapshot(io::read_file(f.string()), f.string(), &sm);
      std::string sh = sm.count("data_hash") ? sm.at("data_hash") : "";
      if (sh != hash)
        throw Error(ErrorCode::inconsistent, "data hash mismatch: " + f.string() + " has '" + sh + "', " +
                                                 asym_path + " has '" + hash + "'");
      for (auto& r : rows)
        if (std::abs(r.t - sl.sim.t) <= 1e-9 * std::max(1.0, sl.sim.t)) sl.asym.push_back(r);
      if (!sl.asym.empty()) slices.push_back(std::move(sl));
    }
    if (slices.empty()) throw Error(ErrorCode::inconsistent, "no snapshot time matches a time in the asymptote file");
    auto rep = compare_slices(slices);
    rep.data_hash = hash;
    bool slow = false;
    for (auto& m : rep.windows) slow = slow || m.slow_convergence;
    if (slow_front_flag) *slow_front_flag = slow;
    if (report_path) {
      io::write_file(report_path, compare_json(rep));
      fs::path p(report_path);
      io::write_file((p.parent_path() / (p.stem().string() + ".csv")).string(), compare_csv(rep));
    }
  });
}

}  // extern "C"
