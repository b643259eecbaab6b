// Command-line front end; every operation goes through the C API.
#include <bsq.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

// 1: bad input or usage, 2: the numerics did not deliver
int exit_code(bsq_status s) {
  switch (s) {
    case BSQ_OK: return 0;
    case BSQ_E_NO_CONVERGENCE:
    case BSQ_E_INSTABILITY:
    case BSQ_E_SINGULAR:
    case BSQ_E_NEAR_ZERO:
    case BSQ_E_INTERNAL: return 2;
    default: return 1;
  }
}

struct Failure {
  int code;
};

void check(bsq_status s) {
  if (s == BSQ_OK) return;
  std::fprintf(stderr, "bsq: %s: %s\n", bsq_status_name(s), bsq_last_error());
  throw Failure{exit_code(s)};
}

void require_file(const std::string& p) {
  if (!fs::is_regular_file(p)) {
    std::fprintf(stderr, "bsq: io: no such file: %s\n", p.c_str());
    throw Failure{1};
  }
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      out.push_back(v);
    } catch (const std::exception&) {
      std::fprintf(stderr, "bsq: invalid_argument: bad time value '%s'\n", item.c_str());
      throw Failure{1};
    }
  }
  if (out.empty()) {
    std::fprintf(stderr, "bsq: invalid_argument: empty time list\n");
    throw Failure{1};
  }
  return out;
}

void positive(double v, const char* name) {
  if (!(v > 0.0)) {
    std::fprintf(stderr, "bsq: invalid_argument: %s must be positive\n", name);
    throw Failure{1};
  }
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::fprintf(stderr, "bsq: io: cannot write %s\n", path.c_str());
    throw Failure{1};
  }
}

// -1 to continue, else the exit code
int parse(CLI::App& app, int argc, char** argv) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return -1;
}

// key=value file; flags given on the command line take precedence
void with_config(CLI::App& app) {
  app.set_config("--config", "", "key=value file supplying any of the flags");
  app.allow_config_extras(CLI::config_extras_mode::ignore);
}

// ------------------------------------------------------------------ scatter
struct Raii {
  bsq_initial_data* d = nullptr;
  bsq_reflection* r = nullptr;
  bsq_hm* h = nullptr;
  bsq_asym* a = nullptr;
  bsq_sim* s = nullptr;
  ~Raii() {
    bsq_initial_free(d);
    bsq_reflection_free(r);
    bsq_hm_free(h);
    bsq_asym_free(a);
    bsq_sim_free(s);
  }
};

int run_scatter(int argc, char** argv) {
  CLI::App app{"direct scattering: reflection coefficients on the unit circle and on [0, i]", "bsq scatter"};
  with_config(app);
  std::string input, out;
  double xmax = 0.0, tol;
  int ngrid = 0;
  bsq_sampling plan;
  bsq_sampling_default(&plan);
  plan.n_circle = 2400;
  plan.exclusion = 0.004;
  tol = plan.tol;
  app.add_option("--input", input, "initial data CSV (x,u0,v0)")->required();
  app.add_option("--out", out, "reflection CSV; the ray table goes to <stem>_ray.csv")->required();
  app.add_option("--xmax", xmax, "resample the data onto [-xmax, xmax] (0 keeps its grid)");
  app.add_option("--ngrid", ngrid, "points of the resampled grid");
  app.add_option("--tol", tol, "relative tolerance of the Volterra solver");
  app.add_option("--n_circle", plan.n_circle, "circle samples, multiple of 6")->capture_default_str();
  app.add_option("--exclusion", plan.exclusion, "angular radius skipped around each sixth root of unity")
      ->capture_default_str();
  app.add_option("--n_ray", plan.n_ray, "samples on the segment [0, i]")->capture_default_str();
  app.add_option("--threads", plan.threads, "worker threads (0: all cores)");
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  positive(tol, "tol");
  plan.tol = tol;
  require_file(input);

  Raii g;
  check(bsq_initial_read(input.c_str(), &g.d));
  if (xmax > 0.0 || ngrid > 0) {
    if (!(xmax > 0.0) || ngrid < 16) {
      std::fprintf(stderr, "bsq: invalid_argument: resampling needs both --xmax > 0 and --ngrid >= 16\n");
      return 1;
    }
    bsq_initial_data* r = nullptr;
    check(bsq_initial_resample(g.d, xmax, ngrid, &r));
    bsq_initial_free(g.d);
    g.d = r;
  }
  check(bsq_scatter(g.d, &plan, &g.r));
  check(bsq_reflection_write(g.r, out.c_str()));
  char hash[17];
  check(bsq_initial_hash(g.d, hash));
  int failures = bsq_reflection_failures(g.r);
  nlohmann::ordered_json j;
  j["data_hash"] = hash;
  j["n_grid"] = bsq_initial_size(g.d);
  j["sampling"] = {{"n_circle", plan.n_circle}, {"exclusion", plan.exclusion}, {"n_ray", plan.n_ray},
                   {"tau_min", plan.tau_min},   {"tau_max", plan.tau_max},     {"tol", plan.tol}};
  j["unconverged_samples"] = failures;
  write_text(sibling(out, "_report.json"), j.dump(2) + "\n");
  if (failures > 0) {
    std::fprintf(stderr, "bsq: no_convergence: %d samples did not converge (marked in %s)\n", failures, out.c_str());
    return 2;
  }
  return 0;
}

// ------------------------------------------------------------------ verify
int run_verify(int argc, char** argv) {
  CLI::App app{"check the scattering identities and inequalities on a reflection table", "bsq verify"};
  with_config(app);
  std::string r, report;
  double tol_id = 1e-6, tol_ineq = 1e-8;
  app.add_option("--r", r, "reflection CSV")->required();
  app.add_option("--report", report, "JSON report")->required();
  app.add_option("--tol_identity", tol_id)->capture_default_str();
  app.add_option("--tol_inequality", tol_ineq)->capture_default_str();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  positive(tol_id, "tol_identity");
  positive(tol_ineq, "tol_inequality");
  require_file(r);
  Raii g;
  check(bsq_reflection_read(r.c_str(), &g.r));
  int ok = 0;
  check(bsq_verify(g.r, tol_id, tol_ineq, report.c_str(), &ok));
  if (!ok) {
    std::fprintf(stderr, "bsq: some checks failed, see %s\n", report.c_str());
    return 2;
  }
  return 0;
}

// ------------------------------------------------------------------ asymptote
int run_asymptote(int argc, char** argv) {
  CLI::App app{"evaluate the long-time asymptotic formula on an x grid", "bsq asymptote"};
  with_config(app);
  std::string r, hm, out, times;
  double xmin = 0.0, xmax = 0.0, dx = 0.0;
  bsq_asym_config cfg;
  bsq_asym_config_default(&cfg);
  app.add_option("--r", r, "reflection CSV")->required();
  app.add_option("--hm", hm, "Hastings-McLeod CSV from the painleve command")->required();
  app.add_option("--t", times, "time or comma separated times")->required();
  app.add_option("--xmin", xmin)->required();
  app.add_option("--xmax", xmax)->required();
  app.add_option("--dx", dx)->required();
  app.add_option("--out", out, "output CSV")->required();
  app.add_option("--front_M", cfg.front_M, "front zone half width in units of t^(1/3)")->capture_default_str();
  app.add_option("--far_zeta", cfg.far_zeta, "x/t beyond which u is set to 0")->capture_default_str();
  app.add_option("--t_min", cfg.t_min, "earliest time accepted")->capture_default_str();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  positive(dx, "dx");
  auto ts = parse_times(times);
  require_file(r);
  require_file(hm);
  Raii g;
  check(bsq_reflection_read(r.c_str(), &g.r));
  check(bsq_hm_read(hm.c_str(), &g.h));
  check(bsq_asym_create(g.r, g.h, &cfg, &g.a));
  check(bsq_asym_write(g.a, ts.data(), ts.size(), xmin, xmax, dx, out.c_str()));
  return 0;
}

// ------------------------------------------------------------------ simulate
int run_simulate(int argc, char** argv) {
  CLI::App app{"pseudo-spectral simulation with a filter on the unstable band", "bsq simulate"};
  std::string config, out, initial, times;
  double t_end = 0.0;
  app.add_option("--config", config, "simulation config (key=value)")->required();
  app.add_option("--out", out, "output directory for snapshots")->required();
  app.add_option("--initial", initial, "initial data CSV (overrides the config)");
  app.add_option("--snapshot_times", times, "comma separated times (overrides the config)");
  app.add_option("--t_end", t_end, "final time (default: last snapshot time)");
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  require_file(config);

  bsq_sim_config c;
  bsq_sim_config_default(&c);
  std::vector<double> ts(256);
  size_t nt = ts.size();
  std::vector<char> ip(4096);
  check(bsq_sim_config_read(config.c_str(), &c, ts.data(), &nt, ip.data(), ip.size()));
  if (nt > ts.size()) {
    std::fprintf(stderr, "bsq: invalid_argument: more than %zu snapshot times\n", ts.size());
    return 1;
  }
  ts.resize(nt);
  if (!times.empty()) ts = parse_times(times);
  if (initial.empty()) {
    initial = ip.data();
    // relative paths in the config resolve against the config's directory
    if (!initial.empty() && fs::path(initial).is_relative())
      initial = (fs::path(config).parent_path() / initial).string();
  }
  if (initial.empty()) {
    std::fprintf(stderr, "bsq: invalid_argument: no initial data (set initial= in the config or --initial)\n");
    return 1;
  }
  require_file(initial);
  if (t_end > 0.0) c.t_end = t_end;
  if (!(c.t_end > 0.0))
    for (double t : ts) c.t_end = std::max(c.t_end, t);
  positive(c.t_end, "t_end");

  Raii g;
  check(bsq_initial_read(initial.c_str(), &g.d));
  check(bsq_sim_create(&c, &g.s));
  check(bsq_sim_init_data(g.s, g.d));
  check(bsq_sim_run(g.s, c.t_end, ts.data(), ts.size(), out.c_str()));

  char hash[17];
  check(bsq_initial_hash(g.d, hash));
  nlohmann::ordered_json j;
  j["data_hash"] = hash;
  j["initial"] = initial;
  j["config"] = {{"L", c.L},
                 {"N", c.N},
                 {"dt", c.dt},
                 {"damping", c.damping != 0},
                 {"kappa_c", c.kappa_c},
                 {"p", c.p},
                 {"gamma", c.gamma},
                 {"cancel_growth", c.cancel_growth != 0},
                 {"dealias", c.dealias},
                 {"tail_guard", c.tail_guard},
                 {"sponge_width", c.sponge_width},
                 {"sponge_strength", c.sponge_strength},
                 {"t_end", c.t_end}};
  j["snapshot_times"] = ts;
  j["final_mass"] = bsq_sim_mass(g.s);
  write_text((fs::path(out) / "run.json").string(), j.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------ compare
int run_compare(int argc, char** argv) {
  CLI::App app{"per-sector gaps between simulated snapshots and the asymptotic formula", "bsq compare"};
  with_config(app);
  std::string sim, asym, report;
  app.add_option("--sim", sim, "directory written by simulate")->required();
  app.add_option("--asym", asym, "CSV written by asymptote")->required();
  app.add_option("--report", report, "JSON report; a CSV goes next to it")->required();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  require_file(asym);
  if (!fs::is_directory(sim)) {
    std::fprintf(stderr, "bsq: io: no such directory: %s\n", sim.c_str());
    return 1;
  }
  int slow = 0;
  check(bsq_compare(sim.c_str(), asym.c_str(), report.c_str(), &slow));
  if (slow) std::fprintf(stderr, "bsq: note: slow convergence flagged at the left edge of the front window\n");
  return 0;
}

// ------------------------------------------------------------------ blowup
int run_blowup(int argc, char** argv) {
  CLI::App app{"estimate the blow-up time from the decay of r1 on [0, i]", "bsq blowup"};
  with_config(app);
  std::string ray, report;
  double lo = 0.05, hi = 0.3, floor = 1e-14;
  app.add_option("--ray", ray, "ray CSV (tau,re_r1,im_r1)")->required();
  app.add_option("--report", report, "JSON report")->required();
  app.add_option("--tau_lo", lo)->capture_default_str();
  app.add_option("--tau_hi", hi)->capture_default_str();
  app.add_option("--noise_floor", floor, "samples with |r1| at or below this are ignored")->capture_default_str();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  require_file(ray);
  double T = 0.0;
  check(bsq_blowup(ray.c_str(), lo, hi, floor, report.c_str(), &T));
  std::printf("T_est = %.17g\n", T);
  return 0;
}

// ------------------------------------------------------------------ painleve
int run_painleve(int argc, char** argv) {
  CLI::App app{"Hastings-McLeod solution of Painleve II", "bsq painleve"};
  with_config(app);
  double ymax = 10.0;
  int n = 4001;
  std::string out;
  app.add_option("--ymax", ymax, "half length of the interval")->capture_default_str();
  app.add_option("--n", n, "grid points")->capture_default_str();
  app.add_option("--out", out, "output CSV")->required();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  positive(ymax, "ymax");
  Raii g;
  check(bsq_painleve(ymax, n, &g.h));
  check(bsq_hm_write(g.h, out.c_str()));
  double res = 0.0;
  check(bsq_hm_diagnostics(g.h, &res, nullptr));
  std::printf("ode_residual = %.3e\n", res);
  return 0;
}

// ------------------------------------------------------------------ initdata
int run_initdata(int argc, char** argv) {
  CLI::App app{"write sample initial data", "bsq initdata"};
  with_config(app);
  std::string kind = "gaussian", out;
  double amp = -0.05, width = 0.02, xmax = 60.0;
  int n = 4096;
  app.add_option("--kind", kind, "gaussian (amp e^{-width x^2}, u1 = 0) or compact")
      ->check(CLI::IsMember({"gaussian", "compact"}))
      ->capture_default_str();
  app.add_option("--amp", amp)->capture_default_str();
  app.add_option("--width", width)->capture_default_str();
  app.add_option("--xmax", xmax)->capture_default_str();
  app.add_option("--n", n)->capture_default_str();
  app.add_option("--out", out)->required();
  if (int rc = parse(app, argc, argv); rc >= 0) return rc;
  Raii g;
  if (kind == "compact") check(bsq_initial_compact_example(n, &g.d));
  else check(bsq_initial_gaussian(amp, width, xmax, n, &g.d));
  check(bsq_initial_write(g.d, out.c_str()));
  return 0;
}

void usage() {
  std::printf(
      "usage: bsq <command> [options]   (bsq <command> --help for details)\n\n"
      "  initdata   write sample initial data\n"
      "  scatter    reflection coefficients from initial data\n"
      "  verify     identity and inequality checks on a reflection table\n"
      "  painleve   Hastings-McLeod table\n"
      "  asymptote  long-time asymptotic u(x, t)\n"
      "  simulate   direct numerical simulation\n"
      "  compare    simulation vs asymptotics by sector\n"
      "  blowup     blow-up time estimate from the ray table\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
    usage();
    return argc < 2 ? 1 : 0;
  }
  if (std::string(argv[1]) == "--version") {
    std::printf("bsq %s\n", bsq_version());
    return 0;
  }
  std::string cmd = argv[1];
  int sub_argc = argc - 1;
  char** sub_argv = argv + 1;
  try {
    if (cmd == "scatter") return run_scatter(sub_argc, sub_argv);
    if (cmd == "verify") return run_verify(sub_argc, sub_argv);
    if (cmd == "asymptote") return run_asymptote(sub_argc, sub_argv);
    if (cmd == "simulate") return run_simulate(sub_argc, sub_argv);
    if (cmd == "compare") return run_compare(sub_argc, sub_argv);
    if (cmd == "blowup") return run_blowup(sub_argc, sub_argv);
    if (cmd == "painleve") return run_painleve(sub_argc, sub_argv);
    if (cmd == "initdata") return run_initdata(sub_argc, sub_argv);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bsq: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "bsq: unknown command '%s'\n", cmd.c_str());
  usage();
  return 1;
}
