#include "bsq/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bsq::io {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

double parse_double(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  if (t.empty()) throw Error(ErrorCode::io, where + ": empty number");
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') throw Error(ErrorCode::io, where + ": cannot parse '" + t + "' as a number");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  return -1;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq != std::string::npos) t.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::io, origin + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(t.header.size()) + " columns, found " +
                                     std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto& c : cells) row.push_back(parse_double(c, origin + ":" + std::to_string(lineno)));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorCode::io, origin + ": no header line");
  return t;
}

std::string meta_lines(const Meta& m) {
  std::string s;
  for (auto& [k, v] : m) s += "# " + k + "=" + v + "\n";
  return s;
}

namespace {

std::vector<int> require(const CsvTable& t, const std::vector<std::string>& names, const std::string& origin) {
  std::vector<int> idx;
  for (auto& n : names) {
    int c = t.column(n);
    if (c < 0) throw Error(ErrorCode::io, origin + ": missing column '" + n + "'");
    idx.push_back(c);
  }
  return idx;
}

}  // namespace

// ---------------------------------------------------------------- initial data

std::string initial_data_csv(const InitialData& d) {
  std::string s = "x,u0,v0\n";
  for (std::size_t i = 0; i < d.x.size(); ++i) s += fmt(d.x[i]) + "," + fmt(d.u0[i]) + "," + fmt(d.v0[i]) + "\n";
  return s;
}

InitialData parse_initial_data(const std::string& text, const std::string& origin) {
  auto t = parse_csv(text, origin);
  auto c = require(t, {"x", "u0", "v0"}, origin);
  InitialData d;
  for (auto& r : t.rows) {
    d.x.push_back(r[c[0]]);
    d.u0.push_back(r[c[1]]);
    d.v0.push_back(r[c[2]]);
  }
  if (d.x.size() < 8) throw Error(ErrorCode::io, origin + ": fewer than 8 grid points");
  double h = (d.x.back() - d.x.front()) / double(d.x.size() - 1);
  for (std::size_t i = 1; i < d.x.size(); ++i)
    if (std::abs((d.x[i] - d.x[i - 1]) - h) > 1e-9 * std::abs(h))
      throw Error(ErrorCode::io, origin + ": grid spacing not uniform at row " + std::to_string(i + 1));
  return d;
}

InitialData read_initial_data(const std::string& path) { return parse_initial_data(read_file(path), path); }

std::string data_hash(const InitialData& d) { return hash_hex(fnv1a64(initial_data_csv(d))); }

// ---------------------------------------------------------------- reflection

std::string reflection_csv(const ReflectionTable& t) {
  Meta m{{"n_circle", std::to_string(t.plan.n_circle)},
         {"exclusion", fmt(t.plan.exclusion)},
         {"n_grid", std::to_string(t.n_grid)},
         {"x_min", fmt(t.x_min)},
         {"x_max", fmt(t.x_max)},
         {"data_hash", t.data_hash}};
  std::string s = meta_lines(m) + "theta,re_r1,im_r1,re_r2,im_r2,converged,re_s11,im_s11\n";
  for (auto& c : t.circle)
    s += fmt(c.theta) + "," + fmt(c.r1.real()) + "," + fmt(c.r1.imag()) + "," + fmt(c.r2.real()) + "," +
         fmt(c.r2.imag()) + "," + (c.converged ? "1" : "0") + "," + fmt(c.s11.real()) + "," + fmt(c.s11.imag()) + "\n";
  return s;
}

std::string ray_csv(const ReflectionTable& t) {
  Meta m{{"n_ray", std::to_string(t.plan.n_ray)},
         {"tau_min", fmt(t.plan.tau_min)},
         {"tau_max", fmt(t.plan.tau_max)},
         {"data_hash", t.data_hash}};
  std::string s = meta_lines(m) + "tau,re_r1,im_r1\n";
  for (auto& r : t.ray) s += fmt(r.tau) + "," + fmt(r.r1.real()) + "," + fmt(r.r1.imag()) + "\n";
  return s;
}

std::string ray_path_for(const std::string& circle_path) {
  auto dot = circle_path.rfind('.');
  auto slash = circle_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return circle_path + "_ray.csv";
  return circle_path.substr(0, dot) + "_ray" + circle_path.substr(dot);
}

std::vector<RaySample> parse_ray(const std::string& text, const std::string& origin, Meta* meta) {
  auto t = parse_csv(text, origin);
  auto c = require(t, {"tau", "re_r1", "im_r1"}, origin);
  std::vector<RaySample> out;
  for (auto& r : t.rows) {
    RaySample s;
    s.tau = r[c[0]];
    s.r1 = {r[c[1]], r[c[2]]};
    s.converged = std::isfinite(s.r1.real());
    out.push_back(s);
  }
  if (meta) *meta = t.meta;
  return out;
}

ReflectionTable parse_reflection(const std::string& circle_text, const std::string& ray_text,
                                 const std::string& origin) {
  auto t = parse_csv(circle_text, origin);
  auto c = require(t, {"theta", "re_r1", "im_r1", "re_r2", "im_r2", "converged"}, origin);
  int s_re = t.column("re_s11"), s_im = t.column("im_s11");
  ReflectionTable tab;
  auto get = [&](const char* k, double def) {
    auto it = t.meta.find(k);
    return it == t.meta.end() ? def : parse_double(it->second, origin + " meta " + k);
  };
  tab.plan.n_circle = int(t.rows.size());
  tab.plan.exclusion = get("exclusion", 0.0);
  tab.n_grid = int(get("n_grid", 0));
  tab.x_min = get("x_min", 0.0);
  tab.x_max = get("x_max", 0.0);
  if (t.meta.count("data_hash")) tab.data_hash = t.meta.at("data_hash");
  for (auto& r : t.rows) {
    CircleSample s;
    s.theta = r[c[0]];
    s.r1 = {r[c[1]], r[c[2]]};
    s.r2 = {r[c[3]], r[c[4]]};
    s.converged = r[c[5]] != 0.0;
    s.excluded = in_exclusion(s.theta, tab.plan.exclusion);
    if (s_re >= 0 && s_im >= 0) s.s11 = {r[s_re], r[s_im]};
    if (s.excluded) s.status = "excluded";
    else if (!s.converged) s.status = "not_converged";
    tab.circle.push_back(s);
  }
  if (!ray_text.empty()) {
    Meta rm;
    tab.ray = parse_ray(ray_text, origin + " (ray)", &rm);
    tab.plan.n_ray = int(tab.ray.size());
  }
  return tab;
}

ReflectionTable read_reflection(const std::string& circle_path) {
  std::string ray;
  std::string rp = ray_path_for(circle_path);
  if (std::ifstream(rp)) ray = read_file(rp);
  return parse_reflection(read_file(circle_path), ray, circle_path);
}

std::string verify_json(const std::vector<CheckResult>& checks, const ReflectionTable& t, const VerifyTolerances& tol) {
  nlohmann::ordered_json j;
  j["data_hash"] = t.data_hash;
  j["sampling"] = {{"n_circle", t.plan.n_circle}, {"exclusion", t.plan.exclusion}, {"n_grid", t.n_grid}};
  j["tolerances"] = {{"identity", tol.identity}, {"inequality", tol.inequality}, {"imag", tol.imag}};
  auto arr = nlohmann::ordered_json::array();
  bool all = true;
  for (auto& c : checks) {
    nlohmann::ordered_json o;
    o["name"] = c.name;
    o["max_residual"] = c.max_residual;
    o["tolerance"] = c.tolerance;
    o["pass"] = c.pass;
    o["samples"] = c.samples;
    if (!c.note.empty()) o["note"] = c.note;
    arr.push_back(o);
    all = all && c.pass;
  }
  j["checks"] = arr;
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- asymptotes

Sector parse_sector(const std::string& s) {
  for (Sector v : {Sector::I, Sector::II, Sector::III, Sector::IV, Sector::V})
    if (s == sector_name(v)) return v;
  throw Error(ErrorCode::io, "unknown sector '" + s + "'");
}

std::string asymptote_csv(const std::vector<AsymptoteRow>& rows, const Meta& meta) {
  std::string s = meta_lines(meta) + "x,t,u_asym,sector,extrapolated\n";
  for (auto& r : rows)
    s += fmt(r.x) + "," + fmt(r.t) + "," + fmt(r.u) + "," + sector_name(r.sector) + "," +
         (r.extrapolated ? "1" : "0") + "\n";
  return s;
}

std::vector<AsymptoteRow> parse_asymptote(const std::string& text, const std::string& origin, Meta* meta) {
  // the sector column is text, so this file bypasses the numeric reader
  std::vector<AsymptoteRow> out;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  int lineno = 0;
  Meta m;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq != std::string::npos) m[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    auto cells = split(line, ',');
    if (!header) {
      if (cells != std::vector<std::string>{"x", "t", "u_asym", "sector", "extrapolated"})
        throw Error(ErrorCode::io, origin + ": unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::string where = origin + ":" + std::to_string(lineno);
    if (cells.size() != 5) throw Error(ErrorCode::io, where + ": expected 5 columns");
    AsymptoteRow r;
    r.x = parse_double(cells[0], where);
    r.t = parse_double(cells[1], where);
    r.u = parse_double(cells[2], where);
    r.sector = parse_sector(cells[3]);
    r.extrapolated = parse_double(cells[4], where) != 0.0;
    out.push_back(r);
  }
  if (!header) throw Error(ErrorCode::io, origin + ": no header line");
  if (meta) *meta = m;
  return out;
}

std::string hm_csv(const HastingsMcLeod& hm, const Meta& meta) {
  std::string s = meta_lines(meta) + "y,u,u_prime,u_P\n";
  for (std::size_t i = 0; i < hm.y.size(); ++i)
    s += fmt(hm.y[i]) + "," + fmt(hm.u[i]) + "," + fmt(hm.u_prime[i]) + "," +
         fmt(eval_uP(hm, hm.y[i])) + "\n";
  return s;
}

// ---------------------------------------------------------------- snapshots

std::string snapshot_csv(const FieldSnapshot& sn, const Meta& meta) {
  std::string s = "# t=" + fmt(sn.t) + "\n" + meta_lines(meta) + "x,u,v\n";
  for (std::size_t i = 0; i < sn.x.size(); ++i) s += fmt(sn.x[i]) + "," + fmt(sn.u[i]) + "," + fmt(sn.v[i]) + "\n";
  return s;
}

FieldSnapshot parse_snapshot(const std::string& text, const std::string& origin, Meta* meta) {
  auto t = parse_csv(text, origin);
  auto c = require(t, {"x", "u", "v"}, origin);
  if (!t.meta.count("t")) throw Error(ErrorCode::io, origin + ": missing '# t=' header");
  FieldSnapshot s;
  s.t = parse_double(t.meta.at("t"), origin + " meta t");
  for (auto& r : t.rows) {
    s.x.push_back(r[c[0]]);
    s.u.push_back(r[c[1]]);
    s.v.push_back(r[c[2]]);
  }
  if (meta) *meta = t.meta;
  return s;
}

// ---------------------------------------------------------------- key=value

Meta parse_key_values(const std::string& text, const std::string& origin) {
  Meta m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::io, origin + ":" + std::to_string(lineno) + ": expected key=value");
    m[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return m;
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (auto& c : split(s, ',')) out.push_back(parse_double(c, where));
  return out;
}

namespace {

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw Error(ErrorCode::io, where + ": expected a boolean, got '" + s + "'");
}

}  // namespace

std::vector<std::string> apply_sim_config(const Meta& kv, SimConfig& cfg) {
  std::vector<std::string> unknown;
  for (auto& [k, v] : kv) {
    std::string w = "config key " + k;
    if (k == "L") cfg.L = parse_double(v, w);
    else if (k == "N") cfg.N = int(parse_double(v, w));
    else if (k == "dt") cfg.dt = parse_double(v, w);
    else if (k == "damping") cfg.damping = parse_bool(v, w);
    else if (k == "kappa_c") cfg.kappa_c = parse_double(v, w);
    else if (k == "p") cfg.p = parse_double(v, w);
    else if (k == "gamma") cfg.gamma = parse_double(v, w);
    else if (k == "cancel_growth") cfg.cancel_growth = parse_bool(v, w);
    else if (k == "dealias") cfg.dealias = parse_double(v, w);
    else if (k == "t_end") cfg.t_end = parse_double(v, w);
    else if (k == "snapshot_times") cfg.snapshot_times = parse_list(v, w);
    else if (k == "tail_guard") cfg.tail_guard = parse_double(v, w);
    else if (k == "mean_tol") cfg.mean_tol = parse_double(v, w);
    else if (k == "sponge_width") cfg.sponge_width = parse_double(v, w);
    else if (k == "sponge_strength") cfg.sponge_strength = parse_double(v, w);
    else unknown.push_back(k);
  }
  return unknown;
}

Meta sim_config_meta(const SimConfig& c) {
  std::string times;
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) times += (i ? "," : "") + fmt(c.snapshot_times[i]);
  return {{"L", fmt(c.L)},
          {"N", std::to_string(c.N)},
          {"dt", fmt(c.dt)},
          {"damping", c.damping ? "1" : "0"},
          {"kappa_c", fmt(c.kappa_c)},
          {"p", fmt(c.p)},
          {"gamma", fmt(c.gamma)},
          {"cancel_growth", c.cancel_growth ? "1" : "0"},
          {"dealias", fmt(c.dealias)},
          {"t_end", fmt(c.t_end)},
          {"snapshot_times", times},
          {"tail_guard", fmt(c.tail_guard)},
          {"mean_tol", fmt(c.mean_tol)},
          {"sponge_width", fmt(c.sponge_width)},
          {"sponge_strength", fmt(c.sponge_strength)}};
}

}  // namespace bsq::io
