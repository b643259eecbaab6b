#include "bsq/compare.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bsq {

const WindowMetrics* CompareReport::find(Sector s, double t) const {
  for (auto& w : windows)
    if (w.sector == s && std::abs(w.t - t) <= 1e-9 * std::max(1.0, t)) return &w;
  return nullptr;
}

const SectorTrend* CompareReport::trend(Sector s) const {
  for (auto& t : trends)
    if (t.sector == s) return &t;
  return nullptr;
}

double sample_snapshot(const FieldSnapshot& s, double x) {
  const int n = int(s.x.size());
  if (n < 8) throw Error(ErrorCode::invalid_argument, "snapshot too short to interpolate");
  double h = s.x[1] - s.x[0];
  double r = (x - s.x[0]) / h;
  double j0 = std::floor(r);
  double frac = r - j0;
  auto at = [&](long j) { return s.u[((j % n) + n) % n]; };
  if (frac < 1e-9) return at(long(j0));
  if (frac > 1.0 - 1e-9) return at(long(j0) + 1);
  double sum = 0.0;
  for (int a = -3; a <= 4; ++a) {
    double w = 1.0;
    for (int b = -3; b <= 4; ++b)
      if (b != a) w *= (frac - b) / double(a - b);
    sum += w * at(long(j0) + a);
  }
  return sum;
}

namespace {

double scale_power(Sector s) { return s == Sector::III ? 2.0 / 3.0 : 0.5; }

double envelope(Sector s, double t) { return s == Sector::III ? std::pow(t, -5.0 / 6.0) : std::log(t) / t; }

struct Acc {
  int n = 0;
  double linf = 0, l2 = 0, sim2 = 0, siminf = 0, asyminf = 0;
  void add(double us, double ua) {
    double d = us - ua;
    n++;
    linf = std::max(linf, std::abs(d));
    l2 += d * d;
    sim2 += us * us;
    siminf = std::max(siminf, std::abs(us));
    asyminf = std::max(asyminf, std::abs(ua));
  }
};

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

CompareReport compare_slices(const std::vector<CompareSlice>& slices, const CompareWindows& w) {
  CompareReport rep;
  rep.config = w;
  const Sector order[] = {Sector::I, Sector::II, Sector::III, Sector::IV, Sector::V};
  for (auto& sl : slices) {
    double t = sl.sim.t;
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "comparison needs t > 0");
    rep.times.push_back(t);
    double half = w.front_c * std::cbrt(t);
    for (Sector s : order) {
      double lo, hi;
      switch (s) {
        case Sector::I: lo = w.far_lo * t; hi = w.far_hi * t; break;
        case Sector::II: lo = w.mid_lo * t; hi = w.mid_hi * t; break;
        case Sector::III: lo = t - half; hi = t + half; break;
        case Sector::IV: lo = w.iv_lo * t; hi = w.iv_hi * t; break;
        default: lo = w.v_lo * t; hi = w.v_hi * t; break;
      }
      Acc all, left, right;
      for (auto& r : sl.asym) {
        if (std::abs(r.t - t) > 1e-9 * std::max(1.0, t)) continue;
        double x = r.x;
        if (x < lo || x > hi) continue;
        // the half-open sector II window leaves zeta = 2 to sector I
        if (s == Sector::II && x >= hi) continue;
        if (w.require_sector_match && (r.sector != s || r.extrapolated)) continue;
        double us = sample_snapshot(sl.sim, x);
        all.add(us, r.u);
        if (s == Sector::III) (x < t ? left : right).add(us, r.u);
      }
      WindowMetrics m;
      m.sector = s;
      m.t = t;
      m.lo = lo;
      m.hi = hi;
      m.points = all.n;
      if (all.n > 0) {
        double sp = std::pow(t, scale_power(s));
        m.abs_linf = all.linf;
        m.abs_l2 = std::sqrt(all.l2 / all.n);
        m.sim_linf = all.siminf;
        m.asym_linf = all.asyminf;
        m.rel_linf = all.siminf > 0 ? all.linf / all.siminf : 0.0;
        m.rel_l2 = all.sim2 > 0 ? std::sqrt(all.l2 / all.sim2) : 0.0;
        m.scaled_linf = m.abs_linf * sp;
        m.scaled_l2 = m.abs_l2 * sp;
        m.envelope_ratio = m.abs_linf / envelope(s, t);
        if (s == Sector::III && left.n > 0 && right.n > 0) {
          m.left_scaled = left.linf * sp;
          m.right_scaled = right.linf * sp;
          m.slow_convergence = m.left_scaled > w.slow_ratio * m.right_scaled;
        }
      }
      rep.windows.push_back(m);
    }
  }
  std::vector<double> ts = rep.times;
  std::sort(ts.begin(), ts.end());
  for (Sector s : order) {
    SectorTrend tr;
    tr.sector = s;
    std::vector<double> lt, lg, lg2, sc, sc2;
    for (double t : ts) {
      auto* m = rep.find(s, t);
      if (!m || m->points == 0) continue;
      lt.push_back(std::log(t));
      lg.push_back(std::log(std::max(m->abs_linf, 1e-300)));
      lg2.push_back(std::log(std::max(m->abs_l2, 1e-300)));
      sc.push_back(m->scaled_linf);
      sc2.push_back(m->scaled_l2);
    }
    if (lt.size() >= 2) {
      tr.decay_exponent = -slope(lt, lg);
      tr.decay_exponent_l2 = -slope(lt, lg2);
      tr.scaled_decreasing = tr.scaled_l2_decreasing = true;
      for (std::size_t i = 1; i < sc.size(); ++i) {
        tr.scaled_decreasing = tr.scaled_decreasing && sc[i] < sc[i - 1];
        tr.scaled_l2_decreasing = tr.scaled_l2_decreasing && sc2[i] < sc2[i - 1];
      }
      auto [mn, mx] = std::minmax_element(sc.begin(), sc.end());
      tr.scaled_spread = *mn > 0 ? *mx / *mn : INFINITY;
    }
    rep.trends.push_back(tr);
  }
  return rep;
}

std::string compare_json(const CompareReport& r) {
  nlohmann::ordered_json j;
  j["data_hash"] = r.data_hash;
  j["times"] = r.times;
  auto& c = r.config;
  j["windows"] = {{"I_zeta", {c.far_lo, c.far_hi}},
                  {"II_zeta", {c.mid_lo, c.mid_hi}},
                  {"III_half_width_coefficient", c.front_c},
                  {"IV_zeta", {c.iv_lo, c.iv_hi}},
                  {"V_zeta", {c.v_lo, c.v_hi}},
                  {"require_sector_match", c.require_sector_match},
                  {"slow_ratio", c.slow_ratio}};
  auto arr = nlohmann::ordered_json::array();
  for (auto& m : r.windows) {
    nlohmann::ordered_json o;
    o["sector"] = sector_name(m.sector);
    o["t"] = m.t;
    o["x_range"] = {m.lo, m.hi};
    o["points"] = m.points;
    o["abs_linf"] = m.abs_linf;
    o["abs_l2"] = m.abs_l2;
    o["rel_linf"] = m.rel_linf;
    o["rel_l2"] = m.rel_l2;
    o["sim_linf"] = m.sim_linf;
    o["asym_linf"] = m.asym_linf;
    o["scaled_linf"] = m.scaled_linf;
    o["scaled_l2"] = m.scaled_l2;
    o["envelope_ratio"] = m.envelope_ratio;
    if (m.sector == Sector::III) {
      o["slow_convergence_left_edge"] = m.slow_convergence;
      o["left_scaled_linf"] = m.left_scaled;
      o["right_scaled_linf"] = m.right_scaled;
    }
    arr.push_back(o);
  }
  j["metrics"] = arr;
  auto tr = nlohmann::ordered_json::array();
  for (auto& t : r.trends) {
    tr.push_back({{"sector", sector_name(t.sector)},
                  {"decay_exponent_linf", t.decay_exponent},
                  {"decay_exponent_l2", t.decay_exponent_l2},
                  {"scaled_linf_decreasing", t.scaled_decreasing},
                  {"scaled_l2_decreasing", t.scaled_l2_decreasing},
                  {"scaled_linf_spread", t.scaled_spread}});
  }
  j["trends"] = tr;
  return j.dump(2) + "\n";
}

std::string compare_csv(const CompareReport& r) {
  std::string s = "# data_hash=" + r.data_hash + "\n";
  s += "t,sector,points,abs_linf,abs_l2,rel_linf,rel_l2,scaled_linf,scaled_l2,envelope_ratio,slow_convergence\n";
  for (auto& m : r.windows)
    s += io::fmt(m.t) + "," + sector_name(m.sector) + "," + std::to_string(m.points) + "," + io::fmt(m.abs_linf) +
         "," + io::fmt(m.abs_l2) + "," + io::fmt(m.rel_linf) + "," + io::fmt(m.rel_l2) + "," +
         io::fmt(m.scaled_linf) + "," + io::fmt(m.scaled_l2) + "," + io::fmt(m.envelope_ratio) + "," +
         (m.slow_convergence ? "1" : "0") + "\n";
  return s;
}

}  // namespace bsq
