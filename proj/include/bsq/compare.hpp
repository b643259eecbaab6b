#pragma once

#include <map>
#include <string>
#include <vector>

#include "bsq/asymptotics.hpp"
#include "bsq/io.hpp"
#include "bsq/simulator.hpp"

namespace bsq {

struct CompareWindows {
  double far_lo = 2.0, far_hi = 3.0;   // sector I, in zeta
  double mid_lo = 1.2, mid_hi = 2.0;   // sector II, in zeta
  double front_c = 2.0;                // sector III: |x - t| <= front_c t^{1/3}
  double iv_lo = 0.65, iv_hi = 0.95;
  double v_lo = 0.1, v_hi = 0.5;
  // drop points whose asymptote came from another sector or was extrapolated
  bool require_sector_match = true;
  // left half of the front window counts as slow when its scaled gap exceeds
  // this multiple of the right half's
  double slow_ratio = 2.0;
};

struct WindowMetrics {
  Sector sector = Sector::I;
  double t = 0.0;
  double lo = 0.0, hi = 0.0;  // x range
  int points = 0;
  double abs_linf = 0.0;   // max |u_sim - u_asym|
  double abs_l2 = 0.0;     // root mean square of u_sim - u_asym
  double rel_linf = 0.0;   // abs_linf / max |u_sim|
  double rel_l2 = 0.0;     // ||u_sim - u_asym||_2 / ||u_sim||_2
  double sim_linf = 0.0, asym_linf = 0.0;
  // abs_linf times t^{1/2} (I, II, IV, V) or t^{2/3} (III)
  double scaled_linf = 0.0;
  double scaled_l2 = 0.0;
  // scaled gap divided by the expected error envelope ln t / sqrt t (or t^{-1/6})
  double envelope_ratio = 0.0;
  bool slow_convergence = false;  // front window only: left edge lags
  double left_scaled = 0.0, right_scaled = 0.0;
};

struct SectorTrend {
  Sector sector = Sector::I;
  double decay_exponent = 0.0;   // gap ~ t^{-decay_exponent}, least squares on abs_linf
  double decay_exponent_l2 = 0.0;
  bool scaled_decreasing = false;     // scaled_linf strictly decreasing in t
  bool scaled_l2_decreasing = false;
  double scaled_spread = 0.0;    // max/min of scaled_linf over the times
};

struct CompareReport {
  std::vector<double> times;
  std::vector<WindowMetrics> windows;
  std::vector<SectorTrend> trends;
  std::string data_hash;
  CompareWindows config;
  const WindowMetrics* find(Sector s, double t) const;
  const SectorTrend* trend(Sector s) const;
};

// one time slice: simulated u and the asymptote rows at the same time
struct CompareSlice {
  FieldSnapshot sim;
  std::vector<io::AsymptoteRow> asym;
};

// u_sim at arbitrary x from a periodic snapshot (8-point Lagrange, exact at nodes)
double sample_snapshot(const FieldSnapshot& s, double x);

CompareReport compare_slices(const std::vector<CompareSlice>& slices, const CompareWindows& w = {});

std::string compare_json(const CompareReport& r);
std::string compare_csv(const CompareReport& r);

}  // namespace bsq
