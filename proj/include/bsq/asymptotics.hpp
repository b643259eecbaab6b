#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bsq/circle_data.hpp"
#include "bsq/contour.hpp"
#include "bsq/painleve.hpp"

namespace bsq {

// exponents at k = e^{i theta}
//  nu1 = -ln(1 + r1 r2)(omega k)/2pi     nu2 = -ln(1 + r1 r2)(omega^2 k)/2pi
//  nu3 = -ln f(omega k)/2pi              nu4 = -ln f(omega^2 k)/2pi
//  nu5 = nu3(k2) in the midrange sector
//  nu_hat1 = nu3 - nu1, nu_hat2 = nu2 + nu3 - nu4
struct NuValues {
  cplx at;
  double nu1 = 0, nu2 = 0, nu3 = 0, nu4 = 0, nu5 = 0;
  double nu_hat1 = 0, nu_hat2 = 0;
};

NuValues eval_nu(const CircleData& cd, double theta);

enum class Sector { I, II, III, IV, V };
const char* sector_name(Sector s);

// which set of delta functions; each family fixes its arcs from zeta
enum class DeltaFamily { front, midrange, subsonic };

// delta_j(k) = exp{(1/2 pi i) int_arc g(s)/(s - k) ds} for j = 1..5
// (the front family has only j = 1: the arc from omega clockwise to i)
class DeltaSet {
 public:
  DeltaSet(const CircleData& cd, DeltaFamily fam, double zeta, const QuadOptions& q = {});

  int count() const { return fam_ == DeltaFamily::front ? 1 : 5; }
  const Arc& arc(int j) const { return arcs_.at(j - 1); }
  cplx log_delta(int j, cplx k) const;
  cplx delta(int j, cplx k) const { return std::exp(log_delta(j, k)); }
  // chi_j at k = e^{i phi}; principal value at omega for j = 4, 5
  cplx chi(int j, double phi, LogBranch br) const;

  double zeta() const { return zeta_; }
  // angles of omega k4 and omega^2 k2 (midrange and subsonic families)
  double angle_k4() const { return a4_; }
  double angle_k2() const { return b2_; }

 private:
  const CircleData* cd_;
  DeltaFamily fam_;
  double zeta_;
  QuadOptions q_;
  double a4_ = 0.0, b2_ = 0.0;
  std::vector<Arc> arcs_;
  std::vector<Arc> regular_;  // regular parts for the principal-value chi
};

struct DeltaChi {
  std::string which;
  cplx value;
  cplx log_value;
  cplx chi{NAN, NAN};
  std::string branch_log;
};

// which: "front.delta", "midrange.delta1".."midrange.delta5",
// "subsonic.delta1".."subsonic.delta5"; chi is filled when |k| = 1
DeltaChi eval_delta_chi(const CircleData& cd, const std::string& which, double zeta, cplx k,
                        LogBranch br = LogBranch::up, const QuadOptions& q = {});

// One oscillating wave A/sqrt(t) cos(phase0 + log_coeff ln t + freq t)
struct Wave {
  double amplitude = 0.0;
  double phase0 = 0.0;
  double log_coeff = 0.0;
  double freq = 0.0;
  double phase(double t) const { return phase0 + log_coeff * std::log(t) + freq * t; }
  double value(double t) const { return amplitude / std::sqrt(t) * std::cos(phase(t)); }
};

// t-independent part of the leading term at a given zeta
struct SectorCoefficients {
  Sector sector = Sector::II;
  double zeta = 0.0;
  std::vector<Wave> waves;
  // intermediate quantities (nu's, d's, q's, z*'s, beta) for reports and tests
  std::map<std::string, cplx> details;
};

struct AsymptoticTerm {
  Sector sector = Sector::II;
  double zeta = 0.0, t = 0.0;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  std::vector<double> painleve;  // {y, u_P(y)} in the front sector
  double decay_exponent = 0.5;
  std::string error_order;
  double value = 0.0;
  bool extrapolated = false;
};

SectorCoefficients sector_I_II_coefficients(const CircleData& cd, double zeta, const QuadOptions& q = {});
SectorCoefficients sector_IV_coefficients(const CircleData& cd, double zeta, const QuadOptions& q = {});
SectorCoefficients sector_V_coefficients(const CircleData& cd, double zeta, const QuadOptions& q = {});

AsymptoticTerm evaluate_term(const SectorCoefficients& c, double t);

AsymptoticTerm eval_sector_I_II(const CircleData& cd, double zeta, double t, const QuadOptions& q = {});
AsymptoticTerm eval_sector_III(const HastingsMcLeod& hm, double x, double t);
AsymptoticTerm eval_sector_IV(const CircleData& cd, double zeta, double t, const QuadOptions& q = {});
AsymptoticTerm eval_sector_V(const CircleData& cd, double zeta, double t, const QuadOptions& q = {});

struct AsymptoticConfig {
  double t_min = 1.0;
  double front_M = 2.0;       // front sector |zeta - 1| <= front_M t^{-2/3}
  double far_zeta = 2.0;      // sector I from here on
  double edge_band = 0.02;    // flag zeta within this distance of 1/sqrt3 or 1, or below it
  QuadOptions quad;
};

struct AsymptoticValue {
  double u = 0.0;
  Sector sector = Sector::II;
  bool extrapolated = false;
};

Sector classify(double zeta, double t, const AsymptoticConfig& cfg = {});

AsymptoticValue u_asymptotic(const CircleData& cd, const HastingsMcLeod& hm, double x, double t,
                             const AsymptoticConfig& cfg = {});

}  // namespace bsq
