#include "bsq/asymptotics.hpp"

#include <cmath>

#include "bsq/special.hpp"

namespace bsq {

namespace {

constexpr double two_pi = 2.0 * pi;
constexpr double third = 2.0 * pi / 3.0;  // angle of omega

double nu_of_log(double lg) { return -lg / two_pi; }

// ln(1 + r1 r2) and ln f with the expected ranges quoted in the error
double log_p(const CircleData& cd, double th) {
  try {
    return cd.log_one_plus_r1r2(th);
  } catch (const Error& e) {
    throw Error(ErrorCode::domain, std::string(e.what()) + " (expected positive on arg k in (pi/3, pi) u (4pi/3, 2pi))");
  }
}

double log_fv(const CircleData& cd, double th) {
  try {
    return cd.log_f(th);
  } catch (const Error& e) {
    throw Error(ErrorCode::domain, std::string(e.what()) + " (f is nonnegative on the whole circle)");
  }
}

// z* from the closed-form square root, sign fixed by -i c z* > 0
cplx zstar(cplx radicand, cplx c) {
  cplx z = std::sqrt(2.0) * std::polar(1.0, pi / 4.0) * std::sqrt(radicand);
  if ((-I * c * z).real() < 0.0) z = -z;
  return z;
}

double arg_gamma_or_zero(double nu) { return nu == 0.0 ? 0.0 : arg_gamma_i(nu); }

double safe_sqrt(double v, const char* what) {
  if (v < 0.0) {
    if (v > -1e-6) return 0.0;  // interpolation noise around a vanishing exponent
    throw Error(ErrorCode::domain, std::string(what) + " is negative: " + std::to_string(v) + " " + std::to_string(std::log10(-v)));
  }
  return std::sqrt(v);
}

}  // namespace

NuValues eval_nu(const CircleData& cd, double theta) {
  NuValues n;
  n.at = std::polar(1.0, theta);
  n.nu1 = nu_of_log(log_p(cd, theta + third));
  n.nu2 = nu_of_log(log_p(cd, theta + 2.0 * third));
  n.nu3 = nu_of_log(log_fv(cd, theta + third));
  n.nu4 = nu_of_log(log_fv(cd, theta + 2.0 * third));
  n.nu5 = n.nu3;
  n.nu_hat1 = n.nu3 - n.nu1;
  n.nu_hat2 = n.nu2 + n.nu3 - n.nu4;
  return n;
}

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::I: return "I";
    case Sector::II: return "II";
    case Sector::III: return "III";
    case Sector::IV: return "IV";
    case Sector::V: return "V";
  }
  return "?";
}

DeltaSet::DeltaSet(const CircleData& cd, DeltaFamily fam, double zeta, const QuadOptions& q)
    : cd_(&cd), fam_(fam), zeta_(zeta), q_(q) {
  const CircleData* c = cd_;
  auto lp = [c](double th) { return log_p(*c, th); };
  auto dlp = [c](double th) { return c->dlog_one_plus_r1r2(th); };
  auto lf = [c](double th) { return log_fv(*c, th); };
  auto dlf = [c](double th) { return c->dlog_f(th); };
  auto lf2 = [c](double th) { return log_fv(*c, th + 2.0 * third); };
  auto dlf2 = [c](double th) { return c->dlog_f(th + 2.0 * third); };

  if (fam == DeltaFamily::front) {
    arcs_.push_back({third, pi / 2.0, lp, dlp});
    return;
  }
  auto sc = saddle_points(zeta);
  if (fam == DeltaFamily::midrange && !(zeta > 1.0 / sqrt3 && zeta < 1.0))
    throw Error(ErrorCode::domain, "midrange deltas need 1/sqrt3 < zeta < 1");
  if (fam == DeltaFamily::subsonic && !(zeta > 0.0 && zeta < 1.0 / sqrt3))
    throw Error(ErrorCode::domain, "subsonic deltas need 0 < zeta < 1/sqrt3");
  a4_ = wrap_angle(std::arg(omega * sc.k4));
  b2_ = wrap_angle(std::arg(omega2 * sc.k2));

  if (fam == DeltaFamily::midrange) {
    arcs_.push_back({a4_, pi / 2.0, lp, dlp});
    arcs_.push_back({a4_, b2_, lp, dlp});
    arcs_.push_back({a4_, b2_, lf, dlf});
  } else {
    auto lpr = [c](double th) { return log_p(*c, th + 2.0 * third); };
    auto dlpr = [c](double th) { return c->dlog_one_plus_r1r2(th + 2.0 * third); };
    arcs_.push_back({a4_, pi / 2.0, lpr, dlpr});
    arcs_.push_back({pi / 2.0, b2_, lp, dlp});
    arcs_.push_back({pi / 2.0, b2_, lf, dlf});
  }
  arcs_.push_back({b2_, third, lf, dlf});
  arcs_.push_back({b2_, third, lf2, dlf2});

  // regular parts at omega: ln f(s) and ln f(omega^2 s) both vanish
  // like 2 ln|2 sin((theta - 2pi/3)/2)| there
  regular_.resize(5);
  regular_[3] = {b2_, third, [c](double th) { return c->log_f_regular(th, third); },
                 [c](double th) { return c->dlog_f_regular(th, third); }};
  regular_[4] = {b2_, third, [c](double th) { return c->log_f_regular(th + 2.0 * third, 0.0); },
                 [c](double th) { return c->dlog_f_regular(th + 2.0 * third, 0.0); }};
}

cplx DeltaSet::log_delta(int j, cplx k) const {
  if (j < 1 || j > count()) throw Error(ErrorCode::invalid_argument, "delta index out of range");
  return cauchy_log(arcs_[j - 1], k, q_);
}

cplx DeltaSet::chi(int j, double phi, LogBranch br) const {
  if (j < 1 || j > count()) throw Error(ErrorCode::invalid_argument, "chi index out of range");
  if (j <= 3) return stieltjes(arcs_[j - 1], phi, br, q_);
  double zero = j == 4 ? third : 0.0;
  if (cd_->f_vanishes_at(zero)) return stieltjes_pv(regular_[j - 1], phi, br, q_);
  // no zero at the end: the subtracted boundary term is finite
  const Arc& a = arcs_[j - 1];
  return stieltjes(a, phi, br, q_) - branch_log(phi, a.b, br) * a.g(a.b) / (2.0 * pi * I);
}

DeltaChi eval_delta_chi(const CircleData& cd, const std::string& which, double zeta, cplx k, LogBranch br,
                        const QuadOptions& q) {
  DeltaFamily fam;
  int j = 1;
  auto dot = which.find(".delta");
  if (dot == std::string::npos) throw Error(ErrorCode::invalid_argument, "unknown delta identifier " + which);
  std::string f = which.substr(0, dot);
  if (f == "front")
    fam = DeltaFamily::front;
  else if (f == "midrange")
    fam = DeltaFamily::midrange;
  else if (f == "subsonic")
    fam = DeltaFamily::subsonic;
  else
    throw Error(ErrorCode::invalid_argument, "unknown delta family " + f);
  std::string idx = which.substr(dot + 6);
  if (!idx.empty()) j = std::stoi(idx);
  DeltaSet ds(cd, fam, zeta, q);
  DeltaChi out;
  out.which = which;
  out.log_value = ds.log_delta(j, k);
  out.value = std::exp(out.log_value);
  out.branch_log = branch_name(br);
  if (std::abs(std::abs(k) - 1.0) < 1e-14) out.chi = ds.chi(j, std::arg(k), br);
  return out;
}

SectorCoefficients sector_I_II_coefficients(const CircleData& cd, double zeta, const QuadOptions& q) {
  if (!(zeta > 1.0)) throw Error(ErrorCode::domain, "sectors I and II need zeta > 1");
  auto sc = saddle_points(zeta);
  cplx k1 = sc.k1;
  double a = wrap_angle(std::arg(k1));
  double lg = log_p(cd, a);
  double nu = nu_of_log(lg);
  cplx zs = zstar((4.0 - 3.0 * k1 * zeta - k1 * k1 * k1 * zeta) / (4.0 * std::pow(k1, 4)), k1);
  double dphi = (l_of(2, k1) - l_of(1, k1)).imag();
  double den = (-I * k1 * zs).real();
  double A = 2.0 * sqrt3 * safe_sqrt(-nu, "-nu") * safe_sqrt(-1.0 - 2.0 * std::cos(2.0 * a), "-1 - 2cos 2arg k1") / den * dphi;

  cplx num = (1.0 / (omega2 * k1) - k1) * (1.0 / (omega * k1) - k1);
  cplx dd = 3.0 * std::pow(1.0 / k1 - k1, 2) * zs * zs;
  double beta0 = nu * std::log(std::abs(num / dd));
  auto integrand = [&](double th) {
    cplx s = std::polar(1.0, th);
    cplx r = std::pow(k1 - s, 2) * (1.0 / (omega2 * k1) - s) * (1.0 / (omega * k1) - s) /
             (std::pow(1.0 / k1 - s, 2) * (omega * k1 - s) * (omega2 * k1 - s));
    return std::log(std::abs(r)) * cd.dlog_one_plus_r1r2(th);
  };
  beta0 += integrate_real(integrand, pi / 2.0, a, q) / two_pi;

  cplx r2 = cd.r2(a);
  Wave w;
  w.amplitude = A;
  w.phase0 = 0.75 * pi + std::arg(r2) + arg_gamma_or_zero(nu) + beta0;
  w.log_coeff = -nu;
  w.freq = eval_phase(zeta, k1, PhasePair::p21).value.imag();

  SectorCoefficients c;
  c.sector = zeta >= 2.0 ? Sector::I : Sector::II;
  c.zeta = zeta;
  c.waves.push_back(w);
  c.details["nu"] = nu;
  c.details["k1"] = k1;
  c.details["z_star"] = zs;
  c.details["beta0"] = beta0;
  c.details["dzeta_im_phi"] = dphi;
  c.details["r2_k1"] = r2;
  return c;
}

namespace {

struct MidData {
  cplx k2, k4, w4, w2;  // w4 = omega k4, w2 = omega^2 k2
  double a4, b2;
  cplx z1, z2;          // z_{1,*}, z_{2,*}
  cplx log_z1, log_z2;
  double dphi31, dphi32;
  double rt_inv_k4, rt_inv_k2;  // |rtilde(1/k4)|^{1/2}, |rtilde(1/k2)|^{1/2}
  cplx q2, q3, q5, q6, qt1;
};

MidData mid_data(const CircleData& cd, double zeta) {
  auto sc = saddle_points(zeta);
  MidData m;
  m.k2 = sc.k2;
  m.k4 = sc.k4;
  m.w4 = omega * m.k4;
  m.w2 = omega2 * m.k2;
  m.a4 = wrap_angle(std::arg(m.w4));
  m.b2 = wrap_angle(std::arg(m.w2));
  cplx k4 = m.k4, k2 = m.k2;
  m.z1 = zstar(omega * (4.0 - 3.0 * k4 * zeta - k4 * k4 * k4 * zeta) / (4.0 * std::pow(k4, 4)), m.w4);
  m.z2 = zstar(-omega2 * (4.0 - 3.0 * k2 * zeta - k2 * k2 * k2 * zeta) / (4.0 * std::pow(k2, 4)), m.w2);
  m.log_z1 = cplx(std::log(std::abs(m.z1)), pi / 2.0 - m.a4);
  m.log_z2 = cplx(std::log(std::abs(m.z2)), pi / 2.0 - m.b2);
  m.dphi31 = (l_of(3, m.w4) - l_of(1, m.w4)).imag();
  m.dphi32 = (l_of(3, m.w2) - l_of(2, m.w2)).imag();
  double th4 = std::arg(k4), th2 = std::arg(k2);
  m.rt_inv_k4 = std::sqrt(std::abs(rtilde_theta(-th4)));
  m.rt_inv_k2 = std::sqrt(std::abs(rtilde_theta(-th2)));
  m.q3 = m.rt_inv_k4 * cd.r1(-th4);
  m.q2 = std::sqrt(rtilde_theta(m.b2)) * cd.r1(m.b2);
  m.q5 = std::sqrt(std::abs(rtilde_theta(th2 + third))) * cd.r1(th2 + third);
  m.q6 = m.rt_inv_k2 * cd.r1(-th2);
  m.qt1 = std::sqrt(std::abs(rtilde_theta(th4))) * cd.r1(th4);
  return m;
}

// product of delta_j^{e} over the six points omega^m k, 1/(omega^m k), listed
// as exponents for {k, omega k, omega^2 k, 1/k, 1/(omega k), 1/(omega^2 k)}
cplx delta_product(const DeltaSet& ds, cplx k, const int (*ex)[6]) {
  const cplx pts[6] = {k, omega * k, omega2 * k, 1.0 / k, 1.0 / (omega * k), 1.0 / (omega2 * k)};
  cplx acc = 0.0;
  for (int j = 1; j <= 5; ++j)
    for (int p = 0; p < 6; ++p)
      if (ex[j - 1][p] != 0) acc += double(ex[j - 1][p]) * ds.log_delta(j, pts[p]);
  return acc;
}

// exponent tables, columns {k, wk, w^2k, 1/k, 1/(wk), 1/(w^2k)}
constexpr int D1_mid[5][6] = {
    {0, 1, -2, -1, -1, 2},
    {0, -2, 1, 2, -1, -1},
    {0, 1, 1, -1, 2, -1},
    {-1, -1, 2, 1, 1, -2},
    {-1, 2, -1, -2, 1, 1},
};
constexpr int D2_common[5][6] = {
    {-1, 2, -1, 1, -2, 1},
    {0, -1, -1, 1, 1, -2},
    {0, -1, 2, -2, 1, 1},
    {0, -2, 1, -1, 2, -1},
    {0, 1, 1, -1, -1, 2},
};
constexpr int D1_sub[5][6] = {
    {0, 1, 1, -1, 2, -1},
    {1, -2, 1, 2, -1, -1},
    {-2, 1, 1, -1, 2, -1},
    {-1, -1, 2, 1, 1, -2},
    {-1, 2, -1, -2, 1, 1},
};
constexpr int D2_sub[5][6] = {
    {-1, -1, 2, -2, 1, 1},
    {0, -1, -1, 1, 1, -2},
    {0, -1, 2, -2, 1, 1},
    {0, -2, 1, -1, 2, -1},
    {0, 1, 1, -1, -1, 2},
};

void check_amp(double a, const char* what) {
  if (!std::isfinite(a)) throw Error(ErrorCode::domain, std::string(what) + " is not finite");
}

}  // namespace

SectorCoefficients sector_IV_coefficients(const CircleData& cd, double zeta, const QuadOptions& q) {
  if (!(zeta > 1.0 / sqrt3 && zeta < 1.0)) throw Error(ErrorCode::domain, "sector IV needs 1/sqrt3 < zeta < 1");
  MidData m = mid_data(cd, zeta);
  NuValues n4 = eval_nu(cd, std::arg(m.k4));
  NuValues n2 = eval_nu(cd, std::arg(m.k2));
  double nu1 = n4.nu1, nu3 = n4.nu3, nu2 = n2.nu2, nu4 = n2.nu4, nu5 = n2.nu3;
  double nh1 = nu3 - nu1, nh2 = nu2 + nu5 - nu4;

  DeltaSet ds(cd, DeltaFamily::midrange, zeta, q);
  const auto up = LogBranch::up, dn = LogBranch::down;

  cplx logD1 = delta_product(ds, m.w4, D1_mid);
  cplx log_d10 = -ds.chi(1, m.a4, up) - ds.chi(2, m.a4, dn) + 2.0 * ds.chi(3, m.a4, dn) +
                 I * (nu2 - 2.0 * nu4) * branch_log(m.a4, m.b2, dn) + 2.0 * I * (nu1 - nu3) * m.log_z1 + logD1;

  cplx logD2 = delta_product(ds, m.w2, D2_common);
  cplx log_d20 = -2.0 * ds.chi(2, m.b2, up) + ds.chi(3, m.b2, up) - ds.chi(4, m.b2, dn) + 2.0 * ds.chi(5, m.b2, dn) +
                 I * (nu3 - 2.0 * nu1) * branch_log(m.b2, m.a4, up) + 2.0 * I * (nu4 - nu5 - nu2) * m.log_z2 + logD2;

  Wave w1, w2;
  w1.amplitude = -4.0 * sqrt3 * safe_sqrt(nh1, "nu_hat1(k4)") * m.dphi31 /
                 ((-I * m.w4 * m.z1).real() * m.rt_inv_k4) * std::sin(m.a4);
  w1.phase0 = 0.75 * pi + std::arg(m.q3) + arg_gamma_or_zero(nh1) + log_d10.imag();
  w1.log_coeff = nu1 - nu3;
  w1.freq = -eval_phase(zeta, m.w4, PhasePair::p31).value.imag();

  w2.amplitude = -4.0 * sqrt3 * safe_sqrt(nh2, "nu_hat2(k2)") * m.rt_inv_k2 * m.dphi32 /
                 (-I * m.w2 * m.z2).real() * std::sin(m.b2);
  w2.phase0 = 0.75 * pi - std::arg(m.q6 - m.q2 * m.q5) + arg_gamma_or_zero(nh2) + log_d20.imag();
  w2.log_coeff = nu4 - nu5 - nu2;
  w2.freq = -eval_phase(zeta, m.w2, PhasePair::p32).value.imag();
  check_amp(w1.amplitude, "A1");
  check_amp(w2.amplitude, "A2");

  SectorCoefficients c;
  c.sector = Sector::IV;
  c.zeta = zeta;
  c.waves = {w1, w2};
  auto& d = c.details;
  d["nu1"] = nu1; d["nu2"] = nu2; d["nu3"] = nu3; d["nu4"] = nu4; d["nu5"] = nu5;
  d["nu_hat1"] = nh1; d["nu_hat2"] = nh2;
  d["d10"] = std::exp(log_d10);
  d["d20"] = std::exp(log_d20);
  d["z1_star"] = m.z1; d["z2_star"] = m.z2;
  d["q2"] = m.q2; d["q3"] = m.q3; d["q5"] = m.q5; d["q6"] = m.q6;
  d["omega_k4"] = m.w4; d["omega2_k2"] = m.w2;
  d["dzeta_im_phi31"] = m.dphi31; d["dzeta_im_phi32"] = m.dphi32;
  return c;
}

SectorCoefficients sector_V_coefficients(const CircleData& cd, double zeta, const QuadOptions& q) {
  if (!(zeta > 0.0 && zeta < 1.0 / sqrt3)) throw Error(ErrorCode::domain, "sector V needs 0 < zeta < 1/sqrt3");
  MidData m = mid_data(cd, zeta);
  double th4 = std::arg(m.k4);
  NuValues n2 = eval_nu(cd, std::arg(m.k2));
  double nua = nu_of_log(log_p(cd, th4));                   // nu1(omega^2 k4)
  double nu3i = nu_of_log(log_fv(cd, pi / 2.0));            // nu3(omega^2 i)
  double nu2 = n2.nu2, nu3 = n2.nu3, nu4 = n2.nu4;
  double nh2 = n2.nu_hat2;

  DeltaSet ds(cd, DeltaFamily::subsonic, zeta, q);
  const auto up = LogBranch::up, dn = LogBranch::down;

  cplx logD1 = delta_product(ds, m.w4, D1_sub);
  cplx log_d10 = -4.0 * pi * nua + 2.0 * ds.chi(1, m.a4, up) - 2.0 * I * nu3i * branch_log(m.a4, pi / 2.0, up) -
                 2.0 * I * nua * m.log_z1 + logD1;
  cplx logD2 = delta_product(ds, m.w2, D2_sub);
  cplx log_d20 = -2.0 * ds.chi(2, m.b2, up) + ds.chi(3, m.b2, up) - ds.chi(4, m.b2, dn) + 2.0 * ds.chi(5, m.b2, dn) +
                 I * nu3i * branch_log(m.b2, pi / 2.0, up) + 2.0 * I * (nu4 - nu3 - nu2) * m.log_z2 + logD2;

  Wave w1, w2;
  w1.amplitude = -4.0 * sqrt3 * safe_sqrt(nua, "nu1(omega^2 k4)") * m.dphi31 /
                 ((-I * m.w4 * m.z1).real() * m.rt_inv_k4) * std::sin(m.a4);
  w1.phase0 = 0.75 * pi - std::arg(m.qt1) + arg_gamma_or_zero(nua) + log_d10.imag();
  w1.log_coeff = -nua;
  w1.freq = -eval_phase(zeta, m.w4, PhasePair::p31).value.imag();

  w2.amplitude = -4.0 * sqrt3 * safe_sqrt(nh2, "nu_hat2(k2)") * m.rt_inv_k2 * m.dphi32 /
                 (-I * m.w2 * m.z2).real() * std::sin(m.b2);
  w2.phase0 = 0.75 * pi - std::arg(m.q6 - m.q2 * m.q5) + arg_gamma_or_zero(nh2) + log_d20.imag();
  w2.log_coeff = nu4 - nu3 - nu2;
  w2.freq = -eval_phase(zeta, m.w2, PhasePair::p32).value.imag();
  check_amp(w1.amplitude, "A1 tilde");
  check_amp(w2.amplitude, "A2");

  SectorCoefficients c;
  c.sector = Sector::V;
  c.zeta = zeta;
  c.waves = {w1, w2};
  auto& d = c.details;
  d["nu1_w2k4"] = nua; d["nu3_w2i"] = nu3i;
  d["nu2"] = nu2; d["nu3"] = nu3; d["nu4"] = nu4; d["nu_hat2"] = nh2;
  d["d10"] = std::exp(log_d10);
  d["d20"] = std::exp(log_d20);
  d["z1_star"] = m.z1; d["z2_star"] = m.z2;
  d["q_tilde1"] = m.qt1; d["q2"] = m.q2; d["q5"] = m.q5; d["q6"] = m.q6;
  d["omega_k4"] = m.w4; d["omega2_k2"] = m.w2;
  return c;
}

AsymptoticTerm evaluate_term(const SectorCoefficients& c, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "t must be positive");
  AsymptoticTerm a;
  a.sector = c.sector;
  a.zeta = c.zeta;
  a.t = t;
  a.decay_exponent = 0.5;
  a.error_order = c.sector == Sector::I ? "x^-N + C_N(zeta) ln t / t" : "ln t / t";
  for (const auto& w : c.waves) {
    a.amplitudes.push_back(w.amplitude);
    a.phases.push_back(w.phase(t));
    a.value += w.value(t);
  }
  return a;
}

AsymptoticTerm eval_sector_I_II(const CircleData& cd, double zeta, double t, const QuadOptions& q) {
  return evaluate_term(sector_I_II_coefficients(cd, zeta, q), t);
}

AsymptoticTerm eval_sector_IV(const CircleData& cd, double zeta, double t, const QuadOptions& q) {
  return evaluate_term(sector_IV_coefficients(cd, zeta, q), t);
}

AsymptoticTerm eval_sector_V(const CircleData& cd, double zeta, double t, const QuadOptions& q) {
  return evaluate_term(sector_V_coefficients(cd, zeta, q), t);
}

AsymptoticTerm eval_sector_III(const HastingsMcLeod& hm, double x, double t) {
  if (!hm.converged) throw Error(ErrorCode::no_convergence, "Hastings-McLeod solution did not converge");
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "t must be positive");
  AsymptoticTerm a;
  a.sector = Sector::III;
  a.zeta = x / t;
  a.t = t;
  double y = std::cbrt(2.0 / (3.0 * t)) * (x - t);
  double up = eval_uP(hm, y);
  a.painleve = {y, up};
  a.decay_exponent = 2.0 / 3.0;
  a.error_order = "t^-5/6";
  a.value = up / std::pow(t, 2.0 / 3.0);
  return a;
}

Sector classify(double zeta, double t, const AsymptoticConfig& cfg) {
  double z = std::abs(zeta);
  if (std::abs(z - 1.0) <= cfg.front_M * std::pow(t, -2.0 / 3.0)) return Sector::III;
  if (z >= cfg.far_zeta) return Sector::I;
  if (z > 1.0) return Sector::II;
  if (z > 1.0 / sqrt3) return Sector::IV;
  return Sector::V;
}

AsymptoticValue u_asymptotic(const CircleData& cd, const HastingsMcLeod& hm, double x, double t,
                             const AsymptoticConfig& cfg) {
  if (!(t >= cfg.t_min)) throw Error(ErrorCode::domain, "t below t_min = " + std::to_string(cfg.t_min));
  double xa = std::abs(x);
  double zeta = xa / t;
  AsymptoticValue out;
  out.sector = classify(zeta, t, cfg);
  const double e = cfg.edge_band;
  switch (out.sector) {
    case Sector::III:
      out.u = eval_sector_III(hm, xa, t).value;
      break;
    case Sector::I:
    case Sector::II: {
      double z = std::max(zeta, 1.0 + e);
      out.extrapolated = zeta < 1.0 + e;
      out.u = eval_sector_I_II(cd, z, t, cfg.quad).value;
      break;
    }
    case Sector::IV: {
      double z = std::clamp(zeta, 1.0 / sqrt3 + e, 1.0 - e);
      out.extrapolated = z != zeta;
      out.u = eval_sector_IV(cd, z, t, cfg.quad).value;
      break;
    }
    case Sector::V: {
      double z = std::clamp(zeta, e, 1.0 / sqrt3 - e);
      out.extrapolated = z != zeta;
      out.u = eval_sector_V(cd, z, t, cfg.quad).value;
      break;
    }
  }
  return out;
}

}  // namespace bsq
