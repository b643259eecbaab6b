#include <cmath>
#include <memory>

#include "bsq/asymptotics.hpp"
#include "doctest.h"

using namespace bsq;

namespace {

// small Gaussian data, shared by the cases below
struct GaussFixture {
  ReflectionTable table;
  std::unique_ptr<CircleData> cd;
  HastingsMcLeod hm;
  GaussFixture() {
    auto d = gaussian_data(-0.05, 0.02, 40.0, 1024);
    SamplingPlan p;
    p.n_circle = 2400;
    p.exclusion = 0.004;
    p.n_ray = 6;
    table = reflection_coefficients(d, p);
    cd = std::make_unique<CircleData>(table);
    hm = solve_hastings_mcleod(8.0, 2001);
  }
};

const GaussFixture& gauss() {
  static GaussFixture f;
  return f;
}

CircleData zero_data() {
  return CircleData([](double) { return cplx(0.0); }, [](double) { return cplx(0.0); });
}

}  // namespace

TEST_CASE("vanishing reflection: exponents, deltas and amplitudes are zero") {
  auto cd = zero_data();
  CHECK(cd.f_zeros().empty());
  for (double th = 0.05; th < 2 * pi; th += 0.3) {
    auto n = eval_nu(cd, th);
    CHECK(n.nu1 == 0.0);
    CHECK(n.nu2 == 0.0);
    CHECK(n.nu3 == 0.0);
    CHECK(n.nu4 == 0.0);
    CHECK(n.nu_hat1 == 0.0);
    CHECK(n.nu_hat2 == 0.0);
  }
  for (std::string w : {"front.delta", "midrange.delta2", "subsonic.delta4"}) {
    double zeta = w[0] == 'f' ? 1.0 : (w[0] == 'm' ? 0.8 : 0.3);
    auto v = eval_delta_chi(cd, w, zeta, std::polar(1.3, 2.0));
    CHECK(std::abs(v.value - 1.0) < 1e-15);
  }
  DeltaSet ds(cd, DeltaFamily::midrange, 0.8);
  for (int j = 1; j <= 5; ++j) CHECK(std::abs(ds.chi(j, 2.0, LogBranch::up)) < 1e-15);
  CHECK(sector_I_II_coefficients(cd, 1.5).waves[0].amplitude == 0.0);
  for (auto& w : sector_IV_coefficients(cd, 0.8).waves) CHECK(w.amplitude == 0.0);
  for (auto& w : sector_V_coefficients(cd, 0.3).waves) CHECK(w.amplitude == 0.0);
}

TEST_CASE("Gaussian data: zeros of f and sign of the exponents") {
  auto& g = gauss();
  CHECK(g.cd->f_zeros().size() == 4);
  // nu at k1 is nonpositive in the fast sectors
  for (double zeta = 1.05; zeta < 6; zeta += 0.25) {
    auto c = sector_I_II_coefficients(*g.cd, zeta);
    CHECK(c.details.at("nu").real() <= 1e-12);
  }
  for (double th = 5 * pi / 3 + 0.01; th < 2 * pi - 0.01; th += 0.02) CHECK(eval_nu(*g.cd, th).nu_hat1 >= -1e-8);
}

TEST_CASE("Gaussian data: delta functions") {
  auto& g = gauss();
  for (auto fam : {DeltaFamily::front, DeltaFamily::midrange, DeltaFamily::subsonic}) {
    double zeta = fam == DeltaFamily::front ? 1.0 : (fam == DeltaFamily::midrange ? 0.8 : 0.3);
    DeltaSet ds(*g.cd, fam, zeta);
    for (int j = 1; j <= ds.count(); ++j) {
      // tends to 1 like 1/k
      cplx far = ds.delta(j, cplx(600.0, 800.0));
      CHECK(std::abs(far - 1.0) * 1e3 < 10.0);
      // jump across the arc at its midpoint: left minus right boundary value
      const Arc& a = ds.arc(j);
      double th = 0.5 * (a.a + a.b);
      bool ccw = a.b > a.a;
      cplx inside = ds.log_delta(j, std::polar(1.0 - 1e-8, th));
      cplx outside = ds.log_delta(j, std::polar(1.0 + 1e-8, th));
      cplx jump = ccw ? inside - outside : outside - inside;
      CHECK(std::abs(jump - a.g(th)) < 1e-5);
    }
  }
  // the front delta jumps by the factor 1 + r1 r2
  DeltaSet f(*g.cd, DeltaFamily::front, 1.0);
  double th = 0.5 * (f.arc(1).a + f.arc(1).b);
  cplx ratio = std::exp(f.log_delta(1, std::polar(1 + 1e-8, th)) - f.log_delta(1, std::polar(1 - 1e-8, th)));
  CHECK(std::abs(ratio - g.cd->one_plus_r1r2(th)) < 1e-5);
}

TEST_CASE("Gaussian data: fast sectors") {
  auto& g = gauss();
  auto c = sector_I_II_coefficients(*g.cd, 1.5);
  cplx k1 = c.details.at("k1"), zs = c.details.at("z_star");
  CHECK((-I * k1 * zs).real() > 0.0);
  CHECK(std::abs((-I * k1 * zs).imag()) < 1e-12);
  CHECK(c.sector == Sector::II);
  CHECK(sector_I_II_coefficients(*g.cd, 2.5).sector == Sector::I);
  // the phase drifts by -nu ln t
  const Wave& w = c.waves[0];
  double nu = c.details.at("nu").real();
  double t1 = 100, t2 = 700;
  double dphase = (w.phase(t2) - w.freq * t2) - (w.phase(t1) - w.freq * t1);
  CHECK(std::abs(dphase + nu * std::log(t2 / t1)) < 1e-13);
  auto term = eval_sector_I_II(*g.cd, 1.5, 400.0);
  CHECK(term.value == doctest::Approx(w.value(400.0)).epsilon(1e-12));
}

TEST_CASE("Gaussian data: moduli of the d coefficients") {
  auto& g = gauss();
  for (double zeta : {0.7, 0.8, 0.9}) {
    auto c = sector_IV_coefficients(*g.cd, zeta);
    auto& D = c.details;
    double nu1 = D.at("nu1").real(), nu2 = D.at("nu2").real(), nu4 = D.at("nu4").real();
    CHECK(std::abs(std::abs(D.at("d10")) - std::exp(-pi * nu1)) < 1e-8);
    CHECK(std::abs(std::abs(D.at("d20")) - std::exp(pi * (2 * nu2 - nu4))) < 1e-8);
    CHECK(c.waves.size() == 2);
  }
  auto v = sector_V_coefficients(*g.cd, 0.3);
  CHECK(v.waves.size() == 2);
  for (auto& w : v.waves) CHECK(std::isfinite(w.amplitude));
}

TEST_CASE("front sector") {
  auto& g = gauss();
  for (double t : {100.0, 500.0}) {
    auto term = eval_sector_III(g.hm, t, t);
    CHECK(term.value == doctest::Approx(eval_uP(g.hm, 0.0) / std::pow(t, 2.0 / 3.0)).epsilon(1e-13));
    CHECK(std::isfinite(term.value));
  }
}

TEST_CASE("sector dispatch") {
  auto& g = gauss();
  AsymptoticConfig cfg;
  CHECK(classify(1.5, 1000.0, cfg) == Sector::II);
  CHECK(classify(2.5, 1000.0, cfg) == Sector::I);
  CHECK(classify(1.0, 1000.0, cfg) == Sector::III);
  CHECK(classify(0.8, 1000.0, cfg) == Sector::IV);
  CHECK(classify(0.5, 1000.0, cfg) == Sector::V);
  auto a = u_asymptotic(*g.cd, g.hm, 500.0, 500.0);
  CHECK(a.sector == Sector::III);
  auto b = u_asymptotic(*g.cd, g.hm, 1500.0, 1000.0);
  CHECK(b.sector == Sector::II);
  CHECK(b.u == doctest::Approx(eval_sector_I_II(*g.cd, 1.5, 1000.0).value).epsilon(1e-12));
  auto v = u_asymptotic(*g.cd, g.hm, 250.0, 500.0);
  CHECK(v.sector == Sector::V);
  auto vv = eval_sector_V(*g.cd, 0.5, 500.0);
  CHECK(vv.amplitudes.size() == 2);
  CHECK(v.u == doctest::Approx(vv.value).epsilon(1e-12));
  // even in x
  CHECK(u_asymptotic(*g.cd, g.hm, -250.0, 500.0).u == v.u);
  CHECK_THROWS_AS(u_asymptotic(*g.cd, g.hm, 1.0, 0.5), Error);
}
