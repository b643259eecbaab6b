#include <cmath>
#include <limits>

#include "bsq/scattering.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bsq;
using oracle::born_term;
using oracle::smooth_bump;

namespace {

Mat3 cyclic() {
  Mat3 A;
  A << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  return A;
}
Mat3 swap12() {
  Mat3 B;
  B << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  return B;
}

}  // namespace

TEST_CASE("zero potential gives identity scattering matrix") {
  InitialData d = smooth_bump(0.0, 201);
  for (auto& U : build_potential(d, cplx(0.3, 0.8))) CHECK(U.cwiseAbs().maxCoeff() == 0.0);
  for (double th : {0.3, 1.3, 2.9}) {
    auto s = solve_volterra(d, std::polar(1.0, th), Eigenfunction::X, {1, 2, 3});
    CHECK((s.s - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    auto sa = solve_volterra(d, std::polar(1.0, th), Eigenfunction::XA, {1, 2, 3});
    CHECK((sa.s - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("potential is traceless and cyclically symmetric") {
  auto d = compact_example_data(129);
  Mat3 A = cyclic();
  for (cplx k : {cplx(0.6, 0.5), cplx(-1.3, 0.2), std::polar(1.0, 2.0)}) {
    auto U = build_potential(d, k);
    auto Uw = build_potential(d, omega * k);
    for (std::size_t m = 0; m < U.size(); ++m) {
      CHECK(std::abs(U[m].trace()) < 1e-12 * (1 + U[m].norm()));
      CHECK((U[m] - A * Uw[m] * A.inverse()).cwiseAbs().maxCoeff() < 1e-12 * (1 + U[m].norm()));
    }
  }
}

TEST_CASE("potential is refused next to a sixth root of unity") {
  auto d = compact_example_data(65);
  CHECK_THROWS_AS(build_potential(d, kappa(2) + 1e-5), Error);
}

TEST_CASE("scattering matrix symmetries on the circle") {
  auto d = compact_example_data(513);
  Mat3 A = cyclic(), B = swap12();
  for (double th : {0.4, 1.4, 2.6, 4.0}) {
    cplx k = std::polar(1.0, th);
    auto s = solve_volterra(d, k, Eigenfunction::X, {1, 2, 3}).s;
    auto si = solve_volterra(d, 1.0 / k, Eigenfunction::X, {1, 2, 3}).s;
    auto sw = solve_volterra(d, omega * k, Eigenfunction::X, {1, 2, 3}).s;
    CHECK((s - B * si * B).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s - A * sw * A.inverse()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("march and Neumann iteration agree") {
  auto d = compact_example_data(513);
  VolterraOptions o;
  o.method = VolterraMethod::neumann;
  cplx k = std::polar(1.0, 0.7);
  auto a = solve_volterra(d, k, Eigenfunction::X, {1, 2, 3}, o);
  auto b = solve_volterra(d, k, Eigenfunction::X, {1, 2, 3});
  CHECK(a.converged);
  CHECK((a.s - b.s).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("small data: scattering matrix follows the first Born term to second order") {
  std::vector<cplx> ks;
  for (double th : {0.3, 0.9, 1.3, 1.9, 2.5, 3.4, 4.4, 5.6}) ks.push_back(std::polar(1.0, th));
  ks.push_back(cplx(0.0, 0.5));
  auto base = smooth_bump(1.0, 2049);
  std::vector<Mat3> s1;
  for (cplx k : ks) s1.push_back(born_term(base, k));
  double err[2];
  double eps[2] = {1e-2, 1e-3};
  for (int e = 0; e < 2; ++e) {
    auto d = smooth_bump(eps[e], 2049);
    err[e] = 0.0;
    for (std::size_t n = 0; n < ks.size(); ++n) {
      auto s = solve_volterra(d, ks[n], Eigenfunction::X, {1, 2, 3}).s;
      err[e] = std::max(err[e], (s - Mat3::Identity() - eps[e] * s1[n]).cwiseAbs().maxCoeff());
    }
  }
  double order = std::log10(err[0] / err[1]);
  MESSAGE("Born remainder " << err[0] << " -> " << err[1] << ", order " << order);
  CHECK(order >= 1.9);
}

TEST_CASE("grid refinement of a reflection sample") {
  cplx k = std::polar(1.0, 0.7);
  auto r = [&](int n) {
    auto s = solve_volterra(compact_example_data(n), k, Eigenfunction::X);
    return s.s(0, 1) / s.s(0, 0);
  };
  cplx a = r(257), b = r(513), c = r(1025);
  double ratio = std::abs(a - b) / std::abs(b - c);
  MESSAGE("refinement ratio " << ratio);
  CHECK(ratio > 12.0);
}

TEST_CASE("zero data gives a zero reflection table that passes every check") {
  auto d = smooth_bump(0.0, 101);
  SamplingPlan p;
  p.n_circle = 120;
  p.n_ray = 40;
  auto t = reflection_coefficients(d, p);
  for (auto& c : t.circle)
    if (!c.excluded) {
      CHECK(std::abs(c.r1) == 0.0);
      CHECK(std::abs(c.r2) == 0.0);
    }
  for (auto& c : verify_identities(t)) {
    CHECK_MESSAGE(c.pass, c.name);
    CHECK(c.max_residual == doctest::Approx(0.0).epsilon(1e-14));
  }
  auto b = estimate_blowup_T(t.ray);
  CHECK(std::isinf(b.T_est));
}

TEST_CASE("compact example data: identities, limits and inequalities") {
  auto d = compact_example_data(1025);
  SamplingPlan p;
  p.n_circle = 600;
  p.n_ray = 12;
  auto t = reflection_coefficients(d, p);
  int used = 0;
  for (auto& c : t.circle) {
    if (c.excluded) continue;
    ++used;
    CHECK(c.converged);
    // conjugate symmetry on the circle
    CHECK(std::abs(c.r2 - rtilde(std::polar(1.0, c.theta)) * std::conj(c.r1)) < 1e-9);
  }
  CHECK(used > 500);
  for (auto& c : verify_identities(t)) CHECK_MESSAGE(c.pass, c.name << " residual " << c.max_residual);

  // r1 -> 1 and r2 -> -1 approaching k = 1 and k = -1; the samples are
  // linear in the angle there, so two of them extrapolate to the limit
  auto r12 = [&](double th) {
    auto s = solve_volterra(d, std::polar(1.0, th), Eigenfunction::X);
    cplx r1 = s.s(0, 1) / s.s(0, 0);
    return std::pair{r1, rtilde(std::polar(1.0, th)) * std::conj(r1)};
  };
  for (double th0 : {0.0, pi}) {
    for (double side : {-1.0, 1.0}) {
      auto [a1, a2] = r12(th0 + side * 4e-3);
      auto [b1, b2] = r12(th0 + side * 2e-3);
      CHECK(std::abs(b1 - 1.0) < 2e-2);
      CHECK(std::abs(b2 + 1.0) < 2e-2);
      CHECK(std::abs(2.0 * b1 - a1 - 1.0) < 1e-3);
      CHECK(std::abs(2.0 * b2 - a2 + 1.0) < 1e-3);
    }
  }
}

TEST_CASE("blow-up time from synthetic ray data") {
  std::vector<RaySample> ray;
  for (int i = 1; i <= 60; ++i) {
    RaySample s;
    s.tau = 0.005 * i;
    s.converged = true;
    ray.push_back(s);
  }
  SUBCASE("Gaussian decay") {
    for (auto& s : ray) s.r1 = std::exp(-2.0 / (4 * s.tau * s.tau));
    CHECK(std::abs(estimate_blowup_T(ray).T_est - 2.0) < 1e-6);
  }
  SUBCASE("identically zero") {
    for (auto& s : ray) s.r1 = 0.0;
    CHECK(std::isinf(estimate_blowup_T(ray).T_est));
  }
  SUBCASE("polynomial decay") {
    for (auto& s : ray) s.r1 = std::pow(s.tau, 5);
    CHECK(estimate_blowup_T(ray).T_est == 0.0);
  }
  SUBCASE("too few samples") {
    ray.resize(3);
    for (auto& s : ray) s.r1 = 0.1;
    try {
      estimate_blowup_T(ray);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::insufficient_data);
    }
  }
}

TEST_CASE("initial data validation") {
  auto d = gaussian_data(-0.05, 0.02, 10.0, 101);
  CHECK_THROWS_AS(d.validate(), Error);  // tails far from zero
  auto g = gaussian_data(-0.05, 0.02, 60.0, 401);
  CHECK_NOTHROW(g.validate());
  g.x[5] += 1e-3;
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("resampling keeps the data") {
  auto d = compact_example_data(801);
  auto r = resample(d, 2.0, 1601);
  CHECK(r.size() == 1601);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double x = r.x[i];
    if (std::abs(x) >= 1.0) {
      CHECK(r.u0[i] == 0.0);
    } else {
      double b = (1 - x * x) * (1 - x * x);
      CHECK(std::abs(r.u0[i] + std::exp(-x * x) * b) < 1e-6);
    }
  }
}
