#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bsq/painleve.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bsq;

using namespace oracle;


TEST_CASE("Hastings-McLeod: residual and boundary behaviour") {
  auto hm = solve_hastings_mcleod(8.0, 4001);
  REQUIRE(hm.converged);
  CHECK(hm.ode_residual() < 1e-8);
  CHECK(std::abs(hm.u_at(8.0) / ai(8.0) - 1.0) < 1e-6);
  CHECK(std::abs(hm.u_at(-8.0) / 2.0 - 1.0) < 2e-2);
  for (double y : {-7.5, -3.0, 0.0, 2.0, 7.0}) CHECK(hm.u_at(y) > 0.0);
}

TEST_CASE("Hastings-McLeod on a longer interval still matches Ai at y = 8") {
  auto hm = solve_hastings_mcleod(10.0, 5001);
  REQUIRE(hm.converged);
  CHECK(std::abs(hm.u_at(8.0) / ai(8.0) - 1.0) < 1e-6);
}

TEST_CASE("Hastings-McLeod: independent collocation agrees on u(0)") {
  auto hm = solve_hastings_mcleod(8.0, 4001);
  double ref = collocation_u0(8.0, 160);
  MESSAGE("u(0) = " << hm.u_at(0.0) << ", collocation " << ref);
  CHECK(std::abs(hm.u_at(0.0) - ref) < 1e-8);
  // known value of the Hastings-McLeod solution at the origin
  CHECK(std::abs(ref - 0.36706155154807) < 1e-9);
}

TEST_CASE("front profile u_P") {
  auto hm = solve_hastings_mcleod(8.0, 4001);
  double K = std::pow(2.0, 2.0 / 3.0) * std::cbrt(3.0);
  CHECK(std::abs(eval_uP(hm, 8.0) - K * (ai_prime(8.0) - ai(8.0) * ai(8.0))) < 1e-6);
  for (double y = -8.0; y <= -6.0; y += 0.25) CHECK(eval_uP(hm, y) < 0.0);
  for (double y : {-8.0, 8.0}) {
    CHECK(std::abs(eval_uP(hm, y - 1e-9) - eval_uP(hm, y + 1e-9)) < 1e-6);
  }
  for (double y = -20; y <= 20; y += 0.5) CHECK(std::isfinite(eval_uP(hm, y)));
  // tails outside the grid
  CHECK(std::abs(hm.u_at(-12.0) - left_tail(-12.0)) < 1e-8);
  CHECK(std::abs(hm.u_at(12.0) - ai(12.0)) < 1e-12);
}
