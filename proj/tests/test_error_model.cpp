#include <random>

#include "bsq/error_model.hpp"
#include "doctest.h"

using namespace bsq;

TEST_CASE("error-function model: jump on the line") {
  double yt = 0.3;
  cplx s(0.7, -0.4);
  cplx dir = std::polar(1.0, pi / 6);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double r = -6.0 + 12.0 * (i + 0.5) / 50.0;
    worst = std::max(worst, jump_residual(yt, s, dir * r));
  }
  CHECK(worst < 1e-11);
  CHECK(jump_residual(yt, s, 2.0 * dir) < 1e-11);
}

TEST_CASE("error-function model: symmetry and analyticity") {
  std::mt19937 g(5);
  std::uniform_real_distribution<double> U(-4, 4);
  for (int n = 0; n < 100; ++n) {
    cplx w(U(g), U(g));
    CHECK(symmetry_residual(0.2, cplx(0.5, 0.1), w) < 1e-12);
  }
  CHECK(cauchy_riemann_residual(0.2, cplx(0.5, 0.1), cplx(0.4, -0.9)) < 1e-6);
  CHECK(cauchy_riemann_residual(0.2, cplx(0.5, 0.1), cplx(-1.3, 2.1)) < 1e-6);
}

TEST_CASE("error-function model: leading coefficient") {
  for (double yt : {0.0, 0.3, 1.5}) {
    cplx s(0.7, -0.4);
    cplx expected = s * std::polar(1.0, 3 * pi / 4) / (std::sqrt(12 * pi) * std::sqrt(1 + yt));
    CHECK(std::abs(mW_coefficient(yt, s, 0) - expected) < 1e-14);
    for (double phi : {-pi / 3, pi / 2, 2.0}) {
      auto c = mW_richardson(yt, s, phi, {25, 50, 100});
      CHECK(std::abs(c[0] - expected) < 1e-6);
    }
  }
}

TEST_CASE("error-function model tends to the identity") {
  auto m = eval_mW(0.3, cplx(0.5, 0.2), cplx(0.0, 300.0));
  CHECK((m.value - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-2);
  auto z = eval_mW(0.3, 0.0, cplx(1.0, 2.0));
  CHECK((z.value - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
}
