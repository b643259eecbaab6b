#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bsq {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr double pi = 3.14159265358979323846;
inline const double sqrt3 = std::sqrt(3.0);
inline const cplx I{0.0, 1.0};
inline const cplx omega = std::polar(1.0, 2.0 * pi / 3.0);
inline const cplx omega2 = std::polar(1.0, 4.0 * pi / 3.0);

// sixth roots of unity, kappa_j = exp(i pi (j-1)/3), j = 1..6 stored at 0..5
cplx kappa(int j);

enum class ErrorCode {
  ok = 0,
  domain = 1,
  singular = 2,
  no_convergence = 3,
  near_zero = 4,
  io = 5,
  inconsistent = 6,
  insufficient_data = 7,
  instability = 8,
  invalid_argument = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// radius around 0 and the kappa_j inside which P(k)^{-1} is refused
inline constexpr double eps_sing = 1e-3;

struct SpectralPoint {
  cplx k;
  std::array<cplx, 3> l;
  std::array<cplx, 3> z;
};

SpectralPoint eval_lz(cplx k);
cplx l_of(int j, cplx k);  // j = 1, 2, 3
cplx z_of(int j, cplx k);
cplx dl_of(int j, cplx k);
cplx dz_of(int j, cplx k);
cplx d2l_of(int j, cplx k);
cplx d2z_of(int j, cplx k);

struct PMatrix {
  Mat3 P;
  cplx det;          // closed form
  bool singular;     // within eps_sing of a sixth root of unity
  int nearest_kappa; // 1..6
};

PMatrix eval_P(cplx k);
// throws Error(singular) within eps_sing of a kappa_j or 0
Mat3 P_inverse(cplx k);
// index (1..6) of the sixth root of unity closest to k, and its distance
int nearest_kappa(cplx k, double* dist = nullptr);
double singular_distance(cplx k);

enum class PhasePair { p21 = 21, p31 = 31, p32 = 32 };

struct PhaseValue {
  double zeta;
  PhasePair pair;
  cplx value;
  cplx dk;
  cplx dkk;
};

PhaseValue eval_phase(double zeta, cplx k, PhasePair pair);

enum class Regime { subsonic, midrange, transition, supersonic };
const char* regime_name(Regime r);

struct SaddleConfig {
  double zeta;
  cplx k1, k2, k3, k4;
  Regime regime;
};

SaddleConfig saddle_points(double zeta);

cplx rtilde(cplx k);

}  // namespace bsq
