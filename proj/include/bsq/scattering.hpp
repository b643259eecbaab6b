#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bsq/spectral.hpp"

namespace bsq {

struct InitialData {
  std::vector<double> x;
  std::vector<double> u0;
  std::vector<double> v0;
  double decay_tail = 1e-13;

  double dx() const { return x[1] - x[0]; }
  std::size_t size() const { return x.size(); }
  // checks grid uniformity and tails; throws Error on failure
  void validate() const;
  // fourth-order finite difference derivative of u0
  std::vector<double> u0x() const;
};

// the compactly supported example data on [-1, 1] (zero outside)
InitialData compact_example_data(int n);
// u0 = amp * exp(-width x^2), v0 = 0 on [-xmax, xmax]
InitialData gaussian_data(double amp, double width, double xmax, int n);
// scales u0 and v0 by eps
InitialData scaled(const InitialData& d, double eps);
// natural cubic spline of one field at the points xs, zero outside the grid
std::vector<double> sample_field(const InitialData& d, const std::vector<double>& u, const std::vector<double>& xs);
// both fields on n uniform points of [-xmax, xmax]
InitialData resample(const InitialData& d, double xmax, int n);

// coefficient rows of the potential: U(x, k) = c(k) w(x, k)^T
struct PotentialRow {
  double x;
  cplx n31;  // -u0x/4 - i v0/(4 sqrt 3)
  cplx n32;  // -u0/2
};

std::vector<PotentialRow> potential_rows(const InitialData& d);
// full 3x3 U at every grid point (tests and diagnostics)
std::vector<Mat3> build_potential(const InitialData& d, cplx k);
Mat3 potential_at(const PotentialRow& row, cplx k);

enum class Eigenfunction { X, XA };
enum class VolterraMethod { march, neumann };

struct VolterraOptions {
  VolterraMethod method = VolterraMethod::march;
  double tol = 1e-13;
  int max_iter = 200;
  double tol_zero = 1e-12;
};

struct ScatteringSample {
  cplx k;
  Mat3 s = Mat3::Identity();  // entries not requested stay at identity
  bool converged = true;
  int iterations = 0;
  double residual = 0.0;
};

// solve the Volterra equation for the requested columns (1-based) of X or X^A
// and assemble the corresponding entries of s or s^A
ScatteringSample solve_volterra(const InitialData& d, cplx k, Eigenfunction which,
                                const std::vector<int>& columns = {1, 2},
                                const VolterraOptions& opt = {});

struct SamplingPlan {
  int n_circle = 1200;       // uniform theta grid, multiple of 6
  double exclusion = 0.05;   // angular radius around each kappa_j
  int n_ray = 60;
  double tau_min = 0.02;
  double tau_max = 0.98;
  bool full_matrix = false;
  int threads = 0;           // 0: hardware concurrency
};

struct CircleSample {
  double theta = 0.0;
  cplx r1{NAN, NAN};
  cplx r2{NAN, NAN};
  cplx s11{NAN, NAN};
  bool excluded = false;
  bool converged = false;
  std::string status = "ok";
  Mat3 s = Mat3::Identity();   // only in full-matrix mode
  Mat3 sA = Mat3::Identity();
};

struct RaySample {
  double tau = 0.0;
  cplx r1{NAN, NAN};
  cplx s11{NAN, NAN};
  bool converged = false;
  std::string status = "ok";
};

struct ReflectionTable {
  SamplingPlan plan;
  std::vector<CircleSample> circle;
  std::vector<RaySample> ray;
  // grid metadata of the data the table came from
  int n_grid = 0;
  double x_min = 0.0, x_max = 0.0;
  std::string data_hash;
};

bool in_exclusion(double theta, double radius);

ReflectionTable reflection_coefficients(const InitialData& d, const SamplingPlan& plan,
                                        const VolterraOptions& opt = {});

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  int samples = 0;
  std::string note;
};

struct VerifyTolerances {
  double identity = 1e-6;
  double inequality = 1e-8;
  double imag = 1e-6;
};

// real part of f on the grid, NaN at excluded or unmapped samples
std::vector<double> f_on_grid(const ReflectionTable& t, std::vector<double>* imag_part = nullptr);

std::vector<CheckResult> verify_identities(const ReflectionTable& t, const VerifyTolerances& tol = {});

struct BlowupEstimate {
  double T_est = 0.0;  // +inf when r1 vanishes on the window
  double tau_lo = 0.05, tau_hi = 0.3;
  double poly_exponent = 0.0;
  double residual = 0.0;
  int samples = 0;
};

struct BlowupOptions {
  double tau_lo = 0.05;
  double tau_hi = 0.3;
  double noise_floor = 1e-14;  // roundoff level of the Volterra solve
};

BlowupEstimate estimate_blowup_T(const std::vector<RaySample>& ray, const BlowupOptions& opt = {});

}  // namespace bsq
