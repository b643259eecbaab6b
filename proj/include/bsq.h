#ifndef BSQ_H
#define BSQ_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BSQ_API __declspec(dllexport)
#else
#define BSQ_API __attribute__((visibility("default")))
#endif

typedef enum bsq_status {
  BSQ_OK = 0,
  BSQ_E_DOMAIN = 1,
  BSQ_E_SINGULAR = 2,
  BSQ_E_NO_CONVERGENCE = 3,
  BSQ_E_NEAR_ZERO = 4,
  BSQ_E_IO = 5,
  BSQ_E_INCONSISTENT = 6,
  BSQ_E_INSUFFICIENT_DATA = 7,
  BSQ_E_INSTABILITY = 8,
  BSQ_E_INVALID_ARGUMENT = 9,
  BSQ_E_INTERNAL = 10
} bsq_status;

typedef struct bsq_initial_data bsq_initial_data;
typedef struct bsq_reflection bsq_reflection;
typedef struct bsq_hm bsq_hm;
typedef struct bsq_asym bsq_asym;
typedef struct bsq_sim bsq_sim;

/* message of the last failure on the calling thread, "" when none */
BSQ_API const char* bsq_last_error(void);
BSQ_API const char* bsq_status_name(bsq_status s);
BSQ_API const char* bsq_version(void);

/* ---- initial data: x, u0, v0 on a uniform grid ---- */
BSQ_API bsq_status bsq_initial_read(const char* path, bsq_initial_data** out);
BSQ_API bsq_status bsq_initial_from_arrays(const double* x, const double* u0, const double* v0, size_t n,
                                           bsq_initial_data** out);
BSQ_API bsq_status bsq_initial_gaussian(double amp, double width, double xmax, int n, bsq_initial_data** out);
BSQ_API bsq_status bsq_initial_compact_example(int n, bsq_initial_data** out);
/* cubic resampling onto [-xmax, xmax] with n points, zero outside the data */
BSQ_API bsq_status bsq_initial_resample(const bsq_initial_data* d, double xmax, int n, bsq_initial_data** out);
BSQ_API bsq_status bsq_initial_write(const bsq_initial_data* d, const char* path);
BSQ_API size_t bsq_initial_size(const bsq_initial_data* d);
BSQ_API bsq_status bsq_initial_arrays(const bsq_initial_data* d, double* x, double* u0, double* v0);
/* 16 hex digits plus terminator */
BSQ_API bsq_status bsq_initial_hash(const bsq_initial_data* d, char out[17]);
BSQ_API void bsq_initial_free(bsq_initial_data* d);

/* ---- reflection coefficients ---- */
typedef struct bsq_sampling {
  int n_circle;      /* multiple of 6 */
  double exclusion;  /* angular radius excluded around each sixth root of unity */
  int n_ray;
  double tau_min, tau_max;
  double tol;        /* Volterra tolerance */
  int threads;       /* 0: hardware concurrency */
} bsq_sampling;

BSQ_API void bsq_sampling_default(bsq_sampling* s);
BSQ_API bsq_status bsq_scatter(const bsq_initial_data* d, const bsq_sampling* s, bsq_reflection** out);
/* samples that were neither excluded nor converged */
BSQ_API int bsq_reflection_failures(const bsq_reflection* r);
/* writes the circle file at path and the ray file next to it (foo.csv -> foo_ray.csv) */
BSQ_API bsq_status bsq_reflection_write(const bsq_reflection* r, const char* path);
BSQ_API bsq_status bsq_reflection_read(const char* path, bsq_reflection** out);
BSQ_API size_t bsq_reflection_size(const bsq_reflection* r);
/* theta and r1, r2 as (re, im) pairs; NaN at excluded samples */
BSQ_API bsq_status bsq_reflection_sample(const bsq_reflection* r, size_t i, double* theta, double r1[2], double r2[2]);
BSQ_API void bsq_reflection_free(bsq_reflection* r);

/* runs the identity and inequality suite; JSON report written when path is non-null */
BSQ_API bsq_status bsq_verify(const bsq_reflection* r, double tol_identity, double tol_inequality,
                              const char* report_path, int* all_pass);

/* T estimate from a ray file; samples with |r1| <= noise_floor are dropped,
   +inf when none is left on the fit window */
BSQ_API bsq_status bsq_blowup(const char* ray_path, double tau_lo, double tau_hi, double noise_floor,
                              const char* report_path, double* T_est);

/* ---- Hastings-McLeod ---- */
BSQ_API bsq_status bsq_painleve(double y_max, int n, bsq_hm** out);
BSQ_API bsq_status bsq_hm_read(const char* path, bsq_hm** out);
BSQ_API bsq_status bsq_hm_write(const bsq_hm* h, const char* path);
BSQ_API bsq_status bsq_hm_eval(const bsq_hm* h, double y, double* u, double* u_prime, double* u_P);
BSQ_API bsq_status bsq_hm_diagnostics(const bsq_hm* h, double* ode_residual, int* converged);
BSQ_API void bsq_hm_free(bsq_hm* h);

/* ---- asymptotics ---- */
typedef struct bsq_asym_config {
  double t_min;
  double front_M;
  double far_zeta;
  double edge_band;
} bsq_asym_config;

BSQ_API void bsq_asym_config_default(bsq_asym_config* c);
/* keeps its own copies; r and h may be freed afterwards */
BSQ_API bsq_status bsq_asym_create(const bsq_reflection* r, const bsq_hm* h, const bsq_asym_config* c,
                                   bsq_asym** out);
/* sector: 1..5 for I..V */
BSQ_API bsq_status bsq_asym_eval(const bsq_asym* a, double x, double t, double* u, int* sector, int* extrapolated);
/* CSV x,t,u_asym,sector,extrapolated over x = xmin, xmin + dx, ... <= xmax for every t */
BSQ_API bsq_status bsq_asym_write(const bsq_asym* a, const double* times, size_t n_times, double xmin, double xmax,
                                  double dx, const char* path);
BSQ_API void bsq_asym_free(bsq_asym* a);

/* ---- simulation ---- */
typedef struct bsq_sim_config {
  double L;
  int N;
  double dt;
  int damping;
  double kappa_c, p, gamma;
  int cancel_growth;
  double dealias;
  double tail_guard;
  double sponge_width, sponge_strength;
  double mean_tol;
  double t_end; /* 0: last snapshot time */
} bsq_sim_config;

BSQ_API void bsq_sim_config_default(bsq_sim_config* c);
/* reads key=value text into c; snapshot times and the initial data path are
   returned through the optional outputs (times capacity in *n_times) */
BSQ_API bsq_status bsq_sim_config_read(const char* path, bsq_sim_config* c, double* times, size_t* n_times,
                                       char* initial_path, size_t initial_cap);
BSQ_API bsq_status bsq_sim_create(const bsq_sim_config* c, bsq_sim** out);
BSQ_API size_t bsq_sim_size(const bsq_sim* s);
BSQ_API bsq_status bsq_sim_grid(const bsq_sim* s, double* x);
/* u0 and u1 = u_t(0) on the grid */
BSQ_API bsq_status bsq_sim_init(bsq_sim* s, const double* u0, const double* u1);
/* initial data resampled onto the grid (zero outside its range) */
BSQ_API bsq_status bsq_sim_init_data(bsq_sim* s, const bsq_initial_data* d);
BSQ_API bsq_status bsq_sim_step(bsq_sim* s, int n_steps);
BSQ_API bsq_status bsq_sim_fields(const bsq_sim* s, double* t, double* u, double* v);
BSQ_API double bsq_sim_mass(const bsq_sim* s);
/* runs to t_end and writes snapshot_<k>.csv files into out_dir for each requested time */
BSQ_API bsq_status bsq_sim_run(bsq_sim* s, double t_end, const double* times, size_t n_times, const char* out_dir);
BSQ_API void bsq_sim_free(bsq_sim* s);

/* ---- comparison ---- */
/* reads every snapshot in sim_dir and the asymptote CSV; writes a JSON report
   (and a CSV next to it); fails on mismatched data hashes */
BSQ_API bsq_status bsq_compare(const char* sim_dir, const char* asym_path, const char* report_path,
                               int* slow_front_flag);

#ifdef __cplusplus
}
#endif

#endif
