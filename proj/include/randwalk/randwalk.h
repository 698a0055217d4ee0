/* randwalk - potential theory for recurrent integer random walks.
 *
 * C interface to the shared library.  All state lives behind opaque
 * handles; every fallible call returns an rw_status and writes results
 * through out-pointers.  On failure rw_last_error() carries a detail
 * message (thread-local, valid until the next library call on that
 * thread).  Handles are freed with the matching *_free function; a
 * handle never outlives the law it was computed from.
 */
#ifndef RANDWALK_H
#define RANDWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define RW_API __declspec(dllexport)
#else
#  define RW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t rw_status;

enum {
  RW_OK = 0,
  RW_ERR_IO = 1,                /* file unreadable */
  RW_ERR_PARSE = 2,             /* malformed law JSON */
  RW_ERR_MASS_NOT_ONE = 3,      /* core + tails do not sum to 1 */
  RW_ERR_MEAN_NOT_ZERO = 4,     /* increment mean off zero */
  RW_ERR_REDUCIBLE = 5,         /* support generates a proper subgroup */
  RW_ERR_TAIL_OVERLAP = 6,      /* analytic tail overlaps core support */
  RW_ERR_BAD_TAIL = 7,          /* tail exponent <= 1 or bad parameters */
  RW_ERR_WINDOW_TOO_SMALL = 8,
  RW_ERR_WINDOW_EXCEEDED = 9,
  RW_ERR_NO_CONVERGENCE = 10,
  RW_ERR_NOT_APPLICABLE = 11,
  RW_ERR_PRECONDITION = 12,
  RW_ERR_UNBOUNDED = 13,
  RW_ERR_SOLVE_FAILURE = 14,
  RW_ERR_CAP_EXCEEDED = 15,
  RW_ERR_INVALID_ARGUMENT = 16,
  RW_ERR_INTERNAL = 17
};

RW_API const char* rw_status_name(rw_status s);
RW_API const char* rw_last_error(void);

enum { RW_LEFT = 0, RW_RIGHT = 1 };
/* ladder side: RW_UP = strict ascending, RW_DOWN = strict descending */
enum { RW_UP = 0, RW_DOWN = 1 };

/* ------------------------------------------------------------------ */
/* Increment law                                                      */
/* ------------------------------------------------------------------ */

typedef struct rw_law rw_law;

RW_API rw_status rw_law_load_file(const char* path, rw_law** out);
RW_API rw_status rw_law_parse(const char* json_text, rw_law** out);
RW_API void rw_law_free(rw_law* law);

typedef struct rw_moments {
  double mass;            /* total probability (== 1 after validation) */
  double mean;            /* == 0 after validation, kept for reporting */
  double sigma2;          /* variance; meaningful iff sigma2_finite */
  int32_t sigma2_finite;
  double abs_mean;        /* E|X| */
  double ex_plus;         /* E[X 1{X>0}] */
  double ex_minus;        /* E[-X 1{X<0}] */
  int32_t left_heavy;     /* analytic left tail present */
  int32_t right_heavy;
  double left_alpha;      /* tail exponents, 0 when absent */
  double right_alpha;
} rw_moments;

RW_API rw_status rw_law_moments(const rw_law*, rw_moments* out);
RW_API double rw_law_pmf(const rw_law*, int64_t x);
/* side RW_RIGHT: P[X > t]; side RW_LEFT: P[X < -t].  t >= 0, real. */
RW_API rw_status rw_law_tail_prob(const rw_law*, double t, int side, double* out);
/* truncated second-moment integrals of the tail functions */
RW_API rw_status rw_law_m_minus(const rw_law*, double x, double* out);
RW_API rw_status rw_law_m_plus(const rw_law*, double x, double* out);
RW_API rw_status rw_law_m_total(const rw_law*, double x, double* out);
RW_API rw_status rw_law_char_fn(const rw_law*, double theta, double* re, double* im);

/* ------------------------------------------------------------------ */
/* Potential kernel                                                   */
/* ------------------------------------------------------------------ */

typedef struct rw_potential rw_potential;

/* Table of a(x) for xmin <= x <= xmax (xmin <= 0 <= xmax). */
RW_API rw_status rw_potential_compute(const rw_law*, int64_t xmin, int64_t xmax,
                                      double tol, rw_potential** out);
RW_API void rw_potential_free(rw_potential*);
RW_API rw_status rw_potential_a(const rw_potential*, int64_t x,
                                double* val, double* err);
RW_API rw_status rw_potential_a_dagger(const rw_potential*, int64_t x, double* out);
RW_API rw_status rw_potential_abar(const rw_potential*, int64_t x, double* out);
RW_API rw_status rw_potential_window(const rw_potential*, int64_t* xmin, int64_t* xmax);
/* scaling constant: 1/2 when sigma2 < inf, 1 otherwise */
RW_API double rw_potential_A_const(const rw_potential*);
RW_API rw_status rw_harmonicity_residual(const rw_law*, const rw_potential*,
                                         double* max_resid, double* bound);
/* Spitzer's constant c = P[strict ascending ladder from the weak one] */
RW_API rw_status rw_constant_c(const rw_law*, double tol, double* c, double* err);

/* n-step pmf of the walk on [-window, window]; out has 2*window+1 slots,
 * out[window + x] = P[S_n = x | S_0 = 0]; *escaped = mass outside. */
RW_API rw_status rw_nstep_pmf(const rw_law*, int32_t n, int64_t window,
                              double* out, double* escaped);

/* ------------------------------------------------------------------ */
/* Ladder structure                                                   */
/* ------------------------------------------------------------------ */

typedef struct rw_ladder rw_ladder;

/* Tables indexed up to xmax: ladder step laws, renewal sequences,
 * renewal functions.  eps caps the certified residual on the step laws. */
RW_API rw_status rw_ladder_compute(const rw_law*, int64_t xmax, double eps,
                                   rw_ladder** out);
RW_API void rw_ladder_free(rw_ladder*);
RW_API double rw_ladder_c(const rw_ladder*);
RW_API int64_t rw_ladder_xmax(const rw_ladder*);
/* P[Z = k] (side RW_UP) or P[hat-Z = -k] (side RW_DOWN), k >= 1 */
RW_API rw_status rw_ladder_step_pmf(const rw_ladder*, int side, int64_t k, double* out);
RW_API double rw_ladder_step_residual(const rw_ladder*, int side);
/* renewal sequences: side RW_UP -> v(x), RW_DOWN -> v_minus(x), x >= 0 */
RW_API rw_status rw_ladder_renewal(const rw_ladder*, int side, int64_t x, double* out);
/* renewal functions; f_r is extended to all integers */
RW_API rw_status rw_ladder_f_r(const rw_ladder*, int64_t x, double* out);
RW_API rw_status rw_ladder_f_l(const rw_ladder*, int64_t x, double* out);
RW_API rw_status rw_ladder_U_as(const rw_ladder*, int64_t x, double* out);
RW_API rw_status rw_ladder_V_as(const rw_ladder*, int64_t x, double* out);
/* mean ladder heights; *finite = 0 means +inf (up) / -inf (down) */
RW_API rw_status rw_ladder_mean(const rw_ladder*, int side,
                                double* val, int32_t* finite);

/* ------------------------------------------------------------------ */
/* Green functions and hitting distributions                          */
/* ------------------------------------------------------------------ */

typedef struct rw_green rw_green;

/* potential may be NULL; then only the ladder-based queries work. */
RW_API rw_status rw_green_compute(const rw_law*, const rw_ladder*,
                                  const rw_potential*, rw_green** out);
RW_API void rw_green_free(rw_green*);
/* Green function of the walk killed on (-inf,0]. */
RW_API rw_status rw_green_half_line(const rw_green*, int64_t x, int64_t y, double* out);
/* Green function of the walk killed on [0,inf). */
RW_API rw_status rw_green_half_line_upper(const rw_green*, int64_t x, int64_t y, double* out);
/* Green function of the walk killed at the origin. */
RW_API rw_status rw_green_origin(const rw_green*, int64_t x, int64_t y, double* out);
/* lim_{y->+inf} g_{(-inf,0]}(x,y) */
RW_API rw_status rw_green_limit(const rw_green*, int64_t x, double* out);
/* P_x[S_T = y], T the entrance time into (-inf,0]; y <= 0 */
RW_API rw_status rw_hitting_low(const rw_green*, int64_t x, int64_t y, double* out);
/* entrance law into [0,inf) from -inf (needs E[Z] < inf) */
RW_API rw_status rw_hitting_minus_inf(const rw_green*, int64_t y, double* out);
/* H^x{ a(. - shift) } with a certified remainder bound */
RW_API rw_status rw_hitting_functional_a(const rw_green*, int64_t x, int64_t shift,
                                         double* val, double* rem);
/* identity residuals with certified budgets */
RW_API rw_status rw_verify_eqps(const rw_green*, int64_t x, int64_t y,
                                double* resid, double* budget);
RW_API rw_status rw_verify_corollary1(const rw_green*, int64_t x,
                                      double* resid, double* budget);

/* ------------------------------------------------------------------ */
/* Exit problems                                                      */
/* ------------------------------------------------------------------ */

typedef struct rw_exit rw_exit;

/* exact absorbing solve of P_x[enter [N,inf) before (-inf,0]] */
RW_API rw_status rw_exit_solve(const rw_law*, int64_t N, rw_exit** out);
RW_API void rw_exit_free(rw_exit*);
RW_API rw_status rw_exit_up(const rw_exit*, int64_t x, double* lo, double* hi);
RW_API int64_t rw_exit_N(const rw_exit*);
/* P_x[hit N exactly before entering (-inf,0]] via the Green ratio */
RW_API rw_status rw_exit_point(const rw_green*, int64_t x, int64_t N, double* out);
/* P_x[hit N before hitting 0] via the potential kernel */
RW_API rw_status rw_avoid_origin(const rw_potential*, int64_t x, int64_t N, double* out);
/* renewal-function exit approximant f_r(x)/f_r(N) */
RW_API rw_status rw_corollary3_ratio(const rw_ladder*, int64_t x, int64_t N, double* out);
/* overshoot bound: P_x[S at upper exit >= N' | upper exit] <= bound */
RW_API rw_status rw_overshoot_bound(const rw_ladder*, const rw_exit*, int64_t x,
                                    int64_t Nprime, double* out);

/* ------------------------------------------------------------------ */
/* Asymptotic classification                                          */
/* ------------------------------------------------------------------ */

typedef struct rw_alpha_estimate {
  double alpha_m;       /* exponent fitted from m_minus */
  double alpha_fr;      /* exponent fitted from f_r */
  double band;          /* spread of the local estimates */
  int32_t in_regime;    /* 1 when a stable-domain exponent was detected */
} rw_alpha_estimate;

RW_API rw_status rw_estimate_alpha(const rw_law*, const rw_ladder*,
                                   rw_alpha_estimate* out);
/* running Spitzer averages (1/n) sum_{k<=n} P[S_k > 0] as certified
 * brackets; lo/hi have n_max slots, entry n-1 covers horizon n. */
RW_API rw_status rw_spitzer_sum(const rw_law*, int32_t n_max, int64_t window,
                                double* lo, double* hi);

typedef struct rw_report_row {
  char name[48];
  double x, y;          /* abscissae; NAN when unused */
  double value;
  double bound;         /* certified bound / pass budget; NAN when unused */
  int32_t ok;           /* 1 pass, 0 fail, -1 informational */
} rw_report_row;

/* asymptotic diagnostics (regular-variation checks, integral criteria,
 * bounded-potential tests, tail relations); rows freed with rw_rows_free */
RW_API rw_status rw_classify(const rw_law*, const rw_ladder*, const rw_potential*,
                             rw_report_row** rows, size_t* n);
/* machine verification of the identity suites; suite is one of
 * "all", "kernel", "ladder", "green", "exit".  fault_table may name a
 * table ("a", "v", "v_minus", "Z") to perturb at fault_site before
 * verification (negative-control hook); pass NULL for none. */
RW_API rw_status rw_verify_suite(const rw_law*, const char* suite,
                                 const char* fault_table, int64_t fault_site,
                                 rw_report_row** rows, size_t* n);
RW_API void rw_rows_free(rw_report_row* rows);

/* one-sided renewal sanity check (slowly varying truncated mean) */
RW_API rw_status rw_renewal_density_check(int64_t x_eval, int32_t geometric,
                                          double* product, double* expected);

/* ------------------------------------------------------------------ */
/* Monte Carlo                                                        */
/* ------------------------------------------------------------------ */

enum {
  RW_MC_ENTER_LOW = 0,      /* first entrance into (-inf,0] from x0 */
  RW_MC_ENTER_UP = 1,       /* first entrance into [x0+1,inf) from x0 */
  RW_MC_EXIT_INTERVAL = 2,  /* upper exit of (0,N) before lower */
  RW_MC_HIT_POINT = 3,      /* hit N exactly before entering (-inf,0] */
  RW_MC_AVOID_ORIGIN = 4,   /* hit N before hitting 0 */
  RW_MC_VISITS = 5,         /* visits to target before entering (-inf,0] */
  RW_MC_OVERSHOOT = 6       /* upper exit lands >= N' given upper exit */
};

typedef struct rw_mc_params {
  uint64_t seed;
  int64_t n_paths;
  int64_t horizon;          /* per-path step cap; censors beyond */
  int32_t rule;
  int64_t x0;
  int64_t N;
  int64_t Nprime;
  int64_t target;
} rw_mc_params;

typedef struct rw_mc_result {
  double mean;
  double stderr_;
  double censored_frac;     /* fraction of paths cut by the horizon */
  int64_t n_paths;
  uint64_t seed;
} rw_mc_result;

RW_API rw_status rw_mc_run(const rw_law*, const rw_mc_params*, rw_mc_result* out);
/* empirical entrance pmf (ladder step law); pmf_out has kmax slots for
 * heights 1..kmax; *censored is the unfinished-path fraction. */
RW_API rw_status rw_mc_entrance_pmf(const rw_law*, int side, uint64_t seed,
                                    int64_t n_paths, int64_t horizon, int64_t kmax,
                                    double* pmf_out, double* censored);
/* conditioned (origin-avoiding) walk driven by the potential kernel */
RW_API rw_status rw_mc_conditioned_T(const rw_law*, const rw_potential*,
                                     const rw_ladder*, uint64_t seed,
                                     int64_t n_paths, int64_t horizon, int64_t x0,
                                     double* estimate, double* se,
                                     double* entered_frac, double* prediction);
RW_API rw_status rw_mc_conditioned_direction(const rw_law*, const rw_potential*,
                                             uint64_t seed, int64_t n_paths,
                                             int64_t horizon, int64_t x0,
                                             int64_t* zero_hits, double* pos_frac,
                                             double* prediction);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RANDWALK_H */
