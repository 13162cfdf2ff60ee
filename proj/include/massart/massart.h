/* Massart confidence intervals for bounded means, multistage estimation
 * plans, and a seeded Monte Carlo certification harness.
 *
 * C API over the C++ core: plain functions for the closed-form pieces,
 * an opaque handle for plans, and JSON strings for structured results.
 * All strings returned through char** are heap-allocated; release them
 * with mst_string_free.  Functions return MST_OK on success; on failure
 * mst_last_error() gives a thread-local detail message.
 */
#ifndef MASSART_MASSART_H
#define MASSART_MASSART_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mst_status {
  MST_OK = 0,
  MST_ERR_DOMAIN = 1,     /* parameter outside its mathematical domain */
  MST_ERR_DATA = 2,       /* bad sample data (e.g. value outside support) */
  MST_ERR_VALIDATION = 3, /* plan failed validation */
  MST_ERR_STREAM = 4,     /* sample stream exhausted mid-stage */
  MST_ERR_PARSE = 5,      /* malformed spec string or document */
} mst_status;

const char* mst_version(void);

/* Detail message for the most recent failure on this thread. */
const char* mst_last_error(void);

void mst_string_free(char* s);

/* ---- Theorem 1 interval and its building blocks ---- */

/* c = 9 / (2 ln(2/delta)); delta must lie in [1e-12, 1 - 1e-12]. */
mst_status mst_massart_c(double delta, double* out);

/* Raw closed-form limits on the unit scale; may exit [0,1]. */
mst_status mst_unit_interval(int64_t n, double unit_mean, double delta,
                             double* lower, double* upper);

/* Interval for a summary on support [a,b]; unit_mean is the mean of the
 * rescaled observations (x-a)/(b-a).  clamp != 0 clips to [a,b]. */
mst_status mst_bounded_interval(int64_t n, double unit_mean, double delta,
                                double a, double b, int clamp, double* lower,
                                double* upper, int* clamped);

/* Same from raw samples; on MST_ERR_DATA, *bad_index (if non-NULL) is the
 * offending sample's index. */
mst_status mst_bounded_interval_samples(const double* samples, int64_t count,
                                        double delta, double a, double b,
                                        int clamp, double* lower,
                                        double* upper, int* clamped,
                                        int64_t* bad_index);

/* Half-width function eps(t): the nonnegative root of the exponential
 * tail equation at mean t. */
mst_status mst_epsilon_root(double t, int64_t n, double delta, double* out);

/* Lower-limit map t(z); satisfies z - t(z) = eps(t(z)) and t(z) <= z. */
mst_status mst_t_map(double z, int64_t n, double delta, double* out);

/* Baseline two-sided Hoeffding band: mean +/- sqrt(ln(2/delta)/(2n)). */
mst_status mst_hoeffding_interval(int64_t n, double unit_mean, double delta,
                                  double* lower, double* upper);

/* Worst-case half-width over all unit means at this (n, delta). */
mst_status mst_max_halfwidth(int64_t n, double delta, double* out);

/* ---- Multistage plans ---- */

/* Least n exceeding (b-a)^2/(2 eps^2) ln(2/(zeta delta)), verified
 * against the worst-case half-width.  *adjusted (optional) reports
 * whether verification bumped the formula value. */
mst_status mst_min_final_sample_size(double eps, double zeta, double delta,
                                     double a, double b, int64_t* out,
                                     int* adjusted);

/* Per-stage error budget: flat zeta*delta for "finite:<s>", decaying as
 * zeta*delta*2^(tau-stage) past tau for "tailed:<tau>". */
mst_status mst_stage_delta(const char* schedule, double zeta, double delta,
                           int64_t stage, double* out);

/* Stopping predicate on raw limits.  goal: "absolute:<eps>",
 * "relative:<eps>" or "mixed:<eps_a>,<eps_r>". */
mst_status mst_check_stop(const char* goal, double estimate, double lower,
                          double upper, int* stop);

typedef struct mst_plan mst_plan;

/* Builds a plan from a geometric size schedule n_l = ceil(n1*growth^(l-1)).
 * goal/schedule use the spec grammar above; zeta <= 0 selects the
 * documented default (1/(2s) finite, 1/(2(tau+1)) tailed); max_stages <= 0
 * leaves the cap unset.  For finite absolute/mixed goals the final stage
 * is raised to the certainty threshold when needed.  The plan is built
 * but not validated; call mst_plan_validate. */
mst_status mst_plan_create(const char* goal, const char* schedule,
                           double zeta, double delta, double a, double b,
                           int64_t n1, double growth, int64_t max_stages,
                           mst_plan** out);

mst_status mst_plan_parse(const char* json, mst_plan** out);

void mst_plan_free(mst_plan* plan);

mst_status mst_plan_to_json(const mst_plan* plan, char** out);

/* *valid is 1 when the report has no violations. */
mst_status mst_plan_validate(const mst_plan* plan, char** report_json,
                             int* valid);

/* Executes the plan over the given samples, consumed sequentially. */
mst_status mst_plan_run_samples(const mst_plan* plan, const double* samples,
                                int64_t count, char** trace_json);

/* Executes the plan on a seeded synthetic stream.  dist uses the grammar
 * bernoulli:<p> | beta:<a>,<b> | uniform | pointmass:<v> |
 * twopoint:<v0>,<v1>,<p>, drawn on the plan's support. */
mst_status mst_plan_run_dist(const mst_plan* plan, const char* dist,
                             uint64_t seed, char** trace_json);

/* ---- Monte Carlo certification ---- */

/* Coverage experiment on support [a,b].  threads <= 0 picks a default;
 * the report is identical for any thread count.  *conservative is 1 when
 * empirical coverage >= (1 - delta) - 3*std_error. */
mst_status mst_sim_coverage(const char* dist, double a, double b, int64_t n,
                            double delta, int64_t trials, uint64_t seed,
                            int threads, char** report_json,
                            int* conservative);

/* Plan success experiment; the success event follows the plan's goal
 * evaluated against the distribution's exact mean. */
mst_status mst_sim_plan(const char* dist, const mst_plan* plan,
                        int64_t trials, uint64_t seed, int threads,
                        char** report_json, int* conservative);

#ifdef __cplusplus
}
#endif

#endif /* MASSART_MASSART_H */
