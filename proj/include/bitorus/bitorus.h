/* bitorus - harmonic analysis for multiplicative convolution on the torus.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every call returns a status code and
 * the last error message is kept per thread. Measures, laws and tables are
 * immutable once created, so handles may be shared across threads.
 */
#ifndef BITORUS_H
#define BITORUS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_EINVAL = 1,   /* malformed argument */
  BT_EDOMAIN = 2,  /* evaluation outside the admissible domain */
  BT_ENOTPX = 3,   /* measure outside the nonzero-mean class */
  BT_EWINDOW = 4,  /* window selection or denominator margin failure */
  BT_ENOCONV = 5,  /* Newton continuation failed */
  BT_EDIAG = 6,    /* cross-engine consistency check failed */
  BT_EIO = 7,      /* file or serialization failure */
  BT_EINTERNAL = 8
} bt_status;

typedef struct bt_measure2 bt_measure2; /* atomic probability measure on the torus */
typedef struct bt_law bt_law;           /* transform-presented law */
typedef struct bt_table bt_table;       /* truncated moment table */

/* Library version string; static storage. */
const char* bt_version(void);

/* Message for the most recent failure on this thread; static storage,
 * overwritten by the next failing call. */
const char* bt_last_error(void);

void bt_string_free(char* s);
void bt_measure2_free(bt_measure2* m);
void bt_law_free(bt_law* l);
void bt_table_free(bt_table* t);

/* Measures travel as JSON: {"atoms":[{"s_angle":..,"t_angle":..,"weight":..}]}
 * with angles in radians. Weights must sum to one. */
bt_status bt_measure2_from_json(const char* json_text, bt_measure2** out);
bt_status bt_measure2_to_json(const bt_measure2* m, char** out_json);
bt_status bt_measure2_atom_count(const bt_measure2* m, size_t* out);
bt_status bt_measure2_moment(const bt_measure2* m, long p, long q, double* re, double* im);
bt_status bt_measure2_in_px_class(const bt_measure2* m, int* out);

/* Pointwise transform evaluation on a measure. `which` is one of:
 * "psi", "h", "sigma", "sigma_op", "s" (two arguments) or
 * "psi1", "psi2", "eta1", "eta2", "eta_inv1", "eta_inv2" (the w argument is
 * ignored). Writes the value and the component tag ("DD","DU","UD","UU"). */
bt_status bt_measure2_eval(const bt_measure2* m, const char* which, double z_re, double z_im,
                           double w_re, double w_im, double value[2], char component[3]);

/* Taylor coefficients of sigma at the origin through `order`, flattened row
 * by row into (order+1)^2 re/im pairs. */
bt_status bt_measure2_sigma_series(const bt_measure2* m, int order, double* coeffs);

/* Laws. */
bt_status bt_law_from_measure(const bt_measure2* m, bt_law** out);
bt_status bt_law_convolve(const bt_law* a, const bt_law* b, bt_law** out);
bt_status bt_law_power(const bt_law* a, long n, bt_law** out);
bt_status bt_law_rotate(const bt_law* a, double angle1, double angle2, bt_law** out);
/* Infinitely divisible law from parameter JSON:
 * {"rho1": <measure>, "rho2": <measure>, "a": <real>,
 *  "gamma1_angle": <real>, "gamma2_angle": <real>}
 * where the rho measures are finite (weights need not sum to one). */
bt_status bt_law_from_levy_json(const char* json_text, bt_law** out);
bt_status bt_law_window(const bt_law* l, double* out_radius);

/* Moment extraction. grid_size must be a power of two with at least four
 * points per order; radius <= 1 requests the grid radius (clamped to the
 * window). diagnostics_json, when non-null, receives an allocated JSON
 * record (window, radii, residuals, min moment-matrix eigenvalue). */
bt_status bt_law_moments(const bt_law* l, int order, int grid_size, double radius,
                         bt_table** out, char** diagnostics_json);

bt_status bt_table_order(const bt_table* t, int* out);
bt_status bt_table_get(const bt_table* t, long p, long q, double* re, double* im);
/* CSV rows "p,q,re,im" sorted lexicographically by (p,q), 17 digits. */
bt_status bt_table_to_csv(const bt_table* t, char** out_csv);

/* Identical-row limit demo. `example` selects the built-in array: "3.5" (or
 * "normal") for the two-atom concentrating array against the normal-limit
 * law, "3.6" (or "poisson") for the jump array against the compound-Poisson
 * law. Writes one max-moment-error per level. */
bt_status bt_limit_demo(const char* example, double rate, const long* levels, size_t n_levels,
                        int order, int grid_size, double* errors_out);

/* Haar convergence report for the k_n-fold powers of one measure. Writes
 * per level: |m11|^k, |m1|^k, |m2|^k, envelope, max off-center moment. */
bt_status bt_haar_check(const bt_measure2* m, const long* levels, size_t n_levels, int order,
                        int grid_size, double* rows_out /* 5 per level */);

/* Runs the acceptance suite, printing one line per criterion to stdout.
 * Writes the number of failed criteria. */
bt_status bt_selftest(int* failures);

#ifdef __cplusplus
}
#endif

#endif /* BITORUS_H */
