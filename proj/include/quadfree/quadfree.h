/* C interface to the quadfree library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a qf_status; on
 * failure qf_last_error() describes the problem for the calling thread.
 * Matrices are row-major. Vectors written into caller buffers report their
 * length through `len`; if `cap` is too small nothing is written and
 * QF_ERR_BUFFER_TOO_SMALL is returned with `len` set.
 */
#ifndef QUADFREE_H
#define QUADFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QF_API __declspec(dllexport)
#else
#define QF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qf_status {
  QF_OK = 0,
  QF_ERR_INVALID_ARGUMENT,
  QF_ERR_NON_SYMMETRIC,
  QF_ERR_NO_CONVERGENCE,
  QF_ERR_NOT_SEPARABLE,
  QF_ERR_DEGENERATE_QUADRATIC,
  QF_ERR_EMPTY_S,
  QF_ERR_APEX_NOT_INTERIOR,
  QF_ERR_ALL_RAYS_RECESSION,
  QF_ERR_DEGENERATE_CONE,
  QF_ERR_SAMPLING_EXHAUSTED,
  QF_ERR_NOT_UNIT,
  QF_ERR_UNDEFINED_GRADIENT,
  QF_ERR_PRECONDITION,
  QF_ERR_NOT_IN_STRICT_REGION,
  QF_ERR_BUFFER_TOO_SMALL,
  QF_ERR_INTERNAL
} qf_status;

typedef enum qf_transform { QF_TRANSFORM_CENTERED = 0, QF_TRANSFORM_LIFTED = 1 } qf_transform;

typedef enum qf_case {
  QF_CASE_HOMOG_H_NONZERO = 0,
  QF_CASE_CASE1_CGLAMBDA,
  QF_CASE_CONVEX_M1,
  QF_CASE_CASE2_CR,
  QF_CASE_CASE2_CR_LAMBDA_NEG_A,
  QF_CASE_EMPTY_S,
  QF_CASE_NOT_SEPARABLE
} qf_case;

typedef enum qf_free_set_kind {
  QF_SET_CLAMBDA = 0,
  QF_SET_CGLAMBDA,
  QF_SET_CPHILAMBDA,
  QF_SET_CRPHILAMBDA,
  QF_SET_HALFSPACE,
  QF_SET_CYLINDER_LIFT
} qf_free_set_kind;

typedef enum qf_vector_kind {
  QF_VEC_A = 0,
  QF_VEC_D,
  QF_VEC_H,
  QF_VEC_LAMBDA,
  QF_VEC_MAPPED_POINT,
  QF_VEC_ROW_SCALE
} qf_vector_kind;

typedef struct qf_constraint qf_constraint;
typedef struct qf_canonical qf_canonical;
typedef struct qf_free_set qf_free_set;
typedef struct qf_cut qf_cut;
typedef struct qf_report_set qf_report_set;

QF_API const char* qf_last_error(void);
/* Numeric payload of the last error (q at the point for NOT_SEPARABLE). */
QF_API double qf_last_error_value(void);
QF_API const char* qf_status_name(qf_status status);
QF_API const char* qf_case_name(qf_case c);
QF_API const char* qf_free_set_kind_name(qf_free_set_kind kind);
QF_API qf_status qf_free_set_kind_parse(const char* name, qf_free_set_kind* out);

/* sᵀQs + bᵀs + c <= 0 with the point to separate. */
QF_API qf_status qf_constraint_create(int p, const double* Q, const double* b, double c, const double* point,
                                      qf_constraint** out);
QF_API void qf_constraint_destroy(qf_constraint* qc);
QF_API qf_status qf_constraint_dim(const qf_constraint* qc, int* p);
QF_API qf_status qf_constraint_eval(const qf_constraint* qc, const double* s, double* value);

QF_API qf_status qf_canonicalize(const qf_constraint* qc, double zero_tol, qf_transform transform,
                                 qf_canonical** out);
QF_API void qf_canonical_destroy(qf_canonical* cf);
QF_API qf_status qf_canonical_signature(const qf_canonical* cf, int* p, int* n, int* m, int* l);
QF_API qf_status qf_canonical_case(const qf_canonical* cf, qf_case* out);
QF_API qf_status qf_canonical_q_value(const qf_canonical* cf, double* out);
QF_API qf_status qf_canonical_vector(const qf_canonical* cf, qf_vector_kind which, double* buf, size_t cap,
                                     size_t* len);
/* The (p+1)×(p+1) forward map M, or its inverse when `inverse` is nonzero. */
QF_API qf_status qf_canonical_matrix(const qf_canonical* cf, int inverse, double* buf, size_t cap, size_t* len);
QF_API qf_status qf_canonical_scale(const qf_canonical* cf, double* xy_rescale, double* constant,
                                    int* linear_kernel_term);
/* w = M(s, 1); w has p + 1 entries. */
QF_API qf_status qf_canonical_map(const qf_canonical* cf, const double* s, double* w);
/* s-part of M⁻¹w (p entries) and the homogenizing coordinate (1 on the hyperplane). */
QF_API qf_status qf_canonical_unmap(const qf_canonical* cf, const double* w, double* s, double* homog);
/* αᵀw <= β in canonical space as coefᵀs <= rhs. */
QF_API qf_status qf_canonical_pullback(const qf_canonical* cf, const double* alpha, double beta, double* coef,
                                       double* rhs);

QF_API qf_status qf_free_set_build(const qf_canonical* cf, qf_free_set** out);
QF_API qf_status qf_free_set_build_kind(const qf_canonical* cf, qf_free_set_kind kind, qf_free_set** out);
QF_API void qf_free_set_destroy(qf_free_set* fs);
QF_API qf_status qf_free_set_kind_of(const qf_free_set* fs, qf_free_set_kind* out);
QF_API qf_status qf_free_set_dim(const qf_free_set* fs, int* dim);
QF_API qf_status qf_free_set_margin(const qf_free_set* fs, const double* w, double* out);
/* *t is +inf for recession directions. */
QF_API qf_status qf_free_set_boundary_step(const qf_free_set* fs, const double* apex, const double* ray, double tol,
                                           double* t, double* residual);

/* rays: p×p row-major, row j is ray j. The apex is the constraint's point. */
QF_API qf_status qf_separate(const qf_constraint* qc, const double* rays, qf_transform transform, double zero_tol,
                             qf_cut** out);
QF_API void qf_cut_destroy(qf_cut* cut);
QF_API qf_status qf_cut_dim(const qf_cut* cut, int* p);
/* coef, steps and weights each hold p entries. */
QF_API qf_status qf_cut_get(const qf_cut* cut, double* coef, double* rhs, double* violation);
QF_API qf_status qf_cut_steps(const qf_cut* cut, double* steps, double* residuals, double* weights);
QF_API qf_status qf_cut_apex_margin(const qf_cut* cut, double* out);
/* A copy of the canonical form and free set used for the cut. */
QF_API qf_status qf_cut_canonical(const qf_cut* cut, qf_canonical** out);
QF_API qf_status qf_cut_free_set(const qf_cut* cut, qf_free_set** out);

typedef struct qf_report_view {
  const char* check;
  size_t samples;
  double worst;
  double tolerance;
  int pass;
  uint64_t seed;
  const double* witness; /* NULL when absent; valid while the set lives */
  size_t witness_len;
} qf_report_view;

typedef struct qf_verify_options {
  size_t samples;
  uint64_t seed;
  int homogeneous;
  size_t witness_count;
  int sequence_length;
} qf_verify_options;

QF_API void qf_verify_options_default(qf_verify_options* opt);
QF_API qf_status qf_verify(const qf_canonical* cf, const qf_free_set* fs, const qf_verify_options* opt,
                           qf_report_set** out);
/* Checks the cut on points of {q <= 0} inside the cone (same rays as qf_separate). */
QF_API qf_status qf_verify_cut(const qf_constraint* qc, const qf_cut* cut, const double* rays, size_t samples,
                               uint64_t seed, qf_report_set** out);
QF_API void qf_report_set_destroy(qf_report_set* rs);
QF_API size_t qf_report_set_count(const qf_report_set* rs);
QF_API qf_status qf_report_set_get(const qf_report_set* rs, size_t index, qf_report_view* out);
QF_API int qf_report_set_all_pass(const qf_report_set* rs);

/* Scalar machinery on raw (λ, a, d) with ‖λ‖ = ‖a‖ = 1, ‖d‖ <= 1. */
QF_API qf_status qf_phi(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                        double* out);
QF_API qf_status qf_phi_gradient(int n, int m, const double* lambda, const double* a, const double* d,
                                 const double* y, double* grad);
/* *out may be +inf. */
QF_API qf_status qf_theta(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                          double* out);
QF_API qf_status qf_r_coefficient(int n, int m, const double* lambda, const double* a, const double* d,
                                  const double* beta, double* out);
QF_API qf_status qf_x_beta(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                           double* x);

#ifdef __cplusplus
}
#endif

#endif
