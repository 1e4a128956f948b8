#include "quadfree/quadfree.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "quadfree/corefns.hpp"
#include "quadfree/cuts.hpp"
#include "quadfree/errors.hpp"
#include "quadfree/freesets.hpp"
#include "quadfree/oracle.hpp"
#include "quadfree/spectral.hpp"

using namespace quadfree;

struct qf_constraint {
  QuadraticConstraint qc;
};
struct qf_canonical {
  CanonicalForm cf;
};
struct qf_free_set {
  FreeSet fs;
};
struct qf_cut {
  CutCertificate cert;
};
struct qf_report_set {
  std::vector<VerificationReport> reports;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_value = 0.0;

qf_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return QF_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonSymmetric: return QF_ERR_NON_SYMMETRIC;
    case ErrorCode::NoConvergence: return QF_ERR_NO_CONVERGENCE;
    case ErrorCode::NotSeparable: return QF_ERR_NOT_SEPARABLE;
    case ErrorCode::DegenerateQuadratic: return QF_ERR_DEGENERATE_QUADRATIC;
    case ErrorCode::EmptyS: return QF_ERR_EMPTY_S;
    case ErrorCode::ApexNotInterior: return QF_ERR_APEX_NOT_INTERIOR;
    case ErrorCode::AllRaysRecession: return QF_ERR_ALL_RAYS_RECESSION;
    case ErrorCode::DegenerateCone: return QF_ERR_DEGENERATE_CONE;
    case ErrorCode::SamplingExhausted: return QF_ERR_SAMPLING_EXHAUSTED;
    case ErrorCode::NotUnit: return QF_ERR_NOT_UNIT;
    case ErrorCode::UndefinedGradient: return QF_ERR_UNDEFINED_GRADIENT;
    case ErrorCode::PreconditionViolated: return QF_ERR_PRECONDITION;
    case ErrorCode::NotInStrictRegion: return QF_ERR_NOT_IN_STRICT_REGION;
  }
  return QF_ERR_INTERNAL;
}

qf_status fail(qf_status st, const std::string& msg, double value = 0.0) {
  g_last_error = msg;
  g_last_value = value;
  return st;
}

template <class F>
qf_status guard(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what(), e.value());
  } catch (const std::bad_alloc&) {
    return fail(QF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QF_ERR_INTERNAL, "unknown exception");
  }
}

#define QF_REQUIRE(cond)                                                        \
  do {                                                                          \
    if (!(cond)) return fail(QF_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

qf_status write_vector(const VectorXd& v, double* buf, size_t cap, size_t* len) {
  if (len) *len = static_cast<size_t>(v.size());
  if (static_cast<size_t>(v.size()) > cap)
    return fail(QF_ERR_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(cap) + " values, need " +
                                             std::to_string(v.size()));
  if (v.size()) {
    if (!buf) return fail(QF_ERR_INVALID_ARGUMENT, "null buffer");
    std::memcpy(buf, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
  }
  return QF_OK;
}

VectorXd read_vector(const double* p, int n) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = p[i];
  return v;
}

MatrixXd read_rows(const double* p, int rows, int cols) {
  MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = p[i * cols + j];
  return M;
}

CaseTag tag_of(qf_case c) { return static_cast<CaseTag>(c); }
qf_case case_of(CaseTag t) { return static_cast<qf_case>(t); }
FreeSetKind kind_of(qf_free_set_kind k) { return static_cast<FreeSetKind>(k); }
qf_free_set_kind kind_of(FreeSetKind k) { return static_cast<qf_free_set_kind>(k); }

Transform transform_of(qf_transform t) { return t == QF_TRANSFORM_LIFTED ? Transform::Lifted : Transform::Centered; }

CaseData raw_case(int n, int m, const double* lambda, const double* a, const double* d) {
  if (n < 1 || m < 1 || !lambda || !a || !d) throw Error(ErrorCode::InvalidArgument, "bad case data");
  return make_case_data(read_vector(lambda, n), read_vector(a, n), read_vector(d, m), true);
}

// Cone rays arrive row-major with row j the j-th ray; R holds them as columns.
SimplicialCone cone_from(const QuadraticConstraint& qc, const double* rays) {
  const int p = qc.dim();
  return make_cone(qc.point, read_rows(rays, p, p).transpose());
}

}  // namespace

extern "C" {

const char* qf_last_error(void) { return g_last_error.c_str(); }
double qf_last_error_value(void) { return g_last_value; }

const char* qf_status_name(qf_status status) {
  switch (status) {
    case QF_OK: return "OK";
    case QF_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case QF_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status > QF_OK && status < QF_ERR_BUFFER_TOO_SMALL)
    return to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  return "Unknown";
}

const char* qf_case_name(qf_case c) { return to_string(tag_of(c)); }
const char* qf_free_set_kind_name(qf_free_set_kind kind) { return to_string(kind_of(kind)); }

qf_status qf_free_set_kind_parse(const char* name, qf_free_set_kind* out) {
  QF_REQUIRE(name && out);
  return guard([&] {
    *out = kind_of(free_set_kind_from_string(name));
    return QF_OK;
  });
}

qf_status qf_constraint_create(int p, const double* Q, const double* b, double c, const double* point,
                               qf_constraint** out) {
  QF_REQUIRE(p > 0 && Q && b && point && out);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_constraint>();
    h->qc = make_constraint(read_rows(Q, p, p), read_vector(b, p), c, read_vector(point, p));
    *out = h.release();
    return QF_OK;
  });
}

void qf_constraint_destroy(qf_constraint* qc) { delete qc; }

qf_status qf_constraint_dim(const qf_constraint* qc, int* p) {
  QF_REQUIRE(qc && p);
  *p = qc->qc.dim();
  return QF_OK;
}

qf_status qf_constraint_eval(const qf_constraint* qc, const double* s, double* value) {
  QF_REQUIRE(qc && s && value);
  *value = qc->qc.evaluate(read_vector(s, qc->qc.dim()));
  return QF_OK;
}

qf_status qf_canonicalize(const qf_constraint* qc, double zero_tol, qf_transform transform, qf_canonical** out) {
  QF_REQUIRE(qc && out && zero_tol > 0.0);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_canonical>();
    h->cf = canonicalize(qc->qc, zero_tol, transform_of(transform));
    *out = h.release();
    return QF_OK;
  });
}

void qf_canonical_destroy(qf_canonical* cf) { delete cf; }

qf_status qf_canonical_signature(const qf_canonical* cf, int* p, int* n, int* m, int* l) {
  QF_REQUIRE(cf);
  if (p) *p = cf->cf.p;
  if (n) *n = cf->cf.n;
  if (m) *m = cf->cf.m;
  if (l) *l = cf->cf.l;
  return QF_OK;
}

qf_status qf_canonical_case(const qf_canonical* cf, qf_case* out) {
  QF_REQUIRE(cf && out);
  *out = case_of(cf->cf.tag);
  return QF_OK;
}

qf_status qf_canonical_q_value(const qf_canonical* cf, double* out) {
  QF_REQUIRE(cf && out);
  *out = cf->cf.q_value;
  return QF_OK;
}

qf_status qf_canonical_vector(const qf_canonical* cf, qf_vector_kind which, double* buf, size_t cap, size_t* len) {
  QF_REQUIRE(cf);
  const CanonicalForm& c = cf->cf;
  switch (which) {
    case QF_VEC_A: return write_vector(c.a, buf, cap, len);
    case QF_VEC_D: return write_vector(c.d, buf, cap, len);
    case QF_VEC_H: return write_vector(c.h, buf, cap, len);
    case QF_VEC_LAMBDA: return write_vector(c.lambda, buf, cap, len);
    case QF_VEC_MAPPED_POINT: return write_vector(c.mapped_point, buf, cap, len);
    case QF_VEC_ROW_SCALE: return write_vector(c.scale.row_scale, buf, cap, len);
  }
  return fail(QF_ERR_INVALID_ARGUMENT, "unknown vector kind");
}

qf_status qf_canonical_matrix(const qf_canonical* cf, int inverse, double* buf, size_t cap, size_t* len) {
  QF_REQUIRE(cf);
  const MatrixXd& M = inverse ? cf->cf.Minv : cf->cf.M;
  VectorXd flat(M.size());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) flat[i * M.cols() + j] = M(i, j);
  return write_vector(flat, buf, cap, len);
}

qf_status qf_canonical_scale(const qf_canonical* cf, double* xy_rescale, double* constant, int* linear_kernel_term) {
  QF_REQUIRE(cf);
  if (xy_rescale) *xy_rescale = cf->cf.scale.xy_rescale;
  if (constant) *constant = cf->cf.scale.constant;
  if (linear_kernel_term) *linear_kernel_term = cf->cf.scale.linear_kernel_term ? 1 : 0;
  return QF_OK;
}

qf_status qf_canonical_map(const qf_canonical* cf, const double* s, double* w) {
  QF_REQUIRE(cf && s && w);
  const VectorXd out = cf->cf.map(read_vector(s, cf->cf.p));
  std::memcpy(w, out.data(), sizeof(double) * static_cast<size_t>(out.size()));
  return QF_OK;
}

qf_status qf_canonical_unmap(const qf_canonical* cf, const double* w, double* s, double* homog) {
  QF_REQUIRE(cf && w && s);
  const VectorXd sh = cf->cf.Minv * read_vector(w, cf->cf.p + 1);
  std::memcpy(s, sh.data(), sizeof(double) * static_cast<size_t>(cf->cf.p));
  if (homog) *homog = sh[cf->cf.p];
  return QF_OK;
}

qf_status qf_canonical_pullback(const qf_canonical* cf, const double* alpha, double beta, double* coef, double* rhs) {
  QF_REQUIRE(cf && alpha && coef && rhs);
  return guard([&] {
    const LinearInequality li = pullback_linear(cf->cf, read_vector(alpha, cf->cf.p + 1), beta);
    std::memcpy(coef, li.coef.data(), sizeof(double) * static_cast<size_t>(li.coef.size()));
    *rhs = li.rhs;
    return QF_OK;
  });
}

qf_status qf_free_set_build(const qf_canonical* cf, qf_free_set** out) {
  QF_REQUIRE(cf && out);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_free_set>();
    h->fs = build_free_set(cf->cf);
    *out = h.release();
    return QF_OK;
  });
}

qf_status qf_free_set_build_kind(const qf_canonical* cf, qf_free_set_kind kind, qf_free_set** out) {
  QF_REQUIRE(cf && out && kind >= QF_SET_CLAMBDA && kind <= QF_SET_CYLINDER_LIFT);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_free_set>();
    h->fs = build_free_set(cf->cf, kind_of(kind));
    *out = h.release();
    return QF_OK;
  });
}

void qf_free_set_destroy(qf_free_set* fs) { delete fs; }

qf_status qf_free_set_kind_of(const qf_free_set* fs, qf_free_set_kind* out) {
  QF_REQUIRE(fs && out);
  *out = kind_of(fs->fs.kind);
  return QF_OK;
}

qf_status qf_free_set_dim(const qf_free_set* fs, int* dim) {
  QF_REQUIRE(fs && dim);
  *dim = fs->fs.dim();
  return QF_OK;
}

qf_status qf_free_set_margin(const qf_free_set* fs, const double* w, double* out) {
  QF_REQUIRE(fs && w && out);
  return guard([&] {
    *out = margin(fs->fs, read_vector(w, fs->fs.dim()));
    return QF_OK;
  });
}

qf_status qf_free_set_boundary_step(const qf_free_set* fs, const double* apex, const double* ray, double tol,
                                    double* t, double* residual) {
  QF_REQUIRE(fs && apex && ray && t);
  return guard([&] {
    const int n = fs->fs.dim();
    const StepLength st = boundary_step(fs->fs, read_vector(apex, n), read_vector(ray, n), tol);
    *t = st.value;
    if (residual) *residual = st.residual;
    return QF_OK;
  });
}

qf_status qf_separate(const qf_constraint* qc, const double* rays, qf_transform transform, double zero_tol,
                      qf_cut** out) {
  QF_REQUIRE(qc && rays && out && zero_tol > 0.0);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_cut>();
    h->cert = separate(qc->qc, cone_from(qc->qc, rays), transform_of(transform), zero_tol);
    *out = h.release();
    return QF_OK;
  });
}

void qf_cut_destroy(qf_cut* cut) { delete cut; }

qf_status qf_cut_dim(const qf_cut* cut, int* p) {
  QF_REQUIRE(cut && p);
  *p = static_cast<int>(cut->cert.coef.size());
  return QF_OK;
}

qf_status qf_cut_get(const qf_cut* cut, double* coef, double* rhs, double* violation) {
  QF_REQUIRE(cut);
  const CutCertificate& c = cut->cert;
  if (coef) std::memcpy(coef, c.coef.data(), sizeof(double) * static_cast<size_t>(c.coef.size()));
  if (rhs) *rhs = c.rhs;
  if (violation) *violation = c.violation;
  return QF_OK;
}

qf_status qf_cut_steps(const qf_cut* cut, double* steps, double* residuals, double* weights) {
  QF_REQUIRE(cut);
  const CutCertificate& c = cut->cert;
  for (std::size_t j = 0; j < c.steps.size(); ++j) {
    if (steps) steps[j] = c.steps[j].value;
    if (residuals) residuals[j] = c.steps[j].residual;
    if (weights) weights[j] = c.weights[static_cast<Eigen::Index>(j)];
  }
  return QF_OK;
}

qf_status qf_cut_apex_margin(const qf_cut* cut, double* out) {
  QF_REQUIRE(cut && out);
  *out = cut->cert.apex_margin;
  return QF_OK;
}

qf_status qf_cut_canonical(const qf_cut* cut, qf_canonical** out) {
  QF_REQUIRE(cut && out);
  return guard([&] {
    *out = new qf_canonical{cut->cert.canonical};
    return QF_OK;
  });
}

qf_status qf_cut_free_set(const qf_cut* cut, qf_free_set** out) {
  QF_REQUIRE(cut && out);
  return guard([&] {
    *out = new qf_free_set{cut->cert.free_set};
    return QF_OK;
  });
}

void qf_verify_options_default(qf_verify_options* opt) {
  if (!opt) return;
  const VerifyOptions d;
  opt->samples = d.samples;
  opt->seed = d.seed;
  opt->homogeneous = 0;
  opt->witness_count = d.witness_count;
  opt->sequence_length = d.sequence_length;
}

qf_status qf_verify(const qf_canonical* cf, const qf_free_set* fs, const qf_verify_options* opt,
                    qf_report_set** out) {
  QF_REQUIRE(cf && fs && out);
  *out = nullptr;
  return guard([&] {
    VerifyOptions o;
    if (opt) {
      o.samples = opt->samples;
      o.seed = opt->seed;
      o.mode = opt->homogeneous ? SampleMode::Homogeneous : SampleMode::Hyperplane;
      o.witness_count = opt->witness_count;
      o.sequence_length = opt->sequence_length > 0 ? opt->sequence_length : o.sequence_length;
    }
    auto h = std::make_unique<qf_report_set>();
    h->reports = run_verification(cf->cf, fs->fs, o);
    *out = h.release();
    return QF_OK;
  });
}

qf_status qf_verify_cut(const qf_constraint* qc, const qf_cut* cut, const double* rays, size_t samples, uint64_t seed,
                        qf_report_set** out) {
  QF_REQUIRE(qc && cut && rays && out);
  *out = nullptr;
  return guard([&] {
    auto h = std::make_unique<qf_report_set>();
    VerificationReport r = check_cut_validity(qc->qc, cone_from(qc->qc, rays), cut->cert, samples, seed);
    h->reports.push_back(r);
    *out = h.release();
    return QF_OK;
  });
}

void qf_report_set_destroy(qf_report_set* rs) { delete rs; }

size_t qf_report_set_count(const qf_report_set* rs) { return rs ? rs->reports.size() : 0; }

qf_status qf_report_set_get(const qf_report_set* rs, size_t index, qf_report_view* out) {
  QF_REQUIRE(rs && out);
  if (index >= rs->reports.size()) return fail(QF_ERR_INVALID_ARGUMENT, "report index out of range");
  const VerificationReport& r = rs->reports[index];
  out->check = r.check.c_str();
  out->samples = r.samples;
  out->worst = r.worst;
  out->tolerance = r.tolerance;
  out->pass = r.pass ? 1 : 0;
  out->seed = r.seed;
  out->witness = r.witness.size() ? r.witness.data() : nullptr;
  out->witness_len = static_cast<size_t>(r.witness.size());
  return QF_OK;
}

int qf_report_set_all_pass(const qf_report_set* rs) {
  if (!rs) return 0;
  for (const auto& r : rs->reports)
    if (!r.pass) return 0;
  return 1;
}

qf_status qf_phi(int n, int m, const double* lambda, const double* a, const double* d, const double* y, double* out) {
  QF_REQUIRE(y && out);
  return guard([&] {
    *out = phi_value(raw_case(n, m, lambda, a, d), read_vector(y, m));
    return QF_OK;
  });
}

qf_status qf_phi_gradient(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                          double* grad) {
  QF_REQUIRE(y && grad);
  return guard([&] {
    const VectorXd g = phi_gradient(raw_case(n, m, lambda, a, d), read_vector(y, m));
    std::memcpy(grad, g.data(), sizeof(double) * static_cast<size_t>(m));
    return QF_OK;
  });
}

qf_status qf_theta(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                   double* out) {
  QF_REQUIRE(y && out);
  return guard([&] {
    *out = theta_dual(raw_case(n, m, lambda, a, d), read_vector(y, m));
    return QF_OK;
  });
}

qf_status qf_r_coefficient(int n, int m, const double* lambda, const double* a, const double* d, const double* beta,
                           double* out) {
  QF_REQUIRE(beta && out);
  return guard([&] {
    *out = r_coefficient(raw_case(n, m, lambda, a, d), read_vector(beta, m));
    return QF_OK;
  });
}

qf_status qf_x_beta(int n, int m, const double* lambda, const double* a, const double* d, const double* y,
                    double* x) {
  QF_REQUIRE(y && x);
  return guard([&] {
    const VectorXd v = x_beta(raw_case(n, m, lambda, a, d), read_vector(y, m));
    std::memcpy(x, v.data(), sizeof(double) * static_cast<size_t>(n));
    return QF_OK;
  });
}

}  // extern "C"
