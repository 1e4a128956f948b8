#include "quadfree/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "quadfree/errors.hpp"
#include "quadfree/rng.hpp"

namespace quadfree {

namespace {

constexpr std::size_t kMaxAttempts = 1000000;

VectorXd concat(const VectorXd& x, const VectorXd& y, const VectorXd& z) {
  VectorXd w(x.size() + y.size() + z.size());
  w << x, y, z;
  return w;
}

VectorXd random_box(SplitMix64& rng, Eigen::Index l) {
  VectorXd z(l);
  for (Eigen::Index i = 0; i < l; ++i) z[i] = rng.uniform(-10.0, 10.0);
  return z;
}

// Unit x̂ maximizing λᵀx̂ over ‖x̂‖ <= 1, aᵀx̂ = κ (requires |κ| <= ‖a‖, ‖a‖ > 0).
VectorXd slice_maximizer(const VectorXd& lambda, const VectorXd& a, double kappa, SplitMix64& rng) {
  const double a2 = a.squaredNorm();
  const VectorXd base = kappa * a / a2;
  const double rad = std::sqrt(std::max(0.0, 1.0 - kappa * kappa / a2));
  VectorXd perp = lambda - lambda.dot(a) / a2 * a;
  if (perp.norm() <= 1e-12) {
    if (a.size() == 1) return base;
    perp = rng.normal_vector(a.size());
    perp -= perp.dot(a) / a2 * a;
  }
  return base + rad * perp / perp.norm();
}

void absorb(VerificationReport& into, const VerificationReport& r) {
  if (r.worst > into.worst || (!r.pass && into.pass)) {
    into.worst = std::max(into.worst, r.worst);
    if (r.witness.size()) into.witness = r.witness;
  }
  into.samples += r.samples;
  into.pass = into.pass && r.pass;
}

VerificationReport finish(VerificationReport r) {
  r.pass = r.pass && r.worst <= r.tolerance;
  return r;
}

bool parallel_pm(const CaseData& cd) { return std::abs(std::abs(cd.la) - 1.0) <= 1e-12; }

}  // namespace

std::vector<VectorXd> sample_S(const CanonicalForm& cf, std::size_t count, std::uint64_t seed, SampleMode mode) {
  SplitMix64 rng(seed);
  std::vector<VectorXd> out;
  out.reserve(count);
  const int n = cf.n, m = cf.m, l = cf.l;
  const bool use_h = mode == SampleMode::Hyperplane && l > 0 && cf.h.norm() > 0.0;
  const double na = cf.a.norm();

  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= kMaxAttempts)
      throw Error(ErrorCode::SamplingExhausted, "sampler gave up after 10^6 attempts", static_cast<double>(out.size()));
    const bool extremal = attempt % 2 == 1;
    const double t_rand = std::exp(rng.uniform(-4.0, 4.0));

    if (m == 0) {
      if (n == 0 || !use_h) continue;
      VectorXd z = random_box(rng, l);
      z += cf.h * (-1.0 - cf.h.dot(z)) / cf.h.squaredNorm();
      out.push_back(concat(VectorXd::Zero(n), VectorXd(), z));
      continue;
    }

    const VectorXd v = rng.unit_vector(m);
    VectorXd xh;
    double t = t_rand;
    if (!extremal) {
      xh = rng.uniform() * rng.unit_vector(n);
    } else if (use_h || (mode == SampleMode::Homogeneous && cf.lambda.dot(cf.a) + cf.d.dot(v) <= 0.0)) {
      xh = cf.lambda;
    } else if (mode == SampleMode::Homogeneous) {
      const double kappa = -cf.d.dot(v);
      if (kappa < -na) continue;
      xh = kappa >= na ? VectorXd(cf.lambda) : slice_maximizer(cf.lambda, cf.a, kappa, rng);
    } else if (na <= 1e-15) {
      const double dv = cf.d.dot(v);
      if (!(dv < 0.0)) continue;
      t = -1.0 / dv;
      xh = cf.lambda;
    } else {
      const double kappa = -1.0 / t - cf.d.dot(v);
      if (std::abs(kappa) > na) continue;
      xh = slice_maximizer(cf.lambda, cf.a, kappa, rng);
    }

    const double f = cf.a.dot(xh) + cf.d.dot(v);
    VectorXd z;
    if (mode == SampleMode::Homogeneous) {
      if (f > 0.0) continue;
      z = random_box(rng, l);
    } else if (use_h) {
      z = random_box(rng, l);
      const double rest = t * f + cf.h.dot(z);
      z += cf.h * (-1.0 - rest) / cf.h.squaredNorm();
    } else {
      if (!(f < -1e-6)) continue;
      t = -1.0 / f;
      z = random_box(rng, l);
    }
    out.push_back(concat(t * xh, t * v, z));
  }
  return out;
}

VerificationReport check_freeness(const FreeSet& fs, const std::vector<VectorXd>& samples) {
  VerificationReport r;
  r.check = "freeness";
  r.tolerance = kFreenessTol;
  r.samples = samples.size();
  r.worst = -kInfinity;
  for (const auto& w : samples) {
    const double rel = -margin(fs, w) / (1.0 + w.norm());
    if (rel > r.worst) {
      r.worst = rel;
      r.witness = w;
    }
  }
  if (samples.empty()) r.worst = 0.0;
  r.pass = r.worst <= r.tolerance;
  if (r.pass) r.witness = VectorXd();
  return r;
}

Witness exposing_witness(const CaseData& cd, const VectorXd& beta, const FreeSet* fs) {
  require_unit(beta);
  if (beta.size() != cd.d.size()) throw Error(ErrorCode::InvalidArgument, "beta has wrong dimension");
  const double v = cd.la + cd.d.dot(beta);
  if (!(v < -1e-9)) throw Error(ErrorCode::NotInStrictRegion, "a^T lambda + d^T beta must be < -1e-9", v);
  const VectorXd x = -cd.lambda / v;
  const VectorXd y = -beta / v;
  const double scale = 1.0 + std::sqrt(x.squaredNorm() + y.squaredNorm());
  const double cone_res = std::max(0.0, x.norm() - y.norm()) / scale;
  const double plane_res = std::abs(cd.a.dot(x) + cd.d.dot(y) + 1.0) / scale;
  const double tight_res = std::abs(-cd.lambda.dot(x) + beta.dot(y)) / scale;
  double worst = std::max({cone_res, plane_res, tight_res});

  Witness out;
  out.point = concat(x, y, VectorXd());
  if (fs) {
    VectorXd w = VectorXd::Zero(fs->dim());
    w.head(x.size() + y.size()) = out.point;
    out.point = w;
    // The boundary residual has a 1e−7 budget; weight it onto the 1e−9 scale.
    worst = std::max(worst, 1e-2 * std::abs(margin(*fs, w)) / scale);
  }
  out.report.check = "exposing_witness";
  out.report.samples = 1;
  out.report.tolerance = 1e-9;
  out.report.worst = worst;
  out.report.pass = worst <= out.report.tolerance;
  if (!out.report.pass) out.report.witness = out.point;
  return out;
}

AsymptoteSequence asymptote_sequence(const CaseData& cd, const VectorXd& beta, int N) {
  require_unit(beta);
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (!cd.normalized || !(cd.dnorm < 1.0) || parallel_pm(cd))
    throw Error(ErrorCode::PreconditionViolated, "asymptotes need |d| < 1 = |a| and lambda != +-a");
  const double db = cd.d.dot(beta);
  if (cd.la + db < 0.0) throw Error(ErrorCode::PreconditionViolated, "beta lies in the strict region", cd.la + db);

  const VectorXd xb = x_beta(cd, beta);
  const VectorXd u1 = xb / xb.norm();
  VectorXd t = cd.a - cd.a.dot(u1) * u1;
  if (t.norm() <= 1e-12) {
    t = cd.lambda - cd.lambda.dot(u1) * u1;
  }
  if (t.norm() <= 1e-12) throw Error(ErrorCode::PreconditionViolated, "span{lambda, a} is degenerate");
  t /= t.norm();
  if (cd.a.dot(t) > 0.0) t = -t;
  if (!(cd.a.dot(t) < -1e-14)) throw Error(ErrorCode::PreconditionViolated, "no descent direction for a^T x");

  const VectorXd grad = phi_gradient(cd, beta);
  AsymptoteSequence seq;
  seq.r = r_coefficient(cd, beta);
  seq.first_k = 0;
  double worst_member = 0.0;
  for (int k = 1; k <= N; ++k) {
    const double ang = 1.0 / k;
    const VectorXd xk = std::cos(ang) * u1 + std::sin(ang) * t;
    const double f = cd.a.dot(xk) + db;
    if (!(f < 0.0)) continue;
    if (seq.first_k == 0) seq.first_k = k;
    const VectorXd x = -xk / f;
    const VectorXd y = -beta / f;
    const double scale = 1.0 + std::sqrt(x.squaredNorm() + y.squaredNorm());
    worst_member = std::max({worst_member, std::max(0.0, x.norm() - y.norm()) / scale,
                             std::abs(cd.a.dot(x) + cd.d.dot(y) + 1.0) / scale});
    seq.points.push_back(concat(x, y, VectorXd()));
    if (k == N) seq.last_violation = (cd.lambda.dot(xk) - grad.dot(beta)) / f;
  }
  VerificationReport& r = seq.report;
  r.check = "asymptote_sequence";
  r.samples = 1;
  r.tolerance = 10.0 / N;
  if (seq.first_k == 0 || seq.points.empty()) {
    r.worst = kInfinity;
    r.pass = false;
    return seq;
  }
  r.worst = std::abs(seq.last_violation - seq.r);
  r.pass = r.worst <= r.tolerance && worst_member <= 1e-9;
  if (!r.pass) r.witness = seq.points.back();
  return seq;
}

double phi_bruteforce(const CaseData& cd, const VectorXd& y, int grid) {
  if (!cd.normalized) throw Error(ErrorCode::PreconditionViolated, "phi_bruteforce requires |a| = 1");
  const double R = y.norm();
  const double dy = cd.d.dot(y);
  if (R == 0.0) return 0.0;
  if ((cd.lambda + cd.a).norm() <= 1e-12) return R;
  if ((cd.lambda - cd.a).norm() <= 1e-12) return std::min(R, -dy);

  const double ell = cd.la;
  const double alpha = (cd.a - ell * cd.lambda).norm();
  double best = -kInfinity;
  // x(t) = R(cos t·λ + sin t·u₂) with a = ℓλ + α u₂.
  for (int k = 0; k < grid; ++k) {
    const double t = 2.0 * M_PI * k / grid;
    const double c = std::cos(t), s = std::sin(t);
    if (R * (ell * c + alpha * s) + dy <= 0.0) best = std::max(best, R * c);
  }
  // Exact candidates: the sphere point λR, circle/line intersections, and
  // the interior point −(dᵀy)a.
  if (ell * R + dy <= 0.0) best = std::max(best, R);
  const double kap = -dy / R;
  if (std::abs(kap) <= 1.0) {
    const double h = std::sqrt(1.0 - kap * kap);
    for (double sgn : {-1.0, 1.0}) best = std::max(best, R * (kap * ell - sgn * h * alpha));
  }
  if (std::abs(dy) <= R) best = std::max(best, -dy * ell);
  return best;
}

VerificationReport check_duality(const CaseData& cd, const std::vector<VectorXd>& ys) {
  VerificationReport r;
  r.check = "duality";
  r.tolerance = 1e-9;
  for (const auto& y : ys) {
    const double th = theta_dual(cd, y);
    if (std::isinf(th)) continue;
    const double res = std::abs(dual_objective(cd, y, th) - phi_value(cd, y)) / std::max(1.0, y.norm());
    ++r.samples;
    if (res > r.worst) {
      r.worst = res;
      r.witness = y;
    }
  }
  return finish(r);
}

VerificationReport check_convexity(const CaseData& cd, const std::vector<std::pair<VectorXd, VectorXd>>& pairs) {
  VerificationReport r;
  r.check = "convexity";
  r.tolerance = 1e-10;
  for (const auto& [y1, y2] : pairs) {
    const double gap = phi_value(cd, 0.5 * (y1 + y2)) - 0.5 * (phi_value(cd, y1) + phi_value(cd, y2));
    const double res = gap / std::max(1.0, y1.norm() + y2.norm());
    ++r.samples;
    if (res > r.worst) {
      r.worst = res;
      r.witness = 0.5 * (y1 + y2);
    }
  }
  return finish(r);
}

std::vector<VerificationReport> check_gradient(const CaseData& cd, const std::vector<VectorXd>& ys) {
  VerificationReport fd, euler;
  fd.check = "gradient_fd";
  fd.tolerance = 1e-5;
  euler.check = "gradient_euler";
  euler.tolerance = 1e-10;
  const double h = 1e-6;
  for (const auto& y : ys) {
    VectorXd g;
    try {
      g = phi_gradient(cd, y);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UndefinedGradient) continue;
      throw;
    }
    double res = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      VectorXd yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      res = std::max(res, std::abs(g[i] - (phi_value(cd, yp) - phi_value(cd, ym)) / (2.0 * h)));
    }
    ++fd.samples;
    if (res > fd.worst) {
      fd.worst = res;
      fd.witness = y;
    }
    const double eres = std::abs(g.dot(y) - phi_value(cd, y)) / std::max(1.0, y.norm());
    ++euler.samples;
    if (eres > euler.worst) {
      euler.worst = eres;
      euler.witness = y;
    }
  }
  return {finish(fd), finish(euler)};
}

std::vector<VerificationReport> run_verification(const CanonicalForm& cf, const FreeSet& fs,
                                                 const VerifyOptions& opt) {
  std::vector<VerificationReport> reports;
  {
    VerificationReport r = check_freeness(fs, sample_S(cf, opt.samples, opt.seed, opt.mode));
    r.seed = opt.seed;
    reports.push_back(r);
  }
  if (cf.m == 0) return reports;
  const bool case2 = cf.tag == CaseTag::Case2CR || cf.tag == CaseTag::Case2CRLambdaNegA;
  const bool case1 = cf.tag == CaseTag::Case1CGLambda;
  if (!case1 && !case2) return reports;
  if (cf.l > 0 && cf.h.norm() > 0.0) return reports;

  const CaseData cd = make_case_data(cf.lambda, cf.a, cf.d, case2);
  SplitMix64 rng(SplitMix64::derive(opt.seed, 1));
  const bool boundary_family = fs.kind == FreeSetKind::CGLambda || fs.kind == FreeSetKind::CPhiLambda ||
                               fs.kind == FreeSetKind::CRPhiLambda;

  VerificationReport wit;
  wit.check = "exposing_witness";
  wit.tolerance = 1e-9;
  wit.seed = opt.seed;
  VerificationReport asym;
  asym.check = "asymptote_sequence";
  asym.tolerance = 10.0 / opt.sequence_length;
  asym.seed = opt.seed;
  const bool asym_ok = case2 && cd.dnorm < 1.0 && !parallel_pm(cd);
  std::size_t n_wit = 0, n_asym = 0;
  for (std::size_t tries = 0; tries < 50 * opt.witness_count && (n_wit < opt.witness_count ||
                                                                  (asym_ok && n_asym < opt.witness_count));
       ++tries) {
    const VectorXd beta = rng.unit_vector(cf.m);
    const double v = cd.la + cd.d.dot(beta);
    if (v < -1e-6 && n_wit < opt.witness_count) {
      absorb(wit, exposing_witness(cd, beta, boundary_family ? &fs : nullptr).report);
      ++n_wit;
    } else if (v > 1e-6 && asym_ok && n_asym < opt.witness_count) {
      absorb(asym, asymptote_sequence(cd, beta, opt.sequence_length).report);
      ++n_asym;
    }
  }
  reports.push_back(wit);
  if (asym_ok) reports.push_back(asym);

  if (case2) {
    std::vector<VectorXd> ys;
    std::vector<std::pair<VectorXd, VectorXd>> pairs;
    for (std::size_t i = 0; i < opt.witness_count; ++i) {
      ys.push_back(rng.normal_vector(cf.m) * 3.0);
      pairs.emplace_back(rng.normal_vector(cf.m) * 3.0, rng.normal_vector(cf.m) * 3.0);
    }
    reports.push_back(check_duality(cd, ys));
    reports.push_back(check_convexity(cd, pairs));
    for (auto& r : check_gradient(cd, ys)) reports.push_back(r);
    for (std::size_t i = reports.size() - 4; i < reports.size(); ++i) reports[i].seed = opt.seed;
  }
  return reports;
}

VerificationReport check_cut_validity(const QuadraticConstraint& qc, const SimplicialCone& cone,
                                      const CutCertificate& cert, std::size_t count, std::uint64_t seed) {
  VerificationReport r;
  r.check = "cut_validity";
  r.tolerance = kFreenessTol;
  r.seed = seed;
  const int p = qc.dim();
  const auto lu = cone.R.partialPivLu();
  const double cnorm = std::max(1.0, cert.coef.norm());
  auto consider = [&](const VectorXd& s) {
    const double res = (cert.coef.dot(s) - cert.rhs) / (cnorm * (1.0 + s.norm()));
    ++r.samples;
    if (res > r.worst) {
      r.worst = res;
      r.witness = s;
    }
  };
  auto in_cone = [&](const VectorXd& s) { return (lu.solve(s - cone.apex).array() >= -1e-12).all(); };

  SplitMix64 rng(seed);
  const std::size_t direct = count / 2;
  std::size_t found = 0;
  for (std::size_t attempt = 0; found < direct && attempt < kMaxAttempts; ++attempt) {
    VectorXd mu(p);
    for (int j = 0; j < p; ++j) mu[j] = rng.uniform() < 0.15 ? 0.0 : std::exp(rng.uniform(-6.0, 6.0));
    const VectorXd s = cone.apex + cone.R * mu;
    if (qc.evaluate(s) > 0.0) continue;
    consider(s);
    ++found;
  }

  const CanonicalForm& cf = cert.canonical;
  if (cf.m > 0 || (cf.l > 0 && cf.h.norm() > 0.0)) {
    std::size_t mapped = 0;
    for (std::uint64_t batch = 0; mapped < count - direct && batch < 64; ++batch) {
      std::vector<VectorXd> ws;
      try {
        ws = sample_S(cf, count, SplitMix64::derive(seed, batch + 7));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SamplingExhausted) break;
        throw;
      }
      for (const auto& w : ws) {
        const VectorXd sh = cf.Minv * w;
        const VectorXd s = sh.head(p) / sh[p];
        if (!in_cone(s)) continue;
        consider(s);
        if (++mapped >= count - direct) break;
      }
    }
  }
  return finish(r);
}

}  // namespace quadfree
