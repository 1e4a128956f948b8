#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "instance.hpp"
#include "json.hpp"
#include "loop.hpp"
#include "plot.hpp"
#include "quadfree/quadfree.h"

using nlohmann::ordered_json;
using namespace quadfree::cli;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kNotSeparable = 2,
  kParse = 3,
  kAllRecession = 4,
  kEmptyS = 5,
};

struct CommandError {
  int code;
  std::string message;
};

struct Options {
  std::string path;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int max_iters = 50;
  std::string layers;
  double tol = 1e-9;
  std::string transform = "centered";
  std::string free_set;
  bool homogeneous = false;
  std::string output;
};

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Constraint = std::unique_ptr<qf_constraint, Deleter<qf_constraint, qf_constraint_destroy>>;
using Canonical = std::unique_ptr<qf_canonical, Deleter<qf_canonical, qf_canonical_destroy>>;
using FreeSetH = std::unique_ptr<qf_free_set, Deleter<qf_free_set, qf_free_set_destroy>>;
using Cut = std::unique_ptr<qf_cut, Deleter<qf_cut, qf_cut_destroy>>;
using Reports = std::unique_ptr<qf_report_set, Deleter<qf_report_set, qf_report_set_destroy>>;

int exit_for(qf_status st) {
  switch (st) {
    case QF_ERR_NOT_SEPARABLE: return kNotSeparable;
    case QF_ERR_EMPTY_S: return kEmptyS;
    case QF_ERR_ALL_RAYS_RECESSION: return kAllRecession;
    default: return kFailure;
  }
}

void check(qf_status st, const char* what) {
  if (st == QF_OK) return;
  std::string msg = std::string(what) + ": " + qf_status_name(st) + ": " + qf_last_error();
  if (st == QF_ERR_NOT_SEPARABLE) msg += " (q at point = " + format_number(qf_last_error_value()) + ")";
  throw CommandError{exit_for(st), msg};
}

ordered_json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

ordered_json vec(const double* v, std::size_t n) {
  ordered_json a = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) a.push_back(num(v[i]));
  return a;
}

ordered_json vec(const std::vector<double>& v) { return vec(v.data(), v.size()); }

qf_transform parse_transform(const std::string& s) {
  if (s == "centered") return QF_TRANSFORM_CENTERED;
  if (s == "lifted") return QF_TRANSFORM_LIFTED;
  throw CommandError{kParse, "unknown transform '" + s + "' (expected centered or lifted)"};
}

Constraint make_constraint(const Instance& inst, const std::vector<double>& point) {
  qf_constraint* qc = nullptr;
  const auto Q = inst.Q_flat();
  check(qf_constraint_create(inst.dim, Q.data(), inst.b.data(), inst.c, point.data(), &qc), "constraint");
  return Constraint(qc);
}

std::vector<double> canonical_vector(const qf_canonical* cf, qf_vector_kind which) {
  std::size_t len = 0;
  qf_status st = qf_canonical_vector(cf, which, nullptr, 0, &len);
  if (st != QF_OK && st != QF_ERR_BUFFER_TOO_SMALL) check(st, "canonical vector");
  std::vector<double> out(len);
  if (len) check(qf_canonical_vector(cf, which, out.data(), len, &len), "canonical vector");
  return out;
}

ordered_json canonical_matrix(const qf_canonical* cf, int inverse, int p) {
  std::vector<double> M(static_cast<std::size_t>(p + 1) * (p + 1));
  std::size_t len = 0;
  check(qf_canonical_matrix(cf, inverse, M.data(), M.size(), &len), "canonical matrix");
  ordered_json rows = ordered_json::array();
  for (int i = 0; i <= p; ++i) rows.push_back(vec(M.data() + static_cast<std::size_t>(i) * (p + 1), p + 1));
  return rows;
}

ordered_json canonical_json(const qf_canonical* cf, qf_transform transform) {
  int p = 0, n = 0, m = 0, l = 0;
  check(qf_canonical_signature(cf, &p, &n, &m, &l), "signature");
  qf_case c{};
  check(qf_canonical_case(cf, &c), "case");
  double qv = 0.0, xy = 0.0, constant = 0.0;
  int lin = 0;
  check(qf_canonical_q_value(cf, &qv), "q value");
  check(qf_canonical_scale(cf, &xy, &constant, &lin), "scale");
  ordered_json j;
  j["transform"] = transform == QF_TRANSFORM_CENTERED ? "centered" : "lifted";
  j["p"] = p;
  j["n"] = n;
  j["m"] = m;
  j["l"] = l;
  j["case"] = qf_case_name(c);
  j["q_value"] = num(qv);
  j["a"] = vec(canonical_vector(cf, QF_VEC_A));
  j["d"] = vec(canonical_vector(cf, QF_VEC_D));
  j["h"] = vec(canonical_vector(cf, QF_VEC_H));
  j["lambda"] = vec(canonical_vector(cf, QF_VEC_LAMBDA));
  j["mapped_point"] = vec(canonical_vector(cf, QF_VEC_MAPPED_POINT));
  j["M"] = canonical_matrix(cf, 0, p);
  j["M_inverse"] = canonical_matrix(cf, 1, p);
  j["scale"] = {{"xy_rescale", num(xy)},
                {"constant", num(constant)},
                {"linear_kernel_term", lin != 0},
                {"row_scale", vec(canonical_vector(cf, QF_VEC_ROW_SCALE))}};
  return j;
}

qf_case case_of(const qf_canonical* cf) {
  qf_case c{};
  check(qf_canonical_case(cf, &c), "case");
  return c;
}

Canonical canonicalize(const qf_constraint* qc, const Options& opt) {
  qf_canonical* cf = nullptr;
  check(qf_canonicalize(qc, opt.tol, parse_transform(opt.transform), &cf), "canonicalize");
  return Canonical(cf);
}

// Refuses the two cases that have no cut before any further work.
void require_separable(const qf_canonical* cf) {
  double qv = 0.0;
  check(qf_canonical_q_value(cf, &qv), "q value");
  switch (case_of(cf)) {
    case QF_CASE_NOT_SEPARABLE:
      throw CommandError{kNotSeparable, "point satisfies the constraint (q = " + format_number(qv) + ")"};
    case QF_CASE_EMPTY_S: throw CommandError{kEmptyS, "the feasible set is empty; nothing to separate"};
    default: break;
  }
}

std::vector<double> rays_of(const Instance& inst) {
  if (!inst.rays) throw CommandError{kParse, "instance has no \"cone\""};
  return inst.rays_flat();
}

ordered_json cut_json(const qf_cut* cut, int p) {
  std::vector<double> coef(p), steps(p), residuals(p), weights(p);
  double rhs = 0.0, violation = 0.0, apex_margin = 0.0;
  check(qf_cut_get(cut, coef.data(), &rhs, &violation), "cut");
  check(qf_cut_steps(cut, steps.data(), residuals.data(), weights.data()), "cut steps");
  check(qf_cut_apex_margin(cut, &apex_margin), "apex margin");
  qf_free_set* fs_raw = nullptr;
  check(qf_cut_free_set(cut, &fs_raw), "cut free set");
  FreeSetH fs(fs_raw);
  qf_free_set_kind kind{};
  check(qf_free_set_kind_of(fs.get(), &kind), "free set kind");
  qf_canonical* cf_raw = nullptr;
  check(qf_cut_canonical(cut, &cf_raw), "cut canonical");
  Canonical cf(cf_raw);

  ordered_json j;
  j["case"] = qf_case_name(case_of(cf.get()));
  j["free_set"] = qf_free_set_kind_name(kind);
  j["apex_margin"] = num(apex_margin);
  j["steps"] = vec(steps);
  j["step_residuals"] = vec(residuals);
  j["weights"] = vec(weights);
  j["cut"] = {{"coef", vec(coef)}, {"rhs", num(rhs)}, {"sense", "<="}};
  j["violation"] = num(violation);
  return j;
}

ordered_json reports_json(const qf_report_set* rs) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < qf_report_set_count(rs); ++i) {
    qf_report_view v{};
    check(qf_report_set_get(rs, i, &v), "report");
    ordered_json r;
    r["check"] = v.check;
    r["samples"] = v.samples;
    r["worst"] = num(v.worst);
    r["tolerance"] = num(v.tolerance);
    r["pass"] = v.pass != 0;
    r["seed"] = v.seed;
    if (v.witness) r["witness"] = vec(v.witness, v.witness_len);
    arr.push_back(std::move(r));
  }
  return arr;
}

void emit(const ordered_json& j, const Options& opt) {
  const std::string text = j.dump(2) + "\n";
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw CommandError{kFailure, "cannot write '" + opt.output + "'"};
  out << text;
}

int cmd_canon(const Instance& inst, const Options& opt) {
  auto qc = make_constraint(inst, inst.point);
  auto cf = canonicalize(qc.get(), opt);
  if (case_of(cf.get()) == QF_CASE_NOT_SEPARABLE) require_separable(cf.get());
  emit(canonical_json(cf.get(), parse_transform(opt.transform)), opt);
  return kOk;
}

int cmd_cut(const Instance& inst, const Options& opt) {
  const auto rays = rays_of(inst);
  auto qc = make_constraint(inst, inst.point);
  qf_cut* raw = nullptr;
  check(qf_separate(qc.get(), rays.data(), parse_transform(opt.transform), opt.tol, &raw), "separate");
  Cut cut(raw);
  emit(cut_json(cut.get(), inst.dim), opt);
  return kOk;
}

int cmd_verify(const Instance& inst, const Options& opt) {
  auto qc = make_constraint(inst, inst.point);
  auto cf = canonicalize(qc.get(), opt);
  require_separable(cf.get());

  qf_free_set* fs_raw = nullptr;
  if (opt.free_set.empty()) {
    check(qf_free_set_build(cf.get(), &fs_raw), "build free set");
  } else {
    qf_free_set_kind kind{};
    check(qf_free_set_kind_parse(opt.free_set.c_str(), &kind), "free set kind");
    check(qf_free_set_build_kind(cf.get(), kind, &fs_raw), "build free set");
  }
  FreeSetH fs(fs_raw);
  qf_free_set_kind kind{};
  check(qf_free_set_kind_of(fs.get(), &kind), "free set kind");

  qf_verify_options vo;
  qf_verify_options_default(&vo);
  vo.samples = opt.samples;
  vo.seed = opt.seed;
  vo.homogeneous = opt.homogeneous ? 1 : 0;
  qf_report_set* rs_raw = nullptr;
  check(qf_verify(cf.get(), fs.get(), &vo, &rs_raw), "verify");
  Reports rs(rs_raw);
  bool pass = qf_report_set_all_pass(rs.get()) != 0;

  ordered_json j;
  j["case"] = qf_case_name(case_of(cf.get()));
  j["free_set"] = qf_free_set_kind_name(kind);
  j["mode"] = opt.homogeneous ? "homogeneous" : "hyperplane";
  j["seed"] = opt.seed;
  j["reports"] = reports_json(rs.get());

  if (inst.rays) {
    const auto rays = inst.rays_flat();
    qf_cut* cut_raw = nullptr;
    check(qf_separate(qc.get(), rays.data(), parse_transform(opt.transform), opt.tol, &cut_raw), "separate");
    Cut cut(cut_raw);
    qf_report_set* crs_raw = nullptr;
    check(qf_verify_cut(qc.get(), cut.get(), rays.data(), opt.samples, opt.seed, &crs_raw), "verify cut");
    Reports crs(crs_raw);
    for (auto& r : reports_json(crs.get())) j["reports"].push_back(r);
    pass = pass && qf_report_set_all_pass(crs.get()) != 0;
  }
  j["pass"] = pass;
  emit(j, opt);
  if (!pass) {
    for (const auto& r : j["reports"])
      if (!r["pass"].get<bool>())
        std::cerr << "quadfree: check " << r["check"].get<std::string>() << " failed (worst "
                  << r["worst"].dump() << " > " << r["tolerance"].dump() << ")\n";
  }
  return pass ? kOk : kFailure;
}

std::vector<std::string> split_layers(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// A layer records its vertex residual; crossings of a sign jump that is not a
// zero (the margin can be discontinuous only where pieces are unbounded) are dropped.
ordered_json contour_layer(const ScalarField& f, int p, const std::vector<double>& lo, const std::vector<double>& hi,
                           double tol) {
  ordered_json layer;
  double worst = 0.0;
  std::size_t dropped = 0;
  if (p == 2) {
    auto lines = contour2d(f, {lo[0], lo[1]}, {hi[0], hi[1]}, 240);
    ordered_json polys = ordered_json::array();
    for (const auto& line : lines) {
      ordered_json poly = ordered_json::array();
      auto flush = [&]() {
        if (poly.size() >= 2) polys.push_back(poly);
        poly = ordered_json::array();
      };
      for (const auto& v : line) {
        const double r = std::abs(f(v.data()));
        if (!(r <= tol)) {
          ++dropped;
          flush();
          continue;
        }
        worst = std::max(worst, r);
        poly.push_back({v[0], v[1]});
      }
      flush();
    }
    layer["type"] = "polylines";
    layer["polylines"] = std::move(polys);
  } else {
    auto mesh = contour3d(f, {lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}, 32);
    std::vector<bool> ok(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const double r = std::abs(f(mesh.vertices[i].data()));
      ok[i] = r <= tol;
      if (ok[i])
        worst = std::max(worst, r);
      else
        ++dropped;
    }
    ordered_json verts = ordered_json::array(), tris = ordered_json::array();
    for (const auto& v : mesh.vertices) verts.push_back({v[0], v[1], v[2]});
    for (const auto& t : mesh.triangles)
      if (ok[t[0]] && ok[t[1]] && ok[t[2]]) tris.push_back({t[0], t[1], t[2]});
    layer["type"] = "mesh";
    layer["vertices"] = std::move(verts);
    layer["triangles"] = std::move(tris);
  }
  layer["max_vertex_residual"] = worst;
  layer["dropped_vertices"] = dropped;
  return layer;
}

int cmd_plot(const Instance& inst, const Options& opt, const std::string& raw_text) {
  const int p = inst.dim;
  if (p < 2 || p > 3) throw CommandError{kFailure, "plot supports dim 2 or 3 only (got " + std::to_string(p) + ")"};
  std::vector<std::string> layers = split_layers(opt.layers);
  if (layers.empty()) {
    layers = {"S", "free"};
    if (inst.rays) layers.push_back("cut");
  }

  double pn = 0.0;
  for (double v : inst.point) pn += v * v;
  const double half = std::max(4.0, 2.0 * std::sqrt(pn));
  std::vector<double> lo(p), hi(p);
  for (int i = 0; i < p; ++i) {
    lo[i] = inst.point[i] - half;
    hi[i] = inst.point[i] + half;
  }

  auto qc = make_constraint(inst, inst.point);
  constexpr double kResidualTol = 1e-6;
  ordered_json out;
  out["metadata"] = {{"instance_hash", hex64(fnv1a(raw_text))},
                     {"seed", opt.seed},
                     {"dim", p},
                     {"box", {{"lo", lo}, {"hi", hi}}},
                     {"point", inst.point}};
  ordered_json jl = ordered_json::object();
  bool ok = true;
  for (const auto& name : layers) {
    ScalarField f;
    Canonical cf;
    FreeSetH fs;
    std::vector<double> w;
    std::vector<double> cut_coef;
    double cut_rhs = 0.0;
    if (name == "S") {
      f = [&](const double* s) {
        double v = 0.0;
        qf_constraint_eval(qc.get(), s, &v);
        return v;
      };
    } else if (name == "free") {
      cf = canonicalize(qc.get(), opt);
      require_separable(cf.get());
      qf_free_set* raw = nullptr;
      check(qf_free_set_build(cf.get(), &raw), "build free set");
      fs.reset(raw);
      w.resize(p + 1);
      f = [&](const double* s) {
        qf_canonical_map(cf.get(), s, w.data());
        double v = 0.0;
        qf_free_set_margin(fs.get(), w.data(), &v);
        return v;
      };
    } else if (name == "cut") {
      const auto rays = rays_of(inst);
      qf_cut* raw = nullptr;
      check(qf_separate(qc.get(), rays.data(), parse_transform(opt.transform), opt.tol, &raw), "separate");
      Cut cut(raw);
      cut_coef.resize(p);
      double violation = 0.0;
      check(qf_cut_get(cut.get(), cut_coef.data(), &cut_rhs, &violation), "cut");
      f = [&](const double* s) {
        double v = -cut_rhs;
        for (int i = 0; i < p; ++i) v += cut_coef[i] * s[i];
        return v;
      };
    } else {
      throw CommandError{kParse, "unknown layer '" + name + "' (expected S, free, cut)"};
    }
    ordered_json layer = contour_layer(f, p, lo, hi, kResidualTol);
    ok = ok && layer["max_vertex_residual"].get<double>() <= kResidualTol;
    jl[name] = std::move(layer);
  }
  out["layers"] = std::move(jl);
  emit(out, opt);
  return ok ? kOk : kFailure;
}

int cmd_loop(const Instance& inst, const Options& opt) {
  if (!inst.objective) throw CommandError{kParse, "instance has no \"objective\""};
  if (!inst.linear_constraints) throw CommandError{kParse, "instance has no \"linear_constraints\""};
  LoopOptions lo;
  lo.max_iters = opt.max_iters;
  lo.transform = parse_transform(opt.transform);
  lo.zero_tol = opt.tol;
  auto write = [](const ordered_json& j) { std::cout << j.dump() << "\n" << std::flush; };
  write({{"direction", "minimize"},
         {"objective_order", "nondecreasing"},
         {"max_iters", lo.max_iters},
         {"violation_tol", lo.violation_tol}});
  LoopResult res;
  try {
    res = run_loop(inst, lo, [&](const LoopIteration& it) {
      ordered_json line{{"iter", it.iter},
                        {"objective", it.objective},
                        {"violation", it.violation},
                        {"point", it.point},
                        {"pivots", it.pivots},
                        {"monotone", it.monotone}};
      if (it.cut) {
        line["status"] = "cut";
        line["cut"] = {{"coef", it.cut->coef}, {"rhs", it.cut->rhs}, {"violation", it.cut_violation}};
      } else {
        line["status"] = it.violation <= lo.violation_tol ? "converged" : "max_iters";
      }
      write(line);
    });
  } catch (const LoopError& e) {
    throw CommandError{e.exit_code, e.what()};
  }
  return res.converged ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-free sets and intersection cuts"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("instance", opt.path, "instance JSON file")->required();
    sub->add_option("--seed", opt.seed, "random seed (QUADFREE_SEED overrides)");
    sub->add_option("--tol", opt.tol, "zero tolerance for eigenvalues and canonical coefficients");
    sub->add_option("--transform", opt.transform, "canonical map: centered or lifted")
        ->check(CLI::IsMember({"centered", "lifted"}));
    sub->add_option("-o,--output", opt.output, "write JSON here instead of stdout");
  };
  auto* canon = app.add_subcommand("canon", "canonical form report");
  auto* cut = app.add_subcommand("cut", "intersection cut for the instance cone");
  auto* verify = app.add_subcommand("verify", "run the verification oracles");
  auto* plot = app.add_subcommand("plot", "boundary curves or meshes for dim 2 or 3");
  auto* loop = app.add_subcommand("loop", "cutting-plane loop on the instance LP");
  for (auto* s : {canon, cut, verify, plot, loop}) add_common(s);
  verify->add_option("--samples", opt.samples, "samples per check");
  verify->add_option("--free-set", opt.free_set, "force a free set family (e.g. CGLambda)");
  verify->add_flag("--homogeneous", opt.homogeneous, "sample the homogeneous set instead of the hyperplane slice");
  plot->add_option("--layers", opt.layers, "comma-separated subset of S,free,cut");
  loop->add_option("--max-iters", opt.max_iters, "cut limit")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }
  if (const char* env = std::getenv("QUADFREE_SEED")) {
    try {
      opt.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "quadfree: QUADFREE_SEED is not an unsigned integer\n";
      return kParse;
    }
  }

  try {
    std::string text;
    Instance inst;
    try {
      std::ifstream in(opt.path, std::ios::binary);
      if (!in) throw ParseError("cannot open '" + opt.path + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
      inst = parse_instance(text);
    } catch (const ParseError& e) {
      throw CommandError{kParse, e.what()};
    }
    if (canon->parsed()) return cmd_canon(inst, opt);
    if (cut->parsed()) return cmd_cut(inst, opt);
    if (verify->parsed()) return cmd_verify(inst, opt);
    if (plot->parsed()) return cmd_plot(inst, opt, text);
    return cmd_loop(inst, opt);
  } catch (const CommandError& e) {
    std::cerr << "quadfree: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "quadfree: " << e.what() << "\n";
    return kFailure;
  }
}
