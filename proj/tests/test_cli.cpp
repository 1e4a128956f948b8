#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "instance.hpp"
#include "loop.hpp"
#include "plot.hpp"
#include "simplex.hpp"

using namespace quadfree::cli;

namespace {

const char* kCanonical = R"({
  "dim": 2,
  "Q": [[0, 1], [1, 0]],
  "b": [2.8284271247461903, -2.8284271247461903],
  "c": -2,
  "point": [-2, -2],
  "cone": {"rays": [[1, 0], [0, 1]]},
  "objective": [1, 0.5],
  "linear_constraints": [
    {"coef": [1, 0], "rhs": 3, "sense": "<="},
    {"coef": [0, 1], "rhs": -0.10000000000000001, "sense": ">="}
  ]
}
)";

Instance box_instance(double q11, double q22, double c, std::vector<double> objective) {
  Instance inst;
  inst.dim = 2;
  inst.Q = {{q11, 0}, {0, q22}};
  inst.b = {0, 0};
  inst.c = c;
  inst.point = {0, 0};
  inst.objective = std::move(objective);
  inst.linear_constraints = std::vector<LinearConstraint>{
      {{1, 0}, 1, Sense::Ge}, {{1, 0}, 3, Sense::Le}, {{0, 1}, 0, Sense::Ge}, {{0, 1}, 3, Sense::Le}};
  return inst;
}

}  // namespace

TEST_CASE("emit(parse(x)) is byte-identical for canonical files") {
  const Instance inst = parse_instance(kCanonical);
  CHECK(emit_instance(inst) == kCanonical);
  CHECK(emit_instance(parse_instance(emit_instance(inst))) == emit_instance(inst));
}

TEST_CASE("round-trip keeps doubles bit-exact") {
  Instance inst;
  inst.dim = 1;
  inst.Q = {{0.1 + 0.2}};
  inst.b = {1.0 / 3.0};
  inst.c = -std::sqrt(2.0);
  inst.point = {6.02214076e23};
  const Instance back = parse_instance(emit_instance(inst));
  CHECK(back.Q[0][0] == inst.Q[0][0]);
  CHECK(back.b[0] == inst.b[0]);
  CHECK(back.c == inst.c);
  CHECK(back.point[0] == inst.point[0]);
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(parse_instance("{"), ParseError);
  CHECK_THROWS_AS(parse_instance("[]"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1, "Q": [[1]], "b": [0], "c": 0, "point": [1], "x": 1})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1, "Q": [[1]], "b": [0], "c": 0})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 2, "Q": [[1, 0]], "b": [0, 0], "c": 0, "point": [1, 1]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 2, "Q": [[1, 1], [0, 1]], "b": [0, 0], "c": 0, "point": [1, 1]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1.5, "Q": [[1]], "b": [0], "c": 0, "point": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1, "Q": [[1]], "b": ["0"], "c": 0, "point": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1, "Q": [[1]], "b": [0], "c": 0, "point": [1],
                                     "linear_constraints": [{"coef": [1], "rhs": 0, "sense": "<"}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dim": 1, "Q": [[1]], "b": [0], "c": 0, "point": [1],
                                     "cone": {"rays": [[1]], "apex": [0]}})"),
                  ParseError);
  const auto tiny = parse_instance(R"({"dim": 2, "Q": [[1, 1e-14], [0, 1]], "b": [0, 0], "c": 0, "point": [1, 1]})");
  CHECK(tiny.dim == 2);
  const auto noted = parse_instance(R"({"dim": 1, "Q": [[1]], "b": [0], "c": 0, "point": [1],
                                        "linear_constraints": [{"coef": [1], "rhs": 2}]})");
  CHECK((*noted.linear_constraints)[0].sense == Sense::Le);
}

TEST_CASE("number formatting and hashing") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(-2.0) == "-2");
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("simplex solves small LPs") {
  SUBCASE("box") {
    const std::vector<LinearConstraint> rows{
        {{1, 0}, 1, Sense::Ge}, {{1, 0}, 3, Sense::Le}, {{0, 1}, -2, Sense::Ge}, {{0, 1}, 3, Sense::Le}};
    const auto r = solve_lp({1, 1}, rows);
    REQUIRE(r.status == LPResult::Status::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(-2.0));
    CHECK(r.objective == doctest::Approx(-1.0));
    CHECK(tight_rows(rows, r.x) == std::vector<std::size_t>{0, 2});
  }
  SUBCASE("equality and mixed senses") {
    const std::vector<LinearConstraint> rows{
        {{1, 1, 1}, 6, Sense::Eq}, {{1, -1, 0}, 0, Sense::Ge}, {{0, 0, 1}, 1, Sense::Ge}, {{1, 0, 0}, 4, Sense::Le}};
    const auto r = solve_lp({-1, -2, 0}, rows);
    REQUIRE(r.status == LPResult::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-7.5));
    CHECK(r.x[0] == doctest::Approx(2.5));
    CHECK(r.x[1] == doctest::Approx(2.5));
    CHECK(r.x[2] == doctest::Approx(1.0));
  }
  SUBCASE("infeasible") {
    const std::vector<LinearConstraint> rows{{{1}, 1, Sense::Le}, {{1}, 2, Sense::Ge}};
    CHECK(solve_lp({1}, rows).status == LPResult::Status::Infeasible);
  }
  SUBCASE("unbounded") {
    const std::vector<LinearConstraint> rows{{{1, 0}, 1, Sense::Le}};
    CHECK(solve_lp({1, 0}, rows).status == LPResult::Status::Unbounded);
  }
  SUBCASE("degenerate vertex does not cycle") {
    const std::vector<LinearConstraint> rows{{{1, 0}, 0, Sense::Ge}, {{0, 1}, 0, Sense::Ge},
                                             {{1, 1}, 0, Sense::Ge}, {{1, -1}, 0, Sense::Le},
                                             {{1, 0}, 5, Sense::Le}, {{0, 1}, 5, Sense::Le}};
    const auto r = solve_lp({-1, -1}, rows);
    REQUIRE(r.status == LPResult::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-10.0));
  }
}

TEST_CASE("contour2d finds the unit circle") {
  auto f = [](const double* s) { return s[0] * s[0] + s[1] * s[1] - 1.0; };
  const auto lines = contour2d(f, {-2, -2}, {2, 2}, 64);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].front() == lines[0].back());
  for (const auto& v : lines[0]) CHECK(std::abs(f(v.data())) <= 1e-12);
  CHECK(lines[0].size() > 100);
}

TEST_CASE("contour2d splits open curves") {
  auto f = [](const double* s) { return s[0] * s[0] - s[1] * s[1] - 0.5; };
  const auto lines = contour2d(f, {-2, -2}, {2, 2}, 80);
  CHECK(lines.size() == 2);
  for (const auto& l : lines)
    for (const auto& v : l) CHECK(std::abs(f(v.data())) <= 1e-12);
}

TEST_CASE("contour3d meshes the unit sphere") {
  auto f = [](const double* s) { return s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 1.0; };
  const auto mesh = contour3d(f, {-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}, 16);
  CHECK(mesh.triangles.size() > 500);
  for (const auto& v : mesh.vertices) CHECK(std::abs(f(v.data())) <= 1e-12);
  // Closed surface: every edge is shared by exactly two triangles.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++edges[std::minmax(t[k], t[(k + 1) % 3])];
  for (const auto& [e, count] : edges) CHECK(count == 2);
}

TEST_CASE("cutting loop") {
  SUBCASE("hyperbola-free toy converges with a monotone objective") {
    auto inst = box_instance(1, -1, 0, {1, 1});
    const auto r = run_loop(inst, LoopOptions{});
    CHECK(r.converged);
    CHECK(r.monotone);
    CHECK(r.cuts >= 1);
    CHECK(r.log.back().objective == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("feasible vertex needs no cut") {
    auto inst = box_instance(1, -1, -10, {1, 1});
    const auto r = run_loop(inst, LoopOptions{});
    CHECK(r.converged);
    CHECK(r.cuts == 0);
    CHECK(r.log.size() == 1);
  }
  SUBCASE("iteration limit") {
    Instance inst = box_instance(0, 0, 1, {1, 1});
    inst.Q = {{0, -0.5}, {-0.5, 0}};
    (*inst.linear_constraints)[0].rhs = 0.25;
    (*inst.linear_constraints)[2].rhs = 0.25;
    LoopOptions opt;
    opt.max_iters = 3;
    const auto r = run_loop(inst, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.cuts == 3);
  }
  SUBCASE("degenerate vertex") {
    auto inst = box_instance(1, -1, 0, {1, 1});
    inst.linear_constraints->push_back({{1, 1}, 1, Sense::Ge});
    try {
      run_loop(inst, LoopOptions{});
      FAIL("expected a degenerate vertex");
    } catch (const LoopError& e) {
      CHECK(e.exit_code == kExitDegenerateVertex);
    }
  }
  SUBCASE("unbounded") {
    auto inst = box_instance(1, -1, 0, {1, 1});
    inst.linear_constraints->erase(inst.linear_constraints->begin());
    try {
      run_loop(inst, LoopOptions{});
      FAIL("expected an unbounded LP");
    } catch (const LoopError& e) {
      CHECK(e.exit_code == kExitUnboundedLP);
    }
  }
}
