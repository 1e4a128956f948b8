#include "instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace quadfree::cli {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError("unknown key '" + it.key() + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(what + " must be finite");
  return v;
}

std::vector<double> vector_of(const json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(what + " must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
  return v;
}

std::vector<std::vector<double>> matrix_of(const json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n) throw ParseError(what + " must have " + std::to_string(n) + " rows");
  std::vector<std::vector<double>> M;
  for (std::size_t i = 0; i < n; ++i) M.push_back(vector_of(j[i], n, what + "[" + std::to_string(i) + "]"));
  return M;
}

std::string array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s + "]";
}

std::string matrix(const std::vector<std::vector<double>>& M) {
  std::string s = "[";
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (i) s += ", ";
    s += array(M[i]);
  }
  return s + "]";
}

const char* sense_text(Sense s) { return s == Sense::Le ? "<=" : s == Sense::Eq ? "=" : ">="; }

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> Instance::Q_flat() const {
  std::vector<double> out;
  for (const auto& row : Q) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<double> Instance::rays_flat() const {
  std::vector<double> out;
  if (rays)
    for (const auto& r : *rays) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  require_keys(j, {"dim", "Q", "b", "c", "point", "cone", "objective", "linear_constraints"}, "instance");
  for (const char* k : {"dim", "Q", "b", "c", "point"})
    if (!j.contains(k)) throw ParseError(std::string("missing key '") + k + "'");

  Instance inst;
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1 || j["dim"].get<long long>() > 63)
    throw ParseError("dim must be an integer in [1, 63]");
  inst.dim = j["dim"].get<int>();
  const auto p = static_cast<std::size_t>(inst.dim);
  inst.Q = matrix_of(j["Q"], p, "Q");
  inst.b = vector_of(j["b"], p, "b");
  inst.c = number(j["c"], "c");
  inst.point = vector_of(j["point"], p, "point");

  double maxq = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < p; ++k) {
      maxq = std::max(maxq, std::abs(inst.Q[i][k]));
      asym = std::max(asym, std::abs(inst.Q[i][k] - inst.Q[k][i]));
    }
  if (asym > 1e-12 * (1.0 + maxq)) throw ParseError("Q is not symmetric (asymmetry " + format_number(asym) + ")");

  if (j.contains("cone")) {
    const json& cone = j["cone"];
    if (!cone.is_object()) throw ParseError("cone must be an object");
    require_keys(cone, {"rays"}, "cone");
    if (!cone.contains("rays")) throw ParseError("cone needs 'rays'");
    inst.rays = matrix_of(cone["rays"], p, "cone.rays");
  }
  if (j.contains("objective")) inst.objective = vector_of(j["objective"], p, "objective");
  if (j.contains("linear_constraints")) {
    const json& lc = j["linear_constraints"];
    if (!lc.is_array()) throw ParseError("linear_constraints must be an array");
    std::vector<LinearConstraint> rows;
    for (std::size_t i = 0; i < lc.size(); ++i) {
      const std::string where = "linear_constraints[" + std::to_string(i) + "]";
      const json& r = lc[i];
      if (!r.is_object()) throw ParseError(where + " must be an object");
      require_keys(r, {"coef", "rhs", "sense"}, where);
      if (!r.contains("coef") || !r.contains("rhs")) throw ParseError(where + " needs coef and rhs");
      LinearConstraint row;
      row.coef = vector_of(r["coef"], p, where + ".coef");
      row.rhs = number(r["rhs"], where + ".rhs");
      if (r.contains("sense")) {
        if (!r["sense"].is_string()) throw ParseError(where + ".sense must be a string");
        const std::string s = r["sense"].get<std::string>();
        if (s == "<=")
          row.sense = Sense::Le;
        else if (s == "=")
          row.sense = Sense::Eq;
        else if (s == ">=")
          row.sense = Sense::Ge;
        else
          throw ParseError(where + ".sense must be one of <=, =, >=");
      }
      rows.push_back(std::move(row));
    }
    inst.linear_constraints = std::move(rows);
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string emit_instance(const Instance& inst) {
  std::string s = "{\n";
  s += "  \"dim\": " + std::to_string(inst.dim) + ",\n";
  s += "  \"Q\": " + matrix(inst.Q) + ",\n";
  s += "  \"b\": " + array(inst.b) + ",\n";
  s += "  \"c\": " + format_number(inst.c) + ",\n";
  s += "  \"point\": " + array(inst.point);
  if (inst.rays) s += ",\n  \"cone\": {\"rays\": " + matrix(*inst.rays) + "}";
  if (inst.objective) s += ",\n  \"objective\": " + array(*inst.objective);
  if (inst.linear_constraints) {
    s += ",\n  \"linear_constraints\": [";
    const auto& rows = *inst.linear_constraints;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s += i ? ",\n    " : "\n    ";
      s += "{\"coef\": " + array(rows[i].coef) + ", \"rhs\": " + format_number(rows[i].rhs) + ", \"sense\": \"" +
           sense_text(rows[i].sense) + "\"}";
    }
    s += rows.empty() ? "]" : "\n  ]";
  }
  s += "\n}\n";
  return s;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace quadfree::cli
