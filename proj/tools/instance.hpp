#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadfree::cli {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Sense { Le, Eq, Ge };

struct LinearConstraint {
  std::vector<double> coef;
  double rhs = 0.0;
  Sense sense = Sense::Le;
};

struct Instance {
  int dim = 0;
  std::vector<std::vector<double>> Q;
  std::vector<double> b;
  double c = 0.0;
  std::vector<double> point;
  std::optional<std::vector<std::vector<double>>> rays;
  std::optional<std::vector<double>> objective;
  std::optional<std::vector<LinearConstraint>> linear_constraints;

  /// Row-major copies for the C API.
  std::vector<double> Q_flat() const;
  std::vector<double> rays_flat() const;
};

/// Strict: unknown keys, wrong shapes and asymmetry above 1e−12 are errors.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Canonical formatting (fixed key order, 17 significant digits), so that
/// emit(parse(emit(x))) == emit(x).
std::string emit_instance(const Instance& inst);

std::string format_number(double v);

std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace quadfree::cli
