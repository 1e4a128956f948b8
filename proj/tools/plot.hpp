#pragma once

#include <array>
#include <functional>
#include <vector>

namespace quadfree::cli {

using ScalarField = std::function<double(const double*)>;

using Polyline = std::vector<std::array<double, 2>>;

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Zero set of f on the box [lo, hi] by marching squares on an N×N grid.
/// Edge crossings are refined by bisection, so vertices are accurate to
/// roundoff wherever f is continuous.
std::vector<Polyline> contour2d(const ScalarField& f, std::array<double, 2> lo, std::array<double, 2> hi, int N);

/// Zero set of f on a box by marching tetrahedra (six per cube).
Mesh contour3d(const ScalarField& f, std::array<double, 3> lo, std::array<double, 3> hi, int N);

}  // namespace quadfree::cli
