#include "plot.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>

namespace quadfree::cli {

namespace {

bool inside(double v) { return v < 0.0; }

// Bisection on the segment [a, b] where f changes sign; D is the dimension.
template <std::size_t D>
std::array<double, D> refine(const ScalarField& f, std::array<double, D> a, std::array<double, D> b) {
  const bool ia = inside(f(a.data()));
  std::array<double, D> mid{};
  for (int it = 0; it < 200; ++it) {
    for (std::size_t k = 0; k < D; ++k) mid[k] = 0.5 * (a[k] + b[k]);
    bool same = true;
    for (std::size_t k = 0; k < D; ++k) same = same && (mid[k] == a[k] || mid[k] == b[k]);
    if (same) break;
    if (inside(f(mid.data())) == ia)
      a = mid;
    else
      b = mid;
  }
  return std::abs(f(a.data())) <= std::abs(f(b.data())) ? a : b;
}

}  // namespace

std::vector<Polyline> contour2d(const ScalarField& f, std::array<double, 2> lo, std::array<double, 2> hi, int N) {
  const double hx = (hi[0] - lo[0]) / N, hy = (hi[1] - lo[1]) / N;
  auto node = [&](int i, int j) { return std::array<double, 2>{lo[0] + i * hx, lo[1] + j * hy}; };
  std::vector<double> val((N + 1) * (N + 1));
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) val[i * (N + 1) + j] = f(node(i, j).data());
  auto v = [&](int i, int j) { return val[i * (N + 1) + j]; };

  // Crossing points keyed by edge: (i, j, 0) horizontal to (i+1, j); (i, j, 1) vertical to (i, j+1).
  std::map<std::tuple<int, int, int>, int> edge_vertex;
  std::vector<std::array<double, 2>> verts;
  auto crossing = [&](int i, int j, int dir) {
    const auto key = std::make_tuple(i, j, dir);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const auto a = node(i, j);
    const auto b = dir == 0 ? node(i + 1, j) : node(i, j + 1);
    verts.push_back(refine<2>(f, a, b));
    const int id = static_cast<int>(verts.size()) - 1;
    edge_vertex.emplace(key, id);
    return id;
  };

  std::vector<std::pair<int, int>> segments;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const bool c0 = inside(v(i, j)), c1 = inside(v(i + 1, j)), c2 = inside(v(i + 1, j + 1)),
                 c3 = inside(v(i, j + 1));
      // Edges in cyclic order: bottom, right, top, left.
      std::vector<int> ids;
      if (c0 != c1) ids.push_back(crossing(i, j, 0));
      if (c1 != c2) ids.push_back(crossing(i + 1, j, 1));
      if (c3 != c2) ids.push_back(crossing(i, j + 1, 0));
      if (c0 != c3) ids.push_back(crossing(i, j, 1));
      if (ids.size() == 2) {
        segments.emplace_back(ids[0], ids[1]);
      } else if (ids.size() == 4) {
        std::array<double, 2> center{lo[0] + (i + 0.5) * hx, lo[1] + (j + 0.5) * hy};
        const bool cc = inside(f(center.data()));
        if (cc == c0) {
          segments.emplace_back(ids[0], ids[1]);
          segments.emplace_back(ids[2], ids[3]);
        } else {
          segments.emplace_back(ids[0], ids[3]);
          segments.emplace_back(ids[1], ids[2]);
        }
      }
    }
  }

  std::unordered_map<int, std::vector<int>> adj;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    adj[segments[s].first].push_back(static_cast<int>(s));
    adj[segments[s].second].push_back(static_cast<int>(s));
  }
  std::vector<bool> used(segments.size(), false);
  auto walk = [&](int start_vertex, int seg, Polyline& line) {
    int cur = start_vertex;
    while (seg >= 0 && !used[seg]) {
      used[seg] = true;
      const int next = segments[seg].first == cur ? segments[seg].second : segments[seg].first;
      line.push_back(verts[next]);
      cur = next;
      seg = -1;
      for (int s : adj[cur])
        if (!used[s]) {
          seg = s;
          break;
        }
    }
  };
  std::vector<Polyline> out;
  // Open chains first (start at degree-1 vertices), then closed loops.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      int start = segments[s].first;
      if (pass == 0) {
        if (adj[segments[s].first].size() == 1)
          start = segments[s].first;
        else if (adj[segments[s].second].size() == 1)
          start = segments[s].second;
        else
          continue;
      }
      Polyline line{verts[start]};
      walk(start, static_cast<int>(s), line);
      out.push_back(std::move(line));
    }
  }
  return out;
}

Mesh contour3d(const ScalarField& f, std::array<double, 3> lo, std::array<double, 3> hi, int N) {
  const int S = N + 1;
  std::array<double, 3> h{};
  for (int k = 0; k < 3; ++k) h[k] = (hi[k] - lo[k]) / N;
  auto index = [&](int i, int j, int k) { return (i * S + j) * S + k; };
  auto node = [&](int id) {
    const int k = id % S, j = (id / S) % S, i = id / (S * S);
    return std::array<double, 3>{lo[0] + i * h[0], lo[1] + j * h[1], lo[2] + k * h[2]};
  };
  std::vector<double> val(static_cast<std::size_t>(S) * S * S);
  for (int id = 0; id < S * S * S; ++id) val[id] = f(node(id).data());

  Mesh mesh;
  std::map<std::pair<int, int>, int> edge_vertex;
  auto crossing = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    mesh.vertices.push_back(refine<3>(f, node(a), node(b)));
    const int id = static_cast<int>(mesh.vertices.size()) - 1;
    edge_vertex.emplace(key, id);
    return id;
  };

  static const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  static const int tets[6][4] = {{0, 5, 1, 6}, {0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6}, {0, 7, 4, 6}, {0, 4, 5, 6}};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        int ids[8];
        for (int c = 0; c < 8; ++c) ids[c] = index(i + corner[c][0], j + corner[c][1], k + corner[c][2]);
        for (const auto& t : tets) {
          std::vector<int> in, out;
          for (int c : t) (inside(val[ids[c]]) ? in : out).push_back(ids[c]);
          if (in.empty() || out.empty()) continue;
          if (in.size() == 1 || out.size() == 1) {
            const auto& lone = in.size() == 1 ? in : out;
            const auto& rest = in.size() == 1 ? out : in;
            mesh.triangles.push_back(
                {crossing(lone[0], rest[0]), crossing(lone[0], rest[1]), crossing(lone[0], rest[2])});
          } else {
            const int a = crossing(in[0], out[0]), b = crossing(in[0], out[1]), c = crossing(in[1], out[1]),
                      d = crossing(in[1], out[0]);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
          }
        }
      }
  return mesh;
}

}  // namespace quadfree::cli
