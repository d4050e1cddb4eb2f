#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "soam/error.hpp"
#include "soam/sampling.hpp"

namespace soam {

Mesh make_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 7) throw UsageError("icosphere subdivisions must be in 0..7");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint_of = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto [it, fresh] = mid.try_emplace({key.first, key.second}, 0);
      if (fresh) {
        it->second = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(midpoint(m.vertices[a], m.vertices[b]));
      }
      return it->second;
    };
    std::vector<std::array<std::uint32_t, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& f : m.triangles) {
      const std::uint32_t ab = midpoint_of(f[0], f[1]), bc = midpoint_of(f[1], f[2]), ca = midpoint_of(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  for (Point& p : m.vertices) p *= 1.0 / norm(p);
  return m;
}

Mesh make_torus_mesh(double major, double minor, int around, int tube) {
  if (!(minor > 0.0 && major > minor)) throw UsageError("torus mesh needs major > minor > 0");
  if (around < 3 || tube < 3) throw UsageError("torus mesh needs at least 3 x 3 vertices");
  Mesh m;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < around; ++i) {
    for (int j = 0; j < tube; ++j) {
      const double u = two_pi * i / around, v = two_pi * j / tube;
      const double rho = major + minor * std::cos(v);
      m.vertices.push_back(Point{rho * std::cos(u), rho * std::sin(u), minor * std::sin(v)});
    }
  }
  auto id = [&](int i, int j) { return static_cast<std::uint32_t>((i % around) * tube + (j % tube)); };
  for (int i = 0; i < around; ++i) {
    for (int j = 0; j < tube; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

Mesh make_double_torus_mesh(int resolution) {
  if (resolution < 8) throw UsageError("double torus mesh resolution must be >= 8");
  const DoubleTorus shape{1.0};
  const BoundingBox box = shape_bounds(shape);
  // The grid origin is nudged off any symmetry plane so no lattice value is exactly zero.
  const double margin = 0.1 + 1e-3 * std::numbers::sqrt2;
  const double step = (box.major_extent() + 2 * margin) / resolution;
  std::array<int, 3> n{};
  std::array<double, 3> origin{};
  for (int a = 0; a < 3; ++a) {
    origin[a] = box.min[a] - margin;
    n[a] = static_cast<int>(std::ceil((box.max[a] - box.min[a] + 2 * margin) / step)) + 1;
  }
  auto lattice = [&](int i, int j, int k) {
    return Point{origin[0] + i * step, origin[1] + j * step, origin[2] + k * step};
  };
  auto flat = [&](int i, int j, int k) {
    return static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(n[0]) * (j + static_cast<std::uint64_t>(n[1]) * k);
  };
  std::vector<double> value(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) value[flat(i, j, k)] = shape.value(lattice(i, j, k));

  Mesh m;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
  std::array<Point, 8> corner_pos;
  std::array<std::uint64_t, 8> corner_id{};
  auto vertex_on = [&](int a, int b) {
    std::uint64_t ia = corner_id[a], ib = corner_id[b];
    if (ia > ib) std::swap(ia, ib), std::swap(a, b);
    const std::uint64_t key = ia * 0x100000000ull + ib;
    auto [it, fresh] = edge_vertex.try_emplace(key, 0);
    if (fresh) {
      const double va = value[ia], vb = value[ib];
      const double t = va / (va - vb);
      it->second = static_cast<std::uint32_t>(m.vertices.size());
      m.vertices.push_back(corner_pos[a] + (corner_pos[b] - corner_pos[a]) * t);
    }
    return it->second;
  };
  auto emit = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z, const Point& outward) {
    const Point& p = m.vertices[x];
    const Point u = m.vertices[y] - p, v = m.vertices[z] - p;
    const Point normal{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    double dot = 0.0;
    for (int a = 0; a < 3; ++a) dot += normal[a] * outward[a];
    if (dot >= 0.0) m.triangles.push_back({x, y, z});
    else m.triangles.push_back({x, z, y});
  };
  // Six tetrahedra sharing the cube diagonal 0-7; corner bit 1 = +x, 2 = +y, 4 = +z.
  static constexpr std::array<std::array<int, 4>, 6> kTets = {
      {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}}};
  for (int k = 0; k + 1 < n[2]; ++k) {
    for (int j = 0; j + 1 < n[1]; ++j) {
      for (int i = 0; i + 1 < n[0]; ++i) {
        for (int c = 0; c < 8; ++c) {
          const int ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          corner_pos[c] = lattice(ci, cj, ck);
          corner_id[c] = flat(ci, cj, ck);
        }
        for (const auto& tet : kTets) {
          std::array<int, 4> in{}, out{};
          int n_in = 0, n_out = 0;
          for (int c : tet) (value[corner_id[c]] < 0.0 ? in[n_in++] : out[n_out++]) = c;
          if (n_in == 0 || n_out == 0) continue;
          Point outward(3);
          for (int a = 0; a < n_out; ++a) outward += corner_pos[out[a]] * (1.0 / n_out);
          for (int a = 0; a < n_in; ++a) outward -= corner_pos[in[a]] * (1.0 / n_in);
          if (n_in == 1) {
            emit(vertex_on(in[0], out[0]), vertex_on(in[0], out[1]), vertex_on(in[0], out[2]), outward);
          } else if (n_out == 1) {
            emit(vertex_on(out[0], in[0]), vertex_on(out[0], in[1]), vertex_on(out[0], in[2]), outward);
          } else {
            const std::uint32_t a = vertex_on(in[0], out[0]), b = vertex_on(in[0], out[1]);
            const std::uint32_t c = vertex_on(in[1], out[1]), d = vertex_on(in[1], out[0]);
            emit(a, b, c, outward);
            emit(a, c, d, outward);
          }
        }
      }
    }
  }
  return m;
}

}  // namespace soam
