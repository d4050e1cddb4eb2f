#include "soam/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "soam/error.hpp"

namespace soam {

namespace {

// Vertices renumbered 0..n-1; every edge listed once, including triangle sides.
struct Combinatorial {
  std::size_t n = 0;
  std::vector<EdgeKey> edges;
  std::vector<std::array<std::uint32_t, 3>> triangles;
};

Combinatorial from_mesh(const Mesh& m) {
  Combinatorial c;
  c.n = m.vertices.size();
  c.triangles = m.triangles;
  for (const auto& t : m.triangles) {
    for (std::uint32_t v : t)
      if (v >= c.n) throw UsageError("triangle references vertex " + std::to_string(v) + " out of range");
    c.edges.emplace_back(t[0], t[1]);
    c.edges.emplace_back(t[1], t[2]);
    c.edges.emplace_back(t[2], t[0]);
  }
  for (const auto& s : m.segments) {
    if (s[0] >= c.n || s[1] >= c.n) throw UsageError("segment references a vertex out of range");
    c.edges.emplace_back(s[0], s[1]);
  }
  std::sort(c.edges.begin(), c.edges.end());
  c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
  return c;
}

Combinatorial from_complex(const SimplicialComplex& sc) {
  Combinatorial c;
  const std::vector<UnitId> ids = sc.vertices();
  std::unordered_map<UnitId, std::uint32_t> remap;
  for (std::uint32_t i = 0; i < ids.size(); ++i) remap[ids[i]] = i;
  c.n = ids.size();
  for (const auto& [e, age] : sc.edges()) c.edges.emplace_back(remap.at(e.a), remap.at(e.b));
  std::sort(c.edges.begin(), c.edges.end());
  for (const Triangle& t : sc.triangles()) c.triangles.push_back({remap.at(t.v[0]), remap.at(t.v[1]), remap.at(t.v[2])});
  return c;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

OrientationResult orient(const Combinatorial& c) {
  OrientationResult r;
  // Incident triangles per edge, with the direction in which each traverses it.
  struct Use {
    std::size_t tri;
    bool forward;  // traverses a -> b with a < b
  };
  std::map<EdgeKey, std::vector<Use>> uses;
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const auto& v = c.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = v[k], b = v[(k + 1) % 3];
      uses[EdgeKey(a, b)].push_back({t, a < b});
    }
  }
  std::vector<EdgeKey> boundary;
  for (const auto& [e, u] : uses) {
    if (u.size() > 2) r.nonmanifold_edges.push_back(e);
    if (u.size() == 1) boundary.push_back(e);
  }
  r.manifold = r.nonmanifold_edges.empty();

  // Boundary loops: components of the boundary-edge graph.
  UnionFind uf(c.n);
  std::size_t loops = 0;
  std::vector<char> touched(c.n, 0);
  for (const EdgeKey& e : boundary) {
    loops += !touched[e.a] + !touched[e.b];
    touched[e.a] = touched[e.b] = 1;
    if (uf.unite(e.a, e.b)) --loops;
  }
  r.boundary_components = loops;
  if (!r.manifold) return r;

  // sign = +1 keeps the stored vertex order, -1 reverses it.
  std::vector<int> sign(c.triangles.size(), 0);
  std::vector<std::vector<std::pair<std::size_t, bool>>> adj(c.triangles.size());  // (other, must_flip)
  for (const auto& [e, u] : uses) {
    if (u.size() != 2) continue;
    // Coherent iff the two triangles traverse the edge in opposite directions.
    const bool same_direction = u[0].forward == u[1].forward;
    adj[u[0].tri].push_back({u[1].tri, same_direction});
    adj[u[1].tri].push_back({u[0].tri, same_direction});
  }
  r.orientable = true;
  for (std::size_t start = 0; start < c.triangles.size(); ++start) {
    if (sign[start]) continue;
    sign[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      for (const auto& [o, flip] : adj[t]) {
        const int want = flip ? -sign[t] : sign[t];
        if (!sign[o]) {
          sign[o] = want;
          queue.push_back(o);
        } else if (sign[o] != want) {
          r.orientable = false;
        }
      }
    }
  }
  return r;
}

SurfaceReport report(const Combinatorial& c) {
  SurfaceReport r;
  r.vertices = c.n;
  r.edges = c.edges.size();
  r.faces = c.triangles.size();
  r.euler = static_cast<long>(r.vertices) - static_cast<long>(r.edges) + static_cast<long>(r.faces);

  const OrientationResult o = orient(c);
  r.manifold = o.manifold;
  r.orientable = o.manifold && o.orientable;
  r.boundary_components = o.boundary_components;

  UnionFind uf(c.n);
  std::size_t comps = c.n;
  for (const EdgeKey& e : c.edges)
    if (uf.unite(e.a, e.b)) --comps;
  r.connected_components = comps;

  // Each vertex link must be one cycle: arc-degree 2 everywhere and connected.
  std::vector<std::vector<EdgeKey>> link(c.n);
  for (const auto& t : c.triangles)
    for (int k = 0; k < 3; ++k) link[t[k]].emplace_back(t[(k + 1) % 3], t[(k + 2) % 3]);
  r.all_links_closed = c.n > 0;
  for (std::size_t v = 0; v < c.n && r.all_links_closed; ++v) {
    const auto& arcs = link[v];
    if (arcs.size() < 3) {
      r.all_links_closed = false;
      break;
    }
    std::map<std::uint32_t, int> degree;
    std::map<std::uint32_t, std::uint32_t> parent;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const EdgeKey& a : arcs) {
      ++degree[a.a];
      ++degree[a.b];
      parent.try_emplace(a.a, a.a);
      parent.try_emplace(a.b, a.b);
    }
    std::size_t parts = parent.size();
    for (const EdgeKey& a : arcs) {
      const auto x = find(a.a), y = find(a.b);
      if (x != y) {
        parent[x] = y;
        --parts;
      }
    }
    const bool cyc = parts == 1 && degree.size() == arcs.size() &&
                     std::all_of(degree.begin(), degree.end(), [](const auto& d) { return d.second == 2; });
    r.all_links_closed = cyc;
  }
  if (r.all_links_closed) {
    std::vector<std::size_t> nbr_count(c.n, 0);
    for (const EdgeKey& e : c.edges) {
      ++nbr_count[e.a];
      ++nbr_count[e.b];
    }
    for (std::size_t v = 0; v < c.n; ++v)
      if (nbr_count[v] != link[v].size()) r.all_links_closed = false;
  }

  if (r.manifold && r.orientable && r.connected_components == 1 && r.boundary_components == 0 &&
      r.all_links_closed)
    r.genus = (2 - r.euler) / 2;
  return r;
}

}  // namespace

long euler_characteristic(const SimplicialComplex& c) {
  return static_cast<long>(c.vertex_count()) - static_cast<long>(c.edge_count()) +
         static_cast<long>(c.triangle_count());
}

long euler_characteristic(const Mesh& m) {
  const Combinatorial c = from_mesh(m);
  return static_cast<long>(c.n) - static_cast<long>(c.edges.size()) + static_cast<long>(c.triangles.size());
}

OrientationResult orientability_and_boundary(const Mesh& m) { return orient(from_mesh(m)); }
OrientationResult orientability_and_boundary(const SimplicialComplex& c) { return orient(from_complex(c)); }

SurfaceReport surface_report(const Mesh& m) { return report(from_mesh(m)); }
SurfaceReport surface_report(const SimplicialComplex& c) { return report(from_complex(c)); }

bool homeomorphic_closed_surfaces(const SurfaceReport& a, const SurfaceReport& b) {
  for (const SurfaceReport* r : {&a, &b})
    if (!r->closed() || r->connected_components != 1)
      throw UsageError("homeomorphism test needs closed connected surfaces");
  return a.orientable == b.orientable && a.euler == b.euler;
}

CurveReport curve_topology(const SimplicialComplex& c) {
  CurveReport r;
  const std::vector<UnitId> ids = c.vertices();
  std::unordered_map<UnitId, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
  UnionFind uf(ids.size());
  for (const auto& [e, age] : c.edges()) uf.unite(pos.at(e.a), pos.at(e.b));
  struct Comp {
    std::size_t vertices = 0, edges = 0, deg1 = 0, deg2 = 0;
  };
  std::map<std::size_t, Comp> comps;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Comp& k = comps[uf.find(i)];
    const std::size_t d = c.degree(ids[i]);
    ++k.vertices;
    k.edges += d;
    k.deg1 += d == 1;
    k.deg2 += d == 2;
    r.max_degree = std::max(r.max_degree, d);
  }
  for (auto& [root, k] : comps) {
    k.edges /= 2;
    if (k.vertices >= 3 && k.deg2 == k.vertices && k.edges == k.vertices) ++r.cycles;
    else if (k.vertices >= 2 && k.deg1 == 2 && k.deg2 + 2 == k.vertices && k.edges + 1 == k.vertices) ++r.open_paths;
    else ++r.stray_components;
  }
  return r;
}

std::string format_report(const SurfaceReport& r) {
  std::ostringstream o;
  o << "vertices=" << r.vertices << "\nedges=" << r.edges << "\nfaces=" << r.faces << "\neuler=" << r.euler
    << "\nmanifold=" << (r.manifold ? "true" : "false") << "\norientable=" << (r.orientable ? "true" : "false")
    << "\nboundary_components=" << r.boundary_components << "\nconnected_components=" << r.connected_components
    << "\nall_links_closed=" << (r.all_links_closed ? "true" : "false") << "\ngenus=";
  if (r.genus) o << *r.genus;
  else o << "undefined";
  o << "\n";
  return o.str();
}

std::string format_report(const CurveReport& r) {
  std::ostringstream o;
  o << "cycles=" << r.cycles << "\nopen_paths=" << r.open_paths << "\nstray_components=" << r.stray_components
    << "\nmax_degree=" << r.max_degree << "\n";
  return o.str();
}

DelaunayResult brute_force_delaunay(std::span<const Point> points, double tolerance) {
  if (points.size() < 3) throw UsageError("Delaunay oracle needs at least 3 points");
  for (const Point& p : points)
    if (p.dim() != 2) throw UsageError("Delaunay oracle is planar only");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw UsageError("duplicate points " + std::to_string(i) + " and " + std::to_string(j));

  const double tol = tolerance * std::max(1.0, bounding_box(points).major_extent());
  DelaunayResult out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point& a = points[i];
      const Point& b = points[j];
      const Point m = midpoint(a, b);
      const double len = distance(a, b);
      const Point n{-(b[1] - a[1]) / len, (b[0] - a[0]) / len};
      const double half2 = distance_squared(a, m);
      // Centre m + t*n; point k stays strictly outside iff |k-m|^2 - half2 > 2 t (n . (k-m)).
      double lower = -std::numeric_limits<double>::infinity();
      double upper = std::numeric_limits<double>::infinity();
      bool blocked = false;
      for (std::size_t k = 0; k < points.size() && !blocked; ++k) {
        if (k == i || k == j) continue;
        const Point w = points[k] - m;
        const double c = n[0] * w[0] + n[1] * w[1];
        const double rhs = w[0] * w[0] + w[1] * w[1] - half2;
        if (std::abs(c) <= tol * 1e-3) {
          blocked = rhs <= tol * len;  // k lies on the segment ab
        } else if (c > 0.0) {
          upper = std::min(upper, rhs / (2.0 * c));
        } else {
          lower = std::max(lower, rhs / (2.0 * c));
        }
      }
      if (blocked) continue;
      if (upper - lower > tol) out.edges.emplace_back(i, j);
      else if (upper - lower >= -tol) out.degenerate_pairs.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<EdgeKey> WitnessGraph::edges() const {
  std::vector<EdgeKey> out;
  out.reserve(support.size());
  for (const auto& [e, n] : support) out.push_back(e);
  return out;
}

std::uint64_t WitnessGraph::count(UnitId a, UnitId b) const {
  auto it = support.find(EdgeKey(a, b));
  return it == support.end() ? 0 : it->second;
}

void accumulate_witnesses(WitnessGraph& g, std::span<const Point> landmarks, std::span<const Point> witnesses) {
  if (landmarks.size() < 2) throw UsageError("witness graph needs at least two landmarks");
  const std::size_t n = landmarks.size();
  const std::size_t d = landmarks.front().dim();
  // Flat copy for a tight scan loop.
  std::vector<double> flat(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (landmarks[i].dim() != d) throw UsageError("landmark dimensions differ");
    for (std::size_t k = 0; k < d; ++k) flat[i * d + k] = landmarks[i][k];
  }
  std::vector<std::uint64_t> counts(n * n, 0);
  for (const Point& w : witnesses) {
    if (w.dim() != d) throw UsageError("witness dimension differs from landmarks");
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    std::size_t i1 = 0, i2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = flat[i * d + k] - w[k];
        s += t * t;
      }
      if (s < d1) {
        d2 = d1;
        i2 = i1;
        d1 = s;
        i1 = i;
      } else if (s < d2) {
        d2 = s;
        i2 = i;
      }
    }
    ++counts[std::min(i1, i2) * n + std::max(i1, i2)];
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (counts[a * n + b]) g.support[EdgeKey(static_cast<UnitId>(a), static_cast<UnitId>(b))] += counts[a * n + b];
}

WitnessGraph witness_graph(std::span<const Point> landmarks, std::span<const Point> witnesses) {
  WitnessGraph g;
  accumulate_witnesses(g, landmarks, witnesses);
  return g;
}

WitnessGraph restricted_witness_graph(std::span<const Point> landmarks, const ParametricShape& shape,
                                      const Similarity& transform, std::size_t witness_count, Rng& rng) {
  WitnessGraph g;
  std::vector<Point> batch;
  constexpr std::size_t kBatch = 1 << 16;
  for (std::size_t done = 0; done < witness_count;) {
    batch.clear();
    const std::size_t take = std::min(kBatch, witness_count - done);
    for (std::size_t i = 0; i < take; ++i) batch.push_back(transform.apply(sample_shape(shape, rng)));
    accumulate_witnesses(g, landmarks, batch);
    done += take;
  }
  return g;
}

WitnessGraph uniform_witness_graph(std::span<const Point> landmarks, const BoundingBox& box,
                                   std::size_t witness_count, Rng& rng) {
  const std::size_t d = box.min.dim();
  WitnessGraph g;
  std::vector<Point> batch;
  constexpr std::size_t kBatch = 1 << 16;
  for (std::size_t done = 0; done < witness_count;) {
    batch.clear();
    const std::size_t take = std::min(kBatch, witness_count - done);
    for (std::size_t i = 0; i < take; ++i) {
      Point w(d);
      for (std::size_t k = 0; k < d; ++k) w[k] = rng.uniform(box.min[k], box.max[k]);
      batch.push_back(w);
    }
    accumulate_witnesses(g, landmarks, batch);
    done += take;
  }
  return g;
}

std::vector<CocircularStep> cocircular_homotopy(std::size_t steps, std::size_t witnesses, std::uint64_t seed,
                                                double h0) {
  if (steps < 2) throw UsageError("homotopy needs at least two steps");
  if (!(h0 > 0.0 && h0 < 1.0)) throw UsageError("h0 must lie in (0, 1)");
  Rng rng(seed);
  std::vector<Point> ws;
  ws.reserve(witnesses);
  for (std::size_t i = 0; i < witnesses; ++i) ws.push_back(Point{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
  std::vector<CocircularStep> out;
  for (std::size_t k = 0; k < steps; ++k) {
    CocircularStep step;
    step.h = k + 1 == steps ? 1.0 : h0 + (1.0 - h0) * static_cast<double>(k) / static_cast<double>(steps - 1);
    const std::vector<Point> pts = {Point{-1.0, 0.0}, Point{1.0, 0.0}, Point{0.0, step.h}, Point{0.0, -step.h}};
    step.middle_edge_witnesses = witness_graph(pts, ws).count(2, 3);
    const DelaunayResult del = brute_force_delaunay(pts);
    step.middle_edge_delaunay = std::binary_search(del.edges.begin(), del.edges.end(), EdgeKey(2, 3));
    step.degenerate = del.degenerate();
    out.push_back(step);
  }
  return out;
}

bool is_subset(std::span<const EdgeKey> sub, std::span<const EdgeKey> super) {
  std::vector<EdgeKey> a(sub.begin(), sub.end()), b(super.begin(), super.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace soam
