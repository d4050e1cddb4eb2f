#include "soam/simplicial.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "soam/error.hpp"

namespace soam {

Triangle::Triangle(UnitId x, UnitId y, UnitId z) : v{x, y, z} { std::sort(v.begin(), v.end()); }

std::size_t TriangleHash::operator()(const Triangle& t) const noexcept {
  std::uint64_t h = t.v[0];
  h = h * 0x9E3779B97F4A7C15ull + t.v[1];
  h = h * 0x9E3779B97F4A7C15ull + t.v[2];
  return std::hash<std::uint64_t>{}(h);
}

std::string_view to_string(LinkClass c) {
  switch (c) {
    case LinkClass::Empty: return "empty";
    case LinkClass::Underconnected: return "underconnected";
    case LinkClass::Path: return "path";
    case LinkClass::Cycle: return "cycle";
    case LinkClass::Cycle3: return "cycle3";
    case LinkClass::Overconnected: return "overconnected";
  }
  return "?";
}

SimplicialComplex::SimplicialComplex(int manifold_dim) : manifold_dim_(manifold_dim) {
  if (manifold_dim != 1 && manifold_dim != 2) throw UsageError("manifold dimension must be 1 or 2");
}

void SimplicialComplex::require_vertex(UnitId id, const char* op) const {
  if (!has_vertex(id)) throw UsageError(std::string(op) + ": unknown unit id " + std::to_string(id));
}

void SimplicialComplex::add_vertex(UnitId id) {
  if (has_vertex(id)) throw UsageError("add_vertex: id " + std::to_string(id) + " already present");
  if (id >= adj_.size()) {
    adj_.resize(id + 1);
    alive_.resize(id + 1, 0);
  }
  alive_[id] = 1;
  adj_[id].clear();
  ++vertex_count_;
}

void SimplicialComplex::remove_vertex(UnitId id) {
  require_vertex(id, "remove_vertex");
  const std::vector<UnitId> nbrs = adj_[id];
  for (UnitId n : nbrs) remove_edge(id, n);
  alive_[id] = 0;
  --vertex_count_;
}

void SimplicialComplex::link_triangles(UnitId a, UnitId b) {
  for (UnitId n : common_neighbors(a, b)) triangles_.insert(Triangle(a, b, n));
}

bool SimplicialComplex::add_edge(UnitId a, UnitId b) {
  if (add_edge_with_age(a, b, 0)) return true;
  set_age(a, b, 0);
  return false;
}

bool SimplicialComplex::add_edge_with_age(UnitId a, UnitId b, int age) {
  require_vertex(a, "add_edge");
  require_vertex(b, "add_edge");
  if (a == b) throw UsageError("add_edge: self-loop on " + std::to_string(a));
  if (age < 0) throw UsageError("add_edge: negative age");
  auto [it, created] = ages_.try_emplace(EdgeKey(a, b), age);
  if (!created) {
    it->second = std::max(it->second, age);
    return false;
  }
  auto& na = adj_[a];
  na.insert(std::lower_bound(na.begin(), na.end(), b), b);
  auto& nb = adj_[b];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
  link_triangles(a, b);
  return true;
}

bool SimplicialComplex::remove_edge(UnitId a, UnitId b) {
  auto it = ages_.find(EdgeKey(a, b));
  if (it == ages_.end()) return false;
  for (UnitId n : common_neighbors(a, b)) triangles_.erase(Triangle(a, b, n));
  ages_.erase(it);
  auto& na = adj_[a];
  na.erase(std::lower_bound(na.begin(), na.end(), b));
  auto& nb = adj_[b];
  nb.erase(std::lower_bound(nb.begin(), nb.end(), a));
  return true;
}

bool SimplicialComplex::has_edge(UnitId a, UnitId b) const { return a != b && ages_.contains(EdgeKey(a, b)); }

int SimplicialComplex::age(UnitId a, UnitId b) const {
  auto it = ages_.find(EdgeKey(a, b));
  if (it == ages_.end()) throw UsageError("age: no edge " + std::to_string(a) + "-" + std::to_string(b));
  return it->second;
}

void SimplicialComplex::set_age(UnitId a, UnitId b, int age) {
  auto it = ages_.find(EdgeKey(a, b));
  if (it == ages_.end()) throw UsageError("set_age: no edge " + std::to_string(a) + "-" + std::to_string(b));
  if (age < 0) throw UsageError("set_age: negative age");
  it->second = age;
}

const std::vector<UnitId>& SimplicialComplex::neighbors(UnitId id) const {
  require_vertex(id, "neighbors");
  return adj_[id];
}

std::vector<UnitId> SimplicialComplex::common_neighbors(UnitId a, UnitId b) const {
  const auto& na = neighbors(a);
  const auto& nb = neighbors(b);
  std::vector<UnitId> out;
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(out));
  return out;
}

bool SimplicialComplex::has_triangle(UnitId a, UnitId b, UnitId c) const {
  if (a == b || b == c || a == c) return false;
  return triangles_.contains(Triangle(a, b, c));
}

std::vector<UnitId> SimplicialComplex::vertices() const {
  std::vector<UnitId> out;
  out.reserve(vertex_count_);
  for (UnitId id = 0; id < alive_.size(); ++id)
    if (alive_[id]) out.push_back(id);
  return out;
}

std::vector<std::pair<EdgeKey, int>> SimplicialComplex::edges() const {
  std::vector<std::pair<EdgeKey, int>> out(ages_.begin(), ages_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triangle> SimplicialComplex::triangles() const {
  std::vector<Triangle> out(triangles_.begin(), triangles_.end());
  std::sort(out.begin(), out.end());
  return out;
}

LinkGraph SimplicialComplex::link_of(UnitId u) const {
  require_vertex(u, "link_of");
  LinkGraph g;
  g.vertices = adj_[u];
  if (manifold_dim_ == 2) {
    const auto& n = g.vertices;
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j)
        if (triangles_.contains(Triangle(u, n[i], n[j]))) g.arcs.emplace_back(n[i], n[j]);
  }
  return g;
}

std::vector<Simplex> SimplicialComplex::star_of(UnitId u) const {
  require_vertex(u, "star_of");
  std::vector<Simplex> star{{{u}}};
  for (UnitId n : adj_[u]) star.push_back({{std::min(u, n), std::max(u, n)}});
  for (const Triangle& t : triangles_)
    if (std::find(t.v.begin(), t.v.end(), u) != t.v.end()) star.push_back({{t.v.begin(), t.v.end()}});
  std::sort(star.begin(), star.end());
  return star;
}

std::vector<Simplex> closure_of(std::span<const Simplex> simplices) {
  std::vector<Simplex> out;
  for (const Simplex& s : simplices) {
    const std::size_t n = s.v.size();
    // Every nonempty subset of the vertex list is a face.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex f;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) f.v.push_back(s.v[i]);
      out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LinkClass classify_link(const LinkGraph& link, int manifold_dim) {
  const std::size_t n = link.vertices.size();
  if (n == 0) return LinkClass::Empty;
  if (manifold_dim == 1) {
    if (n == 1) return LinkClass::Path;
    if (n == 2) return LinkClass::Cycle;
    return LinkClass::Overconnected;
  }

  auto index_of = [&](UnitId id) {
    return static_cast<std::size_t>(std::lower_bound(link.vertices.begin(), link.vertices.end(), id) -
                                    link.vertices.begin());
  };
  std::vector<int> degree(n, 0);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  std::size_t cycles = 0;  // arcs closing a loop; with max degree 2 each closes one cycle
  for (const EdgeKey& arc : link.arcs) {
    const std::size_t i = index_of(arc.a), j = index_of(arc.b);
    if (++degree[i] > 2 || ++degree[j] > 2) return LinkClass::Overconnected;
    const std::size_t ri = find(i), rj = find(j);
    if (ri == rj) {
      ++cycles;
    } else {
      parent[ri] = rj;
      --components;
    }
  }
  if (cycles > 0) {
    if (components != 1) return LinkClass::Overconnected;
    return n == 3 ? LinkClass::Cycle3 : LinkClass::Cycle;
  }
  if (components == 1 && n >= 2) return LinkClass::Path;
  return LinkClass::Underconnected;
}

}  // namespace soam
