#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "soam/error.hpp"
#include "soam/sampling.hpp"
#include "soam/simplicial.hpp"

using namespace soam;

namespace {

// Triangles by brute-force enumeration of all vertex triples.
std::vector<Triangle> clique_oracle(const SimplicialComplex& c) {
  const std::vector<UnitId> v = c.vertices();
  std::vector<Triangle> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t k = j + 1; k < v.size(); ++k)
        if (c.has_edge(v[i], v[j]) && c.has_edge(v[j], v[k]) && c.has_edge(v[i], v[k]))
          out.push_back(Triangle(v[i], v[j], v[k]));
  std::sort(out.begin(), out.end());
  return out;
}

SimplicialComplex random_complex(Rng& rng, int n, double p, int dim = 2) {
  SimplicialComplex c(dim);
  for (int i = 0; i < n; ++i) c.add_vertex(static_cast<UnitId>(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) c.add_edge(static_cast<UnitId>(i), static_cast<UnitId>(j));
  return c;
}

// Link computed from the definition Cl(St(u)) - St(u).
LinkGraph link_by_definition(const SimplicialComplex& c, UnitId u) {
  const std::vector<Simplex> star = c.star_of(u);
  const std::vector<Simplex> closure = closure_of(star);
  LinkGraph lg;
  for (const Simplex& s : closure) {
    if (std::binary_search(star.begin(), star.end(), s)) continue;
    if (s.v.size() == 1) lg.vertices.push_back(s.v[0]);
    if (s.v.size() == 2) lg.arcs.push_back(EdgeKey(s.v[0], s.v[1]));
  }
  std::sort(lg.vertices.begin(), lg.vertices.end());
  std::sort(lg.arcs.begin(), lg.arcs.end());
  return lg;
}

LinkGraph make_link(std::vector<UnitId> vertices, std::vector<std::pair<UnitId, UnitId>> arcs) {
  LinkGraph lg;
  lg.vertices = std::move(vertices);
  std::sort(lg.vertices.begin(), lg.vertices.end());
  for (auto [a, b] : arcs) lg.arcs.push_back(EdgeKey(a, b));
  std::sort(lg.arcs.begin(), lg.arcs.end());
  return lg;
}

LinkGraph cycle_link(int n) {
  std::vector<UnitId> v;
  std::vector<std::pair<UnitId, UnitId>> arcs;
  for (int i = 0; i < n; ++i) {
    v.push_back(static_cast<UnitId>(i));
    arcs.push_back({static_cast<UnitId>(i), static_cast<UnitId>((i + 1) % n)});
  }
  return make_link(v, arcs);
}

}  // namespace

TEST_CASE("add_edge creates triangles only on closure") {
  SimplicialComplex c;
  for (UnitId i = 0; i < 3; ++i) c.add_vertex(i);
  CHECK(c.add_edge(0, 1));
  CHECK(c.add_edge(1, 2));
  CHECK(c.triangle_count() == 0);
  CHECK(c.add_edge(0, 2));
  CHECK(c.triangles() == std::vector<Triangle>{Triangle(0, 1, 2)});
}

TEST_CASE("re-adding an edge resets its age") {
  SimplicialComplex c;
  c.add_vertex(0);
  c.add_vertex(1);
  c.add_edge(0, 1);
  c.set_age(0, 1, 17);
  CHECK_FALSE(c.add_edge(0, 1));
  CHECK(c.age(0, 1) == 0);
}

TEST_CASE("remove_edge drops incident triangles only") {
  SimplicialComplex c;
  for (UnitId i = 0; i < 3; ++i) c.add_vertex(i);
  c.add_edge(0, 1);
  c.add_edge(1, 2);
  c.add_edge(0, 2);
  CHECK(c.remove_edge(0, 1));
  CHECK(c.triangle_count() == 0);
  CHECK(c.has_edge(1, 2));
  CHECK(c.has_edge(0, 2));
  CHECK(c.vertex_count() == 3);
  CHECK_FALSE(c.remove_edge(0, 1));
}

TEST_CASE("edge preconditions") {
  SimplicialComplex c;
  c.add_vertex(0);
  CHECK_THROWS_AS(c.add_edge(0, 0), UsageError);
  CHECK_THROWS_AS(c.add_edge(0, 5), UsageError);
  CHECK_THROWS_AS(c.link_of(4), UsageError);
}

TEST_CASE("triangles equal 3-cliques after every mutation") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    SimplicialComplex c;
    const int n = 3 + static_cast<int>(rng.index(10));
    std::vector<bool> alive(n, true);
    for (int i = 0; i < n; ++i) c.add_vertex(static_cast<UnitId>(i));
    for (int op = 0; op < 40; ++op) {
      const auto a = static_cast<UnitId>(rng.index(n)), b = static_cast<UnitId>(rng.index(n));
      const double u = rng.uniform();
      if (u < 0.04 && alive[a]) {
        c.remove_vertex(a);
        alive[a] = false;
      } else if (a != b && alive[a] && alive[b]) {
        if (u < 0.65) c.add_edge(a, b);
        else c.remove_edge(a, b);
      }
      REQUIRE(c.triangles() == clique_oracle(c));
      for (const auto& [e, age] : c.edges()) {
        REQUIRE(c.has_vertex(e.a));
        REQUIRE(c.has_vertex(e.b));
        REQUIRE(e.a != e.b);
        REQUIRE(age >= 0);
      }
    }
  }
}

TEST_CASE("link examples") {
  SimplicialComplex c;
  for (UnitId i = 0; i < 8; ++i) c.add_vertex(i);
  CHECK(c.link_of(7).vertices.empty());
  c.add_edge(0, 1);
  c.add_edge(1, 2);
  const LinkGraph path = c.link_of(1);
  CHECK(path.vertices == std::vector<UnitId>{0, 2});
  CHECK(path.arcs.empty());

  // Closed fan of five triangles around vertex 7.
  SimplicialComplex fan;
  for (UnitId i = 0; i < 6; ++i) fan.add_vertex(i);
  for (UnitId i = 0; i < 5; ++i) {
    fan.add_edge(5, i);
    fan.add_edge(i, (i + 1) % 5);
  }
  const LinkGraph lk = fan.link_of(5);
  CHECK(lk.vertices.size() == 5);
  CHECK(lk.arcs.size() == 5);
  CHECK(classify_link(lk, 2) == LinkClass::Cycle);
}

TEST_CASE("star and closure of a single triangle") {
  SimplicialComplex c;
  for (UnitId i = 0; i < 3; ++i) c.add_vertex(i);
  CHECK(c.star_of(0) == std::vector<Simplex>{Simplex{{0}}});
  c.add_edge(0, 1);
  c.add_edge(1, 2);
  c.add_edge(0, 2);
  const std::vector<Simplex> star = c.star_of(0);
  CHECK(star == std::vector<Simplex>{Simplex{{0}}, Simplex{{0, 1}}, Simplex{{0, 1, 2}}, Simplex{{0, 2}}});
  const std::vector<Simplex> cl = closure_of(star);
  CHECK(cl.size() == 7);
  CHECK(std::binary_search(cl.begin(), cl.end(), Simplex{{1, 2}}));
}

TEST_CASE("link_of agrees with Cl(St) - St on random complexes") {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const SimplicialComplex c = random_complex(rng, 4 + static_cast<int>(rng.index(8)), rng.uniform(0.2, 0.8));
    for (UnitId u : c.vertices()) {
      const LinkGraph a = c.link_of(u), b = link_by_definition(c, u);
      REQUIRE(a.vertices == b.vertices);
      REQUIRE(a.arcs == b.arcs);
    }
  }
}

TEST_CASE("link in dimension 1 has no arcs") {
  SimplicialComplex c(1);
  for (UnitId i = 0; i < 3; ++i) c.add_vertex(i);
  c.add_edge(0, 1);
  c.add_edge(1, 2);
  c.add_edge(0, 2);
  CHECK(c.link_of(0).arcs.empty());
  CHECK(classify_link(c.link_of(0), 1) == LinkClass::Cycle);
}

TEST_CASE("classify_link examples") {
  CHECK(classify_link(cycle_link(5), 2) == LinkClass::Cycle);
  CHECK(classify_link(cycle_link(4), 2) == LinkClass::Cycle);
  CHECK(classify_link(cycle_link(3), 2) == LinkClass::Cycle3);
  CHECK(classify_link(make_link({0, 1, 2, 3, 4}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}}), 2) ==
        LinkClass::Overconnected);
  CHECK(classify_link(make_link({0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}}), 2) == LinkClass::Path);
  CHECK(classify_link(make_link({0, 1, 2, 3}, {{0, 1}, {2, 3}}), 2) == LinkClass::Underconnected);
  CHECK(classify_link(make_link({0, 1, 2}, {}), 2) == LinkClass::Underconnected);
  CHECK(classify_link(make_link({}, {}), 2) == LinkClass::Empty);
  // Two disjoint cycles exceed a sphere.
  CHECK(classify_link(make_link({0, 1, 2, 3, 4, 5, 6, 7},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}}),
                      2) == LinkClass::Overconnected);
  // A cycle plus an isolated vertex.
  CHECK(classify_link(make_link({0, 1, 2, 3, 9}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 2) == LinkClass::Overconnected);

  CHECK(classify_link(make_link({}, {}), 1) == LinkClass::Empty);
  CHECK(classify_link(make_link({4}, {}), 1) == LinkClass::Path);
  CHECK(classify_link(make_link({4, 8}, {}), 1) == LinkClass::Cycle);
  CHECK(classify_link(make_link({1, 4, 8}, {}), 1) == LinkClass::Overconnected);
}

TEST_CASE("classify_link is invariant under relabeling") {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const SimplicialComplex c = random_complex(rng, 5 + static_cast<int>(rng.index(6)), rng.uniform(0.3, 0.9));
    const std::vector<UnitId> verts = c.vertices();
    std::vector<UnitId> perm(verts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<UnitId>(100 + i);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    for (UnitId u : verts) {
      const LinkGraph lg = c.link_of(u);
      LinkGraph relabeled;
      for (UnitId v : lg.vertices) relabeled.vertices.push_back(perm[v]);
      for (const EdgeKey& e : lg.arcs) relabeled.arcs.push_back(EdgeKey(perm[e.a], perm[e.b]));
      std::sort(relabeled.vertices.begin(), relabeled.vertices.end());
      std::sort(relabeled.arcs.begin(), relabeled.arcs.end());
      for (int dim : {1, 2}) {
        const LinkClass k = classify_link(lg, dim);
        REQUIRE(k == classify_link(relabeled, dim));
        if (dim == 2 && k == LinkClass::Cycle) REQUIRE(lg.vertices.size() >= 4);
      }
    }
  }
}
