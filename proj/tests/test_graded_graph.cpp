#include <doctest.h>

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bratteli/catalog.hpp"
#include "bratteli/error.hpp"
#include "bratteli/graded_graph.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace bratteli;

namespace {

GradedGraph make_graph(std::vector<std::vector<std::string>> levels,
                       std::vector<std::vector<Edge>> edges) {
  return GradedGraph(std::move(levels), std::move(edges));
}

}  // namespace

TEST_CASE("construction rejects unusable data") {
  CHECK_THROWS_AS(make_graph({}, {}), Error);
  CHECK_THROWS_AS(make_graph({{"1"}, {"a"}}, {{}, {{0, 5, 1}}}), Error);   // bad index
  CHECK_THROWS_AS(make_graph({{"1"}, {"a"}}, {{}, {{0, 0, 0}}}), Error);   // multiplicity 0
  CHECK_THROWS_AS(make_graph({{"1"}, {"a", "a"}}, {{}, {{0, 0, 1}}}), Error);  // dup label
  CHECK_THROWS_AS(make_graph({{"1"}, {"a"}}, {{{0, 0, 1}}, {}}), Error);   // edges at level 0
}

TEST_CASE("lookup and adjacency") {
  GradedGraph g = make_graph({{"1"}, {"a", "b"}, {"c"}},
                             {{}, {{0, 0, 1}, {0, 1, 2}}, {{0, 0, 1}, {1, 0, 3}}});
  CHECK(g.depth() == 2);
  CHECK(g.level_size(1) == 2);
  CHECK(g.vertex(1, "b") == VertexRef{1, 1});
  CHECK(g.label({2, 0}) == "c");
  CHECK_FALSE(g.find(1, "zzz").has_value());
  CHECK_THROWS_AS((void)g.vertex(1, "zzz"), Error);
  CHECK_THROWS_AS((void)g.labels(7), Error);
  CHECK(g.in_edges({2, 0}).size() == 2);
  CHECK(g.out_edges({1, 1}).size() == 1);
  CHECK(g.out_edges({2, 0}).empty());
  CHECK(g.contains({1, 1}));
  CHECK_FALSE(g.contains({1, 2}));
  CHECK_FALSE(g.contains({3, 0}));
}

TEST_CASE("dim follows the multiplicity-weighted path count") {
  GradedGraph g = make_graph({{"1"}, {"a", "b"}, {"c"}},
                             {{}, {{0, 0, 1}, {0, 1, 2}}, {{0, 0, 1}, {1, 0, 3}}});
  CHECK(g.dim({0, 0}) == 1);
  CHECK(g.dim({1, 1}) == 2);
  CHECK(g.dim({2, 0}) == 7);  // 1*1 + 2*3
  CHECK(g.dim({2, 0}) == oracle::dim(g, {2, 0}));
}

TEST_CASE("pascal dims are binomial coefficients") {
  GraphPtr g = pascal(8);
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) CHECK(g->dim({n, k}) == oracle::binomial(n, k));
  CHECK(g->dim({4, 2}) == 6);
}

TEST_CASE("paths are enumerated in canonical order") {
  GraphPtr g = pascal(4);
  auto paths = g->paths_to({4, 2});
  CHECK(paths.size() == 6);
  // Sorted by the visited vertex index sequence, level-ascending.
  std::vector<std::vector<int>> seqs;
  for (const auto& p : paths) {
    std::vector<int> seq;
    for (const VertexRef& v : g->path_vertices({4, 2}, p)) seq.push_back(v.index);
    seqs.push_back(seq);
  }
  for (std::size_t i = 1; i < seqs.size(); ++i) CHECK(seqs[i - 1] < seqs[i]);
  // Same path set as the in-edge oracle.
  auto expected = oracle::paths(*g, {4, 2});
  std::set<std::vector<int>> a(paths.begin(), paths.end());
  std::set<std::vector<int>> b(expected.begin(), expected.end());
  CHECK(a == b);
}

TEST_CASE("paths respect the enumeration cap") {
  GraphPtr g = pascal(12);
  CHECK_THROWS_AS((void)g->paths_to({12, 6}, 100), Error);
  CHECK(g->paths_to({12, 6}, 10000).size() == 924);
}

TEST_CASE("path vertices chain through the edges") {
  GraphPtr g = pascal(3);
  auto paths = g->paths_to({3, 1});
  for (const auto& p : paths) {
    auto vs = g->path_vertices({3, 1}, p);
    REQUIRE(vs.size() == 4);
    CHECK(vs.front() == VertexRef{0, 0});
    CHECK(vs.back() == VertexRef{3, 1});
  }
  CHECK_THROWS_AS((void)g->path_vertices({3, 1}, {0, 0, 5}), Error);
}

TEST_CASE("validate flags each axiom") {
  // Healthy graph: no violations.
  CHECK(validate_graph(*pascal(5)).empty());

  // Wrong root label.
  GradedGraph bad_root = make_graph({{"root"}, {"a"}}, {{}, {{0, 0, 1}}});
  auto v1 = validate_graph(bad_root);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].kind == Violation::Kind::RootLabel);

  // Two vertices at level 0.
  GradedGraph two_roots =
      make_graph({{"1", "x"}, {"a"}}, {{}, {{0, 0, 1}, {1, 0, 1}}});
  auto v2 = validate_graph(two_roots);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].kind == Violation::Kind::RootCount);

  // Duplicate (target, source) pair.
  GradedGraph dup = make_graph({{"1"}, {"a"}}, {{}, {{0, 0, 1}, {0, 0, 2}}});
  auto v3 = validate_graph(dup);
  REQUIRE(v3.size() == 1);
  CHECK(v3[0].kind == Violation::Kind::DuplicateEdge);

  // Vertex with no incoming edge.
  GradedGraph no_in = make_graph({{"1"}, {"a", "b"}}, {{}, {{0, 0, 1}}});
  auto v4 = validate_graph(no_in);
  REQUIRE(v4.size() == 1);
  CHECK(v4[0].kind == Violation::Kind::MissingIncoming);
  CHECK(v4[0].level == 1);

  // Vertex with no outgoing edge below the top (waived at the top).
  GradedGraph no_out = make_graph({{"1"}, {"a", "b"}, {"c"}},
                                  {{}, {{0, 0, 1}, {0, 1, 1}}, {{0, 0, 1}}});
  auto v5 = validate_graph(no_out);
  REQUIRE(v5.size() == 1);
  CHECK(v5[0].kind == Violation::Kind::MissingOutgoing);
}

TEST_CASE("truncate keeps the prefix") {
  GraphPtr g = pascal(6);
  GradedGraph t = truncate(*g, 3);
  CHECK(t.depth() == 3);
  CHECK(t.same_structure(*pascal(3)));
  CHECK_THROWS_AS((void)truncate(*g, 9), Error);
}

TEST_CASE("structural identity") {
  GraphPtr a = pascal(4);
  GraphPtr b = pascal(4);
  GraphPtr c = pascal(5);
  CHECK(same_graph(a, a));
  CHECK(same_graph(a, b));  // distinct objects, same structure
  CHECK_FALSE(same_graph(a, c));
}

TEST_CASE("random graphs satisfy the axioms by construction") {
  Rng rng(20240817);
  for (int i = 0; i < 25; ++i) {
    GraphPtr g = support::random_graph(rng, 2 + static_cast<int>(support::below(rng, 4)), 4);
    CHECK(validate_graph(*g).empty());
    VertexRef top{g->depth(), 0};
    CHECK(g->dim(top) == oracle::dim(*g, top));
  }
}
