#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <sstream>

#include "covertime/generators.hpp"
#include "covertime/graph.hpp"

using namespace covertime;

namespace {

std::uint64_t degree_sum(const MultiGraph& g) {
  std::uint64_t s = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    s += g.degree(v);
  return s;
}

// Independent component oracle: union-find over the edge list.
std::vector<Vertex> union_find_roots(const MultiGraph& g) {
  std::vector<Vertex> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Vertex(Vertex)> find = [&](Vertex x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : g.edges())
    parent[find(e.u)] = find(e.v);
  std::vector<Vertex> out(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    out[v] = find(v);
  return out;
}

} // namespace

TEST(EdgeList, PathFromText) {
  const auto g = from_edge_list("0 1\n1 2");
  ASSERT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.degrees(), (std::vector<std::uint64_t>{1, 2, 1}));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(EdgeList, MultiplicityColumn) {
  const auto g = from_edge_list("0 1 2");
  EXPECT_EQ(g.degrees(), (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.multiplicity(0, 1), 2u);
}

TEST(EdgeList, LoopCountsTwice) {
  const auto g = from_edge_list("0 0");
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(EdgeList, DuplicateLinesAccumulate) {
  const auto g = from_edge_list("# comment\n0 1\n\n1 0\n0 1 3\n");
  EXPECT_EQ(g.multiplicity(0, 1), 5u);
  EXPECT_EQ(g.edge_count(), 5u);
}

TEST(EdgeList, HeaderAddsIsolatedVertices) {
  const auto g = from_edge_list("n 5\n0 1\n");
  EXPECT_EQ(g.vertex_count(), 5u);
  EXPECT_EQ(g.degree(4), 0u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  try {
    from_edge_list("0 1\n1 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
  EXPECT_THROW(from_edge_list("0 1 0\n"), ParseError);
  EXPECT_THROW(from_edge_list("0 -1\n"), ParseError);
  EXPECT_THROW(from_edge_list("0 1 2 3\n"), ParseError);
}

TEST(EdgeList, IdBeyondHeaderIsRangeError) { EXPECT_THROW(from_edge_list("n 2\n0 2\n"), std::out_of_range); }

TEST(EdgeList, RoundTrip) {
  const auto g = from_edge_list("n 6\n0 1 2\n2 2\n3 4\n1 3\n");
  std::ostringstream out;
  to_edge_list(g, out);
  EXPECT_EQ(from_edge_list(out.str()), g);
}

TEST(Components, PathIsOneComponent) {
  const auto cs = connected_components(path_graph(3));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].size(), 3u);
}

TEST(Components, TieBrokenBySmallestId) {
  const auto g = from_edge_list("2 3\n0 1\n");
  const auto cs = connected_components(g);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].vertices(), (std::vector<Vertex>{0, 1}));
  EXPECT_EQ(cs[1].vertices(), (std::vector<Vertex>{2, 3}));
}

TEST(Components, EmptyGraphGivesSingletons) {
  const auto cs = connected_components(MultiGraph(4));
  ASSERT_EQ(cs.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(cs[i].size(), 1u);
    EXPECT_EQ(cs[i].vertices()[0], i);
  }
}

TEST(Components, PartitionMatchesUnionFind) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = gnp(60, 1.2 / 60, seed);
    const auto roots = union_find_roots(g);
    const auto cs = connected_components(g);
    std::vector<int> hit(g.vertex_count(), 0);
    std::size_t prev = SIZE_MAX;
    for (const auto& c : cs) {
      EXPECT_LE(c.size(), prev);
      prev = c.size();
      const auto r = roots[c.vertices()[0]];
      for (Vertex v : c.vertices()) {
        ++hit[v];
        EXPECT_EQ(roots[v], r);
      }
      EXPECT_TRUE(is_connected(c.graph()));
    }
    for (int h : hit)
      EXPECT_EQ(h, 1);
  }
}

TEST(Components, RelabelingRoundTrips) {
  const auto g = from_edge_list("n 7\n1 4\n4 6 2\n6 6\n0 2\n");
  const auto big = largest_component(g);
  EXPECT_EQ(big.vertices(), (std::vector<Vertex>{1, 4, 6}));
  for (Vertex l = 0; l < big.size(); ++l)
    EXPECT_EQ(big.to_local(big.to_parent(l)), l);
  EXPECT_THROW(big.to_local(0), std::domain_error);
  const auto h = big.graph();
  EXPECT_EQ(h.edge_count(), 4u);
  EXPECT_EQ(h.multiplicity(big.to_local(4), big.to_local(6)), 2u);
  EXPECT_EQ(h.degree(big.to_local(6)), 4u);
}

TEST(AddEdge, PathPlusChordIsTriangle) { EXPECT_EQ(add_edge(path_graph(3), 0, 2), cycle_graph(3)); }

TEST(AddEdge, DoubledEdge) {
  const auto g = add_edge(path_graph(2), 0, 1);
  EXPECT_EQ(g.degrees(), (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(AddEdge, LoopAddsTwo) {
  const auto g = add_edge(path_graph(3), 1, 1);
  EXPECT_EQ(g.degree(1), 4u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(2), 1u);
}

TEST(AddEdge, InvalidIdIsRangeError) { EXPECT_THROW(add_edge(path_graph(3), 0, 3), std::out_of_range); }

TEST(Invariants, DegreeSumAndSymmetryAfterMutations) {
  auto g = gnp(30, 0.2, 5);
  for (Vertex i = 0; i < 40; ++i) {
    const Vertex u = (i * 7) % 30, v = (i * 11 + 3) % 30;
    const auto before = g.degrees();
    g = add_edge(g, u, v);
    ASSERT_EQ(degree_sum(g), 2 * g.edge_count());
    for (Vertex w = 0; w < 30; ++w)
      if (w != u && w != v)
        ASSERT_EQ(g.degree(w), before[w]);
    for (Vertex a = 0; a < 30; ++a)
      for (const auto& nb : g.neighbors(a))
        ASSERT_EQ(g.multiplicity(nb.vertex, a), nb.multiplicity);
  }
}

TEST(Bfs, PathDistances) {
  const auto d = bfs_distances(path_graph(5), 0);
  EXPECT_EQ(d, (std::vector<std::uint32_t>{0, 1, 2, 3, 4}));
}
