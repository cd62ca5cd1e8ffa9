#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "covertime/generators.hpp"

using namespace covertime;

namespace {

std::string canonical(const MultiGraph& g) {
  std::ostringstream out;
  to_edge_list(g, out);
  return out.str();
}

// Chi-square goodness of fit against the uniform law on `cells` outcomes.
double uniform_chi_square_p_value(const std::map<std::string, std::size_t>& counts, std::size_t cells,
                                  std::size_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  double stat = 0;
  for (const auto& [key, c] : counts)
    stat += (c - expected) * (c - expected) / expected;
  stat += static_cast<double>(cells - counts.size()) * expected; // unseen cells
  const boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Oracle for the conjugate: bisection on x e^-x, increasing on (0, 1).
double bisect_conjugate(double eps) {
  const double target = (1 + eps) * std::exp(-(1 + eps));
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(-mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_tree(const MultiGraph& g) { return is_connected(g) && g.edge_count() + 1 == g.vertex_count(); }

} // namespace

TEST(Gnp, ExtremeProbabilities) {
  EXPECT_EQ(gnp(20, 0.0, 1).edge_count(), 0u);
  EXPECT_EQ(gnp(20, 1.0, 1), complete_graph(20));
  EXPECT_THROW(gnp(10, 1.5, 1), std::domain_error);
}

TEST(Gnp, SimpleAndDeterministic) {
  const auto a = gnp(500, 0.01, 42);
  EXPECT_EQ(a, gnp(500, 0.01, 42));
  EXPECT_NE(canonical(a), canonical(gnp(500, 0.01, 43)));
  for (const auto& e : a.edges()) {
    EXPECT_NE(e.u, e.v);
    EXPECT_EQ(e.multiplicity, 1u);
  }
}

TEST(Gnp, EdgeCountMatchesBinomialMean) {
  const std::size_t n = 400;
  const double p = 0.02;
  const double pairs = n * (n - 1) / 2.0;
  double sum = 0;
  const int reps = 200;
  for (int s = 0; s < reps; ++s)
    sum += static_cast<double>(gnp(n, p, s).edge_count());
  const double se = std::sqrt(pairs * p * (1 - p) / reps);
  EXPECT_NEAR(sum / reps, pairs * p, 3 * se);
}

TEST(Gnp, PairFrequenciesAreUniform) {
  // each of the 15 pairs on 6 vertices appears with probability p
  const int reps = 20000;
  std::vector<int> hits(36, 0);
  for (int s = 0; s < reps; ++s) {
    const auto g = gnp(6, 0.3, s);
    for (const auto& e : g.edges())
      ++hits[e.u * 6 + e.v];
  }
  const double se = std::sqrt(0.3 * 0.7 / reps);
  for (Vertex u = 0; u < 6; ++u)
    for (Vertex v = u + 1; v < 6; ++v)
      EXPECT_NEAR(hits[u * 6 + v] / double(reps), 0.3, 4 * se);
}

TEST(Gnp, CriticalLargestComponentScale) {
  const std::size_t n = 10000;
  std::vector<double> sizes;
  for (int s = 0; s < 200; ++s)
    sizes.push_back(static_cast<double>(largest_component(gnp(n, 1.0 / n, s)).size()));
  std::nth_element(sizes.begin(), sizes.begin() + 100, sizes.end());
  const double scale = std::pow(double(n), 2.0 / 3.0);
  EXPECT_GE(sizes[100], scale / 8);
  EXPECT_LE(sizes[100], 8 * scale);
}

TEST(Tree, SmallSizes) {
  EXPECT_EQ(uniform_labeled_tree(1, 0).vertex_count(), 1u);
  EXPECT_EQ(uniform_labeled_tree(2, 0), path_graph(2));
  for (std::size_t k : {3u, 10u, 500u})
    EXPECT_TRUE(is_tree(uniform_labeled_tree(k, k)));
}

TEST(Tree, UniformOverLabeledTrees) {
  const std::size_t cayley[] = {0, 1, 1, 3, 16, 125};
  for (std::size_t k : {3u, 4u, 5u}) {
    const std::size_t draws = 100000;
    std::map<std::string, std::size_t> counts;
    for (std::size_t s = 0; s < draws; ++s)
      ++counts[canonical(uniform_labeled_tree(k, s))];
    EXPECT_EQ(counts.size(), cayley[k]);
    EXPECT_GT(uniform_chi_square_p_value(counts, cayley[k], draws), 1e-3) << "k = " << k;
  }
}

TEST(Pgw, TinyMeanGivesLoneRoot) {
  int singles = 0;
  for (int s = 0; s < 2000; ++s)
    singles += pgw_tree(1e-4, s, 100).total_size == 1 ? 1 : 0;
  EXPECT_GE(singles, 1995);
}

TEST(Pgw, RootDegreeMeanIsMu) {
  const double mu = 0.7;
  const int reps = 20000;
  std::vector<double> deg;
  for (int s = 0; s < reps; ++s)
    deg.push_back(static_cast<double>(pgw_tree(mu, s, 1000).tree.degree(0)));
  double mean = 0, ss = 0;
  for (double d : deg)
    mean += d / reps;
  for (double d : deg)
    ss += (d - mean) * (d - mean);
  EXPECT_NEAR(mean, mu, 3 * std::sqrt(ss / (reps - 1) / reps));
}

TEST(Pgw, TotalProgenyFollowsBorelLaw) {
  // P(|T| = n) = e^{-n} n^{n-1} / n! for critical Poisson offspring
  const int reps = 100000;
  std::vector<int> hits(8, 0);
  for (int s = 0; s < reps; ++s) {
    const auto t = pgw_tree(1.0, s, 50);
    if (t.total_size < 8)
      ++hits[t.total_size];
  }
  for (int n = 1; n < 8; ++n) {
    const double p = std::exp(-n + (n - 1) * std::log(double(n)) - std::lgamma(n + 1.0));
    EXPECT_NEAR(hits[n] / double(reps), p, 3 * std::sqrt(p * (1 - p) / reps)) << n;
  }
}

TEST(Pgw, WindowProbabilityDecaysLikeInverseRoot) {
  const int reps = 200000;
  const std::size_t k = 16;
  int small = 0, large = 0;
  for (int s = 0; s < reps; ++s) {
    const auto t = pgw_tree(1.0, s, 8 * k + 1);
    if (!t.truncated && t.total_size >= k && t.total_size <= 2 * k)
      ++small;
    if (!t.truncated && t.total_size >= 4 * k && t.total_size <= 8 * k)
      ++large;
  }
  const double ratio = double(small) / double(large);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.7);
}

TEST(Pgw, TruncationIsFlagged) {
  const auto t = pgw_tree(1.0, 3, 1);
  EXPECT_EQ(t.total_size, 1u);
  bool any = false;
  for (int s = 0; s < 100 && !any; ++s)
    any = pgw_tree(1.0, s, 5).truncated;
  EXPECT_TRUE(any);
}

TEST(Conjugate, ResidualAndBracket) {
  for (double eps : {1e-3, 1e-2, 0.1, 0.2, 0.5}) {
    const double mu = conjugate_mu(eps);
    EXPECT_LE(std::abs(mu * std::exp(-mu) - (1 + eps) * std::exp(-(1 + eps))), 1e-12);
    EXPECT_NEAR(mu, bisect_conjugate(eps), 1e-7);
  }
  const double mu = conjugate_mu(0.2);
  EXPECT_GT(mu, 0.8);
  EXPECT_LT(mu, 0.85);
}

TEST(Conjugate, LimitAndMonotonicity) {
  const double mu = conjugate_mu(1e-8);
  EXPECT_GT(mu, 1 - 1e-7);
  EXPECT_LT(mu, 1.0);
  double prev = 1.0;
  for (double eps = 0.05; eps <= 1.0 + 1e-12; eps += 0.05) {
    const double m = conjugate_mu(eps);
    EXPECT_LT(m, prev);
    EXPECT_LT(bisect_conjugate(eps), bisect_conjugate(eps - 0.025));
    prev = m;
  }
  EXPECT_THROW(conjugate_mu(0.0), std::domain_error);
  EXPECT_THROW(conjugate_mu(-1.0), std::domain_error);
}

TEST(GiantModel, StructuralInvariants) {
  const auto params = GiantModelParams::make(20000, 0.1);
  EXPECT_NEAR(params.lambda_mean, 1.1 - params.mu, 1e-15);
  EXPECT_NEAR(params.lambda_var, 1.0 / 2000.0, 1e-15);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = giant_model(params, seed);
    std::vector<std::uint64_t> kdeg(s.kernel_degrees.size(), 0);
    std::set<std::pair<Vertex, Vertex>> seen;
    std::uint64_t stubs = 0;
    for (auto d : s.kernel_degrees)
      stubs += d;
    EXPECT_EQ(stubs % 2, 0u);
    for (const auto& e : s.kernel_edges) {
      EXPECT_NE(e.u, e.v);
      EXPECT_TRUE(seen.insert({e.u, e.v}).second);
      ++kdeg[e.u];
      ++kdeg[e.v];
    }
    EXPECT_EQ(kdeg, s.kernel_degrees);
    for (auto d : kdeg)
      EXPECT_GE(d, 3u);
    EXPECT_EQ(s.tree_roots, s.subdivided_vertex_count);
    std::uint64_t subdivided = s.kernel_degrees.size();
    for (auto len : s.path_lengths) {
      EXPECT_GE(len, 1u);
      subdivided += len - 1;
    }
    EXPECT_EQ(subdivided, s.subdivided_vertex_count);
    EXPECT_TRUE(is_connected(s.graph) || s.kernel_edges.empty());
  }
}

TEST(GiantModel, PathLengthsAreGeometric) {
  const auto params = GiantModelParams::make(50000, 0.1);
  std::vector<double> lens;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (auto l : giant_model(params, seed).path_lengths)
      lens.push_back(static_cast<double>(l));
  const double n = double(lens.size());
  double mean = 0, ss = 0;
  for (double l : lens)
    mean += l / n;
  for (double l : lens)
    ss += (l - mean) * (l - mean);
  EXPECT_NEAR(mean, 1.0 / (1.0 - params.mu), 3 * std::sqrt(ss / (n - 1) / n));
}

TEST(GiantModel, HighDegreeFractionIsPoissonTail) {
  const auto params = GiantModelParams::make(100000, 0.1);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto s = giant_model(params, seed);
    const double p = boost::math::cdf(boost::math::complement(boost::math::poisson(s.lambda), 2.0));
    const double n = double(params.n);
    EXPECT_NEAR(s.high_degree_count / n, p, 3 * std::sqrt(p * (1 - p) / n)) << seed;
  }
}

TEST(GiantModel, DeterministicInSeed) {
  const auto params = GiantModelParams::make(5000, 0.2);
  EXPECT_EQ(giant_model(params, 9).graph, giant_model(params, 9).graph);
}

TEST(Percolation, FullHypercube) {
  BaseGraphSpec spec{.kind = BaseGraphSpec::Kind::hypercube, .m = 3, .percolation_p = 1.0};
  const auto s = percolate(spec, 1);
  EXPECT_EQ(s.full.vertex_count(), 8u);
  for (Vertex v = 0; v < 8; ++v)
    EXPECT_EQ(s.full.degree(v), 3u);
  EXPECT_EQ(s.largest.size(), 8u);
}

TEST(Percolation, ZeroRetentionLeavesSingletons) {
  BaseGraphSpec spec{.kind = BaseGraphSpec::Kind::complete, .n = 12, .percolation_p = 0.0};
  const auto s = percolate(spec, 1);
  EXPECT_EQ(s.full.edge_count(), 0u);
  EXPECT_EQ(s.largest.size(), 1u);
}

TEST(Percolation, FullTorus) {
  BaseGraphSpec spec{.kind = BaseGraphSpec::Kind::torus, .m = 5, .d = 2, .percolation_p = 1.0};
  const auto s = percolate(spec, 1);
  EXPECT_EQ(s.full.vertex_count(), 25u);
  for (Vertex v = 0; v < 25; ++v)
    EXPECT_EQ(s.full.degree(v), 4u);
}

TEST(Percolation, VertexTransitiveBases) {
  const auto h = hypercube(6);
  const auto t = torus(4, 3);
  EXPECT_EQ(h.vertex_count(), 64u);
  EXPECT_EQ(t.vertex_count(), 64u);
  for (Vertex v = 0; v < 64; ++v) {
    EXPECT_EQ(h.degree(v), 6u);
    EXPECT_EQ(t.degree(v), 6u);
  }
  const auto r = random_regular(50, 3, 7);
  for (Vertex v = 0; v < 50; ++v)
    EXPECT_EQ(r.degree(v), 3u);
  for (const auto& e : r.edges()) {
    EXPECT_NE(e.u, e.v);
    EXPECT_EQ(e.multiplicity, 1u);
  }
}

TEST(Percolation, RetentionRateAndDeterminism) {
  BaseGraphSpec spec{.kind = BaseGraphSpec::Kind::torus, .m = 30, .d = 2, .percolation_p = 0.4};
  const auto a = percolate(spec, 5);
  EXPECT_EQ(a.full, percolate(spec, 5).full);
  const double total = 2.0 * 900;
  EXPECT_NEAR(a.full.edge_count() / total, 0.4, 4 * std::sqrt(0.24 / total));
}

TEST(Percolation, MissingFileIsContractViolation) {
  BaseGraphSpec spec{.kind = BaseGraphSpec::Kind::from_file, .path = "/nonexistent/edges.txt"};
  EXPECT_THROW(percolate(spec, 1), ContractViolation);
}
