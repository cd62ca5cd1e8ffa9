#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "covertime/graph.hpp"
#include "covertime/parallel.hpp"

namespace covertime {

// Every sampler is a pure function of its parameters and seed. Each one
// draws from its own stream so that, e.g., a tree and a G(n,p) graph built
// from the same seed are unrelated.
namespace streams {
constexpr std::uint64_t gnp = 0x676e70;
constexpr std::uint64_t tree = 0x74726565;
constexpr std::uint64_t pgw = 0x706777;
constexpr std::uint64_t giant = 0x6769616e74;
constexpr std::uint64_t regular = 0x726567;
constexpr std::uint64_t percolation = 0x70657263;
} // namespace streams

/// Erdos-Renyi G(n,p) by geometric skipping over the pairs i > j; O(n + |E|).
inline MultiGraph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("gnp: p must lie in [0, 1]");
  std::vector<Edge> edges;
  if (p == 0.0 || n < 2)
    return MultiGraph(n, edges);
  auto rng = make_engine(seed, streams::gnp);
  if (p == 1.0)
    return complete_graph(n);
  std::geometric_distribution<long long> skip(p);
  long long v = 1;
  long long w = -1;
  const auto N = static_cast<long long>(n);
  while (v < N) {
    w += 1 + skip(rng);
    while (w >= v && v < N) {
      w -= v;
      ++v;
    }
    if (v < N)
      edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v), 1});
  }
  return MultiGraph(n, edges);
}

/// Uniform labeled tree on k vertices by decoding a uniform Pruefer sequence.
inline MultiGraph uniform_labeled_tree(std::size_t k, std::uint64_t seed) {
  if (k < 1)
    throw ContractViolation("uniform_labeled_tree: k must be >= 1");
  if (k == 1)
    return MultiGraph(1);
  if (k == 2)
    return MultiGraph(2, {{0, 1, 1}});
  auto rng = make_engine(seed, streams::tree);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(k - 1));
  std::vector<Vertex> code(k - 2);
  for (auto& c : code)
    c = pick(rng);

  std::vector<std::uint32_t> degree(k, 1);
  for (auto c : code)
    ++degree[c];
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
  for (Vertex v = 0; v < k; ++v)
    if (degree[v] == 1)
      leaves.push(v);
  std::vector<Edge> edges;
  edges.reserve(k - 1);
  for (auto c : code) {
    const Vertex leaf = leaves.top();
    leaves.pop();
    edges.push_back({leaf, c, 1});
    if (--degree[c] == 1)
      leaves.push(c);
  }
  const Vertex a = leaves.top();
  leaves.pop();
  const Vertex b = leaves.top();
  edges.push_back({a, b, 1});
  return MultiGraph(k, edges);
}

struct PgwTree {
  MultiGraph tree; // root is vertex 0
  std::size_t total_size = 0;
  std::size_t height = 0;
  bool truncated = false;
};

namespace detail {

// Breadth-first Poisson(mu) Galton-Watson growth below `root`. New vertices
// get ids next_id, next_id+1, ...; returns (vertices added, height, truncated).
template <class Rng>
std::tuple<std::size_t, std::size_t, bool> grow_pgw(Rng& rng, double mu, Vertex root, std::size_t size_cap,
                                                    std::vector<Edge>& edges, std::uint64_t& next_id) {
  std::poisson_distribution<std::uint64_t> offspring(mu);
  std::queue<std::pair<Vertex, std::size_t>> frontier;
  frontier.push({root, 0});
  std::size_t size = 1;
  std::size_t height = 0;
  while (!frontier.empty()) {
    auto [v, depth] = frontier.front();
    frontier.pop();
    const auto children = offspring(rng);
    for (std::uint64_t c = 0; c < children; ++c) {
      if (size >= size_cap)
        return {size - 1, height, true};
      const auto child = static_cast<Vertex>(next_id++);
      edges.push_back({v, child, 1});
      ++size;
      height = std::max(height, depth + 1);
      frontier.push({child, depth + 1});
    }
  }
  return {size - 1, height, false};
}

} // namespace detail

/// Poisson(mu) Galton-Watson tree, grown breadth first; stops once size_cap is reached.
inline PgwTree pgw_tree(double mu, std::uint64_t seed, std::size_t size_cap) {
  if (!(mu > 0.0 && mu <= 1.0))
    throw ContractViolation("pgw_tree: mu must lie in (0, 1]");
  if (size_cap < 1)
    throw ContractViolation("pgw_tree: size_cap must be >= 1");
  auto rng = make_engine(seed, streams::pgw);
  std::vector<Edge> edges;
  std::uint64_t next_id = 1;
  auto [added, height, truncated] = detail::grow_pgw(rng, mu, 0, size_cap, edges, next_id);
  PgwTree out;
  out.total_size = added + 1;
  out.height = height;
  out.truncated = truncated;
  out.tree = MultiGraph(out.total_size, edges);
  return out;
}

/**
   The conjugate mu in (0,1) of 1+eps: mu e^-mu = (1+eps) e^-(1+eps).

   Solved for delta = 1 - mu by bisection on log(1-delta) + delta =
   log(1+eps) - eps, written with log1p so that tiny eps (where mu is
   within 1e-8 of 1) keeps full relative precision.
 */
inline double conjugate_mu(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::domain_error("conjugate_mu: epsilon must be positive");
  const double target = std::log1p(epsilon) - epsilon;
  auto h = [](double delta) { return std::log1p(-delta) + delta; };
  double lo = 0.0; // h(lo) > target
  double hi = 1.0; // h(hi) = -inf
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    if (h(mid) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::max(hi, 1e-300) && hi - lo <= 1e-14)
      break;
  }
  return 1.0 - 0.5 * (lo + hi);
}

struct GiantModelParams {
  std::size_t n = 0;
  double epsilon = 0.0;
  double mu = 0.0;
  double lambda_mean = 0.0;
  double lambda_var = 0.0;

  static GiantModelParams make(std::size_t n, double epsilon) {
    if (n < 1)
      throw ContractViolation("giant model: n must be >= 1");
    GiantModelParams p;
    p.n = n;
    p.epsilon = epsilon;
    p.mu = conjugate_mu(epsilon);
    p.lambda_mean = 1.0 + epsilon - p.mu;
    p.lambda_var = 1.0 / (epsilon * static_cast<double>(n));
    return p;
  }
};

struct DegenerateRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GiantModelSample {
  MultiGraph graph;
  double lambda = 0.0;
  std::size_t lambda_resamples = 0;
  std::size_t parity_resamples = 0;
  /// Degree vectors discarded because N = 0 or no simple kernel was found.
  std::size_t degenerate_resamples = 0;
  /// Vertices with D_u >= 3 among all n.
  std::size_t high_degree_count = 0;
  std::vector<std::uint64_t> kernel_degrees;
  std::vector<Edge> kernel_edges;
  std::size_t kernel_attempts = 0;
  bool low_kernel_acceptance = false;
  std::vector<std::uint64_t> path_lengths;
  std::size_t subdivided_vertex_count = 0;
  std::size_t tree_roots = 0;
  std::size_t truncated_trees = 0;
};

namespace detail {

// Uniform simple graph with the given degrees: configuration model pairing,
// rejected until simple. Returns false if max_attempts pairings all fail.
template <class Rng>
bool simple_configuration(const std::vector<std::uint64_t>& degrees, Rng& rng, std::size_t max_attempts,
                          std::vector<Edge>& out, std::size_t& attempts) {
  std::vector<Vertex> stubs;
  for (Vertex v = 0; v < degrees.size(); ++v)
    stubs.insert(stubs.end(), degrees[v], v);
  if (stubs.size() % 2)
    throw ContractViolation("configuration model: odd degree sum");
  std::set<std::pair<Vertex, Vertex>> seen;
  for (attempts = 1; attempts <= max_attempts; ++attempts) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    seen.clear();
    out.clear();
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      auto key = std::minmax(stubs[i], stubs[i + 1]);
      if (key.first == key.second || !seen.insert(key).second)
        simple = false;
      else
        out.push_back({key.first, key.second, 1});
    }
    if (simple)
      return true;
  }
  attempts = max_attempts;
  return false;
}

} // namespace detail

/**
   Three-step model of the mildly supercritical giant component:
   (a) Lambda ~ N(1+eps-mu, 1/(eps n)), D_u ~ Poisson(Lambda) i.i.d. for
       u in [n] conditioned on sum of D_u 1{D_u >= 3} being even; the
       kernel is a uniform simple graph on the vertices with D_u >= 3;
   (b) every kernel edge becomes a path of Geom(1-mu) edges (support 1,2,...);
   (c) every vertex of the subdivided kernel gets a PGW(mu) tree.
 */
inline GiantModelSample giant_model(const GiantModelParams& params, std::uint64_t seed,
                                    std::size_t kernel_max_attempts = 100000, std::size_t tree_cap = 10000000) {
  if (!(params.mu > 0.0 && params.mu < 1.0) || params.n < 1)
    throw ContractViolation("giant_model: invalid parameters");
  auto rng = make_engine(seed, streams::giant);
  GiantModelSample s;
  std::normal_distribution<double> lambda_dist(params.lambda_mean, std::sqrt(params.lambda_var));

  bool ok = false;
  for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
    s.lambda = lambda_dist(rng);
    while (s.lambda < 0.0) {
      ++s.lambda_resamples;
      s.lambda = lambda_dist(rng);
    }
    std::poisson_distribution<std::uint64_t> degree(s.lambda);
    std::vector<std::uint64_t> kdeg;
    for (;;) {
      kdeg.clear();
      std::uint64_t sum = 0;
      for (std::size_t u = 0; u < params.n; ++u) {
        const auto d = degree(rng);
        if (d >= 3) {
          kdeg.push_back(d);
          sum += d;
        }
      }
      if (sum % 2 == 0)
        break;
      ++s.parity_resamples;
    }
    if (kdeg.empty()) {
      ++s.degenerate_resamples;
      continue;
    }
    std::size_t tries = 0;
    if (!detail::simple_configuration(kdeg, rng, kernel_max_attempts, s.kernel_edges, tries)) {
      s.kernel_attempts += tries;
      ++s.degenerate_resamples;
      continue;
    }
    s.kernel_attempts += tries;
    s.high_degree_count = kdeg.size();
    s.kernel_degrees = std::move(kdeg);
    ok = true;
  }
  if (!ok)
    throw DegenerateRegime("giant_model: no usable kernel after 100 degree resamples");
  s.low_kernel_acceptance = s.kernel_attempts > 1000;

  std::vector<Edge> edges;
  std::uint64_t next_id = s.kernel_degrees.size();
  std::geometric_distribution<std::uint64_t> extra(1.0 - params.mu);
  for (const auto& e : s.kernel_edges) {
    const std::uint64_t len = 1 + extra(rng);
    s.path_lengths.push_back(len);
    Vertex prev = e.u;
    for (std::uint64_t j = 1; j < len; ++j) {
      const auto mid = static_cast<Vertex>(next_id++);
      edges.push_back({prev, mid, 1});
      prev = mid;
    }
    edges.push_back({prev, e.v, 1});
  }
  s.subdivided_vertex_count = next_id;
  for (Vertex root = 0; root < s.subdivided_vertex_count; ++root) {
    auto [added, height, truncated] = detail::grow_pgw(rng, params.mu, root, tree_cap, edges, next_id);
    (void)added;
    (void)height;
    ++s.tree_roots;
    if (truncated)
      ++s.truncated_trees;
  }
  s.graph = MultiGraph(next_id, edges);
  return s;
}

struct BaseGraphSpec {
  enum class Kind { complete, hypercube, torus, random_regular, from_file };
  Kind kind = Kind::complete;
  std::size_t n = 0; // complete, random_regular
  std::size_t m = 0; // hypercube dimension, torus side
  std::size_t d = 0; // torus dimension, regular degree
  std::string path;
  double percolation_p = 1.0;
};

inline MultiGraph hypercube(std::size_t m) {
  if (m > 24)
    throw ContractViolation("hypercube: dimension too large");
  const std::size_t n = std::size_t{1} << m;
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t b = 0; b < m; ++b) {
      const auto w = v ^ (std::size_t{1} << b);
      if (v < w)
        edges.push_back({Vertex(v), Vertex(w), 1});
    }
  return MultiGraph(n, edges);
}

/// Discrete torus Z_m^d; m >= 3 so that every vertex has 2d distinct neighbours.
inline MultiGraph torus(std::size_t m, std::size_t d) {
  if (m < 3 || d < 1)
    throw ContractViolation("torus: need side m >= 3 and dimension d >= 1");
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) {
    n *= m;
    if (n > (std::size_t{1} << 30))
      throw ContractViolation("torus: too many vertices");
  }
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t stride = 1;
    for (std::size_t i = 0; i < d; ++i) {
      const auto coord = (v / stride) % m;
      const auto w = v - coord * stride + ((coord + 1) % m) * stride;
      edges.push_back({Vertex(v), Vertex(w), 1});
      stride *= m;
    }
  }
  return MultiGraph(n, edges);
}

/// Uniform simple d-regular graph via the configuration model with rejection.
inline MultiGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if ((n * d) % 2 || d >= n)
    throw ContractViolation("random_regular: need n*d even and d < n");
  auto rng = make_engine(seed, streams::regular);
  std::vector<std::uint64_t> degrees(n, d);
  std::vector<Edge> edges;
  std::size_t tries = 0;
  if (!detail::simple_configuration(degrees, rng, 1000000, edges, tries))
    throw DegenerateRegime("random_regular: no simple pairing found");
  return MultiGraph(n, edges);
}

inline MultiGraph build_base(const BaseGraphSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
  case BaseGraphSpec::Kind::complete: return complete_graph(spec.n);
  case BaseGraphSpec::Kind::hypercube: return hypercube(spec.m);
  case BaseGraphSpec::Kind::torus: return torus(spec.m, spec.d);
  case BaseGraphSpec::Kind::random_regular: return random_regular(spec.n, spec.d, seed);
  case BaseGraphSpec::Kind::from_file: {
    std::ifstream in(spec.path);
    if (!in)
      throw ContractViolation("cannot open edge list '" + spec.path + "'");
    return from_edge_list(in);
  }
  }
  throw ContractViolation("unknown base graph kind");
}

struct PercolationSample {
  MultiGraph full;
  ComponentView largest;
};

/// Keeps each unit edge of the base graph independently with probability p.
inline MultiGraph percolate_edges(const MultiGraph& base, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("percolate: p must lie in [0, 1]");
  auto rng = make_engine(seed, streams::percolation);
  std::vector<Edge> kept;
  for (const auto& e : base.edges()) {
    std::binomial_distribution<std::uint64_t> keep(e.multiplicity, p);
    const auto m = keep(rng);
    if (m > 0)
      kept.push_back({e.u, e.v, m});
  }
  return MultiGraph(base.vertex_count(), kept);
}

inline PercolationSample percolate(const BaseGraphSpec& spec, std::uint64_t seed) {
  auto full = percolate_edges(build_base(spec, seed), spec.percolation_p, seed);
  auto largest = largest_component(full);
  return {std::move(full), std::move(largest)};
}

} // namespace covertime
