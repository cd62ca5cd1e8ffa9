#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covertime {

using Vertex = std::uint32_t;

/// Raised when a caller breaks a documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed edge-list input; `line` is 1-based.
struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct Edge {
  Vertex u;
  Vertex v;
  std::uint64_t multiplicity;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex;
  std::uint64_t multiplicity;
};

/**
   Undirected multigraph with dense vertex ids 0..n-1.

   A loop {v,v} of multiplicity m contributes 2m to deg(v), so that
   sum of degrees equals 2|E| with |E| counted with multiplicity.
   Immutable once built; mutation goes through add_edge(), which
   returns a new graph.
 */
class MultiGraph {
public:
  MultiGraph() = default;

  explicit MultiGraph(std::size_t vertex_count) : adjacency_(vertex_count), degree_(vertex_count, 0) {}

  /// Builds from an edge sequence; repeated pairs accumulate multiplicity.
  MultiGraph(std::size_t vertex_count, const std::vector<Edge>& edges) : MultiGraph(vertex_count) {
    std::map<std::pair<Vertex, Vertex>, std::uint64_t> acc;
    for (const auto& e : edges) {
      if (e.u >= vertex_count || e.v >= vertex_count)
        throw std::out_of_range("edge endpoint " + std::to_string(std::max(e.u, e.v)) +
                                " out of range for " + std::to_string(vertex_count) + " vertices");
      if (e.multiplicity == 0)
        throw std::invalid_argument("edge multiplicity must be positive");
      acc[std::minmax(e.u, e.v)] += e.multiplicity;
    }
    edges_.reserve(acc.size());
    for (const auto& [key, m] : acc)
      edges_.push_back({key.first, key.second, m});
    rebuild();
  }

  std::size_t vertex_count() const { return adjacency_.size(); }

  /// Edge count with multiplicity.
  std::uint64_t edge_count() const { return edge_count_; }

  /// Distinct (u <= v) pairs, sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<Neighbor>& neighbors(Vertex v) const { return adjacency_[v]; }

  std::uint64_t degree(Vertex v) const { return degree_[v]; }

  const std::vector<std::uint64_t>& degrees() const { return degree_; }

  std::uint64_t multiplicity(Vertex u, Vertex v) const {
    auto key = std::minmax(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const Edge& e, const auto& k) {
      return std::pair(e.u, e.v) < std::pair(k.first, k.second);
    });
    if (it != edges_.end() && it->u == key.first && it->v == key.second)
      return it->multiplicity;
    return 0;
  }

  bool valid(Vertex v) const { return v < vertex_count(); }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.vertex_count() == b.vertex_count() && a.edges_ == b.edges_;
  }

private:
  void rebuild() {
    for (auto& adj : adjacency_)
      adj.clear();
    std::fill(degree_.begin(), degree_.end(), 0);
    edge_count_ = 0;
    for (const auto& e : edges_) {
      edge_count_ += e.multiplicity;
      if (e.u == e.v) {
        adjacency_[e.u].push_back({e.v, e.multiplicity});
        degree_[e.u] += 2 * e.multiplicity;
      } else {
        adjacency_[e.u].push_back({e.v, e.multiplicity});
        adjacency_[e.v].push_back({e.u, e.multiplicity});
        degree_[e.u] += e.multiplicity;
        degree_[e.v] += e.multiplicity;
      }
    }
    for (auto& adj : adjacency_)
      std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::uint64_t> degree_;
  std::uint64_t edge_count_ = 0;
};

/// Returns a copy of `g` with one more copy of {u,v} (a loop when u == v).
inline MultiGraph add_edge(const MultiGraph& g, Vertex u, Vertex v) {
  if (!g.valid(u) || !g.valid(v))
    throw std::out_of_range("add_edge: vertex out of range");
  auto edges = g.edges();
  edges.push_back({u, v, 1});
  return MultiGraph(g.vertex_count(), edges);
}

/**
   Parses the edge-list interchange format:

       # comment
       n 5          (optional; declares the vertex count)
       0 1
       1 2 3        (third column is a multiplicity)

   Without a header the vertex count is one more than the largest id.
 */
inline MultiGraph from_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;)
      tok.push_back(t);
    if (tok.empty())
      continue;
    auto to_u64 = [&](const std::string& s) -> std::uint64_t {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ParseError(lineno, "expected a nonnegative integer, got '" + s + "'");
      try {
        return std::stoull(s);
      } catch (const std::out_of_range&) {
        throw ParseError(lineno, "integer too large: '" + s + "'");
      }
    };
    if (tok[0] == "n") {
      if (tok.size() != 2)
        throw ParseError(lineno, "header must be 'n <count>'");
      if (declared)
        throw ParseError(lineno, "duplicate vertex-count header");
      declared = to_u64(tok[1]);
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(lineno, "expected 'u v' or 'u v m'");
    const auto u = to_u64(tok[0]);
    const auto v = to_u64(tok[1]);
    const std::uint64_t m = tok.size() == 3 ? to_u64(tok[2]) : 1;
    if (m == 0)
      throw ParseError(lineno, "multiplicity must be at least 1");
    if (u > UINT32_MAX - 1 || v > UINT32_MAX - 1)
      throw ParseError(lineno, "vertex id too large");
    if (declared && (u >= *declared || v >= *declared))
      throw std::out_of_range("line " + std::to_string(lineno) + ": vertex id " + std::to_string(std::max(u, v)) +
                              " >= declared count " + std::to_string(*declared));
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(u, v) + 1);
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), m});
  }
  if (declared && max_id_plus_one > *declared)
    throw std::out_of_range("vertex id exceeds declared count");
  return MultiGraph(declared.value_or(max_id_plus_one), edges);
}

inline MultiGraph from_edge_list(const std::string& text) {
  std::istringstream in(text);
  return from_edge_list(in);
}

/// Writes the edge-list format with an explicit "n" header.
inline void to_edge_list(const MultiGraph& g, std::ostream& out) {
  out << "n " << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (e.multiplicity != 1)
      out << ' ' << e.multiplicity;
    out << '\n';
  }
}

/// Induced connected subgraph with a dense relabeling of its vertices.
class ComponentView {
public:
  ComponentView(const MultiGraph& parent, std::vector<Vertex> vertices)
      : parent_vertex_count_(parent.vertex_count()), vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    std::vector<Edge> local;
    for (const auto& e : parent.edges()) {
      auto lu = find_local(e.u);
      auto lv = find_local(e.v);
      if (lu && lv)
        local.push_back({*lu, *lv, e.multiplicity});
    }
    graph_ = MultiGraph(vertices_.size(), local);
  }

  std::size_t size() const { return vertices_.size(); }
  std::size_t parent_vertex_count() const { return parent_vertex_count_; }

  /// Sorted original ids.
  const std::vector<Vertex>& vertices() const { return vertices_; }

  /// The induced subgraph on local ids 0..size()-1.
  const MultiGraph& graph() const { return graph_; }

  Vertex to_parent(Vertex local) const { return vertices_.at(local); }

  Vertex to_local(Vertex parent) const {
    auto l = find_local(parent);
    if (!l)
      throw std::domain_error("vertex " + std::to_string(parent) + " not in component");
    return *l;
  }

  bool contains(Vertex parent) const { return find_local(parent).has_value(); }

private:
  std::optional<Vertex> find_local(Vertex parent) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), parent);
    if (it == vertices_.end() || *it != parent)
      return std::nullopt;
    return static_cast<Vertex>(it - vertices_.begin());
  }

  std::size_t parent_vertex_count_ = 0;
  std::vector<Vertex> vertices_;
  MultiGraph graph_;
};

/// Component label per vertex, labels ordered by smallest contained id.
inline std::vector<std::uint32_t> component_labels(const MultiGraph& g, std::uint32_t* count = nullptr) {
  constexpr auto unset = UINT32_MAX;
  std::vector<std::uint32_t> label(g.vertex_count(), unset);
  std::uint32_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != unset)
      continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(x))
        if (label[nb.vertex] == unset) {
          label[nb.vertex] = next;
          stack.push_back(nb.vertex);
        }
    }
    ++next;
  }
  if (count)
    *count = next;
  return label;
}

inline bool is_connected(const MultiGraph& g) {
  std::uint32_t count = 0;
  component_labels(g, &count);
  return count <= 1;
}

/// All components, largest first; equal sizes ordered by smallest vertex id.
inline std::vector<ComponentView> connected_components(const MultiGraph& g) {
  std::uint32_t count = 0;
  auto label = component_labels(g, &count);
  std::vector<std::vector<Vertex>> members(count);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    members[label[v]].push_back(v);
  // labels are already in smallest-id order, so a stable sort by size suffices
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<ComponentView> out;
  out.reserve(count);
  for (auto& m : members)
    out.emplace_back(g, std::move(m));
  return out;
}

inline ComponentView largest_component(const MultiGraph& g) {
  if (g.vertex_count() == 0)
    throw ContractViolation("largest_component of an empty graph");
  std::uint32_t count = 0;
  auto label = component_labels(g, &count);
  std::vector<std::size_t> size(count, 0);
  for (auto l : label)
    ++size[l];
  auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (label[v] == best)
      vs.push_back(v);
  return ComponentView(g, std::move(vs));
}

/// BFS hop distances from `source`; unreachable vertices get UINT32_MAX.
inline std::vector<std::uint32_t> bfs_distances(const MultiGraph& g, Vertex source) {
  std::vector<std::uint32_t> dist(g.vertex_count(), UINT32_MAX);
  std::queue<Vertex> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (const auto& nb : g.neighbors(x))
      if (dist[nb.vertex] == UINT32_MAX) {
        dist[nb.vertex] = dist[x] + 1;
        q.push(nb.vertex);
      }
  }
  return dist;
}

// Small named graphs used throughout tests and the CLI.

inline MultiGraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.push_back({Vertex(i), Vertex(i + 1), 1});
  return MultiGraph(n, e);
}

inline MultiGraph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    e.push_back({Vertex(i), Vertex((i + 1) % n), 1});
  return MultiGraph(n, e);
}

inline MultiGraph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      e.push_back({Vertex(i), Vertex(j), 1});
  return MultiGraph(n, e);
}

inline MultiGraph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i)
    e.push_back({0, Vertex(i), 1});
  return MultiGraph(leaves + 1, e);
}

} // namespace covertime
