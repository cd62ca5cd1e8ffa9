#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "covertime/graph.hpp"
#include "covertime/parallel.hpp"
#include "covertime/resistance.hpp"

namespace covertime {

enum class Quantity { cover, cover_return, blanket, hitting, commute };

inline const char* to_string(Quantity q) {
  switch (q) {
  case Quantity::cover: return "cover";
  case Quantity::cover_return: return "cover_return";
  case Quantity::blanket: return "blanket";
  case Quantity::hitting: return "hitting";
  case Quantity::commute: return "commute";
  }
  return "?";
}

inline Quantity parse_quantity(const std::string& s) {
  if (s == "cover") return Quantity::cover;
  if (s == "cover_return") return Quantity::cover_return;
  if (s == "blanket") return Quantity::blanket;
  if (s == "hitting") return Quantity::hitting;
  if (s == "commute") return Quantity::commute;
  throw std::invalid_argument("unknown quantity '" + s + "'");
}

struct StartPolicy {
  enum class Kind { fixed, worst_over_all_starts, stationary };
  Kind kind = Kind::fixed;
  Vertex vertex = 0;

  static StartPolicy fixed(Vertex v) { return {Kind::fixed, v}; }
  static StartPolicy worst() { return {Kind::worst_over_all_starts, 0}; }
  static StartPolicy stationary() { return {Kind::stationary, 0}; }

  std::string describe() const {
    switch (kind) {
    case Kind::fixed: return "fixed(" + std::to_string(vertex) + ")";
    case Kind::worst_over_all_starts: return "worst_over_all_starts";
    case Kind::stationary: return "stationary";
    }
    return "?";
  }
};

struct WalkEstimate {
  Quantity quantity = Quantity::cover;
  StartPolicy start_policy;
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t trials = 0;
  std::vector<double> samples;
  std::uint64_t master_seed = 0;
  /// For worst_over_all_starts: the start whose mean was largest.
  std::optional<Vertex> worst_start;
};

inline void summarize(WalkEstimate& est) {
  const auto n = est.samples.size();
  est.trials = n;
  if (n == 0)
    return;
  double sum = 0.0;
  for (double x : est.samples)
    sum += x;
  est.mean = sum / static_cast<double>(n);
  if (n < 2) {
    est.std_err = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : est.samples)
    ss += (x - est.mean) * (x - est.mean);
  est.std_err = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

/// Flat edge-end table: each neighbor repeated by multiplicity, a loop twice.
class WalkGraph {
public:
  explicit WalkGraph(const MultiGraph& g) : offset_(g.vertex_count() + 1, 0) {
    const auto k = g.vertex_count();
    for (Vertex v = 0; v < k; ++v)
      offset_[v + 1] = offset_[v] + g.degree(v);
    if (offset_[k] > (std::uint64_t{1} << 34))
      throw std::length_error("walk graph too large: too many edge ends");
    ends_.resize(offset_[k]);
    for (Vertex v = 0; v < k; ++v) {
      auto pos = offset_[v];
      for (const auto& nb : g.neighbors(v)) {
        const auto copies = nb.vertex == v ? 2 * nb.multiplicity : nb.multiplicity;
        std::fill_n(ends_.begin() + static_cast<std::ptrdiff_t>(pos), copies, nb.vertex);
        pos += copies;
      }
    }
    edge_count_ = g.edge_count();
    step_cap_ = 10000ULL * 2ULL * edge_count_ * std::max<std::uint64_t>(k, 1);
  }

  std::size_t size() const { return offset_.size() - 1; }
  std::uint64_t degree(Vertex v) const { return offset_[v + 1] - offset_[v]; }
  std::uint64_t edge_count() const { return edge_count_; }
  std::uint64_t step_cap() const { return step_cap_; }

  template <class Rng>
  Vertex step(Vertex v, Rng& rng) const {
    const auto d = degree(v);
    std::uniform_int_distribution<std::uint64_t> pick(0, d - 1);
    return ends_[offset_[v] + pick(rng)];
  }

private:
  std::vector<std::uint64_t> offset_;
  std::vector<Vertex> ends_;
  std::uint64_t edge_count_ = 0;
  std::uint64_t step_cap_ = 0;
};

struct StepCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void guard(std::uint64_t t, const WalkGraph& wg) {
  if (t > wg.step_cap())
    throw StepCapExceeded("walk exceeded the step cap of " + std::to_string(wg.step_cap()) + " steps");
}

template <class Rng>
std::uint64_t cover_steps(const WalkGraph& wg, Vertex start, Rng& rng, Vertex* end = nullptr) {
  std::vector<char> seen(wg.size(), 0);
  seen[start] = 1;
  std::size_t remaining = wg.size() - 1;
  std::uint64_t t = 0;
  Vertex x = start;
  while (remaining > 0) {
    x = wg.step(x, rng);
    ++t;
    if (!seen[x]) {
      seen[x] = 1;
      --remaining;
    }
    guard(t, wg);
  }
  if (end)
    *end = x;
  return t;
}

template <class Rng>
std::uint64_t hit_steps(const WalkGraph& wg, Vertex from, Vertex target, Rng& rng) {
  std::uint64_t t = 0;
  Vertex x = from;
  do {
    x = wg.step(x, rng);
    ++t;
    guard(t, wg);
  } while (x != target);
  return t;
}

// First t at which every local time is positive and max L <= 2 min L.
// The minimum is tracked as a rational value plus the number of vertices
// attaining it, rescanned only when that count drops to zero.
template <class Rng>
std::uint64_t blanket_steps(const WalkGraph& wg, Vertex start, Rng& rng) {
  using wide = unsigned __int128;
  const auto k = wg.size();
  std::vector<std::uint64_t> visits(k, 0);
  visits[start] = 1;
  std::size_t unvisited = k - 1;
  Vertex max_v = start;
  std::uint64_t min_vis = 0;
  std::uint64_t min_deg = 1;
  std::size_t min_count = 0;
  auto compare_min = [&](Vertex w) { // sign of L_w - min
    const wide lhs = wide(visits[w]) * min_deg;
    const wide rhs = wide(min_vis) * wg.degree(w);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  };
  auto rescan = [&] {
    min_vis = visits[0];
    min_deg = wg.degree(0);
    min_count = 0;
    for (Vertex w = 0; w < k; ++w) {
      const int c = compare_min(w);
      if (c < 0) {
        min_vis = visits[w];
        min_deg = wg.degree(w);
        min_count = 1;
      } else if (c == 0) {
        ++min_count;
      }
    }
  };
  auto blanketed = [&] { return wide(visits[max_v]) * min_deg <= 2 * wide(min_vis) * wg.degree(max_v); };
  auto raise_max = [&](Vertex x) {
    if (wide(visits[x]) * wg.degree(max_v) > wide(visits[max_v]) * wg.degree(x))
      max_v = x;
  };
  if (unvisited == 0) {
    rescan();
    if (blanketed())
      return 0;
  }
  std::uint64_t t = 0;
  Vertex x = start;
  for (;;) {
    x = wg.step(x, rng);
    ++t;
    guard(t, wg);
    if (unvisited > 0) {
      if (visits[x]++ == 0)
        --unvisited;
      raise_max(x);
      if (unvisited > 0)
        continue;
      rescan();
    } else {
      const bool at_min = compare_min(x) == 0;
      ++visits[x];
      raise_max(x);
      if (at_min && --min_count == 0)
        rescan();
    }
    if (blanketed())
      return t;
  }
}

} // namespace detail

struct SimulationRequest {
  Quantity quantity = Quantity::cover;
  StartPolicy start = StartPolicy::fixed(0);
  /// Target of hitting; the other endpoint of commute. For hitting with
  /// target == start the sample is the first return time.
  Vertex target = 0;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;
};

/// Samples one trial of `req.quantity` from `start` using the stream of `trial_index`.
inline double sample_trial(const WalkGraph& wg, const SimulationRequest& req, Vertex start, std::uint64_t trial_index) {
  auto rng = make_engine(req.master_seed, trial_index);
  if (req.start.kind == StartPolicy::Kind::stationary) {
    std::uniform_int_distribution<std::uint64_t> end(0, 2 * wg.edge_count() - 1);
    // a uniform edge end sits at a vertex with probability deg/2|E|
    auto e = end(rng);
    Vertex v = 0;
    while (e >= wg.degree(v)) {
      e -= wg.degree(v);
      ++v;
    }
    start = v;
  }
  switch (req.quantity) {
  case Quantity::cover:
    return static_cast<double>(detail::cover_steps(wg, start, rng));
  case Quantity::cover_return: {
    Vertex end = start;
    auto t = detail::cover_steps(wg, start, rng, &end);
    if (end != start)
      t += detail::hit_steps(wg, end, start, rng);
    return static_cast<double>(t);
  }
  case Quantity::blanket:
    return static_cast<double>(detail::blanket_steps(wg, start, rng));
  case Quantity::hitting:
    return static_cast<double>(detail::hit_steps(wg, start, req.target, rng));
  case Quantity::commute:
    if (start == req.target)
      return 0.0;
    return static_cast<double>(detail::hit_steps(wg, start, req.target, rng) +
                               detail::hit_steps(wg, req.target, start, rng));
  }
  return 0.0;
}

/**
   Monte Carlo estimate of a walk functional on a connected graph.

   Trial t draws from the stream seeded by (master_seed, t) alone and the
   reduction runs in trial order, so results do not depend on `threads`.
   worst_over_all_starts (k <= 64) runs `trials` trials from every start,
   start s using streams s*trials .. s*trials+trials-1, and keeps the start
   with the largest mean.
 */
inline WalkEstimate simulate(const MultiGraph& g, const SimulationRequest& req) {
  const auto k = g.vertex_count();
  if (k == 0 || !is_connected(g))
    throw ContractViolation("simulate: graph must be nonempty and connected");
  if (req.trials < 1)
    throw ContractViolation("simulate: trials must be >= 1");
  if (req.start.kind == StartPolicy::Kind::worst_over_all_starts && k > 64)
    throw ContractViolation("simulate: worst_over_all_starts is limited to 64 vertices");
  if (req.start.kind == StartPolicy::Kind::fixed && !g.valid(req.start.vertex))
    throw ContractViolation("simulate: start vertex out of range");
  if ((req.quantity == Quantity::hitting || req.quantity == Quantity::commute) && !g.valid(req.target))
    throw ContractViolation("simulate: target vertex out of range");
  if (g.edge_count() == 0 && (req.start.kind == StartPolicy::Kind::stationary || req.quantity == Quantity::hitting))
    throw ContractViolation("simulate: this request needs at least one edge");

  const WalkGraph wg(g);
  WalkEstimate best;
  best.quantity = req.quantity;
  best.start_policy = req.start;
  best.master_seed = req.master_seed;

  if (req.start.kind != StartPolicy::Kind::worst_over_all_starts) {
    best.samples.resize(req.trials);
    parallel_for(req.trials, req.threads,
                 [&](std::size_t t) { best.samples[t] = sample_trial(wg, req, req.start.vertex, t); });
    summarize(best);
    return best;
  }

  std::vector<double> all(k * req.trials);
  parallel_for(all.size(), req.threads, [&](std::size_t idx) {
    all[idx] = sample_trial(wg, req, static_cast<Vertex>(idx / req.trials), idx);
  });
  for (Vertex s = 0; s < k; ++s) {
    WalkEstimate est = best;
    est.samples.assign(all.begin() + static_cast<std::ptrdiff_t>(s * req.trials),
                       all.begin() + static_cast<std::ptrdiff_t>((s + 1) * req.trials));
    summarize(est);
    if (!best.worst_start || est.mean > best.mean) {
      best = std::move(est);
      best.worst_start = s;
    }
  }
  return best;
}

/**
   Exact expected cover time from every start, by dynamic programming over
   (visited set, position). Sets are processed by decreasing size; inside a
   set the moves that stay in it form a linear system, and moves leaving it
   land in an already solved larger set. Only sets inducing connected
   subgraphs are reachable. Limited to 20 vertices.
 */
inline std::vector<double> exact_cover_times(const MultiGraph& g) {
  const auto k = g.vertex_count();
  if (k > 20)
    throw ContractViolation("exact_cover_time: limited to 20 vertices");
  if (k == 0 || !is_connected(g))
    throw ContractViolation("exact_cover_time: graph must be nonempty and connected");
  if (k == 1)
    return {0.0};

  struct Move {
    Vertex to;
    double p;
  };
  std::vector<std::vector<Move>> moves(k);
  std::vector<std::uint32_t> nbr_mask(k, 0);
  for (Vertex v = 0; v < k; ++v) {
    const double d = static_cast<double>(g.degree(v));
    for (const auto& nb : g.neighbors(v)) {
      const double m = static_cast<double>(nb.vertex == v ? 2 * nb.multiplicity : nb.multiplicity);
      moves[v].push_back({nb.vertex, m / d});
      nbr_mask[v] |= 1u << nb.vertex;
    }
  }
  auto connected = [&](std::uint32_t mask) {
    std::uint32_t reach = mask & (~mask + 1); // lowest bit
    for (;;) {
      std::uint32_t grow = reach;
      for (std::uint32_t r = reach; r; r &= r - 1)
        grow |= nbr_mask[std::countr_zero(r)] & mask;
      if (grow == reach)
        return reach == mask;
      reach = grow;
    }
  };

  const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
  // value[mask][v] = expected remaining steps with visited set `mask`, walker at v
  std::unordered_map<std::uint32_t, std::vector<double>> value;
  value[full] = std::vector<double>(k, 0.0);

  std::vector<std::vector<std::uint32_t>> by_size(k + 1);
  for (std::uint32_t mask = 1; mask < full; ++mask)
    if (connected(mask))
      by_size[std::popcount(mask)].push_back(mask);

  for (std::size_t sz = k - 1; sz >= 1; --sz) {
    for (auto mask : by_size[sz]) {
      std::vector<Vertex> members;
      std::vector<int> index(k, -1);
      for (std::uint32_t r = mask; r; r &= r - 1) {
        index[std::countr_zero(r)] = static_cast<int>(members.size());
        members.push_back(static_cast<Vertex>(std::countr_zero(r)));
      }
      const auto n = static_cast<Eigen::Index>(members.size());
      Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
      Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
      for (Eigen::Index row = 0; row < n; ++row) {
        for (const auto& mv : moves[members[row]]) {
          if (index[mv.to] >= 0) {
            A(row, index[mv.to]) -= mv.p;
          } else {
            b[row] += mv.p * value.at(mask | (1u << mv.to))[mv.to];
          }
        }
      }
      Eigen::VectorXd x = A.partialPivLu().solve(b);
      std::vector<double> vals(k, 0.0);
      for (Eigen::Index row = 0; row < n; ++row)
        vals[members[row]] = x[row];
      value.emplace(mask, std::move(vals));
    }
  }
  std::vector<double> out(k);
  for (Vertex s = 0; s < k; ++s)
    out[s] = value.at(1u << s)[s];
  return out;
}

inline double exact_cover_time(const MultiGraph& g, Vertex start) {
  if (!g.valid(start))
    throw ContractViolation("exact_cover_time: start out of range");
  return exact_cover_times(g)[start];
}

/// max over starts of the exact expected cover time.
inline double exact_worst_cover_time(const MultiGraph& g) {
  auto all = exact_cover_times(g);
  return *std::max_element(all.begin(), all.end());
}

struct TailPoint {
  double lambda = 0.0;
  double empirical_prob = 0.0;
  double bound = 1.0;
  /// Binomial standard error of empirical_prob.
  double std_err = 0.0;
};

/**
   Local-time tail check. Each trial walks from u until the local time
   L^u = visits(u)/deg(u) first reaches `level` (the start counts as a
   visit) and records L^u - L^v at that moment. The reference bound is
   exp(-lambda^2 / (4 level R(u,v))).
 */
inline std::vector<TailPoint> local_time_tail_check(const MultiGraph& g, Vertex u, Vertex v, double level,
                                                    const std::vector<double>& lambdas, std::size_t trials,
                                                    std::uint64_t master_seed, unsigned threads = 0) {
  if (u == v)
    throw ContractViolation("local_time_tail_check: u and v must differ");
  if (!g.valid(u) || !g.valid(v) || !is_connected(g))
    throw ContractViolation("local_time_tail_check: vertices must lie in a connected graph");
  if (!(level > 0.0))
    throw ContractViolation("local_time_tail_check: level must be positive");
  if (trials < 1)
    throw ContractViolation("local_time_tail_check: trials must be >= 1");
  const WalkGraph wg(g);
  const ResistanceOracle oracle(g);
  const double r_uv = oracle.resistance(u, v);
  const double du = static_cast<double>(g.degree(u));
  const double dv = static_cast<double>(g.degree(v));
  const auto needed = static_cast<std::uint64_t>(std::ceil(level * du - 1e-9));

  std::vector<double> diff(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = make_engine(master_seed, t);
    std::uint64_t visits_u = 1;
    std::uint64_t visits_v = 0;
    std::uint64_t steps = 0;
    Vertex x = u;
    while (visits_u < needed) {
      x = wg.step(x, rng);
      ++steps;
      detail::guard(steps, wg);
      if (x == u)
        ++visits_u;
      else if (x == v)
        ++visits_v;
    }
    diff[t] = static_cast<double>(visits_u) / du - static_cast<double>(visits_v) / dv;
  });

  std::vector<TailPoint> out;
  for (double lambda : lambdas) {
    TailPoint p;
    p.lambda = lambda;
    std::size_t hits = 0;
    for (double d : diff)
      if (d >= lambda - 1e-12)
        ++hits;
    p.empirical_prob = static_cast<double>(hits) / static_cast<double>(trials);
    p.std_err = std::sqrt(p.empirical_prob * (1.0 - p.empirical_prob) / static_cast<double>(trials));
    p.bound = std::exp(-lambda * lambda / (4.0 * level * r_uv));
    out.push_back(p);
  }
  return out;
}

/// Visit counts at the requested checkpoints (sorted step indices) of one walk.
struct LocalTimeTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<std::uint64_t>> visits;
  std::vector<std::uint64_t> degree;

  double local_time(std::size_t checkpoint, Vertex v) const {
    return static_cast<double>(visits[checkpoint][v]) / static_cast<double>(degree[v]);
  }
};

inline LocalTimeTrace local_time_trace(const MultiGraph& g, Vertex start, std::vector<std::uint64_t> checkpoints,
                                       std::uint64_t seed) {
  if (!g.valid(start) || !is_connected(g))
    throw ContractViolation("local_time_trace: start must lie in a connected graph");
  std::sort(checkpoints.begin(), checkpoints.end());
  const WalkGraph wg(g);
  LocalTimeTrace tr;
  tr.checkpoints = checkpoints;
  tr.degree = g.degrees();
  auto rng = make_engine(seed, 0);
  std::vector<std::uint64_t> visits(g.vertex_count(), 0);
  visits[start] = 1;
  Vertex x = start;
  std::uint64_t t = 0;
  for (auto cp : checkpoints) {
    while (t < cp) {
      x = wg.step(x, rng);
      ++visits[x];
      ++t;
    }
    tr.visits.push_back(visits);
  }
  return tr;
}

} // namespace covertime
