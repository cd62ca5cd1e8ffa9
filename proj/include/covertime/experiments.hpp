#pragma once

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covertime/entropy_bounds.hpp"
#include "covertime/generators.hpp"
#include "covertime/graph.hpp"
#include "covertime/parallel.hpp"
#include "covertime/resistance.hpp"
#include "covertime/walk.hpp"

namespace covertime {

inline double median(std::vector<double> xs) {
  if (xs.empty())
    return 0.0;
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Least squares of log y on log x with a 95% t-interval on the slope.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw ContractViolation("fit needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ContractViolation("fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    mx += lx.back();
    my += ly.back();
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - f.intercept - f.slope * lx[i];
    sse += r * r;
  }
  const double se = std::sqrt(sse / (n - 2) / sxx);
  const boost::math::students_t dist(n - 2);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  f.ci_low = f.slope - t * se;
  f.ci_high = f.slope + t * se;
  return f;
}

/// Cooper-Frieze constant phi(c) = c x (2 - x) / (4 (c x - log c)), x = 1 - e^{-c x}.
inline double cooper_frieze_phi(double c) {
  if (!(c > 1.0))
    throw std::domain_error("cooper_frieze_phi: c must exceed 1");
  double lo = 1e-300, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - (1.0 - std::exp(-c * mid)) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  return c * x * (2.0 - x) / (4.0 * (c * x - std::log(c)));
}

/// One sampled graph of a scaling sweep.
struct ScalingCell {
  std::size_t size_param = 0; // n for G(n,p), k for trees
  std::size_t seed_index = 0;
  std::uint64_t graph_seed = 0;
  std::size_t component_size = 0;
  std::uint64_t component_edges = 0;
  double R = 0.0;
  Vertex start = 0;
  double cover_mean = 0.0;
  double cover_std_err = 0.0;
  double upper_clean = 0.0;
  double upper_theorem = 0.0;
  double kklv_lower = 0.0;
  double matthews_lower = 0.0;
  bool sandwich_ok = true;
};

struct ScalingRow {
  std::size_t size_param = 0;
  std::size_t seeds = 0;
  double median_component_size = 0.0;
  double median_cover = 0.0;
  double median_upper_clean = 0.0;
  double median_upper_theorem = 0.0;
  double median_kklv_lower = 0.0;
  double median_matthews_lower = 0.0;
  /// The regime's law evaluated at this grid point.
  double predicted_law = 0.0;
  /// median_cover / predicted_law
  double ratio = 0.0;
  std::optional<double> cooper_frieze_reference;
  std::vector<ScalingCell> cells;
};

struct ScalingReport {
  std::string regime; // subcritical, critical, supercritical, gw_tree
  std::string law;
  double epsilon_exponent = 0.25;
  double lambda = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t trials = 0;
  std::vector<ScalingRow> rows;
  double fitted_exponent = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// max ratio / min ratio across rows
  double ratio_spread = 0.0;
  std::size_t sandwich_violations = 0;
};

struct SweepOptions {
  std::vector<std::size_t> grid;
  std::size_t seeds = 20;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
};

namespace detail {

// Cover time from a resistance-diameter endpoint plus the bound report.
inline ScalingCell measure_cell(const MultiGraph& comp, std::size_t trials, std::uint64_t sim_seed) {
  ScalingCell c;
  c.component_size = comp.vertex_count();
  c.component_edges = comp.edge_count();
  if (comp.vertex_count() < 2)
    return c;
  const ResistanceOracle oracle(comp);
  const auto diam = oracle.diameter();
  c.R = diam.exact ? diam.R : diam.upper;
  c.start = diam.u;
  SimulationRequest req;
  req.quantity = Quantity::cover;
  req.start = StartPolicy::fixed(diam.u);
  req.trials = trials;
  req.master_seed = sim_seed;
  req.threads = 1;
  const auto est = simulate(comp, req);
  c.cover_mean = est.mean;
  c.cover_std_err = est.std_err;
  const auto rep = compute_bounds(oracle);
  c.upper_clean = rep.upper_clean;
  c.upper_theorem = rep.upper_theorem;
  c.kklv_lower = rep.kklv_lower;
  c.matthews_lower = rep.matthews_lower.value_or(0.0);
  const double slack = c.cover_mean + 3.0 * c.cover_std_err;
  c.sandwich_ok = c.kklv_lower <= slack && c.matthews_lower <= slack && c.cover_mean - 3.0 * c.cover_std_err <= c.upper_theorem;
  return c;
}

inline void finish_rows(ScalingReport& rep, const std::vector<ScalingCell>& cells, std::size_t seeds,
                        const std::function<double(std::size_t)>& law,
                        const std::function<std::optional<double>(std::size_t)>& reference) {
  for (std::size_t g = 0; g * seeds < cells.size(); ++g) {
    ScalingRow row;
    row.cells.assign(cells.begin() + static_cast<std::ptrdiff_t>(g * seeds),
                     cells.begin() + static_cast<std::ptrdiff_t>((g + 1) * seeds));
    row.size_param = row.cells.front().size_param;
    row.seeds = seeds;
    std::vector<double> size, cover, clean, theorem, kklv, matthews;
    for (const auto& c : row.cells) {
      size.push_back(static_cast<double>(c.component_size));
      cover.push_back(c.cover_mean);
      clean.push_back(c.upper_clean);
      theorem.push_back(c.upper_theorem);
      kklv.push_back(c.kklv_lower);
      matthews.push_back(c.matthews_lower);
      if (!c.sandwich_ok)
        ++rep.sandwich_violations;
    }
    row.median_component_size = median(size);
    row.median_cover = median(cover);
    row.median_upper_clean = median(clean);
    row.median_upper_theorem = median(theorem);
    row.median_kklv_lower = median(kklv);
    row.median_matthews_lower = median(matthews);
    row.predicted_law = law(row.size_param);
    row.ratio = row.predicted_law > 0 ? row.median_cover / row.predicted_law : 0.0;
    row.cooper_frieze_reference = reference(row.size_param);
    rep.rows.push_back(std::move(row));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  rep.ratio_spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

} // namespace detail

enum class Regime { a, b, c };

inline Regime parse_regime(const std::string& s) {
  if (s == "a") return Regime::a;
  if (s == "b") return Regime::b;
  if (s == "c") return Regime::c;
  throw std::invalid_argument("regime must be a, b or c");
}

struct EvolutionOptions : SweepOptions {
  Regime regime = Regime::b;
  /// eps = n^-epsilon_exponent in regimes a and c
  double epsilon_exponent = 0.25;
  /// critical-window parameter in regime b
  double lambda = 0.0;
};

inline double evolution_epsilon(const EvolutionOptions& o, std::size_t n) {
  return std::pow(static_cast<double>(n), -o.epsilon_exponent);
}

inline double evolution_p(const EvolutionOptions& o, std::size_t n) {
  const double nn = static_cast<double>(n);
  switch (o.regime) {
  case Regime::a: return (1.0 - evolution_epsilon(o, n)) / nn;
  case Regime::b: return (1.0 + o.lambda * std::pow(nn, -1.0 / 3.0)) / nn;
  case Regime::c: return (1.0 + evolution_epsilon(o, n)) / nn;
  }
  return 0.0;
}

/// Law each regime predicts for t_cov of the largest component.
inline double evolution_law(const EvolutionOptions& o, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double eps = evolution_epsilon(o, n);
  switch (o.regime) {
  case Regime::a: return std::pow(eps, -3.0) * std::pow(std::log(eps * eps * eps * nn), 1.5);
  case Regime::b: return nn;
  case Regime::c: return nn * std::pow(std::log(eps * eps * eps * nn), 2.0);
  }
  return 0.0;
}

/**
   Cover time of the largest component of G(n,p) across an n-grid.

   Cell (grid index g, seed index s) builds its graph from
   stream_seed(master, g * seeds + s) and simulates from a
   resistance-diameter endpoint, which bounds the worst-start cover time
   from below. Cells run concurrently; assembly is in (n, seed) order.
 */
inline ScalingReport run_evolution(const EvolutionOptions& o) {
  if (o.grid.size() < 3)
    throw ContractViolation("evolution: the n-grid needs at least 3 points for a fit");
  if (o.seeds < 1 || o.trials < 1)
    throw ContractViolation("evolution: seeds and trials must be >= 1");
  ScalingReport rep;
  rep.regime = o.regime == Regime::a ? "subcritical" : o.regime == Regime::b ? "critical" : "supercritical";
  rep.law = o.regime == Regime::a   ? "eps^-3 log^{3/2}(eps^3 n)"
            : o.regime == Regime::b ? "n"
                                    : "n log^2(eps^3 n)";
  rep.epsilon_exponent = o.epsilon_exponent;
  rep.lambda = o.lambda;
  rep.master_seed = o.master_seed;
  rep.trials = o.trials;

  std::vector<ScalingCell> cells(o.grid.size() * o.seeds);
  parallel_for(cells.size(), o.threads, [&](std::size_t idx) {
    const auto n = o.grid[idx / o.seeds];
    const auto graph_seed = stream_seed(o.master_seed, idx);
    const auto g = gnp(n, evolution_p(o, n), graph_seed);
    const auto comp = largest_component(g);
    auto cell = detail::measure_cell(comp.graph(), o.trials, stream_seed(graph_seed, 1));
    cell.size_param = n;
    cell.seed_index = idx % o.seeds;
    cell.graph_seed = graph_seed;
    cells[idx] = cell;
  });
  detail::finish_rows(
      rep, cells, o.seeds, [&](std::size_t n) { return evolution_law(o, n); },
      [&](std::size_t n) -> std::optional<double> {
        if (o.regime != Regime::c)
          return std::nullopt;
        const double nn = static_cast<double>(n);
        const double c = 1.0 + evolution_epsilon(o, n);
        return cooper_frieze_phi(c) * nn * std::log(nn) * std::log(nn);
      });
  std::vector<double> xs, ys;
  for (const auto& r : rep.rows) {
    xs.push_back(o.regime == Regime::b ? static_cast<double>(r.size_param) : r.predicted_law);
    ys.push_back(std::max(r.median_cover, 1e-300));
  }
  const auto fit = fit_loglog(xs, ys);
  rep.fitted_exponent = fit.slope;
  rep.ci_low = fit.ci_low;
  rep.ci_high = fit.ci_high;
  return rep;
}

/// Cover time of uniform labeled trees of size k across a k-grid.
inline ScalingReport run_gw_scaling(const SweepOptions& o) {
  if (o.grid.size() < 3)
    throw ContractViolation("gw-scaling: the k-grid needs at least 3 points for a fit");
  if (o.seeds < 1 || o.trials < 1)
    throw ContractViolation("gw-scaling: seeds and trials must be >= 1");
  ScalingReport rep;
  rep.regime = "gw_tree";
  rep.law = "k^{3/2}";
  rep.master_seed = o.master_seed;
  rep.trials = o.trials;
  std::vector<ScalingCell> cells(o.grid.size() * o.seeds);
  parallel_for(cells.size(), o.threads, [&](std::size_t idx) {
    const auto k = o.grid[idx / o.seeds];
    const auto graph_seed = stream_seed(o.master_seed, idx);
    const auto tree = uniform_labeled_tree(k, graph_seed);
    auto cell = detail::measure_cell(tree, o.trials, stream_seed(graph_seed, 1));
    cell.size_param = k;
    cell.seed_index = idx % o.seeds;
    cell.graph_seed = graph_seed;
    cells[idx] = cell;
  });
  detail::finish_rows(
      rep, cells, o.seeds, [](std::size_t k) { return std::pow(static_cast<double>(k), 1.5); },
      [](std::size_t) { return std::nullopt; });
  std::vector<double> xs, ys;
  for (const auto& r : rep.rows) {
    xs.push_back(static_cast<double>(r.size_param));
    ys.push_back(std::max(r.median_cover, 1e-300));
  }
  const auto fit = fit_loglog(xs, ys);
  rep.fitted_exponent = fit.slope;
  rep.ci_low = fit.ci_low;
  rep.ci_high = fit.ci_high;
  return rep;
}

struct EdgeAdditionRow {
  std::string descriptor;
  std::size_t vertices = 0;
  std::uint64_t edges = 0;
  MultiGraph graph;
  std::vector<std::pair<Vertex, Vertex>> added;
  double t_before = 0.0;
  double t_after = 0.0;
  double se_before = 0.0;
  double se_after = 0.0;
  double ratio = 0.0;
  double bound = 4.0;
  bool within_bound = true;
};

struct EdgeAdditionReport {
  std::string mode; // exact_dp or monte_carlo
  std::size_t k_edges = 1;
  std::uint64_t master_seed = 0;
  std::size_t trials = 0;
  std::vector<EdgeAdditionRow> rows;
  std::size_t violations = 0;
};

struct EdgeAdditionOptions {
  bool exact = true;
  std::size_t k_edges = 1;
  std::size_t instances = 200;
  std::size_t max_vertices = 10;
  std::size_t trials = 2000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
};

/// Ratio bound for k added edges: 4 for one edge, else 2k + 1 + 2k^2/|E|.
inline double edge_addition_bound(std::size_t k_edges, std::uint64_t edge_count) {
  if (k_edges == 1)
    return 4.0;
  const double k = static_cast<double>(k_edges);
  return 2.0 * k + 1.0 + 2.0 * k * k / static_cast<double>(edge_count);
}

/// Worst-start cover times before and after adding edges to `g`.
inline EdgeAdditionRow edge_addition_row(const MultiGraph& g, const std::vector<std::pair<Vertex, Vertex>>& added,
                                         bool exact, std::size_t trials, std::uint64_t seed) {
  EdgeAdditionRow row;
  row.graph = g;
  row.vertices = g.vertex_count();
  row.edges = g.edge_count();
  row.added = added;
  MultiGraph plus = g;
  for (auto [u, v] : added)
    plus = add_edge(plus, u, v);
  if (exact) {
    row.t_before = exact_worst_cover_time(g);
    row.t_after = exact_worst_cover_time(plus);
  } else {
    SimulationRequest req;
    req.quantity = Quantity::cover;
    req.start = StartPolicy::worst();
    req.trials = trials;
    req.threads = 1;
    req.master_seed = stream_seed(seed, 0);
    const auto before = simulate(g, req);
    req.master_seed = stream_seed(seed, 1);
    const auto after = simulate(plus, req);
    row.t_before = before.mean;
    row.se_before = before.std_err;
    row.t_after = after.mean;
    row.se_after = after.std_err;
  }
  row.ratio = row.t_before > 0 ? row.t_after / row.t_before : (row.t_after > 0 ? INFINITY : 1.0);
  row.bound = edge_addition_bound(added.size(), g.edge_count());
  // relative 1e-12 slack absorbs the DP's floating-point round-off only
  row.within_bound = row.ratio <= row.bound * (1.0 + 1e-12);
  return row;
}

/**
   Random instances: G ~ G(n,p) with n uniform in [2, max_vertices] and p
   uniform in [0.2, 0.9], conditioned connected; with probability 1/4 an
   extra parallel copy of an edge and with probability 1/4 an extra loop.
   Then k_edges pairs (u,v) drawn uniformly with replacement, u = v allowed.
 */
inline std::pair<MultiGraph, std::vector<std::pair<Vertex, Vertex>>>
edge_addition_instance(std::uint64_t master_seed, std::size_t index, std::size_t max_vertices, std::size_t k_edges) {
  auto rng = make_engine(master_seed, index);
  std::uniform_int_distribution<std::size_t> size(2, std::max<std::size_t>(2, max_vertices));
  std::uniform_real_distribution<double> density(0.2, 0.9);
  const auto n = size(rng);
  MultiGraph g;
  for (;;) {
    g = gnp(n, density(rng), rng());
    if (is_connected(g))
      break;
  }
  std::uniform_int_distribution<Vertex> vertex(0, static_cast<Vertex>(n - 1));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < 0.25) {
    std::uniform_int_distribution<std::size_t> which(0, g.edges().size() - 1);
    const auto e = g.edges()[which(rng)];
    g = add_edge(g, e.u, e.v);
  }
  if (coin(rng) < 0.25) {
    const auto v = vertex(rng);
    g = add_edge(g, v, v);
  }
  std::vector<std::pair<Vertex, Vertex>> added;
  for (std::size_t i = 0; i < k_edges; ++i) {
    const auto u = vertex(rng);
    const auto v = vertex(rng);
    added.emplace_back(u, v);
  }
  return {g, added};
}

inline EdgeAdditionReport run_edge_addition(const EdgeAdditionOptions& o) {
  if (o.k_edges < 1)
    throw ContractViolation("edge-add: k_edges must be >= 1");
  if (o.exact && o.max_vertices > 12)
    throw ContractViolation("edge-add: exact mode is limited to 12 vertices");
  if (!o.exact && o.max_vertices > 64)
    throw ContractViolation("edge-add: monte carlo mode is limited to 64 vertices");
  EdgeAdditionReport rep;
  rep.mode = o.exact ? "exact_dp" : "monte_carlo";
  rep.k_edges = o.k_edges;
  rep.master_seed = o.master_seed;
  rep.trials = o.exact ? 0 : o.trials;
  rep.rows.resize(o.instances);
  parallel_for(o.instances, o.threads, [&](std::size_t i) {
    auto [g, added] = edge_addition_instance(o.master_seed, i, o.max_vertices, o.k_edges);
    auto row = edge_addition_row(g, added, o.exact, o.trials, stream_seed(o.master_seed, 1000000 + i));
    row.descriptor = "gnp-instance-" + std::to_string(i);
    rep.rows[i] = std::move(row);
  });
  for (const auto& r : rep.rows)
    if (!r.within_bound)
      ++rep.violations;
  return rep;
}

} // namespace covertime
