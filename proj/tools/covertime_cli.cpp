// Command-line front end: bound, simulate, evolution, gw-scaling, edge-add, generate.

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covertime/covertime.hpp"

using namespace covertime;

namespace {

constexpr int exit_contract = 2;
constexpr int exit_assertion = 3;

struct GlobalFlags {
  std::uint64_t seed = 1;
  std::size_t trials = 0; // 0: subcommand default
  std::string json_path;
  std::string csv_path;
  unsigned threads = 0;
};

struct GraphSource {
  std::string edges_path;
  std::string model;
  std::size_t n = 1000;
  double p = 0.001;
  std::size_t k = 100;
  double mu = 1.0;
  std::size_t size_cap = 1000000;
  double eps = 0.1;
  std::string base = "torus";
  std::size_t m = 10;
  std::size_t d = 2;
  std::string base_file;
  bool largest_component = false;
  std::string dump_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--edges", edges_path, "edge-list file");
    cmd->add_option("--model", model, "generator model")->check(CLI::IsMember({"gnp", "tree", "pgw", "giant", "percolation"}));
    cmd->add_option("--n", n, "vertex count (gnp, giant, complete/regular base)");
    cmd->add_option("--p", p, "edge probability (gnp) or retention probability (percolation)");
    cmd->add_option("--k", k, "tree size");
    cmd->add_option("--mu", mu, "PGW offspring mean");
    cmd->add_option("--size-cap", size_cap, "PGW size cap");
    cmd->add_option("--eps", eps, "supercritical epsilon (giant)");
    cmd->add_option("--base", base, "percolation base graph")
        ->check(CLI::IsMember({"complete", "hypercube", "torus", "regular", "file"}));
    cmd->add_option("--m", m, "hypercube dimension or torus side");
    cmd->add_option("--d", d, "torus dimension or regular degree");
    cmd->add_option("--base-file", base_file, "edge list used as percolation base");
    cmd->add_flag("--largest-component", largest_component, "restrict to the largest connected component");
    cmd->add_option("--dump", dump_path, "write the generated graph as an edge list");
  }

  MultiGraph build(std::uint64_t seed) const {
    MultiGraph g;
    if (!edges_path.empty()) {
      std::ifstream in(edges_path);
      if (!in)
        throw ContractViolation("cannot open edge list '" + edges_path + "'");
      g = from_edge_list(in);
    } else if (model == "gnp") {
      g = gnp(n, p, seed);
    } else if (model == "tree") {
      g = uniform_labeled_tree(k, seed);
    } else if (model == "pgw") {
      g = pgw_tree(mu, seed, size_cap).tree;
    } else if (model == "giant") {
      g = giant_model(GiantModelParams::make(n, eps), seed).graph;
    } else if (model == "percolation") {
      BaseGraphSpec spec;
      spec.percolation_p = p;
      spec.n = n;
      spec.m = m;
      spec.d = d;
      spec.path = base_file;
      if (base == "complete")
        spec.kind = BaseGraphSpec::Kind::complete;
      else if (base == "hypercube")
        spec.kind = BaseGraphSpec::Kind::hypercube;
      else if (base == "torus")
        spec.kind = BaseGraphSpec::Kind::torus;
      else if (base == "regular")
        spec.kind = BaseGraphSpec::Kind::random_regular;
      else
        spec.kind = BaseGraphSpec::Kind::from_file;
      g = percolate(spec, seed).full;
    } else {
      throw ContractViolation("give a graph with --edges or --model");
    }
    if (!dump_path.empty()) {
      std::ofstream out(dump_path);
      to_edge_list(g, out);
    }
    if (largest_component && g.vertex_count() > 0)
      return largest_component_of(g);
    return g;
  }

  static MultiGraph largest_component_of(const MultiGraph& g) { return covertime::largest_component(g).graph(); }
};

std::vector<std::size_t> parse_grid(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty())
      continue;
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw ContractViolation("bad grid entry '" + tok + "'");
    }
  }
  return out;
}

void emit(const json& j, const GlobalFlags& flags) {
  const auto text = j.dump(2);
  std::cout << text << '\n';
  if (!flags.json_path.empty()) {
    std::ofstream out(flags.json_path);
    out << text << '\n';
  }
}

template <class Writer>
void emit_csv(const GlobalFlags& flags, Writer&& write) {
  if (flags.csv_path.empty())
    return;
  std::ofstream out(flags.csv_path);
  write(out);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk cover-time bounds and experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "master seed");
  app.add_option("--trials", flags.trials, "Monte Carlo trials");
  app.add_option("--json", flags.json_path, "also write the JSON report to this path");
  app.add_option("--csv", flags.csv_path, "write a CSV table to this path");
  app.add_option("--threads", flags.threads, "worker threads (speed only; results do not depend on it)");

  // bound
  auto* bound = app.add_subcommand("bound", "resistance-metric cover-time bounds for one graph");
  GraphSource bound_src;
  bound_src.add_to(bound);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of a walk functional");
  GraphSource sim_src;
  sim_src.add_to(sim);
  std::string quantity = "cover";
  std::string start = "fixed";
  Vertex start_vertex = 0;
  Vertex target = 0;
  std::string samples_path;
  sim->add_option("--quantity", quantity, "cover|cover_return|blanket|hitting|commute");
  sim->add_option("--start", start, "fixed|worst|stationary")->check(CLI::IsMember({"fixed", "worst", "stationary"}));
  sim->add_option("--start-vertex", start_vertex, "start for --start fixed");
  sim->add_option("--target", target, "target of hitting / other end of commute");
  sim->add_option("--emit-samples", samples_path, "write one sample per line");

  // evolution
  auto* evo = app.add_subcommand("evolution", "cover time of the largest G(n,p) component across an n-grid");
  std::string regime = "b";
  std::string n_grid;
  std::size_t evo_seeds = 20;
  double lambda = 0.0;
  double eps_exponent = 0.25;
  evo->add_option("--regime", regime, "a (subcritical), b (critical), c (supercritical)")
      ->check(CLI::IsMember({"a", "b", "c"}));
  evo->add_option("--n-grid", n_grid, "comma-separated n values");
  evo->add_option("--seeds", evo_seeds, "graphs per grid point");
  evo->add_option("--lambda", lambda, "critical-window parameter (regime b)");
  evo->add_option("--eps-exponent", eps_exponent, "eps = n^-x in regimes a and c");

  // gw-scaling
  auto* gw = app.add_subcommand("gw-scaling", "cover time of uniform random trees across a k-grid");
  std::string k_grid = "256,1024,4096";
  std::size_t gw_seeds = 20;
  gw->add_option("--k-grid", k_grid, "comma-separated tree sizes");
  gw->add_option("--seeds", gw_seeds, "trees per grid point");

  // edge-add
  auto* edge = app.add_subcommand("edge-add", "cover time before and after adding edges");
  std::string mode = "exact";
  std::size_t k_edges = 1;
  std::size_t instances = 200;
  std::size_t max_vertices = 0;
  edge->add_option("--mode", mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
  edge->add_option("--k-edges", k_edges, "edges added per instance");
  edge->add_option("--instances", instances, "random instances");
  edge->add_option("--seeds", instances, "alias of --instances");
  edge->add_option("--max-vertices", max_vertices, "largest instance (default 10 exact, 30 mc)");

  // generate
  auto* gen = app.add_subcommand("generate", "sample a graph and print it as an edge list");
  GraphSource gen_src;
  gen_src.add_to(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_contract;
  }

  try {
    if (*bound) {
      const auto g = bound_src.build(flags.seed);
      if (!is_connected(g))
        throw ContractViolation("graph is disconnected; pass --largest-component");
      const ResistanceOracle oracle(g);
      const auto rep = compute_bounds(oracle);
      emit(json(rep), flags);
      emit_csv(flags, [&](std::ostream& out) { write_bound_csv(rep, out); });
    } else if (*sim) {
      const auto g = sim_src.build(flags.seed);
      SimulationRequest req;
      req.quantity = parse_quantity(quantity);
      req.start = start == "fixed" ? StartPolicy::fixed(start_vertex)
                  : start == "worst" ? StartPolicy::worst()
                                     : StartPolicy::stationary();
      req.target = target;
      req.trials = flags.trials ? flags.trials : 1000;
      req.master_seed = flags.seed;
      req.threads = flags.threads;
      const auto est = simulate(g, req);
      if (!samples_path.empty()) {
        std::ofstream out(samples_path);
        out.precision(17);
        for (double x : est.samples)
          out << x << '\n';
      }
      emit(json(est), flags);
    } else if (*evo) {
      EvolutionOptions o;
      o.regime = parse_regime(regime);
      o.grid = n_grid.empty() ? (o.regime == Regime::b ? std::vector<std::size_t>{4000, 8000, 16000, 32000}
                                                       : std::vector<std::size_t>{4000, 16000, 64000})
                              : parse_grid(n_grid);
      o.seeds = evo_seeds;
      o.trials = flags.trials ? flags.trials : 100;
      o.master_seed = flags.seed;
      o.threads = flags.threads;
      o.lambda = lambda;
      o.epsilon_exponent = eps_exponent;
      const auto rep = run_evolution(o);
      emit(json(rep), flags);
      emit_csv(flags, [&](std::ostream& out) { write_scaling_csv(rep, out); });
    } else if (*gw) {
      SweepOptions o;
      o.grid = parse_grid(k_grid);
      o.seeds = gw_seeds;
      o.trials = flags.trials ? flags.trials : 50;
      o.master_seed = flags.seed;
      o.threads = flags.threads;
      const auto rep = run_gw_scaling(o);
      emit(json(rep), flags);
      emit_csv(flags, [&](std::ostream& out) { write_scaling_csv(rep, out); });
    } else if (*edge) {
      EdgeAdditionOptions o;
      o.exact = mode == "exact";
      o.k_edges = k_edges;
      o.instances = instances;
      o.max_vertices = max_vertices ? max_vertices : (o.exact ? 10 : 30);
      o.trials = flags.trials ? flags.trials : 2000;
      o.master_seed = flags.seed;
      o.threads = flags.threads;
      const auto rep = run_edge_addition(o);
      emit(json(rep), flags);
      emit_csv(flags, [&](std::ostream& out) { write_edge_addition_csv(rep, out); });
      if (o.exact && rep.violations > 0) {
        std::cerr << "edge-add: " << rep.violations << " instance(s) exceed the ratio bound\n";
        return exit_assertion;
      }
    } else if (*gen) {
      const auto g = gen_src.build(flags.seed);
      if (gen_src.dump_path.empty())
        to_edge_list(g, std::cout);
    }
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_contract;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_contract;
  } catch (const std::out_of_range& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return exit_contract;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_contract;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_contract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
