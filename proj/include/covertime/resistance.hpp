#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "covertime/graph.hpp"

namespace covertime {

struct ResistanceOptions {
  /// Above this size the all-pairs grounded inverse is not materialized.
  std::size_t k_exact = 4096;
  /// Farthest-point sweep rounds used for the approximate diameter.
  int sweep_rounds = 8;
};

struct ResistanceDiameter {
  double R = 0.0;
  Vertex u = 0;
  Vertex v = 0;
  bool exact = true;
  /// Certified upper bound on the true diameter (equals R when exact).
  double upper = 0.0;
};

/**
   Effective resistances of a connected multigraph, each parallel edge a
   unit conductor. Loops carry no current and are ignored here.

   The Laplacian grounded at vertex 0 is factored once (sparse LDLT with
   a fill-reducing ordering). For k <= k_exact the grounded inverse G is
   materialized and R(u,v) = G_uu + G_vv - 2 G_uv is O(1); otherwise only
   diag(G) is kept and rows are produced by one triangular solve each.

   Everything is computed in the constructor, so concurrent queries are safe.
 */
class ResistanceOracle {
public:
  explicit ResistanceOracle(const MultiGraph& g, ResistanceOptions opts = {})
      : k_(g.vertex_count()), opts_(opts), edge_count_(g.edge_count()) {
    if (k_ == 0)
      throw ContractViolation("resistance oracle needs at least one vertex");
    if (!is_connected(g))
      throw ContractViolation("resistance oracle needs a connected graph");
    degree_.assign(g.degrees().begin(), g.degrees().end());
    if (k_ == 1) {
      dense_ = Eigen::MatrixXd::Zero(1, 1);
      diag_ = Eigen::VectorXd::Zero(1);
      finish();
      return;
    }

    const auto m = static_cast<Eigen::Index>(k_ - 1);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * g.edges().size() + k_);
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(m);
    for (const auto& e : g.edges()) {
      if (e.u == e.v)
        continue;
      const double c = static_cast<double>(e.multiplicity);
      if (e.u != 0)
        diagonal[e.u - 1] += c;
      if (e.v != 0)
        diagonal[e.v - 1] += c;
      if (e.u != 0 && e.v != 0) {
        trip.emplace_back(e.u - 1, e.v - 1, -c);
        trip.emplace_back(e.v - 1, e.u - 1, -c);
      }
    }
    for (Eigen::Index i = 0; i < m; ++i)
      trip.emplace_back(i, i, diagonal[i]);
    Eigen::SparseMatrix<double> lap(m, m);
    lap.setFromTriplets(trip.begin(), trip.end());
    solver_.compute(lap);
    if (solver_.info() != Eigen::Success)
      throw std::runtime_error("grounded Laplacian factorization failed");

    if (k_ <= opts_.k_exact) {
      // column-by-column solves; a dense identity right-hand side is much slower here
      dense_ = Eigen::MatrixXd::Zero(k_, k_);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        e[i] = 1.0;
        dense_.col(i + 1).tail(m) = solver_.solve(e);
        e[i] = 0.0;
      }
      for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(k_); ++j)
        for (Eigen::Index i = 1; i < j; ++i) {
          const double s = 0.5 * (dense_(i, j) + dense_(j, i));
          dense_(i, j) = s;
          dense_(j, i) = s;
        }
      diag_ = dense_.diagonal();
    } else {
      diag_ = Eigen::VectorXd::Zero(k_);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        e[i] = 1.0;
        Eigen::VectorXd col = solver_.solve(e);
        diag_[i + 1] = col[i];
        e[i] = 0.0;
      }
    }
    finish();
  }

  std::size_t size() const { return k_; }
  std::uint64_t edge_count() const { return edge_count_; }
  const std::vector<double>& degrees() const { return degree_; }

  /// True when the all-pairs grounded inverse is held in memory.
  bool all_pairs() const { return dense_.size() > 0; }

  double resistance(Vertex u, Vertex v) const {
    check(u);
    check(v);
    if (u == v)
      return 0.0;
    if (all_pairs())
      return std::max(0.0, dense_(u, u) + dense_(v, v) - 2.0 * dense_(u, v));
    auto col = grounded_column(u);
    return std::max(0.0, diag_[u] + diag_[v] - 2.0 * col[v]);
  }

  /// R(u, .) for every vertex.
  std::vector<double> row(Vertex u) const {
    check(u);
    std::vector<double> out(k_);
    if (all_pairs()) {
      for (std::size_t w = 0; w < k_; ++w)
        out[w] = std::max(0.0, dense_(u, u) + diag_[w] - 2.0 * dense_(u, w));
    } else {
      auto col = grounded_column(u);
      for (std::size_t w = 0; w < k_; ++w)
        out[w] = std::max(0.0, diag_[u] + diag_[w] - 2.0 * col[w]);
    }
    out[u] = 0.0;
    return out;
  }

  /// Exact expected hitting time E_u tau_v of the simple random walk.
  double hitting_time(Vertex u, Vertex v) const {
    check(u);
    check(v);
    if (u == v)
      return 0.0;
    return static_cast<double>(edge_count_) * resistance(u, v) + 0.5 * (degree_moment(v) - degree_moment(u));
  }

  /// sum_w deg(w) R(x, w); the hitting-time potential.
  double degree_moment(Vertex x) const {
    check(x);
    if (!moment_.empty())
      return moment_[x];
    auto r = row(x);
    double s = 0.0;
    for (std::size_t w = 0; w < k_; ++w)
      s += degree_[w] * r[w];
    return s;
  }

  /// Smallest positive pairwise resistance. Exact in all-pairs mode;
  /// otherwise the minimum over the rows seen by the diameter sweeps.
  double min_positive_resistance() const { return r_min_; }

  ResistanceDiameter diameter() const { return diameter_; }

private:
  void check(Vertex v) const {
    if (v >= k_)
      throw std::domain_error("vertex " + std::to_string(v) + " outside the oracle's component");
  }

  Eigen::VectorXd grounded_column(Vertex u) const {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(k_);
    if (u == 0)
      return col;
    const auto m = static_cast<Eigen::Index>(k_ - 1);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[u - 1] = 1.0;
    col.tail(m) = solver_.solve(e);
    return col;
  }

  void finish() {
    r_min_ = std::numeric_limits<double>::infinity();
    if (all_pairs()) {
      moment_.assign(k_, 0.0);
      ResistanceDiameter d;
      for (Vertex u = 0; u < k_; ++u) {
        double s = 0.0;
        for (Vertex w = 0; w < k_; ++w) {
          const double r = u == w ? 0.0 : std::max(0.0, diag_[u] + diag_[w] - 2.0 * dense_(u, w));
          s += degree_[w] * r;
          if (w > u) {
            if (r > d.R) {
              d.R = r;
              d.u = u;
              d.v = w;
            }
            if (r > 0.0)
              r_min_ = std::min(r_min_, r);
          }
        }
        moment_[u] = s;
      }
      d.exact = true;
      d.upper = d.R;
      diameter_ = d;
    } else {
      // S(x) = 2|E| G_xx + sum_w d_w G_ww - 2 (G d)_x needs a single solve
      const auto m = static_cast<Eigen::Index>(k_ - 1);
      Eigen::VectorXd d(m);
      double weighted_diag = 0.0;
      for (Vertex w = 0; w < k_; ++w) {
        weighted_diag += degree_[w] * diag_[w];
        if (w > 0)
          d[w - 1] = degree_[w];
      }
      const Eigen::VectorXd gd = solver_.solve(d);
      moment_.assign(k_, 0.0);
      for (Vertex x = 0; x < k_; ++x)
        moment_[x] = 2.0 * static_cast<double>(edge_count_) * diag_[x] + weighted_diag - (x > 0 ? 2.0 * gd[x - 1] : 0.0);
      sweep_diameter();
    }
    if (!std::isfinite(r_min_))
      r_min_ = 0.0;
  }

  // Farthest-point sweeps give a lower bound; 2 * ecc(s) bounds R from above.
  void sweep_diameter() {
    ResistanceDiameter d;
    d.exact = false;
    d.upper = std::numeric_limits<double>::infinity();
    Vertex s = 0;
    for (int round = 0; round < opts_.sweep_rounds; ++round) {
      auto r = row(s);
      auto far = static_cast<Vertex>(std::max_element(r.begin(), r.end()) - r.begin());
      if (r[far] > d.R || round == 0) {
        d.R = r[far];
        d.u = std::min(s, far);
        d.v = std::max(s, far);
      }
      d.upper = std::min(d.upper, 2.0 * r[far]);
      for (Vertex w = 0; w < k_; ++w)
        if (r[w] > 0.0)
          r_min_ = std::min(r_min_, r[w]);
      if (far == s)
        break;
      s = far;
    }
    diameter_ = d;
  }

  std::size_t k_;
  ResistanceOptions opts_;
  std::uint64_t edge_count_;
  std::vector<double> degree_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  Eigen::MatrixXd dense_;
  Eigen::VectorXd diag_;
  std::vector<double> moment_;
  ResistanceDiameter diameter_;
  double r_min_ = 0.0;
};

inline ResistanceDiameter resistance_diameter(const ResistanceOracle& oracle) { return oracle.diameter(); }

/// Expected hitting times E_u tau_v, answered from the oracle on demand.
class HittingMatrix {
public:
  explicit HittingMatrix(const ResistanceOracle& oracle) : oracle_(&oracle) {}

  double operator()(Vertex u, Vertex v) const { return oracle_->hitting_time(u, v); }

  /// E_u tau_w for every w, from one resistance row.
  std::vector<double> from(Vertex u) const {
    auto h = oracle_->row(u);
    const double E = static_cast<double>(oracle_->edge_count());
    const double su = oracle_->degree_moment(u);
    for (Vertex w = 0; w < h.size(); ++w)
      h[w] = w == u ? 0.0 : E * h[w] + 0.5 * (oracle_->degree_moment(w) - su);
    return h;
  }

  std::size_t size() const { return oracle_->size(); }

  const ResistanceOracle& oracle() const { return *oracle_; }

private:
  const ResistanceOracle* oracle_;
};

} // namespace covertime
