#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "covertime/graph.hpp"
#include "covertime/resistance.hpp"

namespace covertime {

/// Closed-ball membership with a relative slack absorbing solver round-off.
inline bool within_radius(double distance, double radius) {
  return distance <= radius * (1.0 + 1e-9) + 1e-12;
}

struct CoveringLevel {
  int i = 0;
  /// Covering radius R / 2^i; the packing balls have half this radius.
  double radius = 0.0;
  std::vector<Vertex> centers;
  std::size_t size() const { return centers.size(); }
  /// 2^-i ln |centers|
  double alpha = 0.0;
};

/**
   Greedy packings of the resistance metric at dyadic scales.

   Level i holds a maximal set of centers whose closed balls of radius
   R/2^(i+1) are pairwise disjoint. Maximality makes the balls of radius
   R/2^i around the same centers a cover, and for the minimal cover size
   |A_i| at radius R/2^i one gets |level(i-1)| <= |A_i| <= |level(i)|.
   `root` is the level-0 packing (radius R/2), kept for that lower side.
 */
struct CoveringProfile {
  double R = 0.0;
  std::size_t vertex_count = 0;
  std::vector<CoveringLevel> levels;
  CoveringLevel root;
  int truncation_level = 1;

  const CoveringLevel& level(int i) const {
    if (i == 0)
      return root;
    return levels.at(static_cast<std::size_t>(i - 1));
  }
};

/// i_max = max(ceil(log2 ln k), ceil(log2(R / r_min))), clamped to [1, 40].
inline int default_truncation_level(std::size_t k, double R, double r_min) {
  int lvl = 1;
  if (k >= 2) {
    const double ll = std::log2(std::log(static_cast<double>(k)));
    lvl = std::max(lvl, static_cast<int>(std::ceil(ll)));
  }
  if (R > 0.0 && r_min > 0.0)
    lvl = std::max(lvl, static_cast<int>(std::ceil(std::log2(R / r_min))));
  return std::clamp(lvl, 1, 40);
}

namespace detail {

inline std::vector<Vertex> greedy_level(const ResistanceOracle& oracle, double packing_radius, double r_min) {
  const auto k = oracle.size();
  std::vector<Vertex> centers;
  // below the smallest positive resistance every ball is a singleton;
  // r_min is only exact when all pairs were examined
  if (oracle.all_pairs() && r_min > 0.0 && !within_radius(r_min, packing_radius)) {
    centers.resize(k);
    for (Vertex v = 0; v < k; ++v)
      centers[v] = v;
    return centers;
  }
  std::vector<char> claimed(k, 0);
  for (Vertex v = 0; v < k; ++v) {
    if (claimed[v])
      continue;
    const auto r = oracle.row(v);
    bool disjoint = true;
    for (Vertex w = 0; w < k && disjoint; ++w)
      if (claimed[w] && within_radius(r[w], packing_radius))
        disjoint = false;
    if (!disjoint)
      continue;
    centers.push_back(v);
    for (Vertex w = 0; w < k; ++w)
      if (within_radius(r[w], packing_radius))
        claimed[w] = 1;
  }
  return centers;
}

} // namespace detail

/// Greedy maximal packings for levels 0..i_max, scanning vertices in id order.
inline CoveringProfile greedy_packing(const ResistanceOracle& oracle, double R, int i_max) {
  if (i_max < 1)
    throw ContractViolation("greedy_packing: i_max must be >= 1");
  CoveringProfile p;
  p.R = R;
  p.vertex_count = oracle.size();
  p.truncation_level = i_max;
  const double r_min = oracle.min_positive_resistance();
  for (int i = 0; i <= i_max; ++i) {
    CoveringLevel lvl;
    lvl.i = i;
    lvl.radius = std::ldexp(R, -i);
    lvl.centers = detail::greedy_level(oracle, std::ldexp(R, -(i + 1)), r_min);
    lvl.alpha = std::ldexp(std::log(static_cast<double>(lvl.centers.size())), -i);
    if (i == 0)
      p.root = std::move(lvl);
    else
      p.levels.push_back(std::move(lvl));
  }
  return p;
}

inline CoveringProfile greedy_packing(const ResistanceOracle& oracle) {
  const auto d = oracle.diameter();
  const double R = d.exact ? d.R : d.upper;
  return greedy_packing(oracle, R, default_truncation_level(oracle.size(), R, oracle.min_positive_resistance()));
}

struct BoundReport {
  double R = 0.0;
  std::string R_provenance = "exact";
  std::vector<CoveringLevel> levels;
  std::uint64_t edge_count = 0;
  double psi = 0.0;
  /// 6 psi R |E|
  double upper_theorem = 0.0;
  /// (sum_{i <= ceil(log2 ln k)} sqrt(alpha_i))^2 R |E|, no constant
  double upper_clean = 0.0;
  /// max_i 2^-i ln|level(i-1)| R |E|
  double kklv_lower = 0.0;
  std::optional<double> matthews_lower;
  std::vector<Vertex> matthews_set;

  /// Best certified lower value available (KKLV surrogate or Matthews).
  double lower() const { return std::max(kklv_lower, matthews_lower.value_or(0.0)); }
};

namespace detail {

// sum over i > i_max of sqrt(max(2^-i ln k, 2^-i/2)). The first argument
// bounds alpha_i for every i because |A_i| <= k; once it drops under the
// floor the remaining terms are the geometric series sum 2^-i/4.
inline double alpha_floor_tail(std::size_t k, int i_max) {
  const double lnk = k >= 2 ? std::log(static_cast<double>(k)) : 0.0;
  const double q = std::pow(2.0, -0.25);
  double sum = 0.0;
  int i = i_max + 1;
  for (; i < 400; ++i) {
    const double raw = std::ldexp(lnk, -i);
    const double floor = std::pow(2.0, -0.5 * i);
    if (raw <= floor)
      break;
    sum += std::sqrt(raw);
  }
  return sum + std::pow(q, i) / (1.0 - q);
}

} // namespace detail

/// Psi-based upper bound, constant-free scaling statistic and the KKLV lower surrogate.
inline BoundReport psi_bound(const CoveringProfile& profile, std::uint64_t edge_count) {
  if (profile.levels.empty())
    throw ContractViolation("psi_bound: empty covering profile");
  if (edge_count < 1 && profile.vertex_count > 1)
    throw ContractViolation("psi_bound: edge_count must be >= 1");
  BoundReport rep;
  rep.R = profile.R;
  rep.levels = profile.levels;
  rep.edge_count = edge_count;
  const double scale = profile.R * static_cast<double>(edge_count);

  double sum_prime = 0.0;
  for (const auto& lvl : profile.levels)
    sum_prime += std::sqrt(std::max(lvl.alpha, std::pow(2.0, -0.5 * lvl.i)));
  sum_prime += detail::alpha_floor_tail(profile.vertex_count, profile.truncation_level);
  rep.psi = 128.0 * sum_prime * sum_prime;
  rep.upper_theorem = 6.0 * rep.psi * scale;

  int clean_levels = 1;
  if (profile.vertex_count >= 2)
    clean_levels = std::max(1, static_cast<int>(std::ceil(std::log2(std::log(double(profile.vertex_count))))));
  double sum_clean = 0.0;
  for (int i = 1; i <= clean_levels; ++i) {
    const double a = i <= profile.truncation_level ? profile.level(i).alpha
                                                   : std::ldexp(std::log(double(profile.vertex_count)), -i);
    sum_clean += std::sqrt(a);
  }
  rep.upper_clean = sum_clean * sum_clean * scale;

  double best = 0.0;
  for (int i = 1; i <= profile.truncation_level; ++i) {
    const double shifted = std::ldexp(std::log(static_cast<double>(profile.level(i - 1).size())), -i);
    best = std::max(best, shifted);
  }
  rep.kklv_lower = best * scale;
  return rep;
}

struct MatthewsResult {
  double value = 0.0;
  std::vector<Vertex> best_set;
};

/// max over sets A of ln|A| * min_{u != v in A} E_u tau_v.
inline MatthewsResult matthews_lower(const HittingMatrix& hit, const std::vector<std::vector<Vertex>>& candidate_sets) {
  MatthewsResult out;
  bool any = false;
  for (const auto& set : candidate_sets) {
    if (set.size() < 2)
      continue;
    any = true;
    double min_hit = std::numeric_limits<double>::infinity();
    for (Vertex a : set) {
      const auto h = hit.from(a);
      for (Vertex b : set)
        if (a != b)
          min_hit = std::min(min_hit, h[b]);
    }
    const double value = std::log(static_cast<double>(set.size())) * min_hit;
    if (value > out.value || out.best_set.empty()) {
      out.value = value;
      out.best_set = set;
    }
  }
  if (!any)
    throw ContractViolation("matthews_lower: every candidate set has fewer than 2 vertices");
  return out;
}

/// Packing center sets of every level plus the diameter pair, deduplicated.
/// Sets larger than `max_set_size` are skipped (0 disables the limit).
inline std::vector<std::vector<Vertex>> default_matthews_candidates(const CoveringProfile& profile,
                                                                     const ResistanceDiameter& diam,
                                                                     std::size_t max_set_size = 0) {
  std::set<std::vector<Vertex>> seen;
  std::vector<std::vector<Vertex>> out;
  auto push = [&](std::vector<Vertex> s) {
    if (s.size() < 2 || (max_set_size && s.size() > max_set_size))
      return;
    if (seen.insert(s).second)
      out.push_back(std::move(s));
  };
  push(profile.root.centers);
  for (const auto& lvl : profile.levels)
    push(lvl.centers);
  if (diam.u != diam.v)
    push({diam.u, diam.v});
  return out;
}

/// Full report for a connected graph: packing, psi bounds and Matthews.
inline BoundReport compute_bounds(const ResistanceOracle& oracle) {
  const auto diam = oracle.diameter();
  auto profile = greedy_packing(oracle);
  auto rep = psi_bound(profile, oracle.edge_count());
  if (!diam.exact) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "approximate: sweep lower bound %.17g, bracketed upper bound %.17g used",
                  diam.R, diam.upper);
    rep.R_provenance = buf;
  }
  const std::size_t limit = oracle.all_pairs() ? 0 : 256;
  auto candidates = default_matthews_candidates(profile, diam, limit);
  if (!candidates.empty()) {
    auto m = matthews_lower(HittingMatrix(oracle), candidates);
    rep.matthews_lower = m.value;
    rep.matthews_set = std::move(m.best_set);
  } else {
    rep.matthews_lower = 0.0;
  }
  return rep;
}

} // namespace covertime
