#pragma once

#include "json.hpp"

#include <ostream>
#include <sstream>
#include <string>

#include "covertime/entropy_bounds.hpp"
#include "covertime/experiments.hpp"
#include "covertime/walk.hpp"

namespace covertime {

using nlohmann::json;

inline void to_json(json& j, const BoundReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"i", l.i}, {"radius", l.radius}, {"size", l.size()}, {"alpha", l.alpha}});
  j = json{{"R", r.R},
           {"R_provenance", r.R_provenance},
           {"levels", levels},
           {"psi", r.psi},
           {"upper_theorem", r.upper_theorem},
           {"upper_clean", r.upper_clean},
           {"kklv_lower", r.kklv_lower},
           {"matthews_lower", r.matthews_lower ? json(*r.matthews_lower) : json(nullptr)}};
}

inline void to_json(json& j, const WalkEstimate& e) {
  j = json{{"quantity", to_string(e.quantity)},
           {"start_policy", e.start_policy.describe()},
           {"mean", e.mean},
           {"std_err", e.std_err},
           {"trials", e.trials},
           {"seed", e.master_seed}};
  if (e.worst_start)
    j["worst_start"] = *e.worst_start;
}

inline void to_json(json& j, const ScalingCell& c) {
  j = json{{"size_param", c.size_param},     {"seed_index", c.seed_index},     {"graph_seed", c.graph_seed},
           {"component_size", c.component_size}, {"component_edges", c.component_edges}, {"R", c.R},
           {"start", c.start},               {"cover_mean", c.cover_mean},     {"cover_std_err", c.cover_std_err},
           {"upper_clean", c.upper_clean},   {"upper_theorem", c.upper_theorem}, {"kklv_lower", c.kklv_lower},
           {"matthews_lower", c.matthews_lower}, {"sandwich_ok", c.sandwich_ok}};
}

inline void to_json(json& j, const ScalingRow& r) {
  j = json{{"size_param", r.size_param},
           {"seeds", r.seeds},
           {"median_component_size", r.median_component_size},
           {"median_cover", r.median_cover},
           {"median_upper_clean", r.median_upper_clean},
           {"median_upper_theorem", r.median_upper_theorem},
           {"median_kklv_lower", r.median_kklv_lower},
           {"median_matthews_lower", r.median_matthews_lower},
           {"predicted_law", r.predicted_law},
           {"ratio", r.ratio},
           {"cells", r.cells}};
  if (r.cooper_frieze_reference)
    j["cooper_frieze_reference"] = *r.cooper_frieze_reference;
}

inline void to_json(json& j, const ScalingReport& r) {
  j = json{{"regime", r.regime},
           {"law", r.law},
           {"epsilon_exponent", r.epsilon_exponent},
           {"lambda", r.lambda},
           {"seed", r.master_seed},
           {"trials", r.trials},
           {"rows", r.rows},
           {"fitted_exponent", r.fitted_exponent},
           {"fitted_exponent_ci", {r.ci_low, r.ci_high}},
           {"ratio_spread", r.ratio_spread},
           {"sandwich_violations", r.sandwich_violations}};
}

inline void to_json(json& j, const EdgeAdditionRow& r) {
  json added = json::array();
  for (auto [u, v] : r.added)
    added.push_back({u, v});
  std::ostringstream edges;
  to_edge_list(r.graph, edges);
  j = json{{"descriptor", r.descriptor}, {"vertices", r.vertices}, {"edges", r.edges},
           {"edge_list", edges.str()},   {"added", added},          {"t_before", r.t_before},
           {"t_after", r.t_after},       {"ratio", r.ratio},        {"bound", r.bound},
           {"within_bound", r.within_bound}};
  if (r.se_before > 0 || r.se_after > 0) {
    j["se_before"] = r.se_before;
    j["se_after"] = r.se_after;
  }
}

inline void to_json(json& j, const EdgeAdditionReport& r) {
  j = json{{"mode", r.mode}, {"k_edges", r.k_edges}, {"seed", r.master_seed},
           {"trials", r.trials}, {"rows", r.rows},   {"violations", r.violations}};
}

inline void write_scaling_csv(const ScalingReport& r, std::ostream& out) {
  out << "size,seeds,median_component_size,median_cover,median_upper_clean,median_upper_theorem,"
         "median_kklv_lower,median_matthews_lower,predicted_law,ratio,cooper_frieze_reference\n";
  out.precision(17);
  for (const auto& row : r.rows) {
    out << row.size_param << ',' << row.seeds << ',' << row.median_component_size << ',' << row.median_cover << ','
        << row.median_upper_clean << ',' << row.median_upper_theorem << ',' << row.median_kklv_lower << ','
        << row.median_matthews_lower << ',' << row.predicted_law << ',' << row.ratio << ',';
    if (row.cooper_frieze_reference)
      out << *row.cooper_frieze_reference;
    out << '\n';
  }
}

inline void write_edge_addition_csv(const EdgeAdditionReport& r, std::ostream& out) {
  out << "descriptor,vertices,edges,added,t_before,t_after,ratio,bound,within_bound\n";
  out.precision(17);
  for (const auto& row : r.rows) {
    out << row.descriptor << ',' << row.vertices << ',' << row.edges << ',';
    for (std::size_t i = 0; i < row.added.size(); ++i)
      out << (i ? ";" : "") << row.added[i].first << '-' << row.added[i].second;
    out << ',' << row.t_before << ',' << row.t_after << ',' << row.ratio << ',' << row.bound << ','
        << (row.within_bound ? 1 : 0) << '\n';
  }
}

inline void write_bound_csv(const BoundReport& r, std::ostream& out) {
  out << "i,radius,size,alpha\n";
  out.precision(17);
  for (const auto& l : r.levels)
    out << l.i << ',' << l.radius << ',' << l.size() << ',' << l.alpha << '\n';
}

} // namespace covertime
