#include "torusopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace torusopt {

namespace {

std::string fmt17(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

}  // namespace

std::string long_double_string(long double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.20Le", v);
  return buf;
}

Json config_to_json(const Configuration<double>& cfg) {
  Json pts = Json::array();
  for (const auto& x : cfg.points()) pts.push_back({x[0], x[1]});
  return {{"points", pts}, {"r", {cfg.lattice().r[0], cfg.lattice().r[1]}}};
}

Configuration<double> config_from_json(const Json& j) {
  try {
    const auto& r = j.at("r");
    if (!r.is_array() || r.size() != 2) throw std::invalid_argument("r must be [r1, r2]");
    const RectLattice<double> L(r[0].get<double>(), r[1].get<double>());
    std::vector<Vec2<double>> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("each point must be [x1, x2]");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return Configuration<double>(std::move(pts), L);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("configuration JSON: ") + e.what());
  }
}

Json to_json(const EnergyReport<double>& e) {
  return {{"energy_normalized", e.energy_normalized}, {"energy_raw", e.energy_raw}, {"scale_factor", e.scale_factor}};
}

Json to_json(const CertReport& r) {
  auto ld = long_double_string;
  Json j;
  j["label"] = r.label;
  j["a1"] = r.a1;
  j["beta"] = r.beta;
  j["a2"] = r.a2;
  j["grid_n"] = r.grid_n;
  j["node_digits"] = r.node_digits;
  j["grid_digits"] = r.grid_digits;
  j["verdict"] = r.verdict ? "pass" : "fail";
  j["failed_clause"] = r.failed_clause;
  j["coefficients"] = {{"A", ld(r.A)}, {"B", ld(r.B)}, {"C", ld(r.C)}, {"D", ld(r.D)}};
  j["F11"] = ld(r.f11);
  j["cpsd_margin"] = ld(r.cpsd_margin);
  j["interp_residuals"] = {ld(r.interp_residuals[0]), ld(r.interp_residuals[1])};
  j["vanishing_ok"] = r.vanishing_ok;
  j["grid_min"] = ld(r.grid_min);
  j["hessian_max_det"] = ld(r.hessian_max_det);
  j["hessian_F_max_det"] = ld(r.hessian_F_max_det);
  j["hessian_chain_ok"] = r.hessian_chain_ok;
  Json edges = Json::array();
  for (long double m : r.boundary_margins) edges.push_back(ld(m));
  j["boundary_margins"] = edges;
  j["node_model_min"] = ld(r.node_model_min);
  j["t1_partial_min"] = ld(r.t1_partial_min);
  j["cross_margin"] = ld(r.cross_margin);
  j["lp_bound4"] = ld(r.lp_bound4);
  j["energy_star"] = ld(r.energy_star);
  j["sharpness_gap"] = ld(r.sharpness_gap);
  return j;
}

Json to_json(const SearchResult& r) {
  Json j;
  j["best_value"] = r.best_value;
  j["best_restart"] = r.best_restart;
  j["best_config"] = config_to_json(r.best_config);
  j["per_restart_values"] = r.per_restart_values;
  j["iterations_used"] = r.iterations_used;
  Json conv = Json::array();
  for (bool c : r.converged) conv.push_back(c);
  j["converged"] = conv;
  return j;
}

Json to_json(const BoundLedgerEntry& e) {
  Json j;
  j["name"] = e.name;
  j["region"] = e.region;
  j[e.param_name.empty() ? "param" : e.param_name] = e.param;
  if (e.beta != 0) j["beta"] = e.beta;
  j["lhs"] = long_double_string(e.lhs);
  j["mid"] = long_double_string(e.mid);
  j["rhs"] = long_double_string(e.rhs);
  j["holds"] = e.holds;
  j["margin"] = long_double_string(e.margin);
  j["rel_margin"] = long_double_string(e.rel_margin);
  return j;
}

std::string scan_csv_header() {
  return "beta,a1,a2,verdict,failed_clause,cpsd_margin,grid_min,hessian_max_det,lp_bound,energy_star,sharpness_gap\r\n";
}

std::string scan_csv_row(const CertReport& r) {
  std::string row;
  row += fmt17(r.beta) + "," + fmt17(r.a1) + "," + fmt17(r.a2) + ",";
  row += std::string(r.verdict ? "pass" : "fail") + "," + r.failed_clause + ",";
  row += fmt17(r.cpsd_margin) + "," + fmt17(r.grid_min) + "," + fmt17(r.hessian_max_det) + ",";
  row += fmt17(r.lp_bound4) + "," + fmt17(r.energy_star) + "," + fmt17(r.sharpness_gap) + "\r\n";
  return row;
}

}  // namespace torusopt
