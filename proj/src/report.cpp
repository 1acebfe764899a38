#include "cvxbound/report.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <charconv>
#include <cmath>
#include <numbers>

#ifndef CVXBOUND_VERSION
#define CVXBOUND_VERSION "unknown"
#endif

namespace cvxbound::report {

double unit_factor(bool bits) { return bits ? 1.0 / std::numbers::ln2 : 1.0; }

Json number(double x) { return std::isfinite(x) ? Json(x + 0.0) : Json(nullptr); }

Json to_json(const ConditionReport& c) {
  Json j;
  j["direction"] = to_string(c.direction);
  j["A"] = number(c.A);
  j["condition_i"] = to_string(c.cond_i);
  j["condition_ii"] = to_string(c.cond_ii);
  j["condition_iii"] = to_string(c.cond_iii);
  j["h_n"] = number(c.h_n);
  j["h_0"] = number(c.h_0);
  j["sign_changes"] = c.sign_changes;
  j["overall"] = to_string(c.overall());
  j["note"] = c.note;
  return j;
}

Json to_json(const OracleEstimate& e) {
  Json j;
  j["value"] = number(e.value);
  j["method"] = to_string(e.method);
  j["margin"] = number(e.margin());
  j["converged"] = e.converged;
  switch (e.method) {
    case Method::Quadrature:
      j["abs_tol"] = number(e.abs_tol);
      j["error_estimate"] = number(e.error);
      break;
    case Method::MonteCarlo:
      j["std_error"] = number(e.std_error);
      j["samples"] = e.sample_count;
      j["seed"] = e.seed;
      j["workers"] = e.workers;
      break;
    case Method::ClosedForm:
      break;
  }
  return j;
}

Json to_json(const PropertyResult& p) {
  Json j;
  j["name"] = p.name;
  j["pass"] = p.pass;
  j["margin"] = number(p.margin);
  j["checks"] = p.checks;
  j["expected_fail"] = p.expected_fail;
  j["detail"] = p.detail;
  return j;
}

Json to_json(const BoundResult& r, const Functional& functional, const ConvexityFamily& family, double unit) {
  Json j;
  j["functional"] = functional.describe();
  j["family"] = family.describe();
  j["n"] = r.n;
  j["f_max"] = number(r.f_max);
  j["b"] = number(r.b);
  j["a_n"] = number(r.a_n);
  j["a_0"] = number(r.a_0);
  j["provenance"] = r.provenance;
  j["formula"] = r.formula;
  j["cross_check_deviation"] = r.cross_check_deviation ? number(*r.cross_check_deviation) : Json(nullptr);
  j["conditions"] = {{"upper", to_json(r.upper_conditions)}, {"lower", to_json(r.lower_conditions)}};
  j["evidence"] = to_string(r.evidence());
  if (functional.kind() == FunctionalKind::Entropy) {
    j["lower"] = number(r.lower * unit);
    j["upper"] = number(r.upper * unit);
    j["gap"] = number((r.upper - r.lower) * unit);
  } else {
    j["lower"] = number(r.lower);
    j["upper"] = number(r.upper);
    j["gap"] = number(r.upper - r.lower);
  }
  if (functional.kind() == FunctionalKind::Renyi) {
    const auto [lo, hi] = renyi_entropy_bracket(r, functional.alpha());
    j["renyi_entropy"] = {{"lower", number(lo * unit)}, {"upper", number(hi * unit)}, {"gap", number((hi - lo) * unit)}};
  }
  return j;
}

Json to_json(const CommonInfoBracket& b, double unit) {
  Json j;
  j["n"] = b.n;
  j["beta"] = b.beta == 0 ? Json(nullptr) : Json(b.beta);
  j["mode"] = b.mode;
  j["limit_mode"] = b.limit_mode;
  Json id = to_json(b.i_d);
  id["value"] = number(b.i_d.value * unit);
  if (b.i_d.method == Method::MonteCarlo) id["std_error"] = number(b.i_d.std_error * unit);
  j["i_d"] = id;
  j["g_lower"] = number(b.g_lower * unit);
  j["g_upper"] = number(b.g_upper * unit);
  j["gap"] = number((b.g_upper - b.g_lower) * unit);
  if (b.limit_mode) j["log_concave_gap"] = number(log_concave_gap(b.n) * unit);

  Json th;
  th["t_star"] = number(b.threshold.t_star);
  th["f_max"] = number(b.threshold.f_max);
  th["log_ratio"] = number(b.threshold.log_ratio);
  th["bound"] = number(b.threshold.bound);
  th["holds"] = b.threshold.holds;
  th["chain"] = Json::array();
  for (const auto& link : b.threshold.chain) {
    th["chain"].push_back({{"name", link.name}, {"lhs", number(link.lhs)}, {"rhs", number(link.rhs)},
                           {"holds", link.holds}});
  }
  j["threshold"] = th;

  const auto& a = b.assembly;
  Json as;
  as["truncated_entropy"] = number(a.truncated_entropy * unit);
  as["entropy"] = number(a.entropy * unit);
  as["first_term"] = {{"lhs", number(a.first_term_lhs * unit)},
                      {"rhs", number(a.first_term_rhs * unit)},
                      {"holds", a.first_term_holds}};
  as["slices"] = Json::array();
  for (const auto& s : a.slices) {
    as["slices"].push_back({{"coordinate", s.coordinate},
                            {"log_integral_of_sup", number(s.log_integral_of_sup * unit)},
                            {"via_marginal_sup", number(s.via_marginal_sup * unit)},
                            {"bound", number(s.bound * unit)},
                            {"holds", s.holds}});
  }
  as["constant"] = number(a.constant * unit);
  as["covering_rhs"] = number(a.covering_rhs * unit);
  as["assembled"] = number(a.assembled * unit);
  as["assembled_worst_case"] = number(a.assembled_worst * unit);
  as["assembled_within_gap"] = a.assembled_within_gap;
  as["tolerance"] = number(a.tolerance * unit);
  j["assembly"] = as;
  return j;
}

Json envelope(const std::string& command, Json config_echo, Json results, Json properties, Json diagnostics) {
  Json j;
  j["command"] = command;
  j["config_echo"] = std::move(config_echo);
  j["results"] = results.is_null() ? Json::array() : std::move(results);
  j["properties"] = properties.is_null() ? Json::array() : std::move(properties);
  j["diagnostics"] = diagnostics.is_null() ? Json::object() : std::move(diagnostics);
  j["versions"] = {
      {"cvxbound", CVXBOUND_VERSION},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                    std::to_string(BOOST_VERSION % 100)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
      {"cli11", CLI11_VERSION},
  };
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  x += 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  return out;
}

}  // namespace cvxbound::report
