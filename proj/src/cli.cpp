#include "cvxbound/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvxbound/bounds.hpp"
#include "cvxbound/common_info.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/report.hpp"
#include "cvxbound/verify.hpp"

namespace cvxbound {
namespace {

using report::Json;

struct RunConfig {
  std::string command;
  std::string functional = "entropy";
  double alpha = 2.0;
  double t = 0.5;
  std::string family = "log-concave";
  double beta = 0.0;
  int n = 1;
  double f_max = 1.0;
  std::optional<double> tol;
  long long samples = 1'000'000;
  std::uint64_t seed = 20240611;
  int workers = 1;
  std::string method = "auto";
  std::string format;
  bool bits = false;
  bool force_quadrature = false;
  // verify
  std::string inject;
  double epsilon = 0.05;
  int count = 200;
  std::string suites = "all";
  // common-info
  std::string model = "gaussian";
  double rho = 0.0;
  double nu = 0.0;
  bool limit_mode = false;
  // table
  std::string ns, betas, alphas, ts;
};

Functional make_functional(const RunConfig& c) {
  if (c.functional == "entropy") return Functional::entropy();
  if (c.functional == "renyi") return Functional::renyi(c.alpha);
  if (c.functional == "truncation") return Functional::truncation(c.t);
  throw InvalidArgument("unknown functional " + c.functional);
}

ConvexityFamily make_family_of(const RunConfig& c) {
  if (c.family == "log-concave") return ConvexityFamily::log_concave();
  if (c.family == "beta-concave") {
    if (!(c.beta > 0.0)) throw InvalidArgument("beta-concave family needs --beta > 0");
    return ConvexityFamily::beta_concave(c.beta);
  }
  throw InvalidArgument("unknown family " + c.family);
}

Budget make_budget(const RunConfig& c) {
  Budget b;
  b.abs_tol = c.tol;
  b.samples = c.samples;
  b.seed = c.seed;
  b.workers = c.workers;
  if (c.method == "quadrature") b.method = Method::Quadrature;
  if (c.method == "monte-carlo") b.method = Method::MonteCarlo;
  return b;
}

void validate_common(const RunConfig& c) {
  if (c.n < 1) throw InvalidArgument("-n must be >= 1");
  if (!(c.f_max > 0.0) || !std::isfinite(c.f_max)) throw InvalidArgument("--fmax must be positive and finite");
  if (c.tol && !(*c.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (c.samples < 2) throw InvalidArgument("--samples must be >= 2");
  if (c.workers < 1) throw InvalidArgument("--workers must be >= 1");
}

Json config_echo(const RunConfig& c) {
  Json j;
  j["functional"] = c.functional;
  j["alpha"] = c.alpha;
  j["t"] = c.t;
  j["family"] = c.family;
  j["beta"] = c.beta;
  j["n"] = c.n;
  j["fmax"] = c.f_max;
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["method"] = c.method;
  j["units"] = c.bits ? "bits" : "nats";
  j["force_quadrature"] = c.force_quadrature;
  if (c.command == "verify") {
    j["inject_violation"] = c.inject;
    j["epsilon"] = c.epsilon;
    j["count"] = c.count;
    j["suites"] = c.suites;
  } else if (c.command == "common-info") {
    j["model"] = c.model;
    j["rho"] = c.rho;
    j["nu"] = c.nu;
    j["limit_mode"] = c.limit_mode;
  } else if (c.command == "table") {
    j["ns"] = c.ns;
    j["betas"] = c.betas;
    j["alphas"] = c.alphas;
    j["ts"] = c.ts;
  }
  return j;
}

std::string fmt(double x) { return report::format_number(x); }

// "a,b,c", "lo:hi" (step 1), "lo:hi:step" or "lo:hi:xK" (geometric, factor K).
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  const auto num = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
    return v;
  };
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ps(tok);
    std::string p;
    while (std::getline(ps, p, ':')) parts.push_back(p);
    if (parts.size() == 1) {
      out.push_back(num(parts[0]));
      continue;
    }
    if (parts.size() > 3) throw InvalidArgument("bad range '" + tok + "'");
    const double lo = num(parts[0]);
    const double hi = num(parts[1]);
    const bool geometric = parts.size() == 3 && !parts[2].empty() && parts[2][0] == 'x';
    const double step = parts.size() == 3 ? num(geometric ? parts[2].substr(1) : parts[2]) : 1.0;
    if (geometric ? !(step > 1.0 && lo > 0.0) : !(step > 0.0)) throw InvalidArgument("bad step in '" + tok + "'");
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    if (geometric) {
      for (double v = lo; v <= hi * (1.0 + 1e-9); v *= step) out.push_back(v);
    } else {
      for (long k = 0;; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v > hi + slack) break;
        out.push_back(v);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Outcome {
  Json results = Json::array();
  Json properties = Json::array();
  Json diagnostics = Json::object();
  int exit_code = kExitOk;
  std::string text;  // text format body
  std::vector<std::vector<std::string>> csv;  // header first
};

Outcome cmd_bounds(const RunConfig& c) {
  validate_common(c);
  const Functional phi = make_functional(c);
  const ConvexityFamily psi = make_family_of(c);
  BoundOptions opt;
  opt.force_quadrature = c.force_quadrature;
  if (c.tol) opt.tol = *c.tol;
  const BoundResult r = tight_bounds(phi, psi, c.n, c.f_max, opt);
  const double unit = report::unit_factor(c.bits);

  Outcome o;
  Json j = report::to_json(r, phi, psi, unit);
  o.results.push_back(j);
  o.diagnostics["units"] = c.bits ? "bits" : "nats";
  if (r.evidence() == Evidence::Unverified) o.exit_code = kExitUnverified;

  std::ostringstream t;
  t << phi.describe() << " on " << psi.describe() << ", n=" << c.n << ", f_max=" << fmt(c.f_max) << "\n";
  t << "lower      " << fmt(j["lower"].get<double>()) << "\n";
  t << "upper      " << fmt(j["upper"].get<double>()) << "\n";
  if (j.contains("renyi_entropy")) {
    t << "renyi h    [" << fmt(j["renyi_entropy"]["lower"].get<double>()) << ", "
      << fmt(j["renyi_entropy"]["upper"].get<double>()) << "]\n";
  }
  t << "a_n, a_0   " << fmt(r.a_n) << ", " << fmt(r.a_0) << "\n";
  t << "provenance " << r.provenance << (r.formula.empty() ? "" : " (" + r.formula + ")") << "\n";
  t << "evidence   " << to_string(r.evidence()) << "\n";
  o.text = t.str();

  o.csv = {{"functional", "family", "n", "f_max", "lower", "upper", "a_n", "a_0", "provenance", "evidence"},
           {phi.describe(), psi.describe(), std::to_string(c.n), fmt(c.f_max), fmt(j["lower"].get<double>()),
            fmt(j["upper"].get<double>()), fmt(r.a_n), fmt(r.a_0), r.provenance, to_string(r.evidence())}};
  return o;
}

Outcome cmd_verify(const RunConfig& c) {
  validate_common(c);
  if (c.count < 1) throw InvalidArgument("--count must be >= 1");
  if (!(c.epsilon > 0.0)) throw InvalidArgument("--epsilon must be positive");
  if (!c.inject.empty() && c.inject != "A-minus-epsilon") {
    throw InvalidArgument("unknown violation '" + c.inject + "' (expected A-minus-epsilon)");
  }
  const Functional phi = make_functional(c);
  const ConvexityFamily psi = make_family_of(c);
  build_table(phi, psi, c.n, c.f_max);  // range validation for the configured pair

  static const std::vector<std::string> all = {"identities", "limits",      "reproduction", "attainment",
                                               "counterexamples", "containment", "monte-carlo", "configured"};
  std::set<std::string> chosen;
  std::stringstream ss(c.suites);
  std::string s;
  while (std::getline(ss, s, ',')) {
    if (s == "all") {
      chosen.insert(all.begin(), all.end());
    } else if (std::find(all.begin(), all.end(), s) != all.end()) {
      chosen.insert(s);
    } else if (!s.empty()) {
      throw InvalidArgument("unknown suite '" + s + "'");
    }
  }
  if (chosen.empty() && c.inject.empty()) throw InvalidArgument("no suites selected");

  const Budget budget = make_budget(c);
  std::vector<PropertyResult> props;
  const auto add = [&](std::vector<PropertyResult> v) { props.insert(props.end(), v.begin(), v.end()); };
  if (chosen.count("identities")) add(identity_suite());
  if (chosen.count("limits")) add(limit_degenerations());
  if (chosen.count("reproduction")) props.push_back(closed_form_reproduction());
  if (chosen.count("attainment")) props.push_back(extremal_attainment());
  if (chosen.count("counterexamples")) props.push_back(counterexample_soundness());
  if (chosen.count("containment")) {
    ContainmentConfig cc;
    cc.per_combination = c.count;
    cc.seed = c.seed;
    cc.budget = budget;
    add(containment(cc));
  }
  if (chosen.count("monte-carlo")) props.push_back(mc_quadrature_agreement(budget));
  if (chosen.count("configured")) {
    PropertyResult p;
    p.name = "configured pair bracket";
    BoundOptions opt;
    opt.force_quadrature = c.force_quadrature;
    const BoundResult r = tight_bounds(phi, psi, c.n, c.f_max, opt);
    p.checks = 1;
    p.detail = "evidence " + std::string(to_string(r.evidence()));
    p.margin = r.cross_check_deviation ? 1e-6 - *r.cross_check_deviation : 0.0;
    p.pass = r.evidence() != Evidence::Violated && p.margin >= 0.0;
    if (c.n <= 2) {
      Budget q = budget;
      q.method = Method::Quadrature;
      const double tol = c.n == 1 ? 1e-8 : 1e-6;
      q.abs_tol = tol * 1e-2;
      const double ext = integrate_functional(make_extremal_linear(psi, c.n, c.f_max), phi, q).value;
      const double box = integrate_functional(make_uniform_box(psi, c.n, c.f_max), phi, q).value;
      const double m = tol - std::max(std::abs(ext - r.a_n), std::abs(box - r.a_0));
      p.checks += 2;
      p.margin = std::min(p.margin, m);
      p.pass = p.pass && m >= 0.0;
      p.detail += ", orthant I=" + fmt(ext) + ", box I=" + fmt(box);
    }
    props.push_back(p);
  }
  if (!c.inject.empty()) props.push_back(injected_violation(phi, psi, c.n, c.f_max, c.epsilon));

  Outcome o;
  std::ostringstream t;
  bool all_pass = true;
  o.csv.push_back({"name", "pass", "margin", "checks", "expected_fail", "detail"});
  for (const auto& p : props) {
    o.properties.push_back(report::to_json(p));
    all_pass = all_pass && p.pass;
    t << (p.pass ? "PASS " : "FAIL ") << p.name << (p.expected_fail ? " (expected fail)" : "")
      << "  margin=" << fmt(p.margin) << "  checks=" << p.checks << "\n";
    o.csv.push_back({p.name, p.pass ? "true" : "false", fmt(p.margin), std::to_string(p.checks),
                     p.expected_fail ? "true" : "false", p.detail});
  }
  o.text = t.str();
  o.diagnostics["property_count"] = props.size();
  o.diagnostics["containment_per_combination"] = c.count;
  o.exit_code = all_pass ? kExitOk : kExitPropertyFailure;
  return o;
}

Eigen::MatrixXd equicorrelation(int n, double rho) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, rho);
  m.diagonal().setOnes();
  return m;
}

Outcome cmd_common_info(const RunConfig& c) {
  validate_common(c);
  const int n = c.n == 1 ? 2 : c.n;
  if (!(c.rho > -1.0 / (n - 1)) || !(c.rho < 1.0)) throw InvalidArgument("--rho must lie in (-1/(n-1), 1)");
  DensitySpec spec = [&] {
    if (c.model == "gaussian") return make_gaussian(equicorrelation(n, c.rho));
    if (c.model == "mvt") {
      if (!(c.nu > 0.0)) throw InvalidArgument("mvt model needs --nu > 0");
      return make_multivariate_t(c.nu, equicorrelation(n, c.rho));
    }
    throw InvalidArgument("unknown model " + c.model);
  }();
  const JointDensityModel model = make_joint_model(spec, c.limit_mode);
  const Budget budget = make_budget(c);
  const CommonInfoBracket b = g_bracket(model, budget);
  const double unit = report::unit_factor(c.bits);

  Outcome o;
  o.results.push_back(report::to_json(b, unit));
  o.diagnostics["units"] = c.bits ? "bits" : "nats";
  o.diagnostics["dimension"] = n;

  bool ok = true;
  const auto prop = [&](const std::string& name, double margin, bool pass) {
    PropertyResult p;
    p.name = name;
    p.margin = margin;
    p.pass = pass;
    p.checks = 1;
    o.properties.push_back(report::to_json(p));
    ok = ok && pass;
  };
  prop("threshold ratio log(f_max/t*) <= 6n", b.threshold.bound - b.threshold.log_ratio, b.threshold.holds);
  for (const auto& link : b.threshold.chain) prop("chain: " + link.name, link.rhs - link.lhs, link.holds);
  const auto& a = b.assembly;
  prop("truncated entropy term", a.first_term_rhs - a.first_term_lhs, a.first_term_holds);
  for (const auto& s : a.slices) {
    prop("slice term " + std::to_string(s.coordinate), s.bound - s.log_integral_of_sup, s.holds);
  }
  prop("assembled bound within gap", a.g_upper_raw - a.assembled, a.assembled_within_gap);
  o.exit_code = ok ? kExitOk : kExitPropertyFailure;

  std::ostringstream t;
  t << "mode      " << b.mode << "\n";
  t << "I_D       " << fmt(b.i_d.value * unit) << "\n";
  t << "G bracket [" << fmt(b.g_lower * unit) << ", " << fmt(b.g_upper * unit) << "]\n";
  t << "gap       " << fmt((b.g_upper - b.g_lower) * unit) << "\n";
  t << "t*        " << fmt(b.threshold.t_star) << "  log ratio " << fmt(b.threshold.log_ratio) << "\n";
  o.text = t.str();
  o.csv = {{"model", "n", "beta", "mode", "i_d", "g_lower", "g_upper", "gap", "t_star", "log_ratio"},
           {c.model, std::to_string(n), std::to_string(b.beta), b.mode, fmt(b.i_d.value * unit),
            fmt(b.g_lower * unit), fmt(b.g_upper * unit), fmt((b.g_upper - b.g_lower) * unit),
            fmt(b.threshold.t_star), fmt(b.threshold.log_ratio)}};
  return o;
}

// Entropy-scale gap of the bracket for entropy and Renyi, plain gap otherwise.
double sweep_gap(const BoundResult& r, const Functional& phi, double unit) {
  if (phi.kind() == FunctionalKind::Entropy) return (r.upper - r.lower) * unit;
  if (phi.kind() == FunctionalKind::Renyi) {
    const auto [lo, hi] = renyi_entropy_bracket(r, phi.alpha());
    return (hi - lo) * unit;
  }
  return r.upper - r.lower;
}

Outcome cmd_table(const RunConfig& c) {
  validate_common(c);
  make_functional(c);
  const auto list_or = [](const std::string& text, double fallback) {
    return text.empty() ? std::vector<double>{fallback} : parse_list(text);
  };
  const std::vector<double> ns = list_or(c.ns, c.n);
  const bool beta_family = c.family == "beta-concave";
  if (c.family != "log-concave" && !beta_family) throw InvalidArgument("unknown family " + c.family);
  const std::vector<double> betas = beta_family ? list_or(c.betas, c.beta) : std::vector<double>{0.0};
  const std::vector<double> alphas = c.functional == "renyi" ? list_or(c.alphas, c.alpha) : std::vector<double>{0.0};
  const std::vector<double> ts = c.functional == "truncation" ? list_or(c.ts, c.t) : std::vector<double>{0.0};
  if (ns.empty() || betas.empty() || alphas.empty() || ts.empty()) throw InvalidArgument("empty sweep");

  const double unit = report::unit_factor(c.bits);
  Outcome o;
  o.csv.push_back({"functional", "family", "n", "beta", "alpha", "t", "f_max", "lower", "upper", "gap",
                   "limit_beta_inf", "limit_alpha_1"});
  long skipped = 0;
  for (double nd : ns) {
    const int n = static_cast<int>(nd);
    if (nd != n || n < 1) throw InvalidArgument("sweep dimensions must be positive integers");
    for (double beta : betas) {
      for (double alpha : alphas) {
        for (double t : ts) {
          RunConfig rc = c;
          rc.n = n;
          rc.beta = beta;
          rc.alpha = alpha;
          rc.t = t;
          try {
            const Functional phi = make_functional(rc);
            const ConvexityFamily psi = make_family_of(rc);
            const BoundResult r = closed_form_bounds(phi, psi, n, c.f_max);
            const BoundResult lc = closed_form_bounds(phi, ConvexityFamily::log_concave(), n, c.f_max);
            const double gap = sweep_gap(r, phi, unit);
            const double limit_beta = sweep_gap(lc, phi, unit);
            std::optional<double> limit_alpha;
            if (phi.kind() != FunctionalKind::Truncation) {
              const BoundResult e = closed_form_bounds(Functional::entropy(), psi, n, c.f_max);
              limit_alpha = (e.upper - e.lower) * unit;
            }
            const bool entropy = phi.kind() == FunctionalKind::Entropy;
            const double lower = entropy ? r.lower * unit : r.lower;
            const double upper = entropy ? r.upper * unit : r.upper;
            o.csv.push_back({c.functional, c.family, std::to_string(n), beta_family ? fmt(beta) : "",
                             c.functional == "renyi" ? fmt(alpha) : "", c.functional == "truncation" ? fmt(t) : "",
                             fmt(c.f_max), fmt(lower), fmt(upper), fmt(gap), fmt(limit_beta),
                             limit_alpha ? fmt(*limit_alpha) : ""});
            Json row;
            row["n"] = n;
            row["beta"] = beta_family ? Json(beta) : Json(nullptr);
            row["alpha"] = c.functional == "renyi" ? Json(alpha) : Json(nullptr);
            row["t"] = c.functional == "truncation" ? Json(t) : Json(nullptr);
            row["f_max"] = c.f_max;
            row["lower"] = report::number(lower);
            row["upper"] = report::number(upper);
            row["gap"] = report::number(gap);
            row["limit_beta_inf"] = report::number(limit_beta);
            row["limit_alpha_1"] = limit_alpha ? report::number(*limit_alpha) : Json(nullptr);
            o.results.push_back(row);
          } catch (const InvalidArgument&) {
            ++skipped;
          } catch (const NonIntegrable&) {
            ++skipped;
          }
        }
      }
    }
  }
  if (o.results.empty()) throw InvalidArgument("empty sweep: no parameter combination is in range");
  o.diagnostics["rows"] = o.results.size();
  o.diagnostics["skipped_out_of_range"] = skipped;
  o.diagnostics["units"] = c.bits ? "bits" : "nats";
  std::ostringstream t;
  for (const auto& row : o.csv) t << report::csv_row(row) << "\n";
  o.text = t.str();
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Tight bounds on density functionals over psi-concave densities", "cvxbound"};
  app.set_config("--config", "", "Flat key = value file with option names as keys");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  const std::vector<std::string> functionals{"entropy", "renyi", "truncation"};
  const std::vector<std::string> families{"log-concave", "beta-concave"};
  app.add_option("--functional", c.functional, "entropy | renyi | truncation")
      ->check(CLI::IsMember(functionals));
  app.add_option("--alpha", c.alpha, "Renyi order");
  app.add_option("--t", c.t, "Truncation level");
  app.add_option("--family", c.family, "log-concave | beta-concave")->check(CLI::IsMember(families));
  app.add_option("--beta", c.beta, "Beta-concavity exponent");
  app.add_option("-n,--dim", c.n, "Dimension");
  app.add_option("--fmax", c.f_max, "Sup-norm of the density");
  app.add_option("--tol", c.tol, "Absolute tolerance override");
  app.add_option("--samples", c.samples, "Monte Carlo sample budget");
  app.add_option("--seed", c.seed, "Random seed")->envname(kSeedEnv);
  app.add_option("--workers", c.workers, "Monte Carlo worker threads");
  app.add_option("--method", c.method, "auto | quadrature | monte-carlo")
      ->check(CLI::IsMember({"auto", "quadrature", "monte-carlo"}));
  app.add_option("--format", c.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--bits", c.bits, "Report entropy-valued quantities in bits");
  app.add_flag("--force-quadrature", c.force_quadrature, "Use the antiderivative quadrature path");
  app.add_option("--inject-violation", c.inject, "A-minus-epsilon");
  app.add_option("--epsilon", c.epsilon, "Offset for the injected violation");
  app.add_option("--count", c.count, "Random densities per containment combination");
  app.add_option("--suites", c.suites, "Comma list of verify suites or 'all'");
  app.add_option("--model", c.model, "gaussian | mvt")->check(CLI::IsMember({"gaussian", "mvt"}));
  app.add_option("--rho", c.rho, "Equicorrelation of the joint model");
  app.add_option("--nu", c.nu, "Degrees of freedom of the Student-t model");
  app.add_flag("--limit-mode", c.limit_mode, "Allow the beta-to-infinity heuristic bracket");
  app.add_option("--ns", c.ns, "Sweep over n");
  app.add_option("--betas", c.betas, "Sweep over beta");
  app.add_option("--alphas", c.alphas, "Sweep over alpha");
  app.add_option("--ts", c.ts, "Sweep over t");

  for (const char* name : {"bounds", "verify", "common-info", "table"}) {
    app.add_subcommand(name)->fallthrough()->callback([&c, name] { c.command = name; });
  }
  app.get_subcommand("bounds")->description("Tight bracket for one functional, family, n and f_max");
  app.get_subcommand("verify")->description("Run the property suites against the oracle");
  app.get_subcommand("common-info")->description("Bracket the exact common information of a joint model");
  app.get_subcommand("table")->description("CSV sweep of the closed-form brackets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  Outcome o;
  try {
    if (c.command == "bounds") o = cmd_bounds(c);
    if (c.command == "verify") o = cmd_verify(c);
    if (c.command == "common-info") o = cmd_common_info(c);
    if (c.command == "table") o = cmd_table(c);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NonIntegrable& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NoClosedForm& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const ConditionFailed& e) {
    err << "condition failed: " << e.what() << "\n";
    return kExitPropertyFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPropertyFailure;
  }

  const std::string format = c.format.empty() ? (c.command == "table" ? "csv" : "json") : c.format;
  if (format == "json") {
    out << report::envelope(c.command, config_echo(c), o.results, o.properties, o.diagnostics).dump(2) << "\n";
  } else if (format == "csv") {
    for (const auto& row : o.csv) out << report::csv_row(row) << "\n";
  } else {
    out << o.text;
  }
  return o.exit_code;
}

}  // namespace cvxbound
