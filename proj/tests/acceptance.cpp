// Prints one PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cvxbound/cli.hpp"
#include "cvxbound/common_info.hpp"
#include "cvxbound/verify.hpp"

using namespace cvxbound;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  std::printf("%s %d %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
              o.detail.empty() ? "" : " ", o.detail.c_str());
  std::fflush(stdout);
}

void absorb(Outcome& o, const PropertyResult& p) {
  o.require(p.pass, p.name + " margin " + std::to_string(p.margin) + (p.detail.empty() ? "" : " " + p.detail));
}

std::string run_cli_capture(const std::vector<std::string>& args, int& code) {
  std::vector<const char*> argv{"cvxbound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

Eigen::MatrixXd equicorrelation(int n, double rho) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Constant(n, n, rho);
  S.diagonal().setOnes();
  return S;
}

}  // namespace

int main() {
  report(1, "closed-form bound reproduction", [] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    absorb(o, closed_form_reproduction(1e-6));
    o.require(seconds_since(t0) < 60.0, "runtime over one minute");
    return o;
  });

  report(2, "extremal attainment", [] {
    Outcome o;
    absorb(o, extremal_attainment(1e-6));
    return o;
  });

  report(3, "containment property suite", [] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    ContainmentConfig cfg;
    cfg.per_combination = 200;
    long checks = 0;
    for (const auto& p : containment(cfg)) {
      absorb(o, p);
      checks += p.checks;
    }
    o.require(checks >= 200L * 6 * 2, "fewer than 200 densities per combination");
    o.require(seconds_since(t0) < 600.0, "runtime over ten minutes");
    return o;
  });

  report(4, "counterexample soundness", [] {
    Outcome o;
    absorb(o, counterexample_soundness(0.05, 0.04));
    return o;
  });

  report(5, "identity suite", [] {
    Outcome o;
    for (const auto& p : identity_suite()) absorb(o, p);
    return o;
  });

  report(6, "limit degenerations", [] {
    Outcome o;
    for (const auto& p : limit_degenerations()) absorb(o, p);
    return o;
  });

  report(7, "common-information bracket", [] {
    Outcome o;
    for (int n : {2, 3}) {
      const auto b = g_bracket(make_joint_model(make_multivariate_t(3.0 * n, equicorrelation(n, 0.3))));
      const double expected = 2.0 * n * n + 20.0 * n * std::log(n);
      o.require(std::abs((b.g_upper - b.g_lower) - expected) <= 4.0 * std::numeric_limits<double>::epsilon() * expected,
                "gap mismatch at n=" + std::to_string(n));
      o.require(b.threshold.holds, "log ratio above 6n at n=" + std::to_string(n));
      for (const auto& link : b.threshold.chain) o.require(link.holds, "chain link " + link.name);
      o.require(b.assembly.first_term_holds, "truncated entropy term at n=" + std::to_string(n));
      for (const auto& s : b.assembly.slices) o.require(s.holds, "slice term " + std::to_string(s.coordinate));
      o.require(b.assembly.assembled_within_gap, "assembled bound exceeds gap at n=" + std::to_string(n));
    }
    o.require(std::abs(common_info_gap(2) - 35.726) < 5e-4, "gap at n=2 is not 35.726");
    const auto gauss = g_bracket(make_joint_model(make_gaussian(equicorrelation(2, 0.5))));
    o.require(std::abs(gauss.i_d.value + 0.5 * std::log(0.75)) <= 1e-6, "Gaussian mutual information");
    o.require(gauss.threshold.holds, "log ratio above 6n for the Gaussian model");
    return o;
  });

  report(8, "determinism", [] {
    Outcome o;
    const std::vector<std::vector<std::string>> runs{
        {"verify", "--suites", "containment,monte-carlo", "--count", "20", "--samples", "20000", "--workers", "3",
         "--seed", "11"},
        {"common-info", "--model", "mvt", "-n", "2", "--nu", "6", "--rho", "0.4", "--method", "monte-carlo",
         "--samples", "50000", "--workers", "4", "--seed", "11"},
        {"common-info", "--model", "gaussian", "-n", "3", "--rho", "0.5"}};
    for (const auto& args : runs) {
      int c1 = 0, c2 = 0;
      const std::string a = run_cli_capture(args, c1);
      const std::string b = run_cli_capture(args, c2);
      o.require(c1 == 0 && c2 == 0, args[0] + " exited with " + std::to_string(c1));
      o.require(a == b && !a.empty(), args[0] + " output differs between runs");
    }
    return o;
  });
  return 0;
}
