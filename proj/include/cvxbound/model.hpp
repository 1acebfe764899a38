#pragma once

// Convexity families (the psi model) and density functionals (the phi model).
//
// A density f is psi-concave when f = psi(g) for a convex g. The two built-in
// families are log-concave (psi(x) = exp(-x)) and beta-concave
// (psi(x) = x^-beta on (0, inf)). Functionals are I_phi(f) = int phi(f(x)) dx
// with phi(0) = 0.

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace cvxbound {

using ScalarFn = std::function<double(double)>;

/// Closed-form k-fold antiderivative provider: (k, x) -> G_k(x).
using AntiderivativeFn = std::function<double(int, double)>;

enum class FamilyKind { LogConcave, BetaConcave, Custom };

class ConvexityFamily {
 public:
  static ConvexityFamily log_concave();
  static ConvexityFamily beta_concave(double beta);

  /// A user family. psi must be continuous, strictly decreasing on
  /// (domain_left, inf) and vanish at infinity; psi_inv must be its inverse.
  /// Both are spot-checked on a grid and rejected on failure.
  static ConvexityFamily custom(std::string name, ScalarFn psi, ScalarFn psi_inv,
                                double domain_left = -std::numeric_limits<double>::infinity(),
                                AntiderivativeFn closed_form_g = {});

  FamilyKind kind() const { return kind_; }
  bool is_builtin() const { return kind_ != FamilyKind::Custom; }
  const std::string& name() const { return name_; }

  /// Exponent of a beta-concave family; throws for other kinds.
  double beta() const;

  double psi(double x) const;
  double psi_inv(double y) const;
  double domain_left() const { return domain_left_; }

  /// True when G_k has a closed form (always for log-concave; beta > k for
  /// beta-concave; custom only if a provider was supplied).
  bool has_closed_form_g(int k) const;

  /// Closed-form G_k(x). Throws NoClosedForm or NonIntegrable.
  double closed_form_g(int k, double x) const;

  /// Length scale over which psi decays near x; used to seed quadrature.
  double decay_scale(double x) const;

  std::string describe() const;

 private:
  ConvexityFamily() = default;

  FamilyKind kind_ = FamilyKind::LogConcave;
  std::string name_;
  double beta_ = 0.0;
  double domain_left_ = -std::numeric_limits<double>::infinity();
  ScalarFn psi_;
  ScalarFn psi_inv_;
  AntiderivativeFn closed_form_g_;
};

enum class FunctionalKind { Entropy, Renyi, Truncation, Custom };

class Functional {
 public:
  /// phi(x) = -x log x.
  static Functional entropy();
  /// phi(x) = x^alpha, alpha > 0 and alpha != 1.
  static Functional renyi(double alpha);
  /// phi(x) = min(x, t), t > 0.
  static Functional truncation(double t);
  /// User phi with phi(0) = 0. `kink` is a density level where phi is not
  /// differentiable (quadrature splits there).
  static Functional custom(std::string name, ScalarFn phi, ScalarFn phi_prime,
                           std::optional<double> kink = std::nullopt);

  FunctionalKind kind() const { return kind_; }
  bool is_builtin() const { return kind_ != FunctionalKind::Custom; }
  const std::string& name() const { return name_; }

  double alpha() const;
  double threshold() const;
  std::optional<double> kink() const { return kink_; }

  double phi(double x) const;
  double phi_prime(double x) const;

  std::string describe() const;

 private:
  Functional() = default;

  FunctionalKind kind_ = FunctionalKind::Entropy;
  std::string name_;
  double param_ = 0.0;
  std::optional<double> kink_;
  ScalarFn phi_;
  ScalarFn phi_prime_;
};

/// Generic factory mirroring the command-line vocabulary:
/// "log-concave" | "beta-concave".
ConvexityFamily make_family(FamilyKind kind, double beta = 0.0);

}  // namespace cvxbound
