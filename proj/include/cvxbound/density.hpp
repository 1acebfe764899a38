#pragma once

// Concrete psi-concave densities: the two extremal shapes (linear g on the
// orthant, uniform box) and parametric families used by the oracle and the
// common-information pipeline.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cvxbound/model.hpp"

namespace cvxbound {

/// f(x) = psi(b + lambda * (x_1 + ... + x_n)) on the closed nonnegative orthant.
struct ExtremalLinear {
  double b;
  double lambda;
};

/// f(x) = f_max on [0, f_max^(-1/n)]^n.
struct UniformBox {
  double side;
};

/// g(x) = offset + (x - center)' Q (x - center), Q positive definite.
struct QuadraticG {
  Eigen::MatrixXd Q;
  Eigen::VectorXd center;
  double offset;
};

struct AffinePiece {
  Eigen::VectorXd slope;
  double intercept;
};

/// g(x) = max_j (slope_j . x + intercept_j).
struct MaxAffineG {
  std::vector<AffinePiece> pieces;
};

/// Student-t with nu degrees of freedom and scale matrix Sigma; beta-concave
/// with beta = (nu + n) / 2.
struct MultivariateT {
  double nu;
  Eigen::MatrixXd scale;
};

/// Centered Gaussian with covariance Sigma; log-concave.
struct Gaussian {
  Eigen::MatrixXd cov;
};

using DensityForm = std::variant<ExtremalLinear, UniformBox, QuadraticG, MaxAffineG, MultivariateT, Gaussian>;

class DensitySpec {
 public:
  const ConvexityFamily& family() const { return family_; }
  int dimension() const { return n_; }
  const DensityForm& form() const { return form_; }
  double f_max() const { return f_max_; }
  std::string form_name() const;

  /// A point where f attains f_max.
  const std::vector<double>& mode() const { return mode_; }

  double eval(std::span<const double> x) const;
  /// log f(x); -inf outside the support.
  double log_eval(std::span<const double> x) const;
  /// psi^-1(f(x)), +inf outside the support.
  double g(std::span<const double> x) const;

  /// Quadratic form x' P x for elliptical forms (P = inverse scale).
  const Eigen::MatrixXd& precision() const { return precision_; }
  /// log of the normalizing constant of elliptical forms.
  double log_norm() const { return log_norm_; }

 private:
  DensitySpec(ConvexityFamily family, int n, DensityForm form);

  double quadratic(const Eigen::MatrixXd& m, std::span<const double> x,
                   const Eigen::VectorXd* center = nullptr) const;

  ConvexityFamily family_;
  int n_;
  DensityForm form_;
  double f_max_ = 0.0;
  std::vector<double> mode_;
  Eigen::MatrixXd precision_;
  double log_norm_ = 0.0;
  double g_scale_ = 1.0;

  friend DensitySpec make_extremal_linear(const ConvexityFamily&, int, double);
  friend DensitySpec make_uniform_box(const ConvexityFamily&, int, double);
  friend DensitySpec make_quadratic(const ConvexityFamily&, Eigen::MatrixXd, Eigen::VectorXd, double);
  friend DensitySpec make_max_affine(const ConvexityFamily&, std::vector<AffinePiece>);
  friend DensitySpec make_multivariate_t(double, Eigen::MatrixXd);
  friend DensitySpec make_gaussian(Eigen::MatrixXd);
};

/// Extremal density for the upper bound: b = psi^-1(f_max), lambda = G_n(b)^(1/n).
/// Throws NonIntegrable when G_n(b) diverges (beta <= n).
DensitySpec make_extremal_linear(const ConvexityFamily& family, int n, double f_max);

/// Extremal density for the lower bound.
DensitySpec make_uniform_box(const ConvexityFamily& family, int n, double f_max);

/// Normalized density psi(offset' + (x-c)' Q' (x-c)); the normalizer is
/// absorbed into (offset, Q). Built-in families only.
DensitySpec make_quadratic(const ConvexityFamily& family, Eigen::MatrixXd Q, Eigen::VectorXd center,
                           double offset = 1.0);

/// Normalized density psi(max_j a_j.x + c_j), n in {1, 2}. The slopes must
/// make g coercive, and for beta-concave families min g must be positive.
DensitySpec make_max_affine(const ConvexityFamily& family, std::vector<AffinePiece> pieces);

DensitySpec make_multivariate_t(double nu, Eigen::MatrixXd scale);
DensitySpec make_gaussian(Eigen::MatrixXd cov);

/// f(x); zero outside the support.
double density_eval(const DensitySpec& spec, std::span<const double> x);

/// Marginal of an elliptical (Gaussian or Student-t) spec with coordinate i removed.
DensitySpec drop_coordinate(const DensitySpec& spec, int i);

/// Upper envelope of lines y = slope * x + intercept on the real line.
/// lines[i] is active on [breaks[i-1], breaks[i]] (with -inf, +inf at the ends).
struct Envelope1D {
  std::vector<double> breaks;
  std::vector<std::pair<double, double>> lines;  // (slope, intercept)
};
Envelope1D upper_envelope(std::vector<std::pair<double, double>> lines);

/// Vertices of a 2-D max-affine function (points where three pieces are active).
std::vector<Eigen::Vector2d> max_affine_vertices(const MaxAffineG& g);

/// Minimizer and minimum of a coercive max-affine function in dimension 1 or 2.
std::pair<Eigen::VectorXd, double> max_affine_minimum(const MaxAffineG& g, int n);

}  // namespace cvxbound
