#pragma once

// Samplers for the density forms. Forms with a known stochastic
// representation are sampled exactly; the rest use an importance proposal.

#include <cstdint>
#include <memory>
#include <random>
#include <span>

#include "cvxbound/density.hpp"

namespace cvxbound {

using Rng = std::mt19937_64;

/// splitmix64 finalizer applied to seed + worker * golden-ratio constant.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t worker);

class Sampler {
 public:
  virtual ~Sampler() = default;

  /// Writes one draw into x (size = dimension).
  virtual void draw(Rng& rng, std::span<double> x) const = 0;

  /// log of the proposal density; equals log f for exact samplers.
  virtual double log_q(std::span<const double> x) const = 0;

  /// True when draws follow f itself.
  virtual bool exact() const = 0;

  virtual const char* name() const = 0;
};

/// Exact sampler when the form allows it:
///   orthant extremal: S - b ~ Gamma(n, 1) (log-concave) or b / (1 - U), U ~ Beta(n, beta - n)
///     (beta-concave), tabulated inverse CDF for custom families; direction ~ Dirichlet(1, ..., 1)
///   uniform box, Gaussian, Student-t (Gaussian scale mixture), quadratic g (Gaussian or Student-t).
/// Max-affine densities get a multivariate Cauchy proposal centred at the mode.
std::unique_ptr<Sampler> make_sampler(const DensitySpec& spec);

}  // namespace cvxbound
