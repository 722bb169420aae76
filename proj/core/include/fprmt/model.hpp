#pragma once

#include <vector>

namespace fprmt {

/// A depth-D system of Gaussian layers around a base dimension N.
///
/// Layer d (1-based) maps R^{N_d} to R^{N_{d-1}} with N_0 = N_D = N and
/// N_d = N + offsets[d-1] in between. The Jacobian at a point is a Ginibre
/// matrix with entry deviation sigmas[d-1].
struct ModelSpec {
  int depth = 1;
  int dim = 1;
  std::vector<int> offsets;     // length depth - 1
  std::vector<double> sigmas;   // length depth

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;

  /// Dimension N_d for d in [0, depth].
  int layer_dim(int d) const;

  /// log σ̄ = (1/D) Σ log σ_d.
  double log_sigma_bar() const;
  double sigma_bar() const;
  /// σ̂ = σ̄ √N, the order parameter of the transition (critical at 1).
  double sigma_hat() const;
  int offset_sum() const;

  /// All layers at deviation σ̂/√N.
  static ModelSpec from_sigma_hat(int depth, int dim, std::vector<int> offsets, double sigma_hat);
  /// All layers at unit deviation.
  static ModelSpec standard(int depth, int dim, std::vector<int> offsets = {});
};

}  // namespace fprmt
