#pragma once

#include <functional>
#include <vector>

namespace fprmt::quad {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Throws NumericalError
/// (kQuadratureFailure) if an interval still misses its tolerance at
/// max_depth.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                               const AdaptiveOptions& options = {});

/// Sums gauss_kronrod over consecutive panels given by sorted breakpoints.
QuadratureResult gauss_kronrod_panels(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints,
                                      const AdaptiveOptions& options = {});

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

}  // namespace fprmt::quad
