#pragma once

#include <cstdint>
#include <vector>

#include "fprmt/rng.hpp"

namespace fprmt::field {

enum class KernelFamily { kSquaredExponential };

/// Covariance κ(|x-y|²/2) with κ(r) = exp(-σ² r).
struct KernelSpec {
  KernelFamily family = KernelFamily::kSquaredExponential;
  double sigma = 1.0;

  double covariance(double distance) const;
};

/// One sampled path on the uniform grid -L, -L + dx, ..., L.
struct FieldGrid {
  std::vector<double> points;
  std::vector<double> values;
  KernelSpec kernel;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  double spacing() const { return points.size() > 1 ? points[1] - points[0] : 0.0; }
  double half_width() const { return points.empty() ? 0.0 : points.back(); }
};

inline constexpr double kDefaultHalfWidth = 8.0;
/// min(0.05, 0.05/σ): twenty grid points per correlation length.
double default_spacing(double sigma);

/// Grid abscissae for half-width L and requested spacing dx. The point count
/// is 2L/dx + 1 rounded to an integer, so the realised spacing may differ
/// from dx in the last digits.
std::vector<double> make_grid(double half_width, double dx);

/// Cholesky factor of the kernel on a fixed grid, reusable across samples.
class FieldSampler {
 public:
  /// Throws std::invalid_argument when dx > 0.1/σ or the grid exceeds 20001
  /// points, NumericalError(kCholeskyFailure) when factorization fails at
  /// every jitter level.
  FieldSampler(KernelSpec kernel, double half_width, double dx);

  FieldGrid sample(std::uint64_t seed, std::uint64_t stream = 0) const;
  FieldGrid sample(Stream& stream) const;

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const std::vector<double>& points() const noexcept { return points_; }
  double jitter() const noexcept { return jitter_; }

 private:
  KernelSpec kernel_;
  std::vector<double> points_;
  std::vector<double> factor_;  // packed lower triangle, row by row
  double jitter_ = 0.0;
};

FieldGrid sample_field_1d(const KernelSpec& kernel, double half_width, double dx, std::uint64_t seed);

/// Crossings of g(x) = f(x) - x between consecutive grid points. A run of
/// exact zeros counts once. Requires half-width ≥ 8.
int count_fixed_points_1d(const FieldGrid& field);
/// Crossing abscissae by linear interpolation, one per counted crossing.
std::vector<double> fixed_point_locations(const FieldGrid& field);

/// Monotone cubic (Fritsch-Carlson) interpolant on a uniform grid.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double u) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
  double h_;
};

/// f₁(f₂(x)) sampled on f₂'s grid. Throws NumericalError(kOutOfRange) when
/// f₂ leaves f₁'s grid.
std::vector<double> compose(const FieldGrid& outer, const FieldGrid& inner);
int count_crossings(const std::vector<double>& points, const std::vector<double>& values);

/// Two-layer fixed points of f₁∘f₂ for replica `replica`: f₁ from stream
/// 2i, f₂ from stream 2i+1.
int compose_and_count(double sigma1, double sigma2, double half_width, double dx, std::uint64_t seed,
                      std::uint64_t replica = 0);

struct FieldCountEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::int64_t n_fields = 0;
  /// histogram[c] = number of replicas with c counted fixed points.
  std::vector<std::int64_t> histogram;
  /// Replicas whose endpoint signs differ but whose count is even.
  std::int64_t parity_violations = 0;
};

/// Mean fixed-point count over replicas; replica i uses stream i.
FieldCountEstimate estimate_field_fixed_points(const KernelSpec& kernel, double half_width, double dx,
                                               std::int64_t n_fields, std::uint64_t seed, int workers = 0);
/// Same for the two-layer composition.
FieldCountEstimate estimate_composed_fixed_points(double sigma1, double sigma2, double half_width, double dx,
                                                  std::int64_t n_fields, std::uint64_t seed, int workers = 0);

}  // namespace fprmt::field
