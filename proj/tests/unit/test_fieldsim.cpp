#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fprmt/error.hpp"
#include "fprmt/fieldsim.hpp"
#include "oracles.hpp"

using namespace fprmt::field;

namespace {

KernelSpec se(double sigma) { return {KernelFamily::kSquaredExponential, sigma}; }

FieldGrid synthetic(double offset, double slope) {
  FieldGrid f;
  f.points = make_grid(8.0, 0.05);
  for (double x : f.points) f.values.push_back(slope * x + offset);
  return f;
}

}  // namespace

TEST_CASE("kernel and grid") {
  CHECK(se(2.0).covariance(0.0) == 1.0);
  CHECK(se(2.0).covariance(0.5) == doctest::Approx(std::exp(-0.5)));
  CHECK(default_spacing(0.2) == 0.05);
  CHECK(default_spacing(5.0) == doctest::Approx(0.01));
  const auto g = make_grid(8.0, 0.05);
  CHECK(g.size() == 321);
  CHECK(g.front() == -8.0);
  CHECK(g.back() == 8.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(make_grid(8.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(FieldSampler(se(1.0), 8.0, 0.2), std::invalid_argument);
}

TEST_CASE("sampled paths: determinism, variance and correlation") {
  const FieldSampler sampler(se(1.0), 8.0, 0.05);
  CHECK(sampler.jitter() <= 1e-6);
  const auto a = sampler.sample(3, 0);
  const auto b = sampler.sample(3, 0);
  CHECK(a.values == b.values);
  CHECK(sample_field_1d(se(1.0), 8.0, 0.05, 3).values == a.values);
  CHECK(sampler.sample(3, 1).values != a.values);

  // Points 0 and 1/σ apart: indices 160 and 180 on the 0.05 grid.
  const int n = 10000;
  double v0 = 0.0;
  double v1 = 0.0;
  double c01 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto f = sampler.sample(17, i);
    v0 += f.values[160] * f.values[160];
    v1 += f.values[180] * f.values[180];
    c01 += f.values[160] * f.values[180];
  }
  CHECK(v0 / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(v1 / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::abs(c01 / std::sqrt(v0 * v1) - std::exp(-0.5)) < 0.02);
}

TEST_CASE("crossing counter on synthetic fields") {
  CHECK(count_fixed_points_1d(synthetic(0.0, 0.0)) == 1);
  CHECK(count_fixed_points_1d(synthetic(1.0, 1.0)) == 0);
  // f(x) = x everywhere: one run of zeros.
  CHECK(count_fixed_points_1d(synthetic(0.0, 1.0)) == 1);
  CHECK(fixed_point_locations(synthetic(0.5, 0.0)).size() == 1);
  CHECK(fixed_point_locations(synthetic(0.5, 0.0))[0] == doctest::Approx(0.5).epsilon(1e-12));

  FieldGrid wiggle;
  wiggle.points = make_grid(8.0, 0.01);
  for (double x : wiggle.points) wiggle.values.push_back(x + 0.3 * std::sin(3.0 * x) - 0.1);
  const auto loc = fixed_point_locations(wiggle);
  CHECK(static_cast<int>(loc.size()) == count_fixed_points_1d(wiggle));
  for (double x : loc) CHECK(std::abs(0.3 * std::sin(3.0 * x) - 0.1) < 1e-3);

  FieldGrid narrow;
  narrow.points = make_grid(4.0, 0.05);
  narrow.values.assign(narrow.points.size(), 0.0);
  CHECK_THROWS_AS(count_fixed_points_1d(narrow), std::invalid_argument);
}

TEST_CASE("field-side mean count matches the exact law") {
  for (double s : {0.5, 1.0, 2.0}) {
    const auto est = estimate_field_fixed_points(se(s), kDefaultHalfWidth, default_spacing(s), 20000, 5, 1);
    const double want = oracle::mean_abs_affine(s);
    INFO("sigma = " << s << ", mean = " << est.mean << " +- " << est.stderr << ", want = " << want);
    CHECK(std::abs(est.mean - want) < 3.0 * est.stderr + 0.01 * want);
    CHECK(est.parity_violations == 0);
    CHECK(est.histogram[0] <= 2);
  }
}

TEST_CASE("small sigma has a single fixed point") {
  const auto est = estimate_field_fixed_points(se(0.2), kDefaultHalfWidth, default_spacing(0.2), 5000, 8, 1);
  CHECK(static_cast<double>(est.histogram[1]) / est.n_fields >= 0.99);
}

TEST_CASE("halving the spacing barely moves the count") {
  const FieldSampler fine(se(1.0), 8.0, 0.025);
  const int n = 5000;
  double diff = 0.0;
  double sq = 0.0;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto f = fine.sample(21, i);
    FieldGrid coarse;
    for (std::size_t k = 0; k < f.points.size(); k += 2) {
      coarse.points.push_back(f.points[k]);
      coarse.values.push_back(f.values[k]);
    }
    const int c_fine = count_fixed_points_1d(f);
    const int c_coarse = count_fixed_points_1d(coarse);
    CHECK(c_coarse <= c_fine);
    diff += c_fine - c_coarse;
    mean += c_fine;
    sq += double(c_fine) * c_fine;
  }
  mean /= n;
  const double se_mean = std::sqrt((sq / n - mean * mean) / n);
  CHECK(diff / n < se_mean);
}

TEST_CASE("monotone cubic interpolation") {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(-1.0 + 0.1 * i);
    y.push_back(std::tanh(5.0 * x.back()));
  }
  const MonotoneCubic f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
  double prev = -2.0;
  for (double u = -1.0; u <= 1.0; u += 0.001) {
    const double v = f(u);
    CHECK(v >= prev);
    prev = v;
  }
  // Cubic data is reproduced closely away from the ends.
  std::vector<double> cy;
  for (double xi : x) cy.push_back(xi * xi * xi);
  const MonotoneCubic g(x, cy);
  CHECK(g(0.55) == doctest::Approx(0.55 * 0.55 * 0.55).epsilon(0.02));
}

TEST_CASE("composition") {
  // Inner field almost constant: one fixed point.
  for (std::uint64_t r = 0; r < 20; ++r) CHECK(compose_and_count(1.0, 1e-3, 8.0, 0.05, 4, r) == 1);

  FieldGrid outer = synthetic(0.0, 0.5);
  FieldGrid inner = synthetic(0.2, 0.0);
  const auto g = compose(outer, inner);
  for (double v : g) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));
  FieldGrid wild = synthetic(0.0, 2.0);
  bool out_of_range = false;
  try {
    compose(outer, wild);
  } catch (const fprmt::NumericalError& e) {
    out_of_range = e.code() == fprmt::ErrorCode::kOutOfRange;
  }
  CHECK(out_of_range);
}

TEST_CASE("two-layer counts depend only on the product of deviations") {
  const auto a = estimate_composed_fixed_points(1.0, 1.0, 8.0, 0.05, 8000, 3, 1);
  const auto b = estimate_composed_fixed_points(2.0, 0.5, 8.0, 0.025, 8000, 4, 1);
  const double want = oracle::mean_abs_product_minus_one(1.0);
  INFO("a = " << a.mean << " +- " << a.stderr << ", b = " << b.mean << " +- " << b.stderr << ", want = " << want);
  CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.stderr, b.stderr));
  CHECK(std::abs(a.mean - want) < 3.0 * a.stderr + 0.01 * want);
  CHECK(a.parity_violations == 0);
}

TEST_CASE("field estimators ignore the worker count") {
  const auto a = estimate_field_fixed_points(se(1.5), 8.0, default_spacing(1.5), 300, 2, 1);
  const auto b = estimate_field_fixed_points(se(1.5), 8.0, default_spacing(1.5), 300, 2, 3);
  CHECK(a.histogram == b.histogram);
  CHECK(a.mean == b.mean);
  const auto c = estimate_composed_fixed_points(1.0, 1.0, 8.0, 0.05, 100, 2, 1);
  const auto d = estimate_composed_fixed_points(1.0, 1.0, 8.0, 0.05, 100, 2, 2);
  CHECK(c.histogram == d.histogram);
}
