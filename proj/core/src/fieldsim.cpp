#include "fprmt/fieldsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fprmt/ensemble.hpp"
#include "fprmt/error.hpp"

namespace fprmt::field {
namespace {

constexpr int kMaxGridPoints = 20001;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::size_t packed_row(std::size_t i) { return i * (i + 1) / 2; }

// Cholesky of the packed lower triangle in place; false on a nonpositive pivot.
bool cholesky_packed(std::vector<double>& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = a.data() + packed_row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const double* rj = a.data() + packed_row(j);
      double s = ri[j];
      for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
      if (j == i) {
        if (!(s > 0.0)) return false;
        ri[i] = std::sqrt(s);
      } else {
        ri[j] = s / rj[j];
      }
    }
  }
  return true;
}

FieldCountEstimate summarize_counts(const std::vector<int>& counts, const std::vector<char>& parity_bad) {
  FieldCountEstimate est;
  est.n_fields = static_cast<std::int64_t>(counts.size());
  std::int64_t sum = 0;
  std::int64_t sq = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int c = counts[i];
    if (static_cast<std::size_t>(c) >= est.histogram.size()) est.histogram.resize(c + 1, 0);
    ++est.histogram[c];
    sum += c;
    sq += static_cast<std::int64_t>(c) * c;
    est.parity_violations += parity_bad[i];
  }
  const double m = static_cast<double>(est.n_fields);
  est.mean = static_cast<double>(sum) / m;
  if (est.n_fields > 1) {
    const double var = std::max(0.0, (static_cast<double>(sq) - m * est.mean * est.mean) / (m - 1.0));
    est.stderr = std::sqrt(var / m);
  }
  return est;
}

bool parity_violated(const std::vector<double>& points, const std::vector<double>& values, int count) {
  const int first = sign_of(values.front() - points.front());
  const int last = sign_of(values.back() - points.back());
  return first != 0 && last != 0 && first != last && count % 2 == 0;
}

}  // namespace

double KernelSpec::covariance(double distance) const {
  return std::exp(-0.5 * sigma * sigma * distance * distance);
}

double default_spacing(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("default_spacing: sigma must be > 0");
  return std::min(0.05, 0.05 / sigma);
}

std::vector<double> make_grid(double half_width, double dx) {
  if (!(half_width > 0.0)) throw std::invalid_argument("grid half-width must be > 0");
  if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  const double intervals = std::round(2.0 * half_width / dx);
  if (intervals + 1.0 > kMaxGridPoints) {
    throw std::invalid_argument("grid would have more than " + std::to_string(kMaxGridPoints) + " points");
  }
  const int n = static_cast<int>(intervals) + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -half_width + 2.0 * half_width * i / (n - 1);
  return x;
}

FieldSampler::FieldSampler(KernelSpec kernel, double half_width, double dx) : kernel_(kernel) {
  if (!(kernel.sigma > 0.0)) throw std::invalid_argument("kernel sigma must be > 0");
  if (dx > 0.1 / kernel.sigma) {
    throw std::invalid_argument("grid spacing " + std::to_string(dx) + " exceeds 0.1/sigma");
  }
  points_ = make_grid(half_width, dx);
  const std::size_t n = points_.size();
  std::vector<double> cov(packed_row(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) cov[packed_row(i) + j] = kernel_.covariance(points_[i] - points_[j]);
  }
  const double k0 = kernel_.covariance(0.0);
  for (double level : {1e-10, 1e-8, 1e-6}) {
    factor_ = cov;
    for (std::size_t i = 0; i < n; ++i) factor_[packed_row(i) + i] += level * k0;
    if (cholesky_packed(factor_, n)) {
      jitter_ = level * k0;
      return;
    }
  }
  throw NumericalError(ErrorCode::kCholeskyFailure,
                       "covariance factorization failed at jitter 1e-6 (n = " + std::to_string(n) + ")");
}

FieldGrid FieldSampler::sample(Stream& stream) const {
  const std::size_t n = points_.size();
  std::vector<double> z(n);
  for (double& v : z) v = stream.normal();
  FieldGrid out;
  out.points = points_;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ri = factor_.data() + packed_row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += ri[j] * z[j];
    out.values[i] = acc;
  }
  out.kernel = kernel_;
  out.seed = stream.seed();
  out.stream = stream.stream_index();
  return out;
}

FieldGrid FieldSampler::sample(std::uint64_t seed, std::uint64_t stream) const {
  Stream s(seed, stream);
  return sample(s);
}

FieldGrid sample_field_1d(const KernelSpec& kernel, double half_width, double dx, std::uint64_t seed) {
  return FieldSampler(kernel, half_width, dx).sample(seed);
}

int count_crossings(const std::vector<double>& points, const std::vector<double>& values) {
  if (points.size() != values.size()) throw std::invalid_argument("points and values differ in length");
  int count = 0;
  int prev = 0;
  bool have_prev = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int s = sign_of(values[i] - points[i]);
    if (s == 0) {
      if (!have_prev || prev != 0) ++count;
    } else if (have_prev && prev != 0 && s != prev) {
      ++count;
    }
    prev = s;
    have_prev = true;
  }
  return count;
}

int count_fixed_points_1d(const FieldGrid& field) {
  if (field.points.empty()) throw std::invalid_argument("count_fixed_points_1d: empty field");
  if (field.half_width() < 8.0 - 1e-12) {
    throw std::invalid_argument("count_fixed_points_1d: half-width must be >= 8");
  }
  return count_crossings(field.points, field.values);
}

std::vector<double> fixed_point_locations(const FieldGrid& field) {
  std::vector<double> out;
  const auto& x = field.points;
  int prev = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double g = field.values[i] - x[i];
    const int s = sign_of(g);
    if (s == 0) {
      if (i == 0 || prev != 0) out.push_back(x[i]);
    } else if (i > 0 && prev != 0 && s != prev) {
      const double g0 = field.values[i - 1] - x[i - 1];
      out.push_back(x[i - 1] - g0 * (x[i] - x[i - 1]) / (g - g0));
    }
    prev = s;
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need matching grids of >= 2 points");
  h_ = (x_.back() - x_.front()) / static_cast<double>(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / h_;
  slope_.assign(n, 0.0);
  slope_.front() = delta.front();
  slope_.back() = delta.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] > 0.0) slope_[k] = 2.0 / (1.0 / delta[k - 1] + 1.0 / delta[k]);
  }
}

double MonotoneCubic::operator()(double u) const {
  const auto last = static_cast<std::ptrdiff_t>(x_.size()) - 2;
  const auto k = std::clamp(static_cast<std::ptrdiff_t>(std::floor((u - x_.front()) / h_)),
                            std::ptrdiff_t{0}, last);
  const double t = (u - x_[k]) / h_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h_ * slope_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
         (t3 - t2) * h_ * slope_[k + 1];
}

std::vector<double> compose(const FieldGrid& outer, const FieldGrid& inner) {
  const MonotoneCubic f1(outer.points, outer.values);
  std::vector<double> out(inner.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = inner.values[i];
    if (u < f1.lo() || u > f1.hi()) {
      throw NumericalError(ErrorCode::kOutOfRange,
                           "inner field value " + std::to_string(u) + " leaves the outer grid; widen L");
    }
    out[i] = f1(u);
  }
  return out;
}

int compose_and_count(double sigma1, double sigma2, double half_width, double dx, std::uint64_t seed,
                      std::uint64_t replica) {
  const FieldSampler outer({KernelFamily::kSquaredExponential, sigma1}, half_width, dx);
  const FieldSampler inner({KernelFamily::kSquaredExponential, sigma2}, half_width, dx);
  const FieldGrid f1 = outer.sample(seed, 2 * replica);
  const FieldGrid f2 = inner.sample(seed, 2 * replica + 1);
  return count_crossings(f2.points, compose(f1, f2));
}

FieldCountEstimate estimate_field_fixed_points(const KernelSpec& kernel, double half_width, double dx,
                                               std::int64_t n_fields, std::uint64_t seed, int workers) {
  if (n_fields < 2) throw std::invalid_argument("estimate_field_fixed_points: need at least 2 fields");
  const FieldSampler sampler(kernel, half_width, dx);
  if (half_width < 8.0) throw std::invalid_argument("estimate_field_fixed_points: half-width must be >= 8");
  std::vector<int> counts(n_fields);
  std::vector<char> bad(n_fields, 0);
  parallel_ranges(n_fields, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const FieldGrid f = sampler.sample(seed, static_cast<std::uint64_t>(i));
      counts[i] = count_crossings(f.points, f.values);
      bad[i] = parity_violated(f.points, f.values, counts[i]);
    }
  });
  return summarize_counts(counts, bad);
}

FieldCountEstimate estimate_composed_fixed_points(double sigma1, double sigma2, double half_width, double dx,
                                                  std::int64_t n_fields, std::uint64_t seed, int workers) {
  if (n_fields < 2) throw std::invalid_argument("estimate_composed_fixed_points: need at least 2 fields");
  const FieldSampler outer({KernelFamily::kSquaredExponential, sigma1}, half_width, dx);
  const FieldSampler inner({KernelFamily::kSquaredExponential, sigma2}, half_width, dx);
  std::vector<int> counts(n_fields);
  std::vector<char> bad(n_fields, 0);
  parallel_ranges(n_fields, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const auto r = static_cast<std::uint64_t>(i);
      const FieldGrid f1 = outer.sample(seed, 2 * r);
      const FieldGrid f2 = inner.sample(seed, 2 * r + 1);
      const std::vector<double> g = compose(f1, f2);
      counts[i] = count_crossings(f2.points, g);
      bad[i] = parity_violated(f2.points, g, counts[i]);
    }
  });
  return summarize_counts(counts, bad);
}

}  // namespace fprmt::field
