#include "fprmt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "fprmt/error.hpp"

namespace fprmt::quad {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                               const AdaptiveOptions& options) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("gauss_kronrod: interval endpoints must be finite");
  }
  std::priority_queue<Segment> heap;
  heap.push(kronrod15(f, a, b, 0));
  double total = heap.top().value;
  double error = heap.top().error;
  int evaluations = 15;
  constexpr int kMaxSegments = 20000;
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= kMaxSegments) {
      throw NumericalError(ErrorCode::kQuadratureFailure, "segment budget exhausted");
    }
    Segment worst = heap.top();
    if (worst.depth >= options.max_depth) {
      throw NumericalError(ErrorCode::kQuadratureFailure,
                           "refinement depth cap reached near x = " +
                               std::to_string(0.5 * (worst.a + worst.b)));
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = kronrod15(f, worst.a, mid, worst.depth + 1);
    Segment right = kronrod15(f, mid, worst.b, worst.depth + 1);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double value = 0.0;
  double abs_error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    abs_error += heap.top().error;
    heap.pop();
  }
  return {value, abs_error, evaluations};
}

QuadratureResult gauss_kronrod_panels(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints,
                                      const AdaptiveOptions& options) {
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    const QuadratureResult panel = gauss_kronrod(f, breakpoints[i], breakpoints[i + 1], options);
    out.value += panel.value;
    out.abs_error += panel.abs_error;
    out.evaluations += panel.evaluations;
  }
  return out;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace fprmt::quad
