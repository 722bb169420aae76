#include "fprmt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fprmt/quadrature.hpp"
#include "fprmt/specfun.hpp"

namespace fprmt::analytic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_depth(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
}

void require_nus(int depth, std::span<const int> nus) {
  if (static_cast<int>(nus.size()) != depth - 1) {
    throw std::invalid_argument("expected " + std::to_string(depth - 1) + " offsets, got " +
                                std::to_string(nus.size()));
  }
  for (int nu : nus) {
    if (nu < 0) throw std::invalid_argument("offsets must be >= 0");
  }
}

int nu_sum(std::span<const int> nus) { return std::accumulate(nus.begin(), nus.end(), 0); }

// D (log σ̂ + ½(1/σ̂² - 1)) without the threshold cut.
double rate(double sigma_hat, int depth) {
  return depth * (std::log(sigma_hat) + 0.5 * (1.0 / (sigma_hat * sigma_hat) - 1.0));
}

}  // namespace

double mean_fixed_points_exact_1_1(double sigma) {
  if (!(sigma > 0.0)) {
    if (sigma == 0.0) return 1.0;
    throw std::domain_error("mean_fixed_points_exact_1_1: sigma must be > 0");
  }
  const double x = 1.0 / (sigma * std::numbers::sqrt2);
  const double tail = x > 27.0 ? 0.0 : specfun::erfc(x);
  return 1.0 + sigma * std::sqrt(2.0 / kPi) * std::exp(-x * x) - tail;
}

double mean_fixed_points_exact_1_2(double s) {
  if (!(s > 0.0)) throw std::domain_error("mean_fixed_points_exact_1_2: product must be > 0");
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  auto integrand = [&](double u) {
    return 2.0 * norm * std::exp(-0.5 * u * u) * mean_fixed_points_exact_1_1(s * u);
  };
  return quad::gauss_kronrod_panels(integrand, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0},
                                    {1e-14, 1e-13, 40})
      .value;
}

double complexity(double sigma_hat, int depth) {
  require_depth(depth);
  if (!(sigma_hat > 0.0)) throw std::domain_error("complexity: sigma_hat must be > 0");
  return sigma_hat > 1.0 ? rate(sigma_hat, depth) : 0.0;
}

std::vector<ComplexityPoint> complexity_curve(std::span<const double> sigma_hats, int depth) {
  std::vector<ComplexityPoint> out;
  out.reserve(sigma_hats.size());
  for (double s : sigma_hats) out.push_back({s, depth, complexity(s, depth)});
  return out;
}

double global_density_real(double lambda, int depth) {
  require_depth(depth);
  const double a = std::abs(lambda);
  if (a >= 1.0) return 0.0;
  if (a == 0.0) return depth == 1 ? 1.0 / std::sqrt(2.0 * kPi) : kInf;
  return std::pow(a, 1.0 / depth - 1.0) / std::sqrt(2.0 * kPi * depth);
}

double global_density_complex(double modulus, int depth) {
  require_depth(depth);
  const double a = std::abs(modulus);
  if (a >= 1.0) return 0.0;
  if (a == 0.0) return depth == 1 ? 1.0 / kPi : kInf;
  return std::pow(a, 2.0 / depth - 2.0) / (kPi * depth);
}

double complex_modulus_cdf(double r, int depth) {
  require_depth(depth);
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  return std::pow(r, 2.0 / depth);
}

double angular_log_average(double r, int points) {
  if (points < 8) throw std::invalid_argument("angular_log_average: need at least 8 points");
  double acc = 0.0;
  for (int j = 0; j < points; ++j) {
    const double theta = 2.0 * kPi * (j + 0.5) / points;
    // |r e^{iθ} - 1|² = r² - 2r cos θ + 1
    acc += 0.5 * std::log(r * r - 2.0 * r * std::cos(theta) + 1.0);
  }
  return acc / points;
}

double complexity_via_integral(double sigma_hat, int depth, int nodes) {
  require_depth(depth);
  if (!(sigma_hat > 0.0)) throw std::domain_error("complexity_via_integral: sigma_hat must be > 0");
  if (nodes < 64) throw std::invalid_argument("complexity_via_integral: nodes must be >= 64");
  // With t = |z|^{1/D} the radial measure 2π|z| ρ_C(|z|) d|z| becomes 2t dt.
  const quad::Rule rule = quad::gauss_legendre(nodes);
  auto panel = [&](double a, double b) {
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
      const double r = std::pow(sigma_hat * t, depth);
      acc += rule.weights[i] * 2.0 * t * angular_log_average(r);
    }
    return 0.5 * (b - a) * acc;
  };
  const double kink = 1.0 / sigma_hat;
  if (kink >= 1.0) return panel(0.0, 1.0);
  return panel(0.0, kink) + panel(kink, 1.0);
}

double z_ratio_log(int n, int depth, std::span<const int> nus) {
  require_depth(depth);
  require_nus(depth, nus);
  if (n < 1) throw std::invalid_argument("z_ratio_log: N must be >= 1");
  double acc = 0.5 * depth * (n + 1) * kLog2 + specfun::log_gamma(0.5 * (n + 1));
  for (int nu : nus) acc += specfun::log_gamma(0.5 * (n + 1 + nu));
  return acc;
}

double z_ratio_stirling_log(int n, int depth, std::span<const int> nus) {
  require_depth(depth);
  require_nus(depth, nus);
  if (n < 1) throw std::invalid_argument("z_ratio_stirling_log: N must be >= 1");
  const double nn = n;
  return 0.5 * depth * std::log(4.0 * kPi) + 0.5 * depth * nn * std::log(nn) +
         0.5 * nu_sum(nus) * std::log(0.5 * nn) - 0.5 * nn * depth;
}

double weight_real_log(double lambda, int depth, std::span<const int> nus) {
  require_depth(depth);
  require_nus(depth, nus);
  if (depth == 1) return -0.5 * lambda * lambda;
  if (depth == 2) {
    const double a = std::abs(lambda);
    if (a == 0.0) throw std::domain_error("weight_real_log: lambda must be nonzero for D = 2");
    const double order = 0.5 * nus[0];
    return kLog2 + order * std::log(0.5 * a) + specfun::log_bessel_k(order, a);
  }
  throw std::domain_error("weight_real_log: exact weight only for D in {1, 2}");
}

double weight_real_asymptotic_log(double sigma_hat, int n, int depth, std::span<const int> nus) {
  require_depth(depth);
  require_nus(depth, nus);
  if (!(sigma_hat > 0.0)) throw std::domain_error("weight_real_asymptotic_log: sigma_hat must be > 0");
  if (n < 1) throw std::invalid_argument("weight_real_asymptotic_log: N must be >= 1");
  const double s2 = sigma_hat * sigma_hat;
  const double nn = n;
  return -0.5 * std::log(static_cast<double>(depth)) + 0.5 * (depth - 1) * std::log(4.0 * kPi * s2 / nn) +
         0.5 * nu_sum(nus) * std::log(nn / (2.0 * s2)) - nn * depth / (2.0 * s2);
}

double finite_N_real_density_D1(int n, double lambda) {
  if (n < 1) throw std::invalid_argument("finite_N_real_density_D1: N must be >= 1");
  const double l2 = lambda * lambda;
  const double log_root_2pi = 0.5 * std::log(2.0 * kPi);
  const double bulk = specfun::reg_gamma_q(n, l2) / std::sqrt(2.0 * kPi);
  if (lambda == 0.0) return bulk;
  const double half = 0.5 * n;
  const double log_tail = (half - 1.0) * kLog2 + specfun::log_reg_gamma_p(half, 0.5 * l2) +
                          specfun::log_gamma(half) + n * std::log(std::abs(lambda)) - 0.5 * l2 -
                          log_root_2pi - specfun::log_gamma(n);
  return bulk + std::exp(log_tail);
}

double finite_N_real_density_integral(int depth, int n, double lambda, std::span<const int> nus) {
  if (depth != 1 && depth != 2) throw std::domain_error("finite_N_real_density_integral: D must be 1 or 2");
  require_nus(depth, nus);
  if (n < 1 || n > 30) throw std::invalid_argument("finite_N_real_density_integral: N must be in [1, 30]");

  std::vector<int> all_nus{0};
  all_nus.insert(all_nus.end(), nus.begin(), nus.end());

  double log_prefactor = 0.0;
  for (int nu : all_nus) log_prefactor += (nu - 1) * kLog2 - 0.5 * std::log(2.0 * kPi);
  double first_term = 1.0;
  for (int nu : all_nus) first_term /= std::exp(specfun::log_gamma(nu + 1.0));

  auto kernel_sum = [&](double y) {
    double term = first_term;
    double acc = term;
    for (int k = 1; k < n; ++k) {
      double denom = 1.0;
      for (int nu : all_nus) denom *= k + nu;
      term *= y / denom;
      acc += term;
    }
    return acc;
  };
  auto integrand = [&](double x) {
    return std::exp(weight_real_log(x, depth, nus)) * std::abs(lambda - x) * kernel_sum(x * lambda);
  };

  const double reach = depth == 1 ? 10.0 + 2.0 * std::sqrt(static_cast<double>(n)) : 60.0 + 4.0 * n;
  const double cutoff = std::abs(lambda) + reach;
  std::vector<double> breaks{-cutoff, std::min(0.0, lambda), std::max(0.0, lambda), cutoff};
  const quad::QuadratureResult integral = quad::gauss_kronrod_panels(integrand, breaks, {1e-14, 1e-11, 50});

  const double log_w = weight_real_log(lambda, depth, nus);
  double value = std::exp(log_prefactor + log_w) * integral.value;
  if (n % 2 == 0 && lambda != 0.0) {
    double log_moment = 0.5 * depth * (n + 1) * kLog2;
    for (int nu : all_nus) log_moment += specfun::log_gamma(0.5 * (n + 1 + nu));
    value += std::exp(log_w + n * std::log(std::abs(lambda)) - log_moment);
  }
  return value;
}

double edge_density(double zeta) {
  return specfun::erfc(std::numbers::sqrt2 * zeta) / std::sqrt(8.0 * kPi) +
         std::exp(-zeta * zeta) * (1.0 + specfun::erf(zeta)) / std::sqrt(16.0 * kPi);
}

AsymptoticPrediction mean_fixed_points_asymptotic_log(const ModelSpec& spec) {
  spec.validate();
  const double s = spec.sigma_hat();
  AsymptoticPrediction out;
  out.spec = spec;
  out.near_critical = std::abs(s - 1.0) < 0.05;
  if (s > 1.0) {
    out.regime = Regime::kAboveThreshold;
    out.log_value = 0.5 * kLog2 + spec.offset_sum() * std::log(s) + spec.dim * complexity(s, spec.depth);
  } else {
    out.regime = Regime::kBelowThreshold;
    out.log_value = 0.0;
  }
  return out;
}

double rescaled_prefactor_log(const ModelSpec& spec) {
  spec.validate();
  const double s = spec.sigma_hat();
  const int d = spec.depth;
  return 0.5 * std::log(4.0 * kPi * d) + (1 - d + spec.offset_sum()) * std::log(s) + spec.dim * rate(s, d);
}

double low_density_approx_log(const ModelSpec& spec) {
  spec.validate();
  const double s = spec.sigma_hat();
  if (s >= 1.0) throw std::domain_error("low_density_approx_log: requires sigma_hat < 1");
  const int d = spec.depth;
  return -0.5 * std::log(4.0 * kPi * d) + (d - 1 - spec.offset_sum()) * std::log(s) - spec.dim * rate(s, d);
}

double lemma_rhs_log(const ModelSpec& spec, double density_at_point) {
  spec.validate();
  if (spec.depth > 2) throw std::domain_error("lemma_rhs_log: exact weight only for D in {1, 2}");
  if (!(density_at_point > 0.0)) throw std::domain_error("lemma_rhs_log: density must be > 0");
  const int d = spec.depth;
  const double log_sbar = spec.log_sigma_bar();
  const double point = std::exp(-d * log_sbar);
  return spec.dim * d * log_sbar - weight_real_log(point, d, spec.offsets) + z_ratio_log(spec.dim, d, spec.offsets) +
         std::log(density_at_point);
}

}  // namespace fprmt::analytic
