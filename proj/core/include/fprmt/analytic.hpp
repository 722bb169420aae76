#pragma once

#include <span>
#include <vector>

#include "fprmt/model.hpp"

namespace fprmt::analytic {

/// E[#fixed points] for N = D = 1: E|x - 1| with x ~ N(0, σ²).
double mean_fixed_points_exact_1_1(double sigma);

/// N = 1, D = 2 with σ₁σ₂ = s: E|s u v - 1| for independent standard normals.
double mean_fixed_points_exact_1_2(double s);

struct ComplexityPoint {
  double sigma_hat = 0.0;
  int depth = 1;
  double value = 0.0;
};

/// Large-N complexity lim (1/N) log E[#fixed points]; zero for σ̂ ≤ 1.
double complexity(double sigma_hat, int depth);
std::vector<ComplexityPoint> complexity_curve(std::span<const double> sigma_hats, int depth);

/// Limiting real spectral density of the scaled product, supported on |λ| < 1.
/// +infinity at λ = 0 when D ≥ 2.
double global_density_real(double lambda, int depth);
/// Limiting complex spectral density at modulus |z|, per unit area.
double global_density_complex(double modulus, int depth);
/// Radial CDF r^{2/D} of the limiting complex density (clamped to [0, 1]).
double complex_modulus_cdf(double r, int depth);

/// (1/2π) ∫ log|r e^{iθ} - 1| dθ by the periodic trapezoid rule.
double angular_log_average(double r, int points = 4096);

/// ∫ ρ_C(z) log|σ̂^D z - 1| d²z done numerically in polar form, with
/// `nodes` Gauss-Legendre points per radial panel.
double complexity_via_integral(double sigma_hat, int depth, int nodes = 128);

/// log Z_{N+1}/Z_N. `nus` holds ν_1..ν_{D-1}.
double z_ratio_log(int n, int depth, std::span<const int> nus);
/// Stirling form log[(4π)^{D/2} N^{DN/2} (N/2)^{Σν/2} e^{-ND/2}].
double z_ratio_stirling_log(int n, int depth, std::span<const int> nus);

/// log w_R(λ): -λ²/2 for D = 1, log[2 (|λ|/2)^{ν₁/2} K_{ν₁/2}(|λ|)] for D = 2.
/// Throws std::domain_error for D ≥ 3 or (D = 2, λ = 0).
double weight_real_log(double lambda, int depth, std::span<const int> nus);

/// Leading large-N term of log w_R(N^{D/2}/σ̂^D).
double weight_real_asymptotic_log(double sigma_hat, int n, int depth, std::span<const int> nus);

/// Real spectral density ρ_{R,N+1}(λ) of an (N+1) x (N+1) real Ginibre matrix.
double finite_N_real_density_D1(int n, double lambda);

/// ρ_{R,N+1}^{(D)}(λ) for D in {1, 2} by quadrature over the weight. N ≤ 30.
/// Throws NumericalError(kQuadratureFailure) if refinement hits its cap.
double finite_N_real_density_integral(int depth, int n, double lambda, std::span<const int> nus);

/// Local edge profile of the D = 1 real density at λ = √N + ζ.
double edge_density(double zeta);

enum class Regime { kBelowThreshold, kAboveThreshold };

struct AsymptoticPrediction {
  double log_value = 0.0;
  Regime regime = Regime::kBelowThreshold;
  /// |σ̂ - 1| < 0.05, where the asymptotics are not uniform.
  bool near_critical = false;
  ModelSpec spec;
};

/// Large-N log E[#fixed points]: ½log 2 + Σν log σ̂ + N C(σ̂) above threshold, 0 below.
AsymptoticPrediction mean_fixed_points_asymptotic_log(const ModelSpec& spec);

/// log √(4πD) σ̂^{1-D+Σν} e^{N C_D(σ̂)}, with C_D the unrestricted formula
/// D(log σ̂ + ½(1/σ̂² - 1)); the prefactor of the rescaled lemma.
double rescaled_prefactor_log(const ModelSpec& spec);

/// Low-density approximation of log N^{(D-1)/2} ρ_{R,N+1}(N^{D/2}/σ̂^D).
/// Throws std::domain_error for σ̂ ≥ 1.
double low_density_approx_log(const ModelSpec& spec);

/// Right-hand side of the determinant/real-density identity in log form:
/// ND log σ̄ - log w_R(1/σ̄^D) + log Z_{N+1}/Z_N + log ρ_{R,N+1}(1/σ̄^D).
double lemma_rhs_log(const ModelSpec& spec, double density_at_point);

}  // namespace fprmt::analytic
