#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fprmt/linalg.hpp"
#include "fprmt/model.hpp"

namespace fprmt {

/// A Monte Carlo expectation held in log space.
struct LogMcEstimate {
  double log_mean = 0.0;
  /// Block-jackknife standard error of log_mean, i.e. the relative standard
  /// error of the mean itself.
  double rel_stderr = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_singular = 0;
  std::uint64_t seed = 0;
  ModelSpec spec;
};

struct MeanEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_failed = 0;
};

struct DensityEstimate {
  double density = 0.0;
  double stderr = 0.0;
  double bandwidth = 0.0;
  std::int64_t n_samples = 0;
};

enum class SpectrumPart { kReal, kComplexModulus };
enum class Normalization { kProbabilityDensity, kPerMatrixIntensity };

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
  Normalization normalization = Normalization::kPerMatrixIntensity;
  std::int64_t n_matrices = 0;
  /// Factor taking per-matrix intensity of the scaled variable to the
  /// limiting global density: N^{-1/2} for real, N^{-1} for complex moduli.
  /// 1 for unscaled histograms.
  double global_scale = 1.0;

  int bins() const noexcept { return static_cast<int>(counts.size()); }
  double width(int b) const { return edges[b + 1] - edges[b]; }
  double center(int b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  double total() const;
  /// Normalized value of bin b under `normalization`.
  double density(int b) const;
};

/// Worker count used when `workers <= 0`.
int default_workers();

/// Calls body(begin, end) over contiguous index ranges split across worker
/// threads. Ranges depend only on (n, workers).
void parallel_ranges(std::int64_t n, int workers,
                     const std::function<void(std::int64_t begin, std::int64_t end)>& body);

/// Per-sample log|det(X_i - I)| for sample i drawn from stream (seed, i).
std::vector<double> sample_log_abs_det(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                       int workers = 0);

/// Same samples as sample_log_abs_det, evaluated through the spectrum:
/// Σ log|λ_k - 1| + 2 Σ log|z_l - 1|.
std::vector<double> sample_log_abs_det_via_spectrum(const ModelSpec& spec, std::int64_t n_samples,
                                                    std::uint64_t seed, int workers = 0);

/// log-sum-exp mean with a contiguous-block jackknife error on the log scale.
LogMcEstimate summarize_log_samples(std::span<const double> log_values, int blocks = 100);

/// E|det(J_1 ... J_D - I_N)| in log space. Bit-identical for fixed
/// (spec, n_samples, seed) whatever the worker count.
LogMcEstimate estimate_abs_det_expectation(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                           int workers = 0);

/// Spectrum of sample i; a NONCONVERGENCE is retried once on a perturbed
/// stream, then reported as nullopt.
std::optional<EigenSplit> sample_spectrum(const ModelSpec& spec, std::uint64_t seed, std::uint64_t index);

MeanEstimate estimate_mean_real_count(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                      int workers = 0);

/// Empirical p_{N,n}, indexed by n = 0..N. Off-parity entries are exactly 0.
std::vector<double> estimate_p_Nn(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                  int workers = 0);

/// Histogram of real eigenvalues or complex-eigenvalue moduli (both members
/// of each conjugate pair), per-matrix intensity. When `scaled`, eigenvalues
/// are divided by N^{D/2} before binning.
Histogram spectral_histogram(const ModelSpec& spec, SpectrumPart part, bool scaled, int bins, double lo,
                             double hi, std::int64_t n_samples, std::uint64_t seed, int workers = 0);

/// One modulus per conjugate pair, in sample order, optionally divided by N^{D/2}.
std::vector<double> collect_complex_moduli(const ModelSpec& spec, bool scaled, std::int64_t n_samples,
                                           std::uint64_t seed, int workers = 0);

/// Default box half-width at evaluation point lambda: 0.05 max(1,|λ|)^{1-1/D}.
double default_bandwidth(double lambda, int depth);

/// Box-kernel estimate of the real spectral density: mean count of real
/// eigenvalues in [λ - h, λ + h] divided by 2h.
DensityEstimate estimate_real_density_at(const ModelSpec& spec, double lambda, double bandwidth,
                                         std::int64_t n_samples, std::uint64_t seed, int workers = 0);

/// Two-sided Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic p-value of the one-sample KS statistic for n observations.
double ks_pvalue(double statistic, std::int64_t n);

}  // namespace fprmt
