#include "fprmt/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "fprmt/error.hpp"

namespace fprmt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kRetryBit = std::uint64_t{1} << 63;

double log_sum_exp(std::span<const double> values) {
  double peak = kNegInf;
  for (double v : values) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

void require_samples(std::int64_t n, std::int64_t minimum, const char* what) {
  if (n < minimum) {
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(minimum) + " samples");
  }
}

// Integer tallies merged across workers; integer sums are order independent.
struct SpectrumTally {
  std::vector<std::int64_t> per_n;      // histogram of n_real
  std::vector<std::int64_t> bin_counts;
  std::int64_t window_sum = 0;
  std::int64_t window_sq_sum = 0;
  std::int64_t failed = 0;

  void merge(const SpectrumTally& other) {
    for (std::size_t i = 0; i < per_n.size(); ++i) per_n[i] += other.per_n[i];
    for (std::size_t i = 0; i < bin_counts.size(); ++i) bin_counts[i] += other.bin_counts[i];
    window_sum += other.window_sum;
    window_sq_sum += other.window_sq_sum;
    failed += other.failed;
  }
};

template <typename Visit>
SpectrumTally tally_spectra(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed, int workers,
                            std::size_t bins, Visit visit) {
  spec.validate();
  const int n_workers = workers > 0 ? workers : default_workers();
  std::vector<SpectrumTally> partial(n_workers);
  for (auto& t : partial) {
    t.per_n.assign(spec.dim + 1, 0);
    t.bin_counts.assign(bins, 0);
  }
  parallel_ranges(n_samples, n_workers, [&](std::int64_t begin, std::int64_t end) {
    const std::int64_t chunk = (n_samples + n_workers - 1) / n_workers;
    SpectrumTally& tally = partial[chunk > 0 ? begin / chunk : 0];
    for (std::int64_t i = begin; i < end; ++i) {
      std::optional<EigenSplit> split = sample_spectrum(spec, seed, static_cast<std::uint64_t>(i));
      if (!split) {
        ++tally.failed;
        continue;
      }
      ++tally.per_n[split->n_real()];
      visit(*split, tally);
    }
  });
  SpectrumTally total = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) total.merge(partial[w]);
  if (total.failed * 1000 > n_samples) {
    throw NumericalError(ErrorCode::kNonConvergence,
                         std::to_string(total.failed) + " of " + std::to_string(n_samples) +
                             " eigen-decompositions failed (limit 0.1%)");
  }
  return total;
}

double spectral_scale(const ModelSpec& spec) { return std::pow(static_cast<double>(spec.dim), 0.5 * spec.depth); }

}  // namespace

double Histogram::total() const {
  double acc = 0.0;
  for (double c : counts) acc += c;
  return acc;
}

double Histogram::density(int b) const {
  const double denom = normalization == Normalization::kPerMatrixIntensity
                           ? static_cast<double>(n_matrices)
                           : total();
  if (denom <= 0.0) return 0.0;
  return counts[b] / (denom * width(b));
}

int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_ranges(std::int64_t n, int workers,
                     const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (n <= 0) return;
  const int n_workers = std::max(1, workers > 0 ? workers : default_workers());
  const std::int64_t chunk = (n + n_workers - 1) / n_workers;
  if (n_workers == 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> sample_log_abs_det(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                       int workers) {
  spec.validate();
  std::vector<double> out(std::max<std::int64_t>(n_samples, 0));
  parallel_ranges(n_samples, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      Stream stream(seed, static_cast<std::uint64_t>(i));
      out[i] = log_abs_det_shift(product_chain(spec, stream), 1.0);
    }
  });
  return out;
}

std::vector<double> sample_log_abs_det_via_spectrum(const ModelSpec& spec, std::int64_t n_samples,
                                                    std::uint64_t seed, int workers) {
  spec.validate();
  std::vector<double> out(std::max<std::int64_t>(n_samples, 0));
  parallel_ranges(n_samples, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      Stream stream(seed, static_cast<std::uint64_t>(i));
      const EigenSplit split = eigen_split(product_chain(spec, stream));
      double acc = 0.0;
      for (double lam : split.real_eigs) acc += std::log(std::abs(lam - 1.0));
      for (const auto& z : split.complex_pairs) acc += 2.0 * std::log(std::abs(z - 1.0));
      out[i] = acc;
    }
  });
  return out;
}

LogMcEstimate summarize_log_samples(std::span<const double> log_values, int blocks) {
  const auto n = static_cast<std::int64_t>(log_values.size());
  if (n < 2) throw std::invalid_argument("summarize_log_samples: need at least 2 samples");
  blocks = static_cast<int>(std::min<std::int64_t>(blocks, n));
  LogMcEstimate est;
  est.n_samples = n;
  est.n_singular = std::count(log_values.begin(), log_values.end(), kNegInf);
  const double total = log_sum_exp(log_values);
  est.log_mean = total - std::log(static_cast<double>(n));

  std::vector<double> block_lse(blocks);
  std::vector<std::int64_t> block_size(blocks);
  for (int b = 0; b < blocks; ++b) {
    const std::int64_t lo = n * b / blocks;
    const std::int64_t hi = n * (b + 1) / blocks;
    block_lse[b] = log_sum_exp(log_values.subspan(lo, hi - lo));
    block_size[b] = hi - lo;
  }
  std::vector<double> leave_out(blocks);
  double mean_leave_out = 0.0;
  for (int b = 0; b < blocks; ++b) {
    // log(S - S_b) = log S + log1p(-S_b / S)
    const double rest = total + std::log1p(-std::exp(block_lse[b] - total));
    leave_out[b] = rest - std::log(static_cast<double>(n - block_size[b]));
    mean_leave_out += leave_out[b];
  }
  mean_leave_out /= blocks;
  double var = 0.0;
  for (double v : leave_out) var += (v - mean_leave_out) * (v - mean_leave_out);
  var *= static_cast<double>(blocks - 1) / blocks;
  est.rel_stderr = std::sqrt(var);
  return est;
}

LogMcEstimate estimate_abs_det_expectation(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                           int workers) {
  require_samples(n_samples, 100, "estimate_abs_det_expectation");
  const std::vector<double> values = sample_log_abs_det(spec, n_samples, seed, workers);
  LogMcEstimate est = summarize_log_samples(values);
  est.seed = seed;
  est.spec = spec;
  return est;
}

std::optional<EigenSplit> sample_spectrum(const ModelSpec& spec, std::uint64_t seed, std::uint64_t index) {
  for (std::uint64_t attempt : {index, index | kRetryBit}) {
    Stream stream(seed, attempt);
    const DenseMatrix x = product_chain(spec, stream);
    try {
      return eigen_split(x);
    } catch (const NumericalError& e) {
      if (e.code() != ErrorCode::kNonConvergence) throw;
    }
  }
  return std::nullopt;
}

MeanEstimate estimate_mean_real_count(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                                      int workers) {
  require_samples(n_samples, 100, "estimate_mean_real_count");
  const SpectrumTally tally =
      tally_spectra(spec, n_samples, seed, workers, 0, [](const EigenSplit&, SpectrumTally&) {});
  MeanEstimate est;
  est.n_failed = tally.failed;
  est.n_samples = n_samples - tally.failed;
  std::int64_t sum = 0;
  std::int64_t sq = 0;
  for (std::size_t n = 0; n < tally.per_n.size(); ++n) {
    const auto k = static_cast<std::int64_t>(n);
    sum += k * tally.per_n[n];
    sq += k * k * tally.per_n[n];
  }
  const double m = static_cast<double>(est.n_samples);
  est.mean = static_cast<double>(sum) / m;
  const double var = std::max(0.0, (static_cast<double>(sq) - m * est.mean * est.mean) / (m - 1.0));
  est.stderr = std::sqrt(var / m);
  return est;
}

std::vector<double> estimate_p_Nn(const ModelSpec& spec, std::int64_t n_samples, std::uint64_t seed, int workers) {
  require_samples(n_samples, 1000, "estimate_p_Nn");
  const SpectrumTally tally =
      tally_spectra(spec, n_samples, seed, workers, 0, [](const EigenSplit&, SpectrumTally&) {});
  const double m = static_cast<double>(n_samples - tally.failed);
  std::vector<double> p(tally.per_n.size(), 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = static_cast<double>(tally.per_n[n]) / m;
  return p;
}

Histogram spectral_histogram(const ModelSpec& spec, SpectrumPart part, bool scaled, int bins, double lo,
                             double hi, std::int64_t n_samples, std::uint64_t seed, int workers) {
  if (bins < 1) throw std::invalid_argument("spectral_histogram: bins must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("spectral_histogram: empty range");
  require_samples(n_samples, 1, "spectral_histogram");
  const double scale = scaled ? spectral_scale(spec) : 1.0;
  const double inv_width = bins / (hi - lo);
  auto bin_of = [&](double v) -> int {
    if (v < lo || v >= hi) return -1;
    return std::min(bins - 1, static_cast<int>((v - lo) * inv_width));
  };
  const SpectrumTally tally = tally_spectra(
      spec, n_samples, seed, workers, static_cast<std::size_t>(bins),
      [&](const EigenSplit& split, SpectrumTally& t) {
        if (part == SpectrumPart::kReal) {
          for (double lam : split.real_eigs) {
            const int b = bin_of(lam / scale);
            if (b >= 0) ++t.bin_counts[b];
          }
        } else {
          for (const auto& z : split.complex_pairs) {
            const int b = bin_of(std::abs(z) / scale);
            if (b >= 0) t.bin_counts[b] += 2;
          }
        }
      });
  Histogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
  h.counts.assign(tally.bin_counts.begin(), tally.bin_counts.end());
  h.normalization = Normalization::kPerMatrixIntensity;
  h.n_matrices = n_samples - tally.failed;
  if (scaled) {
    h.global_scale = part == SpectrumPart::kReal ? 1.0 / std::sqrt(static_cast<double>(spec.dim))
                                                 : 1.0 / static_cast<double>(spec.dim);
  }
  return h;
}

std::vector<double> collect_complex_moduli(const ModelSpec& spec, bool scaled, std::int64_t n_samples,
                                           std::uint64_t seed, int workers) {
  spec.validate();
  require_samples(n_samples, 1, "collect_complex_moduli");
  const double scale = scaled ? spectral_scale(spec) : 1.0;
  std::vector<std::vector<double>> per_sample(n_samples);
  std::vector<char> failed(n_samples, 0);
  parallel_ranges(n_samples, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      std::optional<EigenSplit> split = sample_spectrum(spec, seed, static_cast<std::uint64_t>(i));
      if (!split) {
        failed[i] = 1;
        continue;
      }
      for (const auto& z : split->complex_pairs) per_sample[i].push_back(std::abs(z) / scale);
    }
  });
  const auto n_failed = std::count(failed.begin(), failed.end(), 1);
  if (n_failed * 1000 > n_samples) {
    throw NumericalError(ErrorCode::kNonConvergence, "too many failed eigen-decompositions");
  }
  std::vector<double> out;
  for (const auto& v : per_sample) out.insert(out.end(), v.begin(), v.end());
  return out;
}

double default_bandwidth(double lambda, int depth) {
  if (depth < 1) throw std::invalid_argument("default_bandwidth: depth must be >= 1");
  const double point_scale = std::pow(std::max(1.0, std::abs(lambda)), 1.0 - 1.0 / depth);
  return 0.05 * point_scale;
}

DensityEstimate estimate_real_density_at(const ModelSpec& spec, double lambda, double bandwidth,
                                         std::int64_t n_samples, std::uint64_t seed, int workers) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("estimate_real_density_at: bandwidth must be > 0");
  require_samples(n_samples, 2, "estimate_real_density_at");
  const SpectrumTally tally =
      tally_spectra(spec, n_samples, seed, workers, 0, [&](const EigenSplit& split, SpectrumTally& t) {
        std::int64_t k = 0;
        for (double lam : split.real_eigs) {
          if (std::abs(lam - lambda) <= bandwidth) ++k;
        }
        t.window_sum += k;
        t.window_sq_sum += k * k;
      });
  DensityEstimate est;
  est.bandwidth = bandwidth;
  est.n_samples = n_samples - tally.failed;
  const double m = static_cast<double>(est.n_samples);
  const double mean = static_cast<double>(tally.window_sum) / m;
  const double var =
      std::max(0.0, (static_cast<double>(tally.window_sq_sum) - m * mean * mean) / (m - 1.0));
  est.density = mean / (2.0 * bandwidth);
  est.stderr = std::sqrt(var / m) / (2.0 * bandwidth);
  return est;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_pvalue(double statistic, std::int64_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace fprmt
