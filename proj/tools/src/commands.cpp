#include "commands.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fprmt/analytic.hpp"
#include "fprmt/ensemble.hpp"
#include "fprmt/fieldsim.hpp"
#include "fprmt/model.hpp"

namespace fprmt::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t or_default(std::int64_t v, std::int64_t fallback) { return v > 0 ? v : fallback; }

void finish_csv(const Options& o, Manifest& m, const CsvTable& table, const nlohmann::ordered_json& results) {
  write_file(o.out, table.str());
  nlohmann::ordered_json j = m.to_json();
  if (!results.is_null()) j["results"] = results;
  write_file(manifest_path_for(o.out), j.dump(2) + "\n");
}

void finish_json(const Options& o, Manifest& m, const nlohmann::ordered_json& inputs,
                 const nlohmann::ordered_json& results, bool pass) {
  nlohmann::ordered_json j;
  j["manifest"] = m.to_json();
  j["inputs"] = inputs;
  j["results"] = results;
  j["pass"] = pass;
  write_file(o.out, j.dump(2) + "\n");
}

std::vector<double> layer_sigmas(const Options& o, int depth) {
  if (o.sigmas.empty()) return std::vector<double>(depth, 1.0);
  if (static_cast<int>(o.sigmas.size()) == depth) return o.sigmas;
  if (o.sigmas.size() == 1) return std::vector<double>(depth, o.sigmas.front());
  throw std::invalid_argument("--sigma must be given once or once per layer");
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

// Real spectral density of a standard n x n real Ginibre matrix.
double ginibre_real_density(int n, double lambda) {
  if (n == 1) return std::exp(-0.5 * lambda * lambda) / std::sqrt(2.0 * std::numbers::pi);
  return analytic::finite_N_real_density_D1(n - 1, lambda);
}

}  // namespace

int cmd_det_curve(const Options& o, Manifest& m, std::ostream& log) {
  const auto grid = parse_grid(o.sigma_hat_grid);
  const std::int64_t n = or_default(o.samples, 1000);
  m.n_samples = n;
  CsvTable table({"sigma_hat", "mc_log_mean_over_N", "mc_rel_stderr", "analytic_log_over_N", "complexity"});
  for (const auto& g : grid) {
    if (!(g.value > 0.0)) throw std::invalid_argument("sigma-hat values must be > 0");
    const ModelSpec spec = ModelSpec::from_sigma_hat(o.depth, o.dim, o.nus, g.value);
    const LogMcEstimate est = estimate_abs_det_expectation(spec, n, o.seed, o.workers);
    const auto pred = analytic::mean_fixed_points_asymptotic_log(spec);
    table.add({g.text, format_double(est.log_mean / o.dim), format_double(est.rel_stderr),
               format_double(pred.log_value / o.dim), format_double(analytic::complexity(g.value, o.depth))});
    log << "sigma_hat " << g.text << ": (1/N) log E = " << est.log_mean / o.dim << " (pred "
        << pred.log_value / o.dim << ")\n";
  }
  finish_csv(o, m, table, nullptr);
  return kExitOk;
}

int cmd_subleading(const Options& o, Manifest& m, std::ostream& log) {
  if (o.depth != 2) throw std::invalid_argument("subleading is defined for --depth 2 only");
  const auto grid = parse_grid(o.sigma_hat_grid);
  const std::vector<int> nu_grid = o.nus.empty() ? std::vector<int>{0, 1, 2} : o.nus;
  const std::int64_t n = or_default(o.samples, 10000);
  m.n_samples = n;
  CsvTable table({"nu", "sigma_hat", "mc_log_mean", "mc_rel_stderr", "leading", "mc_subleading",
                  "predicted_subleading", "applicable"});
  for (int nu : nu_grid) {
    for (const auto& g : grid) {
      if (!(g.value > 0.0)) throw std::invalid_argument("sigma-hat values must be > 0");
      const ModelSpec spec = ModelSpec::from_sigma_hat(2, o.dim, {nu}, g.value);
      const LogMcEstimate est = estimate_abs_det_expectation(spec, n, o.seed, o.workers);
      const double s = g.value;
      const double leading = o.dim * 2.0 * (std::log(s) + 0.5 * (1.0 / (s * s) - 1.0));
      const bool applicable = s > 1.0;
      const double predicted = applicable ? 0.5 * std::numbers::ln2 + nu * std::log(s) : kNaN;
      table.add({std::to_string(nu), g.text, format_double(est.log_mean), format_double(est.rel_stderr),
                 format_double(leading), format_double(est.log_mean - leading), format_double(predicted),
                 applicable ? "1" : "0"});
      log << "nu " << nu << " sigma_hat " << g.text << ": subleading " << est.log_mean - leading << "\n";
    }
  }
  finish_csv(o, m, table, nullptr);
  return kExitOk;
}

int cmd_density(const Options& o, Manifest& m, std::ostream& log) {
  SpectrumPart part;
  if (o.part == "real") {
    part = SpectrumPart::kReal;
  } else if (o.part == "complex-modulus") {
    part = SpectrumPart::kComplexModulus;
  } else {
    throw std::invalid_argument("--part must be real or complex-modulus");
  }
  const ModelSpec spec{o.depth, o.dim, o.nus, layer_sigmas(o, o.depth)};
  spec.validate();
  const std::int64_t n = or_default(o.samples, 1000);
  m.n_samples = n;

  double lo = 0.0;
  double hi = 0.0;
  if (!o.range.empty()) {
    std::tie(lo, hi) = parse_range(o.range);
  } else {
    const double reach = o.scaled ? 1.5 : 1.5 * std::pow(static_cast<double>(o.dim), 0.5 * o.depth) + 3.0;
    lo = part == SpectrumPart::kReal ? -reach : 0.0;
    hi = reach;
  }
  const Histogram h = spectral_histogram(spec, part, o.scaled, o.bins, lo, hi, n, o.seed, o.workers);

  const bool unit_layers = std::abs(spec.log_sigma_bar()) < 1e-15;
  const bool finite_overlay = part == SpectrumPart::kReal && o.depth == 1 && unit_layers;
  const double scale = o.scaled ? std::sqrt(static_cast<double>(o.dim)) : 1.0;
  CsvTable table({"bin_lo", "bin_hi", "center", "count", "intensity", "density", "global_overlay",
                  "finite_n_overlay"});
  for (int b = 0; b < h.bins(); ++b) {
    const double c = h.center(b);
    double global = kNaN;
    if (o.scaled) {
      global = part == SpectrumPart::kReal ? analytic::global_density_real(c, o.depth)
                                           : 2.0 * std::numbers::pi * c * analytic::global_density_complex(c, o.depth);
    }
    const double finite = finite_overlay ? ginibre_real_density(o.dim, c * scale) : kNaN;
    table.add({format_double(h.edges[b]), format_double(h.edges[b + 1]), format_double(c),
               format_double(h.counts[b]), format_double(h.density(b)), format_double(h.density(b) * h.global_scale),
               format_double(global), format_double(finite)});
  }

  nlohmann::ordered_json results;
  results["n_matrices"] = h.n_matrices;
  results["total_count"] = h.total();
  results["global_scale"] = h.global_scale;
  if (part == SpectrumPart::kComplexModulus && o.scaled) {
    const auto moduli = collect_complex_moduli(spec, true, n, o.seed, o.workers);
    const int depth = o.depth;
    const double d = ks_statistic(moduli, [depth](double r) { return analytic::complex_modulus_cdf(r, depth); });
    const double p = ks_pvalue(d, static_cast<std::int64_t>(moduli.size()));
    results["ks_statistic"] = d;
    results["ks_pvalue"] = p;
    results["ks_n"] = moduli.size();
    log << "KS statistic " << d << " (p = " << p << ", n = " << moduli.size() << ")\n";
  }
  log << "histogram of " << h.n_matrices << " matrices, " << h.total() << " eigenvalues in range\n";
  finish_csv(o, m, table, results);
  return kExitOk;
}

int cmd_verify_theorem(const Options& o, Manifest& m, std::ostream& log) {
  if (o.sigmas.empty() || o.sigmas.size() > 2) {
    throw std::invalid_argument("verify-theorem needs --sigma once (one layer) or twice (two layers)");
  }
  const bool two_layer = o.sigmas.size() == 2;
  const std::int64_t fields = or_default(o.samples, 100000);
  const std::int64_t matrices = or_default(o.matrix_samples, 1000000);
  m.n_samples = fields;

  const double sigma_max = two_layer ? std::max(o.sigmas[0], o.sigmas[1]) : o.sigmas[0];
  const double dx = o.grid_dx > 0.0 ? o.grid_dx : field::default_spacing(sigma_max);
  field::FieldCountEstimate fe;
  ModelSpec spec;
  double analytic_value = kNaN;
  if (two_layer) {
    fe = field::estimate_composed_fixed_points(o.sigmas[0], o.sigmas[1], o.grid_L, dx, fields, o.seed, o.workers);
    spec = ModelSpec{2, 1, {0}, {o.sigmas[0], o.sigmas[1]}};
    analytic_value = analytic::mean_fixed_points_exact_1_2(o.sigmas[0] * o.sigmas[1]);
  } else {
    fe = field::estimate_field_fixed_points({field::KernelFamily::kSquaredExponential, o.sigmas[0]}, o.grid_L, dx,
                                            fields, o.seed, o.workers);
    spec = ModelSpec{1, 1, {}, {o.sigmas[0]}};
    analytic_value = analytic::mean_fixed_points_exact_1_1(o.sigmas[0]);
  }
  const LogMcEstimate me = estimate_abs_det_expectation(spec, matrices, o.seed, o.workers);
  const double matrix_mean = std::exp(me.log_mean);
  const double matrix_stderr = matrix_mean * me.rel_stderr;

  // One percent of the field mean is allowed for grid discretization.
  const double bias = 0.01 * fe.mean;
  const double gap = std::abs(fe.mean - matrix_mean);
  const double tolerance = 3.0 * combined(fe.stderr, matrix_stderr) + bias;
  const bool pass = gap <= tolerance;

  nlohmann::ordered_json inputs;
  inputs["sigma"] = o.sigmas;
  inputs["n_fields"] = fields;
  inputs["matrix_samples"] = matrices;
  inputs["grid_L"] = o.grid_L;
  inputs["grid_dx"] = dx;
  inputs["seed"] = o.seed;
  nlohmann::ordered_json results;
  results["field_mean"] = fe.mean;
  results["field_stderr"] = fe.stderr;
  results["field_count_histogram"] = fe.histogram;
  results["field_parity_violations"] = fe.parity_violations;
  results["matrix_mean"] = matrix_mean;
  results["matrix_stderr"] = matrix_stderr;
  results["analytic"] = analytic_value;
  results["gap"] = gap;
  results["tolerance"] = tolerance;
  finish_json(o, m, inputs, results, pass);
  log << "field " << fe.mean << " +- " << fe.stderr << ", matrix " << matrix_mean << " +- " << matrix_stderr
      << ", analytic " << analytic_value << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitVerifyFail;
}

int cmd_verify_lemma(const Options& o, Manifest& m, std::ostream& log) {
  if (o.depth != 1 && o.depth != 2) throw std::invalid_argument("verify-lemma supports --depth 1 or 2");
  const ModelSpec spec{o.depth, o.dim, o.nus, layer_sigmas(o, o.depth)};
  spec.validate();
  const std::int64_t n = or_default(o.samples, 1000000);
  m.n_samples = n;

  const double point = std::exp(-o.depth * spec.log_sigma_bar());
  const double h = o.bandwidth > 0.0 ? o.bandwidth : default_bandwidth(point, o.depth);
  const ModelSpec bigger = ModelSpec::standard(o.depth, o.dim + 1, o.nus);

  const LogMcEstimate lhs = estimate_abs_det_expectation(spec, n, o.seed, o.workers);
  // Independent streams for the right-hand side.
  const DensityEstimate rho = estimate_real_density_at(bigger, point, h, n, o.seed + 1, o.workers);
  if (!(rho.density > 0.0)) throw std::runtime_error("no real eigenvalues fell in the density window");
  const double rhs = analytic::lemma_rhs_log(spec, rho.density);
  const double rhs_rel = rho.stderr / rho.density;

  auto exact_density = [&](double x) {
    return o.depth == 1 ? analytic::finite_N_real_density_D1(o.dim, x)
                        : analytic::finite_N_real_density_integral(2, o.dim, x, o.nus);
  };
  const double step = 0.01;
  const double r0 = exact_density(point);
  const double curvature = (exact_density(point + step) - 2.0 * r0 + exact_density(point - step)) / (step * step);
  const double bias = 2.0 * h * h / 6.0 * std::abs(curvature) / r0;
  const double rhs_exact = analytic::lemma_rhs_log(spec, r0);

  const double gap = std::abs(lhs.log_mean - rhs);
  const double tolerance = 3.0 * combined(lhs.rel_stderr, rhs_rel) + bias;
  const bool pass = gap <= tolerance;

  nlohmann::ordered_json inputs;
  inputs["depth"] = o.depth;
  inputs["dim"] = o.dim;
  inputs["nu"] = o.nus;
  inputs["sigma"] = spec.sigmas;
  inputs["bandwidth"] = h;
  inputs["samples"] = n;
  inputs["seed"] = o.seed;
  nlohmann::ordered_json results;
  results["evaluation_point"] = point;
  results["lhs_log"] = lhs.log_mean;
  results["lhs_rel_stderr"] = lhs.rel_stderr;
  results["density_estimate"] = rho.density;
  results["density_stderr"] = rho.stderr;
  results["rhs_log"] = rhs;
  results["rhs_rel_stderr"] = rhs_rel;
  results["rhs_log_exact_density"] = rhs_exact;
  results["bandwidth_bias_bound"] = bias;
  results["gap"] = gap;
  results["tolerance"] = tolerance;
  finish_json(o, m, inputs, results, pass);
  log << "lhs " << lhs.log_mean << " rhs " << rhs << " (exact-density rhs " << rhs_exact << "), gap " << gap
      << " tol " << tolerance << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitVerifyFail;
}

int cmd_field_gallery(const Options& o, Manifest& m, std::ostream& log) {
  const std::vector<double> sigmas = o.sigmas.empty() ? std::vector<double>{0.2, 1.0, 5.0} : o.sigmas;
  m.n_samples = static_cast<std::int64_t>(sigmas.size());
  CsvTable table({"sigma", "x", "f", "diagonal", "fixed_point"});
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double s = sigmas[k];
    const double dx = o.grid_dx > 0.0 ? o.grid_dx : field::default_spacing(s);
    const field::FieldSampler sampler({field::KernelFamily::kSquaredExponential, s}, o.grid_L, dx);
    const field::FieldGrid f = sampler.sample(o.seed, k);
    const std::vector<double> roots = field::fixed_point_locations(f);
    const int count = field::count_fixed_points_1d(f);
    // Mark the grid cell [x_i, x_{i+1}) holding each crossing.
    std::vector<int> marks(f.points.size(), 0);
    for (double r : roots) {
      std::size_t i = 0;
      while (i + 1 < f.points.size() && f.points[i + 1] <= r) ++i;
      marks[i] = 1;
    }
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      table.add({format_shortest(s), format_double(f.points[i]), format_double(f.values[i]),
                 format_double(f.points[i]), std::to_string(marks[i])});
    }
    nlohmann::ordered_json r;
    r["sigma"] = s;
    r["stream"] = k;
    r["grid_dx"] = f.spacing();
    r["fixed_points"] = count;
    r["abscissas"] = roots;
    results.push_back(r);
    log << "sigma " << s << ": " << count << " fixed point(s)\n";
  }
  finish_csv(o, m, table, results);
  return kExitOk;
}

}  // namespace fprmt::cli
