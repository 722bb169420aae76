#include "fprmt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fprmt {

void ModelSpec::validate() const {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (static_cast<int>(offsets.size()) != depth - 1) {
    throw std::invalid_argument("expected " + std::to_string(depth - 1) + " dimension offsets, got " +
                                std::to_string(offsets.size()));
  }
  if (static_cast<int>(sigmas.size()) != depth) {
    throw std::invalid_argument("expected " + std::to_string(depth) + " layer deviations, got " +
                                std::to_string(sigmas.size()));
  }
  for (int nu : offsets) {
    if (nu < 0) throw std::invalid_argument("dimension offsets must be >= 0");
  }
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("layer deviations must be finite and > 0");
  }
}

int ModelSpec::layer_dim(int d) const {
  if (d <= 0 || d >= depth) return dim;
  return dim + offsets[d - 1];
}

double ModelSpec::log_sigma_bar() const {
  double acc = 0.0;
  for (double s : sigmas) acc += std::log(s);
  return acc / depth;
}

double ModelSpec::sigma_bar() const { return std::exp(log_sigma_bar()); }

double ModelSpec::sigma_hat() const { return std::exp(log_sigma_bar() + 0.5 * std::log(dim)); }

int ModelSpec::offset_sum() const { return std::accumulate(offsets.begin(), offsets.end(), 0); }

ModelSpec ModelSpec::from_sigma_hat(int depth, int dim, std::vector<int> offsets, double sigma_hat) {
  ModelSpec spec{depth, dim, std::move(offsets), std::vector<double>(std::max(depth, 0), sigma_hat / std::sqrt(dim))};
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::standard(int depth, int dim, std::vector<int> offsets) {
  if (offsets.empty() && depth > 1) offsets.assign(depth - 1, 0);
  ModelSpec spec{depth, dim, std::move(offsets), std::vector<double>(std::max(depth, 0), 1.0)};
  spec.validate();
  return spec;
}

}  // namespace fprmt
