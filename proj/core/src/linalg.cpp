#include "fprmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fprmt/error.hpp"

namespace fprmt {

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix dimensions must be nonnegative");
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix dimensions must be nonnegative");
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("entry count does not match matrix shape");
  }
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix out(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  DenseMatrix out(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = diag[i];
  return out;
}

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
  DenseMatrix out(lhs.rows(), rhs.cols());
  for (int i = 0; i < lhs.rows(); ++i) {
    std::span<double> out_row = out.row(i);
    for (int k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      std::span<const double> rhs_row = rhs.row(k);
      for (int j = 0; j < rhs.cols(); ++j) out_row[j] += a * rhs_row[j];
    }
  }
  return out;
}

DenseMatrix sample_ginibre(int rows, int cols, double sigma, Stream& stream) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_ginibre: dimensions must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_ginibre: sigma must be > 0");
  std::vector<double> entries(static_cast<std::size_t>(rows) * cols);
  for (double& e : entries) e = sigma * stream.normal();
  return DenseMatrix(rows, cols, std::move(entries));
}

namespace {

std::vector<DenseMatrix> sample_layers(const ModelSpec& spec, Stream& stream) {
  std::vector<DenseMatrix> layers;
  layers.reserve(spec.depth);
  for (int d = 1; d <= spec.depth; ++d) {
    layers.push_back(sample_ginibre(spec.layer_dim(d - 1), spec.layer_dim(d), spec.sigmas[d - 1], stream));
  }
  return layers;
}

}  // namespace

DenseMatrix product_chain(const ModelSpec& spec, Stream& stream) {
  return product_chain_rotated(spec, 1, stream);
}

DenseMatrix product_chain_rotated(const ModelSpec& spec, int first_layer, Stream& stream) {
  if (first_layer < 1 || first_layer > spec.depth) {
    throw std::invalid_argument("product_chain_rotated: first layer out of range");
  }
  std::vector<DenseMatrix> layers = sample_layers(spec, stream);
  std::rotate(layers.begin(), layers.begin() + (first_layer - 1), layers.end());
  DenseMatrix acc = std::move(layers.front());
  for (std::size_t d = 1; d < layers.size(); ++d) acc = acc * layers[d];
  return acc;
}

double log_abs_det_shift(const DenseMatrix& x, double shift) {
  if (!x.square()) throw std::invalid_argument("log_abs_det_shift: matrix must be square");
  const int n = x.rows();
  DenseMatrix a = x;
  for (int i = 0; i < n; ++i) a(i, i) -= shift;
  double log_det = 0.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) return -std::numeric_limits<double>::infinity();
    if (pivot != k) {
      std::span<double> rk = a.row(k);
      std::span<double> rp = a.row(pivot);
      std::swap_ranges(rk.begin() + k, rk.end(), rp.begin() + k);
    }
    const double diag = a(k, k);
    log_det += std::log(std::abs(diag));
    std::span<const double> rk = a.row(k);
    for (int i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / diag;
      if (factor == 0.0) continue;
      std::span<double> ri = a.row(i);
      for (int j = k + 1; j < n; ++j) ri[j] -= factor * rk[j];
    }
  }
  return log_det;
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(DenseMatrix& a) {
  const int n = a.rows();
  std::vector<double> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) continue;
    const double alpha = a(k + 1, k) > 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // A <- (I - beta v v^T) A
    for (int j = k; j < n; ++j) {
      double dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
      dot *= beta;
      for (int i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
    }
    // A <- A (I - beta v v^T)
    for (int i = 0; i < n; ++i) {
      std::span<double> ri = a.row(i);
      double dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += ri[j] * v[j];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) ri[j] -= dot * v[j];
    }
    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

inline double sign_of(double magnitude, double sign_source) {
  return sign_source >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

EigenSplit eigen_split(const DenseMatrix& x) {
  if (!x.square()) throw std::invalid_argument("eigen_split: matrix must be square");
  const int n = x.rows();
  EigenSplit out;
  if (n == 0) return out;
  for (double e : x.entries()) {
    if (!std::isfinite(e)) throw std::invalid_argument("eigen_split: entries must be finite");
  }

  DenseMatrix h = x;
  reduce_to_hessenberg(h);
  // 1-based view keeps the Francis sweep indices in their textbook form.
  auto a = [&h](int i, int j) -> double& { return h(i - 1, j - 1); };

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));
  }

  const int iteration_cap = 60 * n;
  int total_iterations = 0;
  int nn = n;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, xx = 0.0, y = 0.0, z = 0.0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      xx = a(nn, nn);
      if (l == nn) {
        out.real_eigs.push_back(xx + t);
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - xx);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          xx += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            const double first = xx + z;
            const double second = z != 0.0 ? xx - w / z : first;
            out.real_eigs.push_back(first);
            out.real_eigs.push_back(second);
          } else {
            out.complex_pairs.emplace_back(xx + p, z);
          }
          nn -= 2;
        } else {
          if (total_iterations >= iteration_cap) {
            throw NumericalError(ErrorCode::kNonConvergence,
                                 "Francis QR did not converge after " + std::to_string(iteration_cap) +
                                     " iterations (N = " + std::to_string(n) + ")");
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += xx;
            for (int i = 1; i <= nn; ++i) a(i, i) -= xx;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = xx = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          ++total_iterations;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = xx - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((xx = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= xx;
                q /= xx;
                r /= xx;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * xx;
              }
              p += s;
              xx = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * xx;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = xx * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  std::sort(out.real_eigs.begin(), out.real_eigs.end());
  return out;
}

}  // namespace fprmt
