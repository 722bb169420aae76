#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fprmt/model.hpp"
#include "fprmt/rng.hpp"

namespace fprmt {

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);
  DenseMatrix(int rows, int cols, std::vector<double> entries);

  static DenseMatrix identity(int n);
  static DenseMatrix diagonal(std::span<const double> diag);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<const double> entries() const noexcept { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);

/// Spectrum of a real square matrix split by structure: real eigenvalues and
/// one representative (positive imaginary part) per conjugate pair.
struct EigenSplit {
  std::vector<double> real_eigs;
  std::vector<std::complex<double>> complex_pairs;

  int n_real() const noexcept { return static_cast<int>(real_eigs.size()); }
  int n_pairs() const noexcept { return static_cast<int>(complex_pairs.size()); }
  int dim() const noexcept { return n_real() + 2 * n_pairs(); }
};

/// rows x cols matrix of i.i.d. N(0, sigma^2) entries drawn in row-major order.
DenseMatrix sample_ginibre(int rows, int cols, double sigma, Stream& stream);

/// J_1 J_2 ... J_D with J_d of shape N_{d-1} x N_d, multiplied left to right.
DenseMatrix product_chain(const ModelSpec& spec, Stream& stream);

/// The same chain with the layers drawn in rotated order J_k ... J_D J_1 ...
/// J_{k-1}; shape N_{k-1} x N_{k-1}. Used to check cyclic invariance.
DenseMatrix product_chain_rotated(const ModelSpec& spec, int first_layer, Stream& stream);

/// log|det(X - shift I)| via partial-pivot LU. Returns -infinity when a pivot
/// is exactly zero (singular shifted matrix).
double log_abs_det_shift(const DenseMatrix& x, double shift);

/// Real/complex split via Hessenberg reduction and Francis double-shift QR.
/// Real eigenvalues come from 1x1 deflations or 2x2 blocks with nonnegative
/// discriminant, conjugate pairs from 2x2 blocks with negative discriminant.
/// Throws NumericalError(kNonConvergence) after 60 N iterations.
EigenSplit eigen_split(const DenseMatrix& x);

}  // namespace fprmt
