#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glvortex {

/// Square matrix with entries only on |i - j| <= bandwidth, stored row-wise.
/// Not necessarily symmetric; the factor operators use it unsymmetrically.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t dimension, std::size_t bandwidth);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return (i > j ? i - j : j - i) <= bw_;
  }

  /// Entry (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const noexcept;
  double& at(std::size_t i, std::size_t j);
  void add(std::size_t i, std::size_t j, double value) { at(i, j) += value; }

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
  /// y = A^T x
  std::vector<double> apply_transpose(std::span<const double> x) const;

  BandedMatrix transpose() const;
  /// Largest absolute entry.
  double max_abs() const noexcept;
  /// max |A_ij - A_ji|
  double symmetry_defect() const noexcept;
  /// Row/column scaling: diag(left) * A * diag(right).
  BandedMatrix scaled(std::span<const double> left, std::span<const double> right) const;

  const std::vector<double>& raw() const noexcept { return data_; }

 private:
  std::size_t dim_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> data_;  // row i: entries j = i - bw .. i + bw
};

BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b);
BandedMatrix operator-(const BandedMatrix& a, const BandedMatrix& b);
/// Product of two banded matrices (bandwidths add, capped at dimension - 1).
BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);

/// Cholesky factor of a symmetric positive definite banded matrix (LAPACK dpbtrf).
class BandedCholesky {
 public:
  /// Factors A + shift * diag(shift_scale). Returns false when A is not SPD;
  /// the object is then unusable.
  bool factor(const BandedMatrix& a, double shift = 0.0, std::span<const double> shift_scale = {});
  void solve_in_place(std::span<double> rhs) const;
  std::size_t dimension() const noexcept { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> ab_;  // LAPACK column-major upper band storage
};

/// Solves a tridiagonal system in place (LAPACK dgtsv). Throws on singularity.
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::span<double> rhs);

}  // namespace glvortex
