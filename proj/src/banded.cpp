#include "glvortex/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glvortex/error.hpp"

namespace glvortex {

BandedMatrix::BandedMatrix(std::size_t dimension, std::size_t bandwidth)
    : dim_(dimension),
      bw_(dimension == 0 ? 0 : std::min(bandwidth, dimension - 1)),
      data_(dimension * (2 * bw_ + 1), 0.0) {}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
  if (i >= dim_ || j >= dim_ || !in_band(i, j)) return 0.0;
  return data_[i * (2 * bw_ + 1) + (j + bw_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= dim_ || j >= dim_ || !in_band(i, j)) {
    throw std::out_of_range("BandedMatrix::at outside band");
  }
  return data_[i * (2 * bw_ + 1) + (j + bw_ - i)];
}

void BandedMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw std::invalid_argument("BandedMatrix::apply: dimension mismatch");
  }
  const std::size_t width = 2 * bw_ + 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
    const std::size_t j1 = std::min(dim_ - 1, i + bw_);
    const double* row = &data_[i * width + (j0 + bw_ - i)];
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += row[j - j0] * x[j];
    y[i] = acc;
  }
}

std::vector<double> BandedMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(dim_);
  apply(x, y);
  return y;
}

std::vector<double> BandedMatrix::apply_transpose(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("BandedMatrix::apply_transpose: dimension mismatch");
  std::vector<double> y(dim_, 0.0);
  const std::size_t width = 2 * bw_ + 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
    const std::size_t j1 = std::min(dim_ - 1, i + bw_);
    const double* row = &data_[i * width + (j0 + bw_ - i)];
    for (std::size_t j = j0; j <= j1; ++j) y[j] += row[j - j0] * x[i];
  }
  return y;
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix t(dim_, bw_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
    const std::size_t j1 = std::min(dim_ - 1, i + bw_);
    for (std::size_t j = j0; j <= j1; ++j) t.at(j, i) = (*this)(i, j);
  }
  return t;
}

double BandedMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double BandedMatrix::symmetry_defect() const noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j1 = std::min(dim_ - 1, i + bw_);
    for (std::size_t j = i + 1; j <= j1; ++j) d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
  }
  return d;
}

BandedMatrix BandedMatrix::scaled(std::span<const double> left, std::span<const double> right) const {
  BandedMatrix s(dim_, bw_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
    const std::size_t j1 = std::min(dim_ - 1, i + bw_);
    for (std::size_t j = j0; j <= j1; ++j) s.at(i, j) = left[i] * (*this)(i, j) * right[j];
  }
  return s;
}

namespace {

BandedMatrix combine(const BandedMatrix& a, const BandedMatrix& b, double sign) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("BandedMatrix: dimension mismatch");
  const std::size_t n = a.dimension();
  BandedMatrix c(n, std::max(a.bandwidth(), b.bandwidth()));
  const std::size_t bw = c.bandwidth();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i >= bw ? i - bw : 0;
    const std::size_t j1 = std::min(n - 1, i + bw);
    for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) = a(i, j) + sign * b(i, j);
  }
  return c;
}

}  // namespace

BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) { return combine(a, b, 1.0); }
BandedMatrix operator-(const BandedMatrix& a, const BandedMatrix& b) { return combine(a, b, -1.0); }

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("multiply: dimension mismatch");
  const std::size_t n = a.dimension();
  BandedMatrix c(n, a.bandwidth() + b.bandwidth());
  const std::size_t ba = a.bandwidth();
  const std::size_t bb = b.bandwidth();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k0 = i >= ba ? i - ba : 0;
    const std::size_t k1 = std::min(n - 1, i + ba);
    for (std::size_t k = k0; k <= k1; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const std::size_t j0 = k >= bb ? k - bb : 0;
      const std::size_t j1 = std::min(n - 1, k + bb);
      for (std::size_t j = j0; j <= j1; ++j) c.add(i, j, aik * b(k, j));
    }
  }
  return c;
}

bool BandedCholesky::factor(const BandedMatrix& a, double shift, std::span<const double> shift_scale) {
  dim_ = a.dimension();
  bw_ = a.bandwidth();
  const std::size_t ld = bw_ + 1;
  ab_.assign(ld * dim_, 0.0);
  // Upper storage: AB(bw + i - j, j) = A(i, j) for max(0, j - bw) <= i <= j.
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t i0 = j >= bw_ ? j - bw_ : 0;
    for (std::size_t i = i0; i <= j; ++i) {
      double v = a(i, j);
      if (i == j) v += shift * (shift_scale.empty() ? 1.0 : shift_scale[i]);
      ab_[(bw_ + i - j) + j * ld] = v;
    }
  }
  const lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(dim_),
                                         static_cast<lapack_int>(bw_), ab_.data(), static_cast<lapack_int>(ld));
  if (info != 0) {
    ab_.clear();
    return false;
  }
  return true;
}

void BandedCholesky::solve_in_place(std::span<double> rhs) const {
  if (ab_.empty()) throw std::logic_error("BandedCholesky::solve_in_place: no factorization");
  if (rhs.size() != dim_) throw std::invalid_argument("BandedCholesky::solve_in_place: dimension mismatch");
  const lapack_int info =
      LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(dim_), static_cast<lapack_int>(bw_), 1,
                     ab_.data(), static_cast<lapack_int>(bw_ + 1), rhs.data(), static_cast<lapack_int>(dim_));
  if (info != 0) throw NumericalError("dpbtrs failed");
}

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::span<double> rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  if (rhs.size() != diag.size() || lower.size() + 1 != diag.size() || upper.size() + 1 != diag.size()) {
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  }
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, lower.data(), diag.data(), upper.data(),
                                        rhs.data(), n);
  if (info != 0) throw NumericalError("tridiagonal system is singular");
}

}  // namespace glvortex
