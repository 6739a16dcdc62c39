#include "glvortex/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "glvortex/banded.hpp"
#include "glvortex/error.hpp"

namespace glvortex {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

// Orthonormal basis (Euclidean) of the scaled deflation vectors, twice Gram-Schmidt.
std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> q) {
  std::vector<std::vector<double>> out;
  for (auto& v : q) {
    const double n0 = norm2(v);
    if (!(n0 > 0.0)) throw std::invalid_argument("smallest_eigenpairs: zero deflation vector");
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out) axpy(-dot(u, v), u, v);
    }
    const double n1 = norm2(v);
    if (n1 < 1e-10 * n0) throw std::invalid_argument("smallest_eigenpairs: dependent deflation vectors");
    for (double& x : v) x /= n1;
    out.push_back(std::move(v));
  }
  return out;
}

void project(const std::vector<std::vector<double>>& q, std::vector<double>& v) {
  for (const auto& u : q) axpy(-dot(u, v), u, v);
}

// Applies (P (S - sigma) P)^{-1} on range(P) via a Schur complement of the deflation block.
class ShiftInvert {
 public:
  ShiftInvert(const BandedMatrix& s, const std::vector<std::vector<double>>& q) : q_(q) {
    const std::size_t p = q.size();
    double sigma = -1.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      if (chol_.factor(s, -sigma)) {
        sigma_ = sigma;
        break;
      }
      sigma = 2.0 * sigma - 1.0;
    }
    if (std::isnan(sigma_)) throw NumericalError("no shift found below the spectrum");
    zq_.reserve(p);
    for (const auto& v : q) {
      std::vector<double> z = v;
      chol_.solve_in_place(z);
      zq_.push_back(std::move(z));
    }
    c_.assign(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) c_[i * p + j] = dot(q[i], zq_[j]);
    }
    if (p > 0) {
      const lapack_int info =
          LAPACKE_dpotrf(LAPACK_ROW_MAJOR, 'L', static_cast<lapack_int>(p), c_.data(), static_cast<lapack_int>(p));
      if (info != 0) throw NumericalError("deflation Schur complement is singular");
    }
  }

  double sigma() const { return sigma_; }

  std::vector<double> apply(const std::vector<double>& b) const {
    std::vector<double> x = b;
    chol_.solve_in_place(x);
    const std::size_t p = q_.size();
    if (p > 0) {
      std::vector<double> y(p);
      for (std::size_t i = 0; i < p; ++i) y[i] = dot(q_[i], x);
      LAPACKE_dpotrs(LAPACK_ROW_MAJOR, 'L', static_cast<lapack_int>(p), 1, c_.data(), static_cast<lapack_int>(p),
                     y.data(), 1);
      for (std::size_t i = 0; i < p; ++i) axpy(-y[i], zq_[i], x);
      project(q_, x);
    }
    return x;
  }

 private:
  const std::vector<std::vector<double>>& q_;
  BandedCholesky chol_;
  double sigma_ = std::nan("");
  std::vector<std::vector<double>> zq_;
  std::vector<double> c_;
};

std::vector<double> projected_apply(const BandedMatrix& s, const std::vector<std::vector<double>>& q,
                                    std::vector<double> x) {
  project(q, x);
  std::vector<double> y = s.apply(x);
  project(q, y);
  return y;
}

struct StandardPairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  std::size_t iterations = 0;
  bool dense = false;
};

StandardPairs dense_solve(const BandedMatrix& s, const std::vector<std::vector<double>>& q, std::size_t k,
                          double norm) {
  const std::size_t n = s.dimension();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const std::vector<double> col = projected_apply(s, q, e);
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = col[i];
  }
  // push the deflated directions above the spectrum
  const double lift = 10.0 * norm + 1.0;
  for (const auto& v : q) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] += lift * v[i] * v[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = m[j * n + i] = avg;
    }
  }
  std::vector<double> w(n);
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n), m.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0) throw NumericalError("dense symmetric eigensolver failed");
  StandardPairs out;
  out.dense = true;
  for (std::size_t c = 0; c < k; ++c) {
    out.values.push_back(w[c]);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = m[i * n + c];
    project(q, v);
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// Eigen-decomposition of the symmetric tridiagonal matrix (alpha, beta); returns ascending values.
void tridiagonal_eigen(const std::vector<double>& alpha, const std::vector<double>& beta, std::vector<double>& values,
                       std::vector<double>& vectors) {
  const std::size_t m = alpha.size();
  values = alpha;
  std::vector<double> e(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(m - 1));
  e.push_back(0.0);
  vectors.assign(m * m, 0.0);
  const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(m), values.data(), e.data(),
                                        vectors.data(), static_cast<lapack_int>(m));
  if (info != 0) throw NumericalError("tridiagonal eigensolver failed");
}

StandardPairs lanczos_solve(const BandedMatrix& s, const std::vector<std::vector<double>>& q, std::size_t k,
                            const EigenOptions& opt) {
  const std::size_t n = s.dimension();
  const ShiftInvert op(s, q);
  const std::size_t max_steps = std::min(opt.max_krylov, n - q.size());

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  project(q, v);
  {
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
  }

  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> ritz, ritz_vec;
  bool converged = false;
  for (std::size_t step = 0; step < max_steps; ++step) {
    basis.push_back(v);
    std::vector<double> w = op.apply(v);
    const double a = dot(v, w);
    alpha.push_back(a);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) axpy(-dot(u, w), u, w);
      project(q, w);
    }
    const double b = norm2(w);
    beta.push_back(b);

    const std::size_t m = alpha.size();
    const bool last = m == max_steps || b < 1e-14;
    if ((m >= 2 * k + 10 && m % 10 == 0) || last) {
      tridiagonal_eigen(alpha, beta, ritz, ritz_vec);
      converged = m >= k;
      for (std::size_t c = 0; c < k && converged; ++c) {
        const std::size_t idx = m - 1 - c;  // largest theta first
        const double theta = ritz[idx];
        const double est = std::abs(b * ritz_vec[idx * m + (m - 1)]);
        if (est > opt.tol * 1e-2 * std::abs(theta)) converged = false;
      }
      if (converged || last) break;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  const std::size_t m = alpha.size();
  if (m < k) throw NumericalError("Krylov space smaller than the number of requested pairs");

  StandardPairs out;
  out.iterations = m;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t idx = m - 1 - c;
    const double theta = ritz[idx];
    out.values.push_back(op.sigma() + 1.0 / theta);
    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) axpy(ritz_vec[idx * m + j], basis[j], y);
    project(q, y);
    const double ny = norm2(y);
    for (double& x : y) x /= ny;
    out.vectors.push_back(std::move(y));
  }
  if (!converged) {
    // accept when the true residuals are nonetheless small
    double worst = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> r = projected_apply(s, q, out.vectors[c]);
      axpy(-out.values[c], out.vectors[c], r);
      worst = std::max(worst, norm2(r));
    }
    out.iterations = m;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = (i >= s.bandwidth() ? i - s.bandwidth() : 0); j <= std::min(n - 1, i + s.bandwidth()); ++j)
        row += std::abs(s(i, j));
      norm = std::max(norm, row);
    }
    if (worst > opt.tol * norm) {
      std::ostringstream msg;
      msg << "Lanczos did not converge after " << m << " steps (best residual " << worst << ")";
      throw NumericalError(msg.str(), worst, static_cast<int>(m));
    }
  }
  return out;
}

}  // namespace

EigenResult smallest_eigenpairs(const WeightedMatrix& a, std::size_t k, const std::vector<std::vector<double>>& deflate,
                                const EigenOptions& opt, const std::vector<std::string>& labels) {
  const std::size_t n = a.dimension();
  if (k == 0) throw std::invalid_argument("smallest_eigenpairs: k must be positive");
  if (n < k + deflate.size()) throw std::invalid_argument("smallest_eigenpairs: dimension smaller than k + deflation");
  const BandedMatrix s = symmetrize_to_standard(a);
  const auto& w = a.weights();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(w[i]);

  std::vector<std::vector<double>> scaled;
  for (const auto& z : deflate) {
    if (z.size() != n) throw std::invalid_argument("smallest_eigenpairs: deflation vector has wrong length");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = sq[i] * z[i];
    scaled.push_back(std::move(y));
  }
  const auto q = orthonormalize(scaled);

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    const std::size_t bw = s.bandwidth();
    for (std::size_t j = (i >= bw ? i - bw : 0); j <= std::min(n - 1, i + bw); ++j) row += std::abs(s(i, j));
    norm = std::max(norm, row);
  }

  StandardPairs pairs = n <= opt.dense_limit ? dense_solve(s, q, k, norm) : lanczos_solve(s, q, k, opt);

  // ascending order
  std::vector<std::size_t> order(pairs.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pairs.values[i] < pairs.values[j]; });

  EigenResult out;
  out.norm_estimate = norm;
  out.iterations = pairs.iterations;
  out.dense = pairs.dense;
  out.deflated = deflate;
  out.deflated_labels = labels;
  for (std::size_t idx : order) {
    const auto& y = pairs.vectors[idx];
    std::vector<double> r = projected_apply(s, q, y);
    axpy(-pairs.values[idx], y, r);
    // deterministic sign: largest entry positive
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(y[i]) > std::abs(y[imax])) imax = i;
    }
    const double sign = y[imax] < 0.0 ? -1.0 : 1.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sign * y[i] / sq[i];
    out.eigenvalues.push_back(pairs.values[idx]);
    out.eigenvectors.push_back(std::move(x));
    out.residual_norms.push_back(norm2(r));
  }
  return out;
}

double rayleigh_quotient(const WeightedMatrix& a, const std::vector<double>& v) {
  const double vv = weighted_dot(a, v, v);
  if (!(vv > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero vector");
  return a.form(v, v) / vv;
}

double zero_threshold(const RadialGrid& grid, double lambda) { return 10.0 * grid.h * grid.h * std::max(1.0, lambda); }

bool single_signed(const RadialGrid& grid, std::size_t components, const std::vector<double>& v) {
  const std::size_t lo = grid.index_at_or_after(0.1);
  const std::size_t hi = std::min(grid.index_at_or_after(0.75 * grid.r_max), grid.interior());
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double floor = 1e-8 * vmax;
  for (std::size_t c = 0; c < components; ++c) {
    bool pos = false, neg = false;
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = v[i * components + c];
      if (x > floor) pos = true;
      if (x < -floor) neg = true;
    }
    if (pos && neg) return false;
  }
  return true;
}

bool ground_state_sign_check(const EigenResult& result, const RadialGrid& grid, std::size_t components) {
  if (result.eigenvectors.empty()) return false;
  return single_signed(grid, components, result.eigenvectors.front());
}

double weighted_cosine(const WeightedMatrix& a, const std::vector<double>& u, const std::vector<double>& v) {
  return std::abs(weighted_dot(a, u, v)) / (weighted_norm(a, u) * weighted_norm(a, v));
}

}  // namespace glvortex
