#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glvortex/banded.hpp"

namespace glvortex {

/// Uniform radial grid on [r_min, r_max] with finite-volume weights for r dr.
///
/// Node i owns the cell [r_i - h/2, r_i + h/2] clipped to [max(0, r_0 - h/2), r_max].
/// Operators are assembled for the first n_points - 1 nodes; the value at r_max is
/// held fixed (Dirichlet). No flux crosses the inner face.
struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  double h = 0.0;
  double inner_face = 0.0;
  std::size_t n_points = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Number of nodes carrying operator unknowns.
  std::size_t interior() const noexcept { return n_points - 1; }
  /// Radius of the face between node j and node j + 1.
  double face(std::size_t j) const noexcept { return nodes[j] + 0.5 * h; }
  /// Flux coefficient r_{j+1/2} / h across that face.
  double kappa(std::size_t j) const noexcept { return face(j) / h; }
  /// Index of the first node with r >= value (n_points if none).
  std::size_t index_at_or_after(double r) const noexcept;
};

/// Throws std::invalid_argument unless 0 < r_min < r_max and n_points >= 16.
RadialGrid build_grid(double r_min, double r_max, std::size_t n_points);

/// Grid whose first cell starts exactly at the origin: r_min = r_max / (2 n_points - 1).
RadialGrid build_origin_grid(double r_max, std::size_t n_points);

/// Sum of w_i u_i v_i over all nodes.
double weighted_inner_product(const RadialGrid& grid, std::span<const double> u, std::span<const double> v);

/// Operator A = W^{-1} K acting on interleaved multi-component grid functions.
///
/// Unknown (i, c) lives at index i * components + c, for nodes i < n_points - 1.
/// K is symmetric, so A is self-adjoint for the weighted inner product.
class WeightedMatrix {
 public:
  WeightedMatrix() = default;
  WeightedMatrix(const RadialGrid& grid, std::size_t components, std::size_t bandwidth);

  std::size_t components() const noexcept { return components_; }
  std::size_t dimension() const noexcept { return stiffness_.dimension(); }
  std::size_t bandwidth() const noexcept { return stiffness_.bandwidth(); }

  const BandedMatrix& stiffness() const noexcept { return stiffness_; }
  BandedMatrix& stiffness() noexcept { return stiffness_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// K-coefficient linking row (last interior node, a) to the fixed boundary value of component b.
  double boundary_coupling(std::size_t a, std::size_t b) const { return boundary_[a * components_ + b]; }
  double& boundary_coupling(std::size_t a, std::size_t b) { return boundary_[a * components_ + b]; }

  /// A x for x vanishing at r_max.
  std::vector<double> apply(std::span<const double> x) const;
  /// A x where component c takes the value boundary[c] at r_max.
  std::vector<double> apply(std::span<const double> x, std::span<const double> boundary) const;
  /// <x, A y>_w = x^T K y
  double form(std::span<const double> x, std::span<const double> y) const;
  /// Entry (i, j) of A.
  double entry(std::size_t i, std::size_t j) const { return stiffness_(i, j) / weights_[i]; }
  /// Symmetry defect of K, i.e. of A in the weighted metric.
  double symmetry_defect() const noexcept { return stiffness_.symmetry_defect(); }

 private:
  std::size_t components_ = 1;
  BandedMatrix stiffness_;
  std::vector<double> weights_;
  std::vector<double> boundary_;
};

/// Weighted inner product over interleaved unknowns of a WeightedMatrix.
double weighted_dot(const WeightedMatrix& a, std::span<const double> x, std::span<const double> y);
double weighted_norm(const WeightedMatrix& a, std::span<const double> x);

/// Conservative discretization of -(1/r)(r u')' + angular / r^2 + potential(r).
WeightedMatrix radial_schrodinger_matrix(const RadialGrid& grid, double angular, std::span<const double> potential);

/// Adds the scalar Laplacian -(1/r)(r u')' on component c of an operator (coefficient scale).
void add_laplacian(const RadialGrid& grid, WeightedMatrix& a, std::size_t c, double scale = 1.0);

/// D^{1/2} A D^{-1/2} = D^{-1/2} K D^{-1/2}; symmetric to the last bit.
BandedMatrix symmetrize_to_standard(const WeightedMatrix& a);

/// Interleaves per-component grid functions (length n_points or interior()) into unknowns.
std::vector<double> pack(const RadialGrid& grid, std::span<const std::vector<double>> components);
/// Inverse of pack; the r_max entry of each component is set to zero.
std::vector<std::vector<double>> unpack(const RadialGrid& grid, std::size_t components, std::span<const double> x);

}  // namespace glvortex
