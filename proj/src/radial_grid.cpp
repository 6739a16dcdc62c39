#include "glvortex/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace glvortex {

std::size_t RadialGrid::index_at_or_after(double r) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
}

RadialGrid build_grid(double r_min, double r_max, std::size_t n_points) {
  if (!(r_min > 0.0)) throw std::invalid_argument("build_grid: r_min must be positive");
  if (!(r_max > r_min)) throw std::invalid_argument("build_grid: r_max must exceed r_min");
  if (n_points < 16) throw std::invalid_argument("build_grid: need at least 16 points");

  RadialGrid g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.n_points = n_points;
  g.h = (r_max - r_min) / static_cast<double>(n_points - 1);
  g.inner_face = std::max(0.0, r_min - 0.5 * g.h);
  g.nodes.resize(n_points);
  g.weights.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) g.nodes[i] = r_min + static_cast<double>(i) * g.h;
  g.nodes.back() = r_max;
  for (std::size_t i = 1; i + 1 < n_points; ++i) g.weights[i] = g.nodes[i] * g.h;
  const double f0 = g.face(0);
  g.weights[0] = 0.5 * (f0 * f0 - g.inner_face * g.inner_face);
  g.weights.back() = 0.5 * r_max * g.h - 0.125 * g.h * g.h;
  return g;
}

RadialGrid build_origin_grid(double r_max, std::size_t n_points) {
  if (n_points < 16) throw std::invalid_argument("build_origin_grid: need at least 16 points");
  return build_grid(r_max / static_cast<double>(2 * n_points - 1), r_max, n_points);
}

double weighted_inner_product(const RadialGrid& grid, std::span<const double> u, std::span<const double> v) {
  if (u.size() != grid.n_points || v.size() != grid.n_points) {
    throw std::invalid_argument("weighted_inner_product: expected " + std::to_string(grid.n_points) + " values");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) s += grid.weights[i] * u[i] * v[i];
  return s;
}

WeightedMatrix::WeightedMatrix(const RadialGrid& grid, std::size_t components, std::size_t bandwidth)
    : components_(components),
      stiffness_(grid.interior() * components, bandwidth),
      weights_(grid.interior() * components),
      boundary_(components * components, 0.0) {
  if (components == 0) throw std::invalid_argument("WeightedMatrix: zero components");
  for (std::size_t i = 0; i < grid.interior(); ++i) {
    for (std::size_t c = 0; c < components; ++c) weights_[i * components + c] = grid.weights[i];
  }
}

std::vector<double> WeightedMatrix::apply(std::span<const double> x) const {
  std::vector<double> y = stiffness_.apply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= weights_[i];
  return y;
}

std::vector<double> WeightedMatrix::apply(std::span<const double> x, std::span<const double> boundary) const {
  if (boundary.size() != components_) throw std::invalid_argument("WeightedMatrix::apply: boundary size");
  std::vector<double> y = stiffness_.apply(x);
  const std::size_t last = dimension() - components_;
  for (std::size_t a = 0; a < components_; ++a) {
    for (std::size_t b = 0; b < components_; ++b) y[last + a] += boundary_coupling(a, b) * boundary[b];
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= weights_[i];
  return y;
}

double WeightedMatrix::form(std::span<const double> x, std::span<const double> y) const {
  const std::vector<double> ky = stiffness_.apply(y);
  double s = 0.0;
  for (std::size_t i = 0; i < ky.size(); ++i) s += x[i] * ky[i];
  return s;
}

double weighted_dot(const WeightedMatrix& a, std::span<const double> x, std::span<const double> y) {
  const auto& w = a.weights();
  if (x.size() != w.size() || y.size() != w.size()) throw std::invalid_argument("weighted_dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

double weighted_norm(const WeightedMatrix& a, std::span<const double> x) { return std::sqrt(weighted_dot(a, x, x)); }

void add_laplacian(const RadialGrid& grid, WeightedMatrix& a, std::size_t c, double scale) {
  const std::size_t nc = a.components();
  const std::size_t m = grid.interior();
  BandedMatrix& k = a.stiffness();
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double kap = scale * grid.kappa(j);
    const std::size_t p = j * nc + c;
    const std::size_t q = (j + 1) * nc + c;
    k.add(p, p, kap);
    k.add(q, q, kap);
    k.add(p, q, -kap);
    k.add(q, p, -kap);
  }
  // face between the last unknown and the r_max node
  const double kap = scale * grid.kappa(m - 1);
  k.add((m - 1) * nc + c, (m - 1) * nc + c, kap);
  a.boundary_coupling(c, c) -= kap;
}

WeightedMatrix radial_schrodinger_matrix(const RadialGrid& grid, double angular, std::span<const double> potential) {
  if (potential.size() != grid.n_points && potential.size() != grid.interior()) {
    throw std::invalid_argument("radial_schrodinger_matrix: potential must be sampled on the grid nodes");
  }
  WeightedMatrix a(grid, 1, 1);
  add_laplacian(grid, a, 0);
  for (std::size_t i = 0; i < grid.interior(); ++i) {
    const double r = grid.nodes[i];
    a.stiffness().add(i, i, grid.weights[i] * (angular / (r * r) + potential[i]));
  }
  return a;
}

BandedMatrix symmetrize_to_standard(const WeightedMatrix& a) {
  const auto& w = a.weights();
  std::vector<double> s(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) s[i] = 1.0 / std::sqrt(w[i]);
  const BandedMatrix& k = a.stiffness();
  const std::size_t n = k.dimension();
  const std::size_t bw = k.bandwidth();
  BandedMatrix out(n, bw);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i >= bw ? i - bw : 0;
    const std::size_t j1 = std::min(n - 1, i + bw);
    for (std::size_t j = j0; j <= j1; ++j) out.at(i, j) = k(i, j) * (s[i] * s[j]);
  }
  return out;
}

std::vector<double> pack(const RadialGrid& grid, std::span<const std::vector<double>> components) {
  const std::size_t nc = components.size();
  const std::size_t m = grid.interior();
  std::vector<double> x(m * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    if (components[c].size() < m) throw std::invalid_argument("pack: component shorter than the grid");
    for (std::size_t i = 0; i < m; ++i) x[i * nc + c] = components[c][i];
  }
  return x;
}

std::vector<std::vector<double>> unpack(const RadialGrid& grid, std::size_t components, std::span<const double> x) {
  const std::size_t m = grid.interior();
  if (x.size() != m * components) throw std::invalid_argument("unpack: dimension mismatch");
  std::vector<std::vector<double>> out(components, std::vector<double>(grid.n_points, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < components; ++c) out[c][i] = x[i * components + c];
  }
  return out;
}

}  // namespace glvortex
