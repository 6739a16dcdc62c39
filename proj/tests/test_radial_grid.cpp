#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "glvortex/banded.hpp"
#include "glvortex/radial_grid.hpp"
#include "glvortex/spectra.hpp"

using namespace glvortex;

namespace {

// first positive zero of J_m by bisection on the standard library Bessel function
double bessel_zero(int m) {
  double lo = 1.0;
  while (std::cyl_bessel_j(m, lo) * std::cyl_bessel_j(m, lo + 0.1) > 0.0) lo += 0.1;
  double hi = lo + 0.1;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::cyl_bessel_j(m, lo) * std::cyl_bessel_j(m, mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("origin grid places the first cell at zero") {
  const RadialGrid g = build_origin_grid(20.0, 2000);
  CHECK(g.n_points == 2000);
  CHECK(g.r_min == doctest::Approx(20.0 / 3999.0));
  CHECK(g.nodes.back() == doctest::Approx(20.0));
  CHECK(g.inner_face == doctest::Approx(0.0).epsilon(1e-14));
  for (std::size_t i = 1; i < g.n_points; ++i) CHECK(g.nodes[i] - g.nodes[i - 1] == doctest::Approx(g.h));
  // cells tile [0, r_max]: the weights integrate r dr exactly
  const double total = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  CHECK(total == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("general grid validates its arguments") {
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2.0, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.1, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_origin_grid(1.0, 4), std::invalid_argument);
  const RadialGrid g = build_grid(0.5, 10.0, 200);
  CHECK(g.nodes.front() == doctest::Approx(0.5));
  CHECK(g.index_at_or_after(0.5) == 0);
  CHECK(g.index_at_or_after(11.0) == g.n_points);
}

TEST_CASE("weighted inner product integrates r dr") {
  const RadialGrid g = build_origin_grid(5.0, 800);
  std::vector<double> u(g.n_points), v(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    u[i] = std::exp(-g.nodes[i] * g.nodes[i]);
    v[i] = 1.0;
  }
  // int_0^inf e^{-r^2} r dr = 1/2
  CHECK(weighted_inner_product(g, u, v) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_THROWS_AS(weighted_inner_product(g, std::vector<double>(3), v), std::invalid_argument);
}

TEST_CASE("pack and unpack are inverse on the unknowns") {
  const RadialGrid g = build_origin_grid(4.0, 50);
  std::vector<std::vector<double>> comps(3, std::vector<double>(g.n_points));
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < g.n_points; ++i) comps[c][i] = 10.0 * c + i;
  }
  const std::vector<double> x = pack(g, comps);
  REQUIRE(x.size() == 3 * g.interior());
  CHECK(x[3 * 7 + 2] == 27.0);
  const auto back = unpack(g, 3, x);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < g.interior(); ++i) CHECK(back[c][i] == comps[c][i]);
    CHECK(back[c].back() == 0.0);
  }
}

TEST_CASE("radial Laplacian is symmetric in the weighted metric") {
  const RadialGrid g = build_origin_grid(3.0, 120);
  std::vector<double> pot(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) pot[i] = std::sin(g.nodes[i]);
  const WeightedMatrix a = radial_schrodinger_matrix(g, 4.0, pot);
  CHECK(a.symmetry_defect() <= 1e-13 * a.stiffness().max_abs());
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> x(a.dimension()), y(a.dimension());
  for (auto& v : x) v = nd(rng);
  for (auto& v : y) v = nd(rng);
  CHECK(weighted_dot(a, x, a.apply(y)) == doctest::Approx(weighted_dot(a, a.apply(x), y)).epsilon(1e-12));
  CHECK(a.form(x, y) == doctest::Approx(weighted_dot(a, x, a.apply(y))).epsilon(1e-12));
}

TEST_CASE("Dirichlet disk eigenvalues match Bessel zeros") {
  for (int m : {0, 1, 2}) {
    const double j = bessel_zero(m);
    double err_prev = 0.0;
    for (std::size_t n : {200, 400}) {
      const RadialGrid g = build_origin_grid(1.0, n);
      const WeightedMatrix a = radial_schrodinger_matrix(g, m * m, std::vector<double>(g.n_points, 0.0));
      const EigenResult r = smallest_eigenpairs(a, 1);
      const double err = std::abs(r.eigenvalues[0] - j * j) / (j * j);
      CHECK(err < 5e-4);
      if (n == 400) CHECK(std::log2(err_prev / err) > 1.8);
      err_prev = err;
    }
  }
}

TEST_CASE("boundary value enters through the coupling") {
  const RadialGrid g = build_origin_grid(2.0, 40);
  const WeightedMatrix a = radial_schrodinger_matrix(g, 0.0, std::vector<double>(g.n_points, 0.0));
  // constants are harmonic
  const std::vector<double> ones(a.dimension(), 1.0);
  const std::vector<double> bc{1.0};
  const auto y = a.apply(ones, bc);
  for (double v : y) CHECK(std::abs(v) < 1e-10);
  CHECK(a.boundary_coupling(0, 0) < 0.0);
}

TEST_CASE("banded algebra") {
  BandedMatrix a(6, 1), b(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    a.at(i, i) = 4.0;
    if (i + 1 < 6) {
      a.at(i, i + 1) = -1.0;
      a.at(i + 1, i) = -1.0;
    }
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min<std::size_t>(6, i + 3); ++j) b.at(i, j) = 1.0 + i + 2.0 * j;
  }
  CHECK(a.symmetry_defect() == 0.0);
  CHECK(b.symmetry_defect() > 0.0);
  CHECK(a(0, 5) == 0.0);
  const BandedMatrix ab = multiply(a, b);
  CHECK(ab.bandwidth() == 3);
  const std::vector<double> x{1, -2, 3, 0.5, -1, 2};
  const auto lhs = ab.apply(x);
  const auto rhs = a.apply(b.apply(x));
  for (std::size_t i = 0; i < 6; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]));
  const auto bt = b.apply_transpose(x);
  const auto bt2 = b.transpose().apply(x);
  for (std::size_t i = 0; i < 6; ++i) CHECK(bt[i] == doctest::Approx(bt2[i]));

  BandedCholesky chol;
  REQUIRE(chol.factor(a));
  std::vector<double> sol = a.apply(x);
  chol.solve_in_place(sol);
  for (std::size_t i = 0; i < 6; ++i) CHECK(sol[i] == doctest::Approx(x[i]));
  BandedMatrix neg = a.scaled(std::vector<double>(6, -1.0), std::vector<double>(6, 1.0));
  BandedCholesky bad;
  CHECK_FALSE(bad.factor(neg));
}

TEST_CASE("tridiagonal solve") {
  std::vector<double> rhs{1.0, 2.0, 3.0};
  solve_tridiagonal({-1.0, -1.0}, {2.0, 2.0, 2.0}, {-1.0, -1.0}, rhs);
  // inverse of tridiag(-1, 2, -1) applied to (1, 2, 3)
  CHECK(rhs[0] == doctest::Approx(2.5));
  CHECK(rhs[1] == doctest::Approx(4.0));
  CHECK(rhs[2] == doctest::Approx(3.5));
  std::vector<double> r2{1.0, 1.0};
  CHECK_THROWS(solve_tridiagonal({1.0}, {1.0, 1.0}, {1.0}, r2));
}
