#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "glvortex/radial_grid.hpp"

namespace glvortex {

struct ProfileSolveConfig {
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double damping = 0.5;           // backtracking factor of the line search
  int continuation_steps = 6;     // lambda steps used when the direct solve fails
};

/// Equivariant vortex profile psi = f(r) e^{i n theta}, A = n a(r)/r on the grid nodes.
struct VortexProfile {
  int n = 1;
  double lambda = 1.0;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> f, a, f_prime, a_prime;
  std::vector<double> f_deficit;  // 1 - f, stored separately so the far-field decay keeps its digits

  // solver diagnostics
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> energy_history;

  /// b(r) = n (1 - a) / r at node i.
  double b(std::size_t i) const { return n * (1.0 - a[i]) / grid->nodes[i]; }
  std::vector<double> b() const;
};

/// Second-order radial derivative of samples u(r) ~ r^power near the origin.
std::vector<double> radial_derivative(const RadialGrid& grid, const std::vector<double>& u, int power);

/// f0 = (r / sqrt(r^2 + n^2))^n, a0 = r^2 / (r^2 + 2 n^2).
VortexProfile initial_guess(int n, std::shared_ptr<const RadialGrid> grid);

/// Minimizes the discrete radial energy by damped Newton. With a seed the iteration starts there.
/// Throws NumericalError on non-convergence.
VortexProfile solve_profile(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                            const ProfileSolveConfig& cfg = {}, const VortexProfile* seed = nullptr);
VortexProfile solve_profile(int n, double lambda, const RadialGrid& grid, const ProfileSolveConfig& cfg = {});

/// Re-solves along a geometric lambda path starting from a converged profile.
VortexProfile continue_in_lambda(const VortexProfile& p, double lambda_target, int steps,
                                 const ProfileSolveConfig& cfg = {});

/// 1/2 int { f'^2 + n^2 (1-a)^2 f^2 / r^2 + n^2 a'^2 / r^2 + lambda/4 (f^2-1)^2 } r dr
double radial_energy(const VortexProfile& p);

/// Energy of the planar vortex, 2 pi times radial_energy (equals pi n at lambda = 1).
double vortex_energy(const VortexProfile& p);

/// Value of the discrete functional the solver minimizes, plus the constant (n / r_max)^2 / 2 that the
/// solver leaves out of energy_history.
double discrete_energy(const VortexProfile& p);

/// e(r) = f' - b f at every node (the r_max entry is zero).
std::vector<double> profile_inequality_margin(const VortexProfile& p);

struct BogomolnyiResidual {
  double vortex_equation = 0.0;  // max |f' - n (1-a) f / r|
  double field_equation = 0.0;   // max |n a'/r - (1 - f^2)/2|
};
/// Max-norm first-order residuals over nodes in [r_lo, r_hi].
BogomolnyiResidual bogomolnyi_residual(const VortexProfile& p, double r_lo, double r_hi);

struct ProfileProperties {
  bool bounded = false;       // 0 < f, a < 1 on the open interior
  bool monotone = false;      // f', a' > 0 on the open interior
  double slope_f = 0.0;       // log-log slope of f over the first decade of radii
  double slope_a = 0.0;
  double far_field = 0.0;     // |1 - f| + |1 - a| at the last interior node
  bool ok(int n) const;
};
ProfileProperties check_profile_properties(const VortexProfile& p);

}  // namespace glvortex
