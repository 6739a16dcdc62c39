#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "glvortex/banded.hpp"
#include "glvortex/profiles.hpp"
#include "glvortex/radial_grid.hpp"

namespace glvortex {

enum class OperatorKind { L_m, hatL_m, M0, N0, G0, F_m, tildeF_m, M_m, l_m, Z0_pointwise };

std::string to_string(OperatorKind kind);

/// Self-adjoint radial block over 1, 2 or 4 interleaved components.
struct BlockOperator {
  OperatorKind kind = OperatorKind::L_m;
  int m = 0;
  int n = 1;
  double lambda = 1.0;
  std::shared_ptr<const RadialGrid> grid;
  WeightedMatrix matrix;

  std::size_t components() const noexcept { return matrix.components(); }
  std::vector<double> apply(const std::vector<double>& x) const { return matrix.apply(x); }
};

/// First-order operator mapping node values to face values (face j sits between nodes j and j+1).
/// The adjoint is the exact adjoint for the node and face weights, so F* F is symmetric.
struct FactorOperator {
  OperatorKind kind = OperatorKind::G0;
  int m = 0;
  std::shared_ptr<const RadialGrid> grid;
  std::size_t components = 1;
  BandedMatrix matrix;                // rows: faces x components, columns: nodes x components
  std::vector<double> face_weights;   // r_{j+1/2} h, repeated per component
  std::vector<double> node_weights;

  std::vector<double> apply(const std::vector<double>& x) const { return matrix.apply(x); }
  std::vector<double> adjoint(const std::vector<double>& y) const;
  /// F* F as a weighted operator.
  WeightedMatrix normal() const;
  /// sqrt(sum face_weights * y^2)
  double face_norm(const std::vector<double>& y) const;
};

/// Grid function with several components sampled on every node.
struct SpecialVector {
  std::string kind;
  int m = 0;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<std::vector<double>> values;

  /// Interleaved unknowns (drops the r_max node).
  std::vector<double> packed() const { return pack(*grid, values); }
  /// Values at r_max, one per component.
  std::vector<double> boundary() const;
};

SpecialVector scalar_vector(std::shared_ptr<const RadialGrid> grid, std::vector<double> values, std::string kind);

/// A v for a grid function v that need not vanish at r_max.
std::vector<double> apply_grid_function(const BlockOperator& a, const SpecialVector& v);
/// ||A v||_w / ||v||_w with v's own value at r_max.
double relative_residual(const BlockOperator& a, const SpecialVector& v);

BlockOperator assemble_Lm(const VortexProfile& p, int m);
BlockOperator assemble_hatLm(const VortexProfile& p, int m);
std::pair<BlockOperator, BlockOperator> assemble_M0_N0(const VortexProfile& p);
/// l_m = -Delta_r + m^2/r^2 + b^2 + lambda/2 (f^2 - 1)
BlockOperator assemble_lm(const VortexProfile& p, int m);
/// -Delta_r + f^2, whose triviality of kernel gives that of G_0*.
BlockOperator assemble_f2_operator(const VortexProfile& p);
FactorOperator assemble_G0(const VortexProfile& p);
/// Throws std::invalid_argument when the profile violates the first-order equations by more than 1e-3.
FactorOperator assemble_Fm(const VortexProfile& p, int m);
std::pair<FactorOperator, BlockOperator> assemble_tildeFm_and_Mm(const VortexProfile& p, int m);

/// Permutes interleaved 4-component unknowns by the orthogonal matrix `rot` (given row-major, unscaled)
/// times `scale`: returns (S rot) K (S rot)^T block by block.
WeightedMatrix rotate_blocks(const WeightedMatrix& a, const double (&rot)[4][4], double scale);

/// q(r) = n (1 - a) f / (r f'); nodes where the ratio is undefined inherit their inner neighbor.
std::vector<double> q_profile(const VortexProfile& p);

SpecialVector translational_mode(const VortexProfile& p);

struct ChiMode {
  std::vector<double> chi;
  std::vector<double> chi_plus;  // chi' + m chi / r
};
ChiMode chi_mode(const VortexProfile& p, int m);
SpecialVector W_mode(const VortexProfile& p, int m);
SpecialVector tildeW_mode(const VortexProfile& p, int m);

/// Smooth bumps supported in [r_lo, r_hi], one random combination per component.
std::vector<double> smooth_test_vector(const RadialGrid& grid, std::size_t components, std::uint64_t seed,
                                       double r_lo = 0.5, double r_hi = 10.0);

/// max over trials of ||(L_m - F~*F~ - J M_m) v||_w / ||v||_w
double keysplit_residual(const VortexProfile& p, int m, int trials, std::uint64_t seed = 2024);
/// max over trials of ||(G_0* G_0 - N_0) v||_w / ||v||_w
double g0_factor_residual(const VortexProfile& p, int trials, std::uint64_t seed = 2024);
/// max over trials of ||(F_m* F_m - L_m) v||_w / ||v||_w
double fm_factor_residual(const VortexProfile& p, int m, int trials, std::uint64_t seed = 2024);

struct RotationDefect {
  double absolute = 0.0;  // max |entry| of the stiffness difference
  double scale = 0.0;     // max |entry| of the stiffness of L_m
  double relative() const { return absolute / std::max(1.0, scale); }
};
/// Compares R hatL_m R^T (m >= 0) or R' hatL_m R'^T (m < 0) against L_|m|, entrywise on the stiffness.
/// For m < 0 the comparison is made after flipping the sign of the fourth component.
RotationDefect rotation_defect(const VortexProfile& p, int m);

struct MmDifference {
  bool diagonal = true;       // off-diagonal stiffness entries of M_m - M_1 vanish identically
  double absolute = 0.0;      // max |(M_m - M_1) - (1 - q^2)(m^2 - 1)/r^2| over the stiffness
  double scale = 0.0;         // max |entry| of the stiffness of M_m
  double relative() const { return absolute / std::max(1.0, scale); }
};
MmDifference mm_difference(const VortexProfile& p, int m);

struct Z0Report {
  double min_trace = 0.0;
  double min_det = 0.0;             // formula det(Z_0) = 2 lambda f^4 + (2 f^2 / r^2)[lambda - 2 n^2 (1-a)^2]
  std::size_t negative_det_nodes = 0;
  double min_det_hessian = 0.0;     // same with the (1,1) entry lambda f^2 of M_0 - diag(l, -Delta_r)
  double l_min_eigenvalue = 0.0;
  double lf_residual = 0.0;         // ||l f||_w / ||f||_w with f(r_max) = 1 imposed
};
Z0Report appendix_Z0_check(const VortexProfile& p);

struct LambdaDerivativeCheck {
  double residual = 0.0;   // ||M_0 xi - eta||_w / ||eta||_w
  bool xi_positive = false;
  bool eta_nonnegative = false;
};
LambdaDerivativeCheck lambda_derivative_check(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                                              double dlambda = 1e-3, const ProfileSolveConfig& cfg = {});

}  // namespace glvortex
