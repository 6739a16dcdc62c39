#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glvortex/profiles.hpp"
#include "glvortex/radial_grid.hpp"

namespace glvortex {

struct GridConfig {
  double r_max = 20.0;
  std::size_t n_points = 2000;
  double r_min = 0.0;  // 0 selects the grid whose first cell starts at the origin

  std::shared_ptr<const RadialGrid> make() const;
};

enum class Classification { stable, unstable, marginal };
std::string to_string(Classification c);

struct BlockSummary {
  int m = 0;
  double mu_deflated = 0.0;      // lowest eigenvalue after removing the symmetry modes of this block
  double mu_raw = 0.0;           // lowest eigenvalue of the full block
  double zero_mode_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t negative_count = 0;  // eigenvalues (of those computed) below -threshold
  std::vector<double> eigenvalues;  // deflated spectrum bottom
  std::vector<std::string> deflated;
};

struct Witness {
  int m = 0;
  double rayleigh_quotient = 0.0;
};

struct StabilityReport {
  int n = 1;
  double lambda = 1.0;
  int m_max = 4;
  GridConfig grid;
  double h = 0.0;
  double zero_threshold = 0.0;
  std::vector<BlockSummary> per_block;
  std::vector<Witness> witnesses;
  Classification classification = Classification::marginal;
  double gap = 0.0;             // min over blocks of the deflated lowest eigenvalue
  int worst_m = 0;              // block attaining the gap
  double essential_edge = 0.0;  // min(1, lambda)
  bool tail_monotone = false;   // lowest eigenvalues increase over the last three blocks
  double profile_residual = 0.0;
  int profile_iterations = 0;
};

struct ClassifyOptions {
  std::size_t eigenpairs = 6;
  ProfileSolveConfig profile;
};

int choose_m_max(int n, double lambda);

/// Applies the decision rule to computed block minima and witnesses.
Classification classify_values(const std::vector<double>& deflated_minima, const std::vector<double>& witness_rq,
                               double threshold);

/// Full pipeline for one (n, lambda).
StabilityReport classify(int n, double lambda, const GridConfig& grid, const ClassifyOptions& opt = {});
/// Same, reusing an already solved profile.
StabilityReport classify(const VortexProfile& p, const GridConfig& grid, const ClassifyOptions& opt = {});

struct SweepCell {
  int n = 1;
  double lambda = 1.0;
  std::optional<StabilityReport> report;
  std::string error;
};

/// Cartesian product ordered by (n, lambda) ascending with duplicates removed; runs up to `jobs` cells at once.
std::vector<SweepCell> sweep(std::vector<int> n_list, std::vector<double> lambda_list, const GridConfig& grid,
                             std::size_t jobs = 1, const ClassifyOptions& opt = {});

}  // namespace glvortex
