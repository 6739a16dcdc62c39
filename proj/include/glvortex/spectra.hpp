#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glvortex/radial_grid.hpp"

namespace glvortex {

struct EigenOptions {
  double tol = 1e-10;
  std::uint64_t seed = 0x5eed5eedULL;
  std::size_t max_krylov = 600;
  std::size_t dense_limit = 400;  // dimensions up to this use LAPACK dsyev directly
};

struct EigenResult {
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // interleaved unknowns, weighted-orthonormal
  std::vector<double> residual_norms;             // ||A v - mu v||_w
  std::vector<std::vector<double>> deflated;
  std::vector<std::string> deflated_labels;
  double norm_estimate = 0.0;                     // max absolute row sum of the symmetrized matrix
  std::size_t iterations = 0;
  bool dense = false;
};

/// k smallest eigenpairs of A restricted to the weighted-orthogonal complement of span(deflate).
/// Throws std::invalid_argument if the dimension is too small, NumericalError on non-convergence.
EigenResult smallest_eigenpairs(const WeightedMatrix& a, std::size_t k,
                                const std::vector<std::vector<double>>& deflate = {},
                                const EigenOptions& opt = {}, const std::vector<std::string>& labels = {});

/// <v, A v>_w / <v, v>_w; throws on the zero vector.
double rayleigh_quotient(const WeightedMatrix& a, const std::vector<double>& v);

/// Eigenvalues with |mu| at or below this are treated as zero.
double zero_threshold(const RadialGrid& grid, double lambda);

/// True iff every component of the ground eigenvector keeps one sign on [0.1, 0.75 r_max].
bool ground_state_sign_check(const EigenResult& result, const RadialGrid& grid, std::size_t components);
bool single_signed(const RadialGrid& grid, std::size_t components, const std::vector<double>& v);

/// |<u, v>_w| / (||u||_w ||v||_w)
double weighted_cosine(const WeightedMatrix& a, const std::vector<double>& u, const std::vector<double>& v);

}  // namespace glvortex
