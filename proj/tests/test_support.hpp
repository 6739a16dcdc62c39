#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "glvortex/radial_grid.hpp"

namespace testing {

inline std::shared_ptr<const glvortex::RadialGrid> origin_grid(std::size_t n_points, double r_max = 20.0) {
  return std::make_shared<const glvortex::RadialGrid>(glvortex::build_origin_grid(r_max, n_points));
}

// four-point Lagrange interpolation of node values at r
inline double interpolate(const glvortex::RadialGrid& g, const std::vector<double>& u, double r) {
  std::size_t j = g.index_at_or_after(r);
  j = std::clamp<std::size_t>(j, 2, g.n_points - 2);
  const std::size_t i0 = j - 2;
  double sum = 0.0;
  for (std::size_t a = i0; a < i0 + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = i0; b < i0 + 4; ++b) {
      if (b != a) w *= (r - g.nodes[b]) / (g.nodes[a] - g.nodes[b]);
    }
    sum += w * u[a];
  }
  return sum;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace testing
