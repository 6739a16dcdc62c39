#include "glvortex/verdict.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "glvortex/error.hpp"
#include "glvortex/operators.hpp"
#include "glvortex/spectra.hpp"

namespace glvortex {

std::shared_ptr<const RadialGrid> GridConfig::make() const {
  if (r_min > 0.0) return std::make_shared<const RadialGrid>(build_grid(r_min, r_max, n_points));
  return std::make_shared<const RadialGrid>(build_origin_grid(r_max, n_points));
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::stable: return "stable";
    case Classification::unstable: return "unstable";
    case Classification::marginal: return "marginal";
  }
  return "marginal";
}

int choose_m_max(int n, double /*lambda*/) { return std::max(n, 1) + 3; }

Classification classify_values(const std::vector<double>& deflated_minima, const std::vector<double>& witness_rq,
                               double threshold) {
  for (double mu : deflated_minima) {
    if (mu < -threshold) return Classification::unstable;
  }
  for (double rq : witness_rq) {
    if (rq < -threshold) return Classification::unstable;
  }
  for (double mu : deflated_minima) {
    if (mu < threshold) return Classification::marginal;
  }
  return Classification::stable;
}

StabilityReport classify(const VortexProfile& p, const GridConfig& grid, const ClassifyOptions& opt) {
  const RadialGrid& g = *p.grid;
  StabilityReport rep;
  rep.n = p.n;
  rep.lambda = p.lambda;
  rep.m_max = choose_m_max(p.n, p.lambda);
  rep.grid = grid;
  rep.h = g.h;
  rep.zero_threshold = zero_threshold(g, p.lambda);
  rep.essential_edge = std::min(1.0, p.lambda);
  rep.profile_residual = p.residual;
  rep.profile_iterations = p.iterations;

  const SpecialVector t = translational_mode(p);
  const std::vector<double> tp = t.packed();
  const bool critical = std::abs(p.lambda - 1.0) < 1e-12;

  std::vector<double> minima;
  for (int m = 0; m <= rep.m_max; ++m) {
    const BlockOperator l = assemble_Lm(p, m);
    BlockSummary blk;
    blk.m = m;
    try {
      const EigenResult raw = smallest_eigenpairs(l.matrix, opt.eigenpairs);
      blk.mu_raw = raw.eigenvalues.front();
      if (m == 1) {
        const EigenResult defl = smallest_eigenpairs(l.matrix, opt.eigenpairs, {tp}, {}, {"T"});
        blk.eigenvalues = defl.eigenvalues;
        blk.deflated = {"T"};
        blk.zero_mode_residual = relative_residual(l, t);
      } else {
        blk.eigenvalues = raw.eigenvalues;
        if (critical && m >= 2 && m <= p.n) {
          blk.zero_mode_residual = relative_residual(l, W_mode(p, m));
        }
      }
    } catch (const NumericalError& e) {
      throw NumericalError("block m=" + std::to_string(m) + " (n=" + std::to_string(p.n) +
                               ", lambda=" + std::to_string(p.lambda) + "): " + e.what(),
                           e.residual(), e.iterations());
    }
    blk.mu_deflated = blk.eigenvalues.front();
    for (double mu : blk.eigenvalues) {
      if (mu < -rep.zero_threshold) ++blk.negative_count;
    }
    minima.push_back(blk.mu_deflated);
    rep.per_block.push_back(std::move(blk));
  }

  std::vector<double> rqs;
  for (int m = 2; m <= p.n; ++m) {
    const BlockOperator l = assemble_Lm(p, m);
    const double rq = rayleigh_quotient(l.matrix, tildeW_mode(p, m).packed());
    rep.witnesses.push_back({m, rq});
    rqs.push_back(rq);
  }

  rep.classification = classify_values(minima, rqs, rep.zero_threshold);
  const auto it = std::min_element(minima.begin(), minima.end());
  rep.gap = *it;
  rep.worst_m = static_cast<int>(it - minima.begin());
  const std::size_t nb = minima.size();
  rep.tail_monotone = nb >= 3 && minima[nb - 3] <= minima[nb - 2] && minima[nb - 2] <= minima[nb - 1];
  return rep;
}

StabilityReport classify(int n, double lambda, const GridConfig& grid, const ClassifyOptions& opt) {
  if (n < 1) throw std::invalid_argument("classify: n must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("classify: lambda must be positive");
  const VortexProfile p = solve_profile(n, lambda, grid.make(), opt.profile);
  return classify(p, grid, opt);
}

std::vector<SweepCell> sweep(std::vector<int> n_list, std::vector<double> lambda_list, const GridConfig& grid,
                             std::size_t jobs, const ClassifyOptions& opt) {
  if (n_list.empty()) throw std::invalid_argument("sweep: empty n list");
  if (lambda_list.empty()) throw std::invalid_argument("sweep: empty lambda list");
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  std::sort(lambda_list.begin(), lambda_list.end());
  lambda_list.erase(std::unique(lambda_list.begin(), lambda_list.end()), lambda_list.end());

  std::vector<SweepCell> cells;
  for (int n : n_list) {
    for (double lam : lambda_list) cells.push_back({n, lam, std::nullopt, {}});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& c = cells[i];
      try {
        c.report = classify(c.n, c.lambda, grid, opt);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  const std::size_t nthreads = std::clamp<std::size_t>(jobs, 1, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return cells;
}

}  // namespace glvortex
