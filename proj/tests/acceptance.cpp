// Acceptance run at the default grid (r_max = 20, n_points = 2000). One line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glvortex/operators.hpp"
#include "glvortex/profiles.hpp"
#include "glvortex/spectra.hpp"
#include "glvortex/verdict.hpp"
#include "golden_values.hpp"
#include "test_support.hpp"

using namespace glvortex;

namespace {

constexpr std::size_t kDefaultPoints = 2000;
const std::size_t kRefinement[] = {1000, 2000, 4000};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      if (pass) detail.str("");
      detail << "FAILED " << what;
      pass = false;
    }
  }
  template <class T>
  Outcome& note(const T& v) {
    if (pass) detail << v;
    return *this;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string fixed(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string case_name(int n, double lambda) {
  std::ostringstream os;
  os << "(n=" << n << ",lambda=" << lambda << ")";
  return os.str();
}

VortexProfile profile(int n, double lambda, std::size_t points = kDefaultPoints) {
  return solve_profile(n, lambda, testing::origin_grid(points));
}

// mean order per halving of h, from the coarsest and finest errors
double fitted_order(const std::vector<double>& e) {
  const double k = static_cast<double>(e.size() - 1);
  return std::log2(e.front() / e.back()) / k;
}

bool decreasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] < e[i - 1])) return false;
  }
  return true;
}

void theorem(Outcome& o) {
  const std::vector<int> ns{1, 2, 3};
  const std::vector<double> lambdas{0.5, 0.8, 1.5, 2.0};
  const std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto base = sweep(ns, lambdas, GridConfig{20.0, kDefaultPoints, 0.0}, jobs);
  const auto fine = sweep(ns, lambdas, GridConfig{20.0, 2 * kDefaultPoints, 0.0}, jobs);
  int agree = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto& c = base[i];
    const std::string name = case_name(c.n, c.lambda);
    o.require(c.report.has_value(), name + " failed: " + c.error);
    o.require(fine[i].report.has_value(), name + " failed at doubled grid: " + fine[i].error);
    if (!c.report || !fine[i].report) continue;
    const Classification want =
        (c.n == 1 || c.lambda < 1.0) ? Classification::stable : Classification::unstable;
    o.require(c.report->classification == want, name + " classified " + to_string(c.report->classification));
    o.require(fine[i].report->classification == c.report->classification, name + " changes under doubling");
    if (c.report->classification == want && fine[i].report->classification == want) ++agree;
  }
  o.note(agree).note("/12 cells as expected at n_points 2000 and 4000");
}

void bogomolnyi(Outcome& o) {
  double worst_res = 0.0, worst_energy = 0.0;
  for (int n : {1, 2}) {
    const VortexProfile p = profile(n, 1.0);
    const BogomolnyiResidual b = bogomolnyi_residual(p, 0.1, 15.0);
    const double res = std::max(b.vortex_equation, b.field_equation);
    const double rel = std::abs(vortex_energy(p) / (std::numbers::pi * n) - 1.0);
    o.require(res <= 1e-4, case_name(n, 1.0) + " first-order residual " + sci(res));
    o.require(rel <= 1e-2, case_name(n, 1.0) + " energy off by " + sci(rel));
    worst_res = std::max(worst_res, res);
    worst_energy = std::max(worst_energy, rel);
  }
  o.note("max residual ").note(sci(worst_res)).note(", energy/(pi n) - 1 = ").note(sci(worst_energy));
}

void inequality(Outcome& o) {
  double smallest_margin = INFINITY, critical = 0.0;
  for (int n : {1, 2, 3}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const VortexProfile p = profile(n, lambda);
      const auto e = profile_inequality_margin(p);
      const auto& g = *p.grid;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (g.nodes[i] < 0.1 || g.nodes[i] > 15.0) continue;
        if (lambda == 1.0) {
          critical = std::max(critical, std::abs(e[i]));
        } else {
          const double signed_margin = lambda < 1.0 ? e[i] : -e[i];
          smallest_margin = std::min(smallest_margin, signed_margin);
          if (!(signed_margin > 0.0)) {
            o.require(false, case_name(n, lambda) + " wrong sign at r=" + std::to_string(g.nodes[i]));
            break;
          }
        }
      }
    }
  }
  o.require(critical <= 1e-4, "critical |e| " + sci(critical));
  o.note("sign held at every node (min margin ").note(sci(smallest_margin)).note("), |e| at lambda=1 ")
      .note(sci(critical));
}

void zero_modes(Outcome& o) {
  double worst_t = 0.0, worst_order = INFINITY;
  for (int n : {1, 2}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      std::vector<double> e;
      for (std::size_t pts : kRefinement) {
        const VortexProfile p = profile(n, lambda, pts);
        e.push_back(relative_residual(assemble_Lm(p, 1), translational_mode(p)));
      }
      const double ord = fitted_order(e);
      o.require(e[1] <= 1e-3, case_name(n, lambda) + " |L1 T|/|T| = " + sci(e[1]));
      o.require(decreasing(e) && ord >= 1.8, case_name(n, lambda) + " L1 T order " + std::to_string(ord));
      worst_t = std::max(worst_t, e[1]);
      worst_order = std::min(worst_order, ord);
    }
  }
  double worst_fw = 0.0, worst_fw_order = INFINITY;
  for (int n : {2, 3}) {
    for (int m = 1; m <= n; ++m) {
      std::vector<double> e;
      for (std::size_t pts : kRefinement) {
        const VortexProfile p = profile(n, 1.0, pts);
        const FactorOperator f = assemble_Fm(p, m);
        const SpecialVector w = W_mode(p, m);
        const BlockOperator l = assemble_Lm(p, m);
        e.push_back(f.face_norm(f.apply(w.packed())) / weighted_norm(l.matrix, w.packed()));
      }
      const double ord = fitted_order(e);
      const std::string name = case_name(n, 1.0) + " m=" + std::to_string(m);
      o.require(e[1] <= 1e-3, name + " |F W|/|W| = " + sci(e[1]));
      o.require(decreasing(e) && ord >= 1.8, name + " F W order " + std::to_string(ord));
      worst_fw = std::max(worst_fw, e[1]);
      worst_fw_order = std::min(worst_fw_order, ord);
    }
  }
  double worst_m1 = 0.0;
  for (int n : {1, 2, 3}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const VortexProfile p = profile(n, lambda);
      const BlockOperator m1 = assemble_tildeFm_and_Mm(p, 1).second;
      const double r = relative_residual(m1, scalar_vector(p.grid, p.f_prime, "f'"));
      o.require(r <= 1e-3, case_name(n, lambda) + " |M1 f'|/|f'| = " + sci(r));
      worst_m1 = std::max(worst_m1, r);
    }
  }
  o.note("|L1 T|/|T| <= ").note(sci(worst_t)).note(" (order >= ").note(fixed(worst_order, 2)).note("), |F_m W_m| <= ")
      .note(sci(worst_fw)).note(" (order >= ").note(fixed(worst_fw_order, 2)).note("), |M1 f'|/|f'| <= ").note(sci(worst_m1));
}

void witnesses(Outcome& o) {
  const VortexProfile hi = profile(2, 2.0);
  const VortexProfile lo = profile(2, 0.5);
  const double rq_hi = rayleigh_quotient(assemble_Lm(hi, 2).matrix, tildeW_mode(hi, 2).packed());
  const double rq_lo = rayleigh_quotient(assemble_Lm(lo, 2).matrix, tildeW_mode(lo, 2).packed());
  o.require(rq_hi < -1e-3, "RQ at lambda=2 is " + sci(rq_hi));
  o.require(rq_lo >= -1e-6, "RQ at lambda=0.5 is " + sci(rq_lo));
  o.require(std::abs(rq_hi - golden::witness_rq_lambda_two) <= 5e-5, "RQ at lambda=2 drifted from golden");
  o.require(std::abs(rq_lo - golden::witness_rq_lambda_half) <= 5e-5, "RQ at lambda=0.5 drifted from golden");
  o.note("RQ(lambda=2) = ").note(sci(rq_hi)).note(", RQ(lambda=0.5) = ").note(sci(rq_lo));
}

void identities(Outcome& o) {
  double rot = 0.0, mm = 0.0;
  for (int n : {1, 2, 3}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const VortexProfile p = profile(n, lambda);
      for (int m : {0, 1, 2, 3, 4, -1, -2, -3, -4}) {
        const RotationDefect d = rotation_defect(p, m);
        o.require(d.absolute <= 1e-12, case_name(n, lambda) + " rotation defect " + sci(d.absolute));
        rot = std::max(rot, d.absolute);
      }
      for (int m : {2, 3, 4}) {
        const MmDifference d = mm_difference(p, m);
        o.require(d.diagonal, case_name(n, lambda) + " M_m - M_1 not diagonal");
        o.require(d.relative() <= 1e-10, case_name(n, lambda) + " M_m - M_1 defect " + sci(d.relative()));
        mm = std::max(mm, d.relative());
      }
    }
  }
  double ks_order = INFINITY, g0_order = INFINITY;
  for (int n : {1, 2}) {
    for (double lambda : {0.5, 2.0}) {
      std::vector<double> ks, g0;
      for (std::size_t pts : kRefinement) {
        const VortexProfile p = profile(n, lambda, pts);
        ks.push_back(keysplit_residual(p, 2, 3));
        g0.push_back(g0_factor_residual(p, 3));
      }
      const double a = fitted_order(ks), b = fitted_order(g0);
      o.require(decreasing(ks) && a >= 1.0, case_name(n, lambda) + " keysplit order " + std::to_string(a));
      o.require(decreasing(g0) && b >= 1.0, case_name(n, lambda) + " G0 order " + std::to_string(b));
      ks_order = std::min(ks_order, a);
      g0_order = std::min(g0_order, b);
    }
  }
  o.note("rotation ").note(sci(rot)).note(", M_m - M_1 ").note(sci(mm)).note(", keysplit order ").note(fixed(ks_order, 2))
      .note(", G0 order ").note(fixed(g0_order, 2));
}

void ground_states(Outcome& o) {
  double min_cos = 1.0, max_ratio = 0.0, min_cos_m1 = 1.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const VortexProfile p = profile(1, lambda);
    const BlockOperator l1 = assemble_Lm(p, 1);
    const EigenResult r = smallest_eigenpairs(l1.matrix, 2);
    const double cs = weighted_cosine(l1.matrix, r.eigenvectors[0], translational_mode(p).packed());
    const double thr = zero_threshold(*p.grid, lambda);
    o.require(cs >= 0.999, case_name(1, lambda) + " cos(ground, T) = " + std::to_string(cs));
    o.require(std::abs(r.eigenvalues[0]) <= thr, case_name(1, lambda) + " mu_0 = " + sci(r.eigenvalues[0]));
    min_cos = std::min(min_cos, cs);
    max_ratio = std::max(max_ratio, std::abs(r.eigenvalues[0]) / thr);
  }
  // M_1 >= 0 below critical coupling and <= 0 above it; f' is the ground state of +-M_1.
  for (int n : {1, 2, 3}) {
    for (double lambda : {0.5, 2.0}) {
      const VortexProfile p = profile(n, lambda);
      WeightedMatrix m1 = assemble_tildeFm_and_Mm(p, 1).second.matrix;
      if (lambda > 1.0) {
        const std::vector<double> mone(m1.dimension(), -1.0), one(m1.dimension(), 1.0);
        m1.stiffness() = m1.stiffness().scaled(mone, one);
      }
      const EigenResult r = smallest_eigenpairs(m1, 2);
      const std::vector<double> fp(p.f_prime.begin(), p.f_prime.end() - 1);
      const double cs = weighted_cosine(m1, r.eigenvectors[0], fp);
      o.require(cs >= 0.999, case_name(n, lambda) + " cos(ground of M_1, f') = " + std::to_string(cs));
      min_cos_m1 = std::min(min_cos_m1, cs);
    }
  }
  o.note("cos(L1 ground, T) >= ").note(fixed(min_cos, 7)).note(", |mu_0|/threshold <= ").note(fixed(max_ratio, 3))
      .note(", cos(M1 ground, f') >= ").note(fixed(min_cos_m1, 7));
}

void lambda_derivative(Outcome& o) {
  const LambdaDerivativeCheck c = lambda_derivative_check(1, 1.0, testing::origin_grid(kDefaultPoints), 1e-3);
  o.require(c.residual <= 5e-2, "residual " + sci(c.residual));
  o.require(c.xi_positive, "xi changes sign");
  std::vector<double> seq;
  for (auto [dl, pts] : {std::pair{1e-2, std::size_t{1000}}, std::pair{1e-3, std::size_t{2000}},
                         std::pair{1e-4, std::size_t{4000}}}) {
    seq.push_back(lambda_derivative_check(1, 1.0, testing::origin_grid(pts), dl).residual);
  }
  o.require(decreasing(seq), "residual does not improve as dlambda and h shrink");
  o.note("residual ").note(sci(c.residual)).note(" at dlambda=1e-3; refinement ").note(sci(seq[0])).note(" -> ")
      .note(sci(seq[1])).note(" -> ").note(sci(seq[2]));
}

void z0_determinant(Outcome& o) {
  for (auto [n, lambda] : {std::pair{1, 2.0}, std::pair{2, 8.0}}) {
    const Z0Report z = appendix_Z0_check(profile(n, lambda));
    o.require(z.negative_det_nodes == 0 && z.min_det > 0.0, case_name(n, lambda) + " min det " + sci(z.min_det));
    o.require(z.lf_residual <= 1e-3, case_name(n, lambda) + " l f residual " + sci(z.lf_residual));
    o.note(case_name(n, lambda)).note(": min det ").note(sci(z.min_det)).note(", lf ").note(sci(z.lf_residual))
        .note("  ");
  }
}

void oracle(Outcome& o) {
  double worst = 0.0;
  for (const auto& s : golden::profile_samples) {
    const VortexProfile p = profile(s.n, s.lambda);
    const double df = std::abs(testing::interpolate(*p.grid, p.f, s.r) - s.f);
    const double da = std::abs(testing::interpolate(*p.grid, p.a, s.r) - s.a);
    o.require(std::max(df, da) <= 1e-5, case_name(s.n, s.lambda) + " at r=" + std::to_string(s.r) + " off by " +
                                             sci(std::max(df, da)));
    worst = std::max({worst, df, da});
  }
  o.note("max deviation ").note(sci(worst)).note(" over 24 samples");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"classification over n x lambda", theorem},
      {"first-order equations at lambda=1", bogomolnyi},
      {"profile inequality signs", inequality},
      {"zero-mode residuals", zero_modes},
      {"instability witnesses", witnesses},
      {"operator identities", identities},
      {"ground-state structure", ground_states},
      {"lambda-derivative identity", lambda_derivative},
      {"Z0 determinant", z0_determinant},
      {"oracle cross-check", oracle},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-36s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
