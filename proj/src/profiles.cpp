#include "glvortex/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "glvortex/error.hpp"

namespace glvortex {

std::vector<double> VortexProfile::b() const {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b(i);
  return out;
}

namespace {

// Centered differences, even reflection about the origin when the first cell
// starts there, one-sided second order otherwise.
std::vector<double> plain_derivative(const RadialGrid& g, const std::vector<double>& u, bool even_at_origin) {
  const std::size_t n = g.n_points;
  const double h = g.h;
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  if (even_at_origin) {
    d[0] = (u[1] - u[0]) / (2.0 * h);
  } else {
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  }
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

bool origin_cell(const RadialGrid& g) { return g.inner_face == 0.0 || g.inner_face < 1e-12 * g.h; }

// Discrete energy in (u = 1 - f, alpha = n a / r). On origin grids the
// gradient terms are written in g = f / phi and beta = alpha / psi, with
// phi = (1 - exp(-r^2))^(n/2) and psi = (1 - exp(-r^2))^(1/2). The scheme in g
// is the cell-centred one for a radial Laplacian in 2n + 2 dimensions, exact
// on r^2 at the origin, so the discrete profile keeps the r^n (even series)
// structure there. phi is 1 to rounding beyond r ~ 6, which leaves the far
// field as plain finite volumes on the deficit.
constexpr double direct_radius = 1.0;

struct Transform {
  int p = 0;
  bool active = false;

  // log s with s = 1 - exp(-r^2); phi = s^(p/2)
  static double log_s(double r) { return std::log(-std::expm1(-r * r)); }
  double inv(double r) const { return active ? std::exp(-0.5 * p * log_s(r)) : 1.0; }

  // 1/phi(r1) - 1/phi(r0), accurate when the two are close
  double inv_difference(double r0, double r1) const {
    if (!active) return 0.0;
    const double d = std::log1p(-std::exp(-r1 * r1)) - std::log1p(-std::exp(-r0 * r0));
    return inv(r0) * std::expm1(-0.5 * p * d);
  }

  // phi'/phi
  double log_slope(double r) const {
    const double e = std::exp(-r * r);
    return p * r * e / -std::expm1(-r * r);
  }

  // phi^2 r / h at the face between r0 and r1
  double face_weight(double r0, double r1) const {
    const double rf = 0.5 * (r0 + r1);
    return std::pow(-std::expm1(-rf * rf), p) * rf / (r1 - r0);
  }

  // int_{r0}^{r1} phi^2 r dr, Gauss-Legendre in t = r^2
  double cell_moment(double r0, double r1) const {
    static constexpr double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                    0.8650633666889845, 0.9739065285171717};
    static constexpr double w[5] = {0.2955242247147529, 0.2692667143231769, 0.2190863625659820,
                                    0.1494513156102218, 0.0666713443086881};
    const double t0 = r0 * r0, t1 = r1 * r1;
    const double c = 0.5 * (t0 + t1), d = 0.5 * (t1 - t0);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) {
      for (double t : {c - d * x[k], c + d * x[k]}) s += w[k] * std::pow(-std::expm1(-t), p);
    }
    return 0.5 * d * s;
  }

  // coefficient of w f^2 beyond p^2 / r^2: -(l / r + l' + l^2), l = phi'/phi
  double excess(double r) const {
    if (!active) return 0.0;
    const double r2 = r * r;
    const double s = -std::expm1(-r2);
    const double es = std::exp(-r2) / s;
    return -es * (2.0 * p * (1.0 - r2 / s) + double(p) * p * r2 * es);
  }
  double potential(double r) const { return double(p) * p / (r * r) + excess(r); }
  // [r phi phi' g^2] at the outer boundary where phi g = 1
  double boundary(double r) const { return active ? r * log_slope(r) : 0.0; }
};

struct Workspace {
  const RadialGrid& g;
  int n;
  double lambda;
  double alpha_end;
  Transform tf, ta;
  std::vector<double> inv_f, inv_a;  // 1/phi, 1/psi at all nodes
  std::vector<double> kf, ka, dg;    // face weights, 1/phi jump
  std::vector<double> excess_f, pot_a;
  std::vector<double> mass_f, mass_a;  // cell moment of phi^2 r (psi^2 r) over phi^2 (psi^2)
  std::vector<double> wts;
  double boundary_energy;

  Workspace(const RadialGrid& grid, int n_, double lambda_)
      : g(grid), n(n_), lambda(lambda_), alpha_end(n_ / grid.r_max) {
    const bool active = origin_cell(g);
    tf = {n, active && n > 0};
    ta = {1, active};
    const std::size_t m = g.interior();
    inv_f.resize(m + 1);
    inv_a.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      inv_f[i] = tf.inv(g.nodes[i]);
      inv_a[i] = ta.inv(g.nodes[i]);
    }
    kf.resize(m);
    ka.resize(m);
    dg.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double r0 = g.nodes[j], r1 = g.nodes[j + 1];
      kf[j] = tf.active ? tf.face_weight(r0, r1) : g.kappa(j);
      ka[j] = ta.active ? ta.face_weight(r0, r1) : g.kappa(j);
      dg[j] = tf.inv_difference(r0, r1);
    }
    excess_f.resize(m);
    pot_a.resize(m);
    mass_f.resize(m);
    mass_a.resize(m);
    wts.resize(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      excess_f[i] = tf.excess(g.nodes[i]);
      pot_a[i] = ta.potential(g.nodes[i]);
      const double r = g.nodes[i];
      const double lo = i == 0 ? g.inner_face : r - 0.5 * g.h, hi = r + 0.5 * g.h;
      mass_f[i] = tf.active ? tf.cell_moment(lo, hi) * inv_f[i] * inv_f[i] : g.weights[i];
      mass_a[i] = ta.active ? ta.cell_moment(lo, hi) * inv_a[i] * inv_a[i] : g.weights[i];
      wts[2 * i] = wts[2 * i + 1] = g.weights[i];
    }
    boundary_energy = 0.5 * (tf.boundary(g.r_max) + alpha_end * alpha_end * ta.boundary(g.r_max));
  }

  // inside the core the state holds f itself, outside the deficit 1 - f
  bool direct(std::size_t i) const { return i < g.interior() && g.nodes[i] < direct_radius; }
  double sign(std::size_t i) const { return direct(i) ? 1.0 : -1.0; }
  double state_f(const std::vector<double>& x, std::size_t i) const {
    if (i >= g.interior()) return 1.0;
    return direct(i) ? x[2 * i] : 1.0 - x[2 * i];
  }
  double state_a(const std::vector<double>& x, std::size_t i) const {
    return i < g.interior() ? x[2 * i + 1] : alpha_end;
  }
  // f^2 - 1
  double state_s(const std::vector<double>& x, std::size_t i) const {
    if (direct(i)) return x[2 * i] * x[2 * i] - 1.0;
    const double u = x[2 * i];
    return u * (u - 2.0);
  }
  // g_{j+1} - g_j and beta_{j+1} - beta_j
  double jump_g(const std::vector<double>& x, std::size_t j) const {
    if (direct(j) || direct(j + 1)) return state_f(x, j + 1) * inv_f[j + 1] - state_f(x, j) * inv_f[j];
    const double u1 = j + 1 < g.interior() ? x[2 * j + 2] : 0.0;
    return dg[j] - (u1 * inv_f[j + 1] - x[2 * j] * inv_f[j]);
  }
  double jump_b(const std::vector<double>& x, std::size_t j) const {
    return state_a(x, j + 1) * inv_a[j + 1] - state_a(x, j) * inv_a[j];
  }

  double energy(const std::vector<double>& x) const {
    const std::size_t m = g.interior();
    double e = boundary_energy;
    for (std::size_t j = 0; j < m; ++j) {
      const double jg = jump_g(x, j), jb = jump_b(x, j);
      e += 0.5 * (kf[j] * jg * jg + ka[j] * jb * jb);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double r = g.nodes[i];
      const double f = state_f(x, i), al = x[2 * i + 1];
      const double bb = n / r - al;
      const double s = state_s(x, i);
      e += 0.5 * mass_a[i] * pot_a[i] * al * al;
      e += 0.5 * mass_f[i] * ((excess_f[i] + bb * bb) * f * f + 0.25 * lambda * (s * s - 1.0));
      e += 0.125 * lambda * g.weights[i];
    }
    return e;
  }

  std::vector<double> gradient(const std::vector<double>& x) const {
    const std::size_t m = g.interior();
    // derivatives with respect to f and alpha; the sign per node is applied last
    std::vector<double> gr(2 * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double jg = kf[j] * jump_g(x, j), jb = ka[j] * jump_b(x, j);
      gr[2 * j] -= jg * inv_f[j];
      gr[2 * j + 1] -= jb * inv_a[j];
      if (j + 1 < m) {
        gr[2 * j + 2] += jg * inv_f[j + 1];
        gr[2 * j + 3] += jb * inv_a[j + 1];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double r = g.nodes[i];
      const double f = state_f(x, i), al = x[2 * i + 1];
      const double bb = n / r - al;
      const double w = mass_f[i];
      gr[2 * i] += w * ((excess_f[i] + bb * bb) * f + 0.5 * lambda * state_s(x, i) * f);
      gr[2 * i] *= sign(i);
      gr[2 * i + 1] += mass_a[i] * pot_a[i] * al - w * bb * f * f;
    }
    return gr;
  }

  BandedMatrix hessian(const std::vector<double>& x) const {
    const std::size_t m = g.interior();
    BandedMatrix hm(2 * m, 3);
    for (std::size_t j = 0; j < m; ++j) {
      hm.add(2 * j, 2 * j, kf[j] * inv_f[j] * inv_f[j]);
      hm.add(2 * j + 1, 2 * j + 1, ka[j] * inv_a[j] * inv_a[j]);
      if (j + 1 < m) {
        hm.add(2 * j + 2, 2 * j + 2, kf[j] * inv_f[j + 1] * inv_f[j + 1]);
        hm.add(2 * j + 3, 2 * j + 3, ka[j] * inv_a[j + 1] * inv_a[j + 1]);
        const double cf = -sign(j) * sign(j + 1) * kf[j] * inv_f[j] * inv_f[j + 1];
        const double ca = -ka[j] * inv_a[j] * inv_a[j + 1];
        hm.add(2 * j, 2 * j + 2, cf);
        hm.add(2 * j + 2, 2 * j, cf);
        hm.add(2 * j + 1, 2 * j + 3, ca);
        hm.add(2 * j + 3, 2 * j + 1, ca);
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double r = g.nodes[i];
      const double f = state_f(x, i), al = x[2 * i + 1];
      const double bb = n / r - al;
      const double w = mass_f[i];
      const double mixed = -2.0 * sign(i) * w * bb * f;
      hm.add(2 * i, 2 * i, w * (excess_f[i] + bb * bb + 0.5 * lambda * (3.0 * f * f - 1.0)));
      hm.add(2 * i, 2 * i + 1, mixed);
      hm.add(2 * i + 1, 2 * i, mixed);
      hm.add(2 * i + 1, 2 * i + 1, mass_a[i] * pot_a[i] + w * f * f);
    }
    return hm;
  }

  double residual_norm(const std::vector<double>& gr) const {
    double s = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) s += gr[i] * gr[i] / wts[i];
    return std::sqrt(s);
  }

  std::vector<double> newton_direction(const std::vector<double>& x, const std::vector<double>& gr) const {
    const BandedMatrix hm = hessian(x);
    BandedCholesky chol;
    double mu = 0.0;
    while (!chol.factor(hm, mu, wts)) {
      mu = mu == 0.0 ? 1e-8 * std::max(1.0, lambda) : mu * 10.0;
      if (mu > 1e8) throw NumericalError("profile Hessian could not be regularized");
    }
    std::vector<double> d(gr.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -gr[i];
    chol.solve_in_place(d);
    return d;
  }
};

std::vector<double> pack_state(const VortexProfile& p) {
  const RadialGrid& g = *p.grid;
  std::vector<double> x(2 * g.interior());
  for (std::size_t i = 0; i < g.interior(); ++i) {
    if (g.nodes[i] < direct_radius) {
      x[2 * i] = p.f[i];
    } else {
      x[2 * i] = p.f_deficit.size() == g.n_points ? p.f_deficit[i] : 1.0 - p.f[i];
    }
    x[2 * i + 1] = p.n * p.a[i] / g.nodes[i];
  }
  return x;
}

void unpack_state(VortexProfile& p, const std::vector<double>& x) {
  const RadialGrid& g = *p.grid;
  const std::size_t N = g.n_points;
  p.f.assign(N, 1.0);
  p.f_deficit.assign(N, 0.0);
  p.a.assign(N, 1.0);
  for (std::size_t i = 0; i < g.interior(); ++i) {
    if (g.nodes[i] < direct_radius) {
      p.f[i] = x[2 * i];
      p.f_deficit[i] = 1.0 - x[2 * i];
    } else {
      p.f_deficit[i] = x[2 * i];
      p.f[i] = 1.0 - x[2 * i];
    }
    p.a[i] = x[2 * i + 1] * g.nodes[i] / p.n;
  }
}

// Blend of the plain difference with the difference of u / r^k, which is
// even and smooth at the origin. The plain part enters with weight ~ r^4 so
// that f' - b f keeps its r^(n+1) behaviour at the origin.
// the weight exp(-r^4) is below rounding from here on
constexpr double blend_radius = 2.5;

std::vector<double> blended_derivative(const RadialGrid& g, const std::vector<double>& u, int k,
                                       std::vector<double> plain) {
  const bool even = origin_cell(g);
  if (k == 0) return plain_derivative(g, u, even);
  std::vector<double> scaled(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = g.nodes[i];
    scaled[i] = r < blend_radius + 1.0 ? u[i] / std::pow(r, k) : 0.0;
  }
  const std::vector<double> ds = plain_derivative(g, scaled, even);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = g.nodes[i];
    const double s = std::exp(-r * r * r * r);
    if (r >= blend_radius) {
      out[i] = plain[i];
      continue;
    }
    const double transformed = std::pow(r, k) * ds[i] + k * u[i] / r;
    out[i] = s * transformed + (1.0 - s) * plain[i];
  }
  if (!even) out[0] = plain[0];
  return out;
}

void finish(VortexProfile& p) {
  const RadialGrid& g = *p.grid;
  if (p.f_deficit.size() != g.n_points) {
    p.f_deficit.resize(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) p.f_deficit[i] = 1.0 - p.f[i];
  }
  // far from the core only the deficit 1 - f carries the decay
  std::vector<double> plain = plain_derivative(g, p.f_deficit, false);
  for (double& d : plain) d = -d;
  p.f_prime = blended_derivative(g, p.f, p.n, std::move(plain));
  p.a_prime = blended_derivative(g, p.a, 2, plain_derivative(g, p.a, false));
}

VortexProfile newton(VortexProfile p, const ProfileSolveConfig& cfg) {
  const RadialGrid& g = *p.grid;
  Workspace ws(g, p.n, p.lambda);
  std::vector<double> x = pack_state(p);
  const double target = cfg.newton_tol * std::max(1.0, p.lambda);

  double e = ws.energy(x);
  std::vector<double> gr = ws.gradient(x);
  double res = ws.residual_norm(gr);
  p.energy_history = {e};
  int it = 0;
  bool stalled = false;
  for (; it < cfg.max_newton_iters && res > target; ++it) {
    const std::vector<double> d = ws.newton_direction(x, gr);
    double slope = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) slope += gr[i] * d[i];
    double t = 1.0;
    std::vector<double> trial(x.size());
    bool accepted = false;
    while (t > 1e-10) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + t * d[i];
      const double et = ws.energy(trial);
      if (std::isfinite(et) && et <= e + 1e-4 * t * slope + 1e-13 * (1.0 + std::abs(e))) {
        e = et;
        accepted = true;
        break;
      }
      t *= cfg.damping;
    }
    if (!accepted) break;
    x.swap(trial);
    gr = ws.gradient(x);
    const double prev = res;
    res = ws.residual_norm(gr);
    p.energy_history.push_back(e);
    // a full step that no longer halves a near-target residual has hit the rounding floor
    if (t == 1.0 && res > 0.5 * prev && res <= 100.0 * target) {
      stalled = true;
      break;
    }
  }
  if (res > target && !stalled) {
    std::ostringstream msg;
    msg << "profile Newton did not converge for n=" << p.n << " lambda=" << p.lambda << " (residual " << res
        << " after " << it << " iterations)";
    throw NumericalError(msg.str(), res, it);
  }
  // one polishing step
  {
    const std::vector<double> d = ws.newton_direction(x, gr);
    std::vector<double> trial(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + d[i];
    const std::vector<double> gt = ws.gradient(trial);
    const double rt = ws.residual_norm(gt);
    if (rt <= res) {
      x.swap(trial);
      res = rt;
      e = ws.energy(x);
      p.energy_history.push_back(e);
    }
  }
  unpack_state(p, x);
  p.iterations = it;
  p.residual = res;
  finish(p);
  return p;
}

void check_inputs(int n, double lambda) {
  if (n < 1) throw std::invalid_argument("vortex degree must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
}

}  // namespace

std::vector<double> radial_derivative(const RadialGrid& grid, const std::vector<double>& u, int power) {
  if (u.size() != grid.n_points) throw std::invalid_argument("radial_derivative: length mismatch");
  return blended_derivative(grid, u, power, plain_derivative(grid, u, false));
}

VortexProfile initial_guess(int n, std::shared_ptr<const RadialGrid> grid) {
  if (n < 1) throw std::invalid_argument("initial_guess: n must be >= 1");
  VortexProfile p;
  p.n = n;
  p.grid = std::move(grid);
  const auto& r = p.grid->nodes;
  p.f.resize(r.size());
  p.a.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    p.f[i] = std::pow(r[i] / std::sqrt(r[i] * r[i] + double(n) * n), n);
    p.a[i] = r[i] * r[i] / (r[i] * r[i] + 2.0 * n * n);
  }
  finish(p);
  return p;
}

VortexProfile solve_profile(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                            const ProfileSolveConfig& cfg, const VortexProfile* seed) {
  check_inputs(n, lambda);
  if (!grid) throw std::invalid_argument("solve_profile: null grid");
  if (cfg.newton_tol <= 0.0 || cfg.max_newton_iters <= 0 || !(cfg.damping > 0.0 && cfg.damping < 1.0)) {
    throw std::invalid_argument("solve_profile: invalid solver configuration");
  }
  VortexProfile start;
  if (seed != nullptr && seed->grid && seed->grid->n_points == grid->n_points && seed->n == n) {
    start = *seed;
    start.grid = grid;
  } else {
    start = initial_guess(n, grid);
  }
  start.lambda = lambda;
  try {
    return newton(start, cfg);
  } catch (const NumericalError&) {
    if (seed != nullptr || lambda == 1.0 || cfg.continuation_steps <= 0) throw;
  }
  VortexProfile base = solve_profile(n, 1.0, grid, cfg);
  return continue_in_lambda(base, lambda, cfg.continuation_steps, cfg);
}

VortexProfile solve_profile(int n, double lambda, const RadialGrid& grid, const ProfileSolveConfig& cfg) {
  return solve_profile(n, lambda, std::make_shared<const RadialGrid>(grid), cfg);
}

VortexProfile continue_in_lambda(const VortexProfile& p, double lambda_target, int steps,
                                 const ProfileSolveConfig& cfg) {
  check_inputs(p.n, lambda_target);
  if (steps < 1) throw std::invalid_argument("continue_in_lambda: steps must be >= 1");
  if (lambda_target == p.lambda) return p;
  VortexProfile cur = p;
  const double ratio = lambda_target / p.lambda;
  for (int k = 1; k <= steps; ++k) {
    const double lam = k == steps ? lambda_target : p.lambda * std::pow(ratio, double(k) / steps);
    VortexProfile seed = cur;
    seed.lambda = lam;
    try {
      cur = newton(seed, cfg);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "continuation failed at lambda=" << lam << ": " << e.what();
      throw NumericalError(msg.str(), e.residual(), e.iterations());
    }
  }
  return cur;
}

double radial_energy(const VortexProfile& p) {
  const RadialGrid& g = *p.grid;
  const double nn = double(p.n) * p.n;
  double e = 0.0;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.nodes[i];
    const double f = p.f[i], a = p.a[i];
    const double s = f * f - 1.0;
    const double density = p.f_prime[i] * p.f_prime[i] + nn * (1.0 - a) * (1.0 - a) * f * f / (r * r) +
                           nn * p.a_prime[i] * p.a_prime[i] / (r * r) + 0.25 * p.lambda * s * s;
    e += 0.5 * g.weights[i] * density;
  }
  return e;
}

double vortex_energy(const VortexProfile& p) { return 2.0 * std::numbers::pi * radial_energy(p); }

double discrete_energy(const VortexProfile& p) {
  Workspace ws(*p.grid, p.n, p.lambda);
  const double alpha_end = ws.alpha_end;
  // the reduced functional drops the boundary term alpha(r_max)^2 / 2
  return ws.energy(pack_state(p)) + 0.5 * alpha_end * alpha_end;
}

std::vector<double> profile_inequality_margin(const VortexProfile& p) {
  std::vector<double> e(p.f.size(), 0.0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) e[i] = p.f_prime[i] - p.b(i) * p.f[i];
  return e;
}

BogomolnyiResidual bogomolnyi_residual(const VortexProfile& p, double r_lo, double r_hi) {
  BogomolnyiResidual out;
  const auto& r = p.grid->nodes;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    out.vortex_equation = std::max(out.vortex_equation, std::abs(p.f_prime[i] - p.b(i) * p.f[i]));
    out.field_equation =
        std::max(out.field_equation, std::abs(p.n * p.a_prime[i] / r[i] - 0.5 * (1.0 - p.f[i] * p.f[i])));
  }
  return out;
}

namespace {

double log_slope(const std::vector<double>& r, const std::vector<double>& u, std::size_t count) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::log(r[i]), y = std::log(u[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = double(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace

ProfileProperties check_profile_properties(const VortexProfile& p) {
  const RadialGrid& g = *p.grid;
  ProfileProperties out;
  out.bounded = true;
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < g.n_points; ++i) {
    // f < 1 is read off the deficit: far out 1 - f is below the spacing of doubles near 1
    if (!(p.f[i] > 0.0 && p.f_deficit[i] > 0.0 && p.a[i] > 0.0 && p.a[i] < 1.0)) out.bounded = false;
    if (!(p.f_prime[i] > 0.0 && p.a_prime[i] > 0.0)) out.monotone = false;
  }
  std::size_t count = g.index_at_or_after(10.0 * g.nodes[0]);
  count = std::clamp<std::size_t>(count, 3, g.n_points - 1);
  bool positive = true;
  for (std::size_t i = 0; i < count; ++i) positive = positive && p.f[i] > 0.0 && p.a[i] > 0.0;
  if (positive) {
    out.slope_f = log_slope(g.nodes, p.f, count);
    out.slope_a = log_slope(g.nodes, p.a, count);
  }
  const std::size_t last = g.n_points - 2;
  out.far_field = std::abs(1.0 - p.f[last]) + std::abs(1.0 - p.a[last]);
  return out;
}

bool ProfileProperties::ok(int n) const {
  return bounded && monotone && std::abs(slope_f - n) <= 0.1 && std::abs(slope_a - 2.0) <= 0.1 && far_field <= 1e-6;
}

}  // namespace glvortex
