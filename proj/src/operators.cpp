#include "glvortex/operators.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <random>
#include <stdexcept>

#include "glvortex/error.hpp"
#include "glvortex/spectra.hpp"

namespace glvortex {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::L_m: return "L_m";
    case OperatorKind::hatL_m: return "hatL_m";
    case OperatorKind::M0: return "M0";
    case OperatorKind::N0: return "N0";
    case OperatorKind::G0: return "G0";
    case OperatorKind::F_m: return "F_m";
    case OperatorKind::tildeF_m: return "tildeF_m";
    case OperatorKind::M_m: return "M_m";
    case OperatorKind::l_m: return "l_m";
    case OperatorKind::Z0_pointwise: return "Z0_pointwise";
  }
  return "unknown";
}

namespace {

void require_profile(const VortexProfile& p) {
  if (!p.grid) throw std::invalid_argument("operator assembly: profile has no grid");
  const std::size_t N = p.grid->n_points;
  if (p.f.size() != N || p.a.size() != N || p.f_prime.size() != N || p.a_prime.size() != N) {
    throw std::invalid_argument("operator assembly: profile arrays do not match the grid");
  }
}

BlockOperator make_block(const VortexProfile& p, OperatorKind kind, int m, std::size_t components,
                         std::size_t bandwidth) {
  BlockOperator op;
  op.kind = kind;
  op.m = m;
  op.n = p.n;
  op.lambda = p.lambda;
  op.grid = p.grid;
  op.matrix = WeightedMatrix(*p.grid, components, bandwidth);
  for (std::size_t c = 0; c < components; ++c) add_laplacian(*p.grid, op.matrix, c);
  return op;
}

// Adds w_i * V(i) for a symmetric c x c node potential.
template <class Potential>
void add_potential(const RadialGrid& g, WeightedMatrix& a, Potential&& potential) {
  const std::size_t c = a.components();
  std::vector<double> v(c * c);
  for (std::size_t i = 0; i < g.interior(); ++i) {
    std::fill(v.begin(), v.end(), 0.0);
    potential(i, v);
    for (std::size_t r = 0; r < c; ++r) {
      for (std::size_t s = 0; s < c; ++s) {
        if (v[r * c + s] != 0.0) a.stiffness().add(i * c + r, i * c + s, g.weights[i] * v[r * c + s]);
      }
    }
  }
}

double log_f(const VortexProfile& p, std::size_t i) {
  if (p.f_deficit.size() == p.f.size() && p.f[i] > 0.5) return std::log1p(-p.f_deficit[i]);
  return std::log(p.f[i]);
}

// Builds a staggered first-order operator row by row: face j couples nodes j and j+1;
// the node at r_max carries no unknown.
class FactorBuilder {
 public:
  FactorBuilder(const VortexProfile& p, OperatorKind kind, int m, std::size_t components) : g_(*p.grid) {
    op_.kind = kind;
    op_.m = m;
    op_.grid = p.grid;
    op_.components = components;
    const std::size_t M = g_.interior();
    op_.matrix = BandedMatrix(M * components, 2 * components - 1);
    op_.face_weights.resize(M * components);
    op_.node_weights.resize(M * components);
    for (std::size_t j = 0; j < M; ++j) {
      for (std::size_t c = 0; c < components; ++c) {
        op_.face_weights[j * components + c] = g_.face(j) * g_.h;
        op_.node_weights[j * components + c] = g_.weights[j];
      }
    }
  }

  /// coeff * d/dr (s u_col) on the face, with nodal scaling s.
  void derivative(std::size_t j, std::size_t row, std::size_t col, double coeff, double s0 = 1.0, double s1 = 1.0) {
    const std::size_t c = op_.components;
    op_.matrix.add(j * c + row, j * c + col, -coeff * s0 / g_.h);
    if (j + 1 < g_.interior()) op_.matrix.add(j * c + row, (j + 1) * c + col, coeff * s1 / g_.h);
  }

  /// value * average of (s u_col) over the two nodes of the face.
  void multiply(std::size_t j, std::size_t row, std::size_t col, double value, double s0 = 1.0, double s1 = 1.0) {
    const std::size_t c = op_.components;
    op_.matrix.add(j * c + row, j * c + col, 0.5 * value * s0);
    if (j + 1 < g_.interior()) op_.matrix.add(j * c + row, (j + 1) * c + col, 0.5 * value * s1);
  }

  FactorOperator take() { return std::move(op_); }

 private:
  const RadialGrid& g_;
  FactorOperator op_;
};

struct FaceValues {
  double r, f, b, dlogf;
};

FaceValues face_values(const VortexProfile& p, std::size_t j) {
  const RadialGrid& g = *p.grid;
  FaceValues v;
  v.r = g.face(j);
  v.f = 0.5 * (p.f[j] + p.f[j + 1]);
  v.b = p.n * (1.0 - 0.5 * (p.a[j] + p.a[j + 1])) / v.r;
  // f'/f = n/r + (log(f / r^n))', so the face value is exact on the r^n core
  const double rl = g.nodes[j], rr = g.nodes[j + 1];
  v.dlogf = p.n * (1.0 / v.r - std::log1p((rr - rl) / rl) / g.h) + (log_f(p, j + 1) - log_f(p, j)) / g.h;
  return v;
}

double max_abs_diff(const BandedMatrix& a, const BandedMatrix& b) { return (a - b).max_abs(); }

std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

std::vector<double> FactorOperator::adjoint(const std::vector<double>& y) const {
  std::vector<double> wy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) wy[i] = face_weights[i] * y[i];
  std::vector<double> x = matrix.apply_transpose(wy);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] /= node_weights[i];
  return x;
}

double FactorOperator::face_norm(const std::vector<double>& y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += face_weights[i] * y[i] * y[i];
  return std::sqrt(s);
}

WeightedMatrix FactorOperator::normal() const {
  WeightedMatrix out(*grid, components, 2 * components - 1);
  BandedMatrix& k = out.stiffness();
  const std::size_t dim = matrix.dimension();
  const std::size_t bw = matrix.bandwidth();
  for (std::size_t row = 0; row < dim; ++row) {
    const std::size_t j0 = row >= bw ? row - bw : 0;
    const std::size_t j1 = std::min(dim - 1, row + bw);
    for (std::size_t s = j0; s <= j1; ++s) {
      const double fs = matrix(row, s);
      if (fs == 0.0) continue;
      for (std::size_t t = j0; t <= j1; ++t) {
        const double ft = matrix(row, t);
        if (ft != 0.0) k.add(s, t, face_weights[row] * fs * ft);
      }
    }
  }
  return out;
}

std::vector<double> SpecialVector::boundary() const {
  std::vector<double> out;
  for (const auto& c : values) out.push_back(c.back());
  return out;
}

SpecialVector scalar_vector(std::shared_ptr<const RadialGrid> grid, std::vector<double> values, std::string kind) {
  SpecialVector v;
  v.kind = std::move(kind);
  v.grid = std::move(grid);
  v.values.push_back(std::move(values));
  return v;
}

std::vector<double> apply_grid_function(const BlockOperator& a, const SpecialVector& v) {
  if (v.values.size() != a.components()) throw std::invalid_argument("apply_grid_function: component mismatch");
  return a.matrix.apply(v.packed(), v.boundary());
}

double relative_residual(const BlockOperator& a, const SpecialVector& v) {
  const std::vector<double> r = apply_grid_function(a, v);
  return weighted_norm(a.matrix, r) / weighted_norm(a.matrix, v.packed());
}

BlockOperator assemble_Lm(const VortexProfile& p, int m) {
  require_profile(p);
  if (m < 0) throw std::invalid_argument("assemble_Lm: m must be >= 0 (L_{-m} = L_m)");
  const RadialGrid& g = *p.grid;
  BlockOperator op = make_block(p, OperatorKind::L_m, m, 4, 4);
  const double lam = p.lambda;
  const double mm = double(m) * m;
  add_potential(g, op.matrix, [&](std::size_t i, std::vector<double>& v) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i), fp = p.f_prime[i];
    const double ir2 = 1.0 / (r * r);
    v[0] = mm * ir2 + b * b + 0.5 * lam * (3.0 * f * f - 1.0);
    v[1] = v[4] = -2.0 * m * b / r;
    v[2] = v[8] = -2.0 * b * f;
    v[5] = mm * ir2 + b * b + 0.5 * lam * (f * f - 1.0) + f * f;
    v[7] = v[13] = -2.0 * fp;
    v[10] = v[15] = (mm + 1.0) * ir2 + f * f;
    v[11] = v[14] = -2.0 * m * ir2;
  });
  return op;
}

BlockOperator assemble_hatLm(const VortexProfile& p, int m) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  BlockOperator op = make_block(p, OperatorKind::hatL_m, m, 4, 4);
  const double lam = p.lambda;
  add_potential(g, op.matrix, [&](std::size_t i, std::vector<double>& v) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i), fp = p.f_prime[i];
    const double ir2 = 1.0 / (r * r);
    const double na = p.n * (1.0 - p.a[i]);
    const double d = 0.5 * lam * (2.0 * f * f - 1.0) + 0.5 * f * f;
    const double minus = fp - b * f;
    const double plus = -(fp + b * f);
    v[0] = (m + na) * (m + na) * ir2 + d;
    v[5] = (m - na) * (m - na) * ir2 + d;
    v[10] = double(m - 1) * (m - 1) * ir2 + f * f;
    v[15] = double(m + 1) * (m + 1) * ir2 + f * f;
    v[1] = v[4] = 0.5 * (lam - 1.0) * f * f;
    v[2] = v[8] = minus;
    v[3] = v[12] = plus;
    v[6] = v[9] = plus;
    v[7] = v[13] = minus;
  });
  return op;
}

std::pair<BlockOperator, BlockOperator> assemble_M0_N0(const VortexProfile& p) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  BlockOperator m0 = make_block(p, OperatorKind::M0, 0, 2, 2);
  BlockOperator n0 = make_block(p, OperatorKind::N0, 0, 2, 2);
  const double lam = p.lambda;
  add_potential(g, m0.matrix, [&](std::size_t i, std::vector<double>& v) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i);
    v[0] = b * b + 0.5 * lam * (3.0 * f * f - 1.0);
    v[1] = v[2] = -2.0 * b * f;
    v[3] = 1.0 / (r * r) + f * f;
  });
  add_potential(g, n0.matrix, [&](std::size_t i, std::vector<double>& v) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i);
    v[0] = b * b + 0.5 * lam * (f * f - 1.0) + f * f;
    v[1] = v[2] = -2.0 * p.f_prime[i];
    v[3] = 1.0 / (r * r) + f * f;
  });
  return {std::move(m0), std::move(n0)};
}

BlockOperator assemble_lm(const VortexProfile& p, int m) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  BlockOperator op = make_block(p, OperatorKind::l_m, m, 1, 1);
  const double lam = p.lambda;
  add_potential(g, op.matrix, [&](std::size_t i, std::vector<double>& v) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i);
    v[0] = double(m) * m / (r * r) + b * b + 0.5 * lam * (f * f - 1.0);
  });
  return op;
}

BlockOperator assemble_f2_operator(const VortexProfile& p) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  BlockOperator op = make_block(p, OperatorKind::l_m, 0, 1, 1);
  add_potential(g, op.matrix, [&](std::size_t i, std::vector<double>& v) { v[0] = p.f[i] * p.f[i]; });
  return op;
}

FactorOperator assemble_G0(const VortexProfile& p) {
  require_profile(p);
  FactorBuilder fb(p, OperatorKind::G0, 0, 2);
  for (std::size_t j = 0; j < p.grid->interior(); ++j) {
    const FaceValues fv = face_values(p, j);
    fb.derivative(j, 0, 0, 1.0);
    fb.multiply(j, 0, 0, -fv.dlogf);
    fb.multiply(j, 0, 1, fv.f);
    fb.multiply(j, 1, 0, fv.f);
    fb.derivative(j, 1, 1, 1.0);
    fb.multiply(j, 1, 1, 1.0 / fv.r);
  }
  return fb.take();
}

FactorOperator assemble_Fm(const VortexProfile& p, int m) {
  require_profile(p);
  const BogomolnyiResidual res = bogomolnyi_residual(p, 0.1, 0.75 * p.grid->r_max);
  if (std::max(res.vortex_equation, res.field_equation) > 1e-3) {
    throw std::invalid_argument("assemble_Fm: profile does not satisfy the first-order equations (lambda != 1?)");
  }
  FactorBuilder fb(p, OperatorKind::F_m, m, 4);
  for (std::size_t j = 0; j < p.grid->interior(); ++j) {
    const FaceValues fv = face_values(p, j);
    const double mr = m / fv.r;
    // row 1: (d_r - b) u1 + (m/r) u2 + f u3
    fb.derivative(j, 0, 0, 1.0);
    fb.multiply(j, 0, 0, -fv.b);
    fb.multiply(j, 0, 1, mr);
    fb.multiply(j, 0, 2, fv.f);
    // row 2: (m/r) u1 + (d_r - b) u2 + f u4
    fb.multiply(j, 1, 0, mr);
    fb.derivative(j, 1, 1, 1.0);
    fb.multiply(j, 1, 1, -fv.b);
    fb.multiply(j, 1, 3, fv.f);
    // row 3: f u1 + (d_r + 1/r) u3 - (m/r) u4
    fb.multiply(j, 2, 0, fv.f);
    fb.derivative(j, 2, 2, 1.0);
    fb.multiply(j, 2, 2, 1.0 / fv.r);
    fb.multiply(j, 2, 3, -mr);
    // row 4: f u2 - (m/r) u3 + (d_r + 1/r) u4
    fb.multiply(j, 3, 1, fv.f);
    fb.multiply(j, 3, 2, -mr);
    fb.derivative(j, 3, 3, 1.0);
    fb.multiply(j, 3, 3, 1.0 / fv.r);
  }
  return fb.take();
}

std::vector<double> q_profile(const VortexProfile& p) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  std::vector<double> q(g.n_points, 1.0);
  double last = 1.0;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double r = g.nodes[i];
    const double num = p.n * (1.0 - p.a[i]) * p.f[i];
    const double den = r * p.f_prime[i];
    const double v = num / den;
    const bool valid = i + 1 < g.n_points && den > 0.0 && num > 0.0 && std::isfinite(v);
    q[i] = valid ? v : last;
    last = q[i];
  }
  return q;
}

std::pair<FactorOperator, BlockOperator> assemble_tildeFm_and_Mm(const VortexProfile& p, int m) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  const std::vector<double> q = q_profile(p);
  FactorBuilder fb(p, OperatorKind::tildeF_m, m, 4);
  for (std::size_t j = 0; j < g.interior(); ++j) {
    const FaceValues fv = face_values(p, j);
    const double mr = m / fv.r;
    const double q0 = q[j], q1 = q[j + 1];
    // row 1: (d_r - f'/f)(q u1) + (m/r) u2 + f u3
    fb.derivative(j, 0, 0, 1.0, q0, q1);
    fb.multiply(j, 0, 0, -fv.dlogf, q0, q1);
    fb.multiply(j, 0, 1, mr);
    fb.multiply(j, 0, 2, fv.f);
    // row 2: (m/r) q u1 + (d_r - f'/f) u2 + f u4
    fb.multiply(j, 1, 0, mr, q0, q1);
    fb.derivative(j, 1, 1, 1.0);
    fb.multiply(j, 1, 1, -fv.dlogf);
    fb.multiply(j, 1, 3, fv.f);
    // row 3: f q u1 + (d_r + 1/r) u3 - (m/r) u4
    fb.multiply(j, 2, 0, fv.f, q0, q1);
    fb.derivative(j, 2, 2, 1.0);
    fb.multiply(j, 2, 2, 1.0 / fv.r);
    fb.multiply(j, 2, 3, -mr);
    // row 4: f u2 - (m/r) u3 + (d_r + 1/r) u4
    fb.multiply(j, 3, 1, fv.f);
    fb.multiply(j, 3, 2, -mr);
    fb.derivative(j, 3, 3, 1.0);
    fb.multiply(j, 3, 3, 1.0 / fv.r);
  }

  // M_m = l_m - q l_m q + (lambda - q^2) f^2
  const BlockOperator l = assemble_lm(p, m);
  BlockOperator mm;
  mm.kind = OperatorKind::M_m;
  mm.m = m;
  mm.n = p.n;
  mm.lambda = p.lambda;
  mm.grid = p.grid;
  mm.matrix = WeightedMatrix(g, 1, 1);
  const BandedMatrix& kl = l.matrix.stiffness();
  BandedMatrix& km = mm.matrix.stiffness();
  const std::size_t M = g.interior();
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(M - 1, i + 1); ++j) {
      km.at(i, j) = kl(i, j) - q[i] * kl(i, j) * q[j];
    }
    km.add(i, i, g.weights[i] * (p.lambda - q[i] * q[i]) * p.f[i] * p.f[i]);
  }
  mm.matrix.boundary_coupling(0, 0) = l.matrix.boundary_coupling(0, 0) * (1.0 - q[M - 1] * q[M]);
  return {fb.take(), std::move(mm)};
}

WeightedMatrix rotate_blocks(const WeightedMatrix& a, const double (&rot)[4][4], double scale) {
  if (a.components() != 4) throw std::invalid_argument("rotate_blocks: expects 4 components");
  const BandedMatrix& k = a.stiffness();
  const std::size_t dim = k.dimension();
  const std::size_t nodes = dim / 4;
  WeightedMatrix out = a;
  BandedMatrix& ko = out.stiffness();
  ko = BandedMatrix(dim, k.bandwidth() + 3);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(nodes - 1, i + 1); ++j) {
      double blk[4][4];
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) blk[r][s] = k(i * 4 + r, j * 4 + s);
      for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
          double acc = 0.0;
          for (int u = 0; u < 4; ++u) {
            if (rot[r][u] == 0.0) continue;
            for (int v = 0; v < 4; ++v) acc += rot[r][u] * blk[u][v] * rot[s][v];
          }
          if (acc != 0.0 || ko.in_band(i * 4 + r, j * 4 + s)) ko.at(i * 4 + r, j * 4 + s) = scale * acc;
        }
      }
    }
  }
  return out;
}

RotationDefect rotation_defect(const VortexProfile& p, int m) {
  static constexpr double R[4][4] = {{1, 1, 0, 0}, {-1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, -1}};
  // R' followed by the sign flip of the fourth component
  static constexpr double Rp[4][4] = {{1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, 1, 1}, {0, 0, -1, 1}};
  const BlockOperator hat = assemble_hatLm(p, m);
  const BlockOperator l = assemble_Lm(p, std::abs(m));
  const WeightedMatrix rotated = rotate_blocks(hat.matrix, m >= 0 ? R : Rp, 0.5);
  RotationDefect d;
  d.absolute = max_abs_diff(rotated.stiffness(), l.matrix.stiffness());
  d.scale = l.matrix.stiffness().max_abs();
  return d;
}

MmDifference mm_difference(const VortexProfile& p, int m) {
  const RadialGrid& g = *p.grid;
  const auto mm = assemble_tildeFm_and_Mm(p, m).second;
  const auto m1 = assemble_tildeFm_and_Mm(p, 1).second;
  const std::vector<double> q = q_profile(p);
  const BandedMatrix diff = mm.matrix.stiffness() - m1.matrix.stiffness();
  MmDifference out;
  out.scale = mm.matrix.stiffness().max_abs();
  const std::size_t M = g.interior();
  for (std::size_t i = 0; i < M; ++i) {
    const double r = g.nodes[i];
    const double expected = g.weights[i] * (1.0 - q[i] * q[i]) * (double(m) * m - 1.0) / (r * r);
    out.absolute = std::max(out.absolute, std::abs(diff(i, i) - expected));
    if (i + 1 < M && (diff(i, i + 1) != 0.0 || diff(i + 1, i) != 0.0)) out.diagonal = false;
  }
  return out;
}

SpecialVector translational_mode(const VortexProfile& p) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  SpecialVector t;
  t.kind = "T";
  t.m = 1;
  t.grid = p.grid;
  t.values.assign(4, std::vector<double>(g.n_points));
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double ar = p.n * p.a_prime[i] / g.nodes[i];
    t.values[0][i] = p.f_prime[i];
    t.values[1][i] = p.b(i) * p.f[i];
    t.values[2][i] = ar;
    t.values[3][i] = ar;
  }
  return t;
}

ChiMode chi_mode(const VortexProfile& p, int m) {
  require_profile(p);
  if (m < 1) throw std::invalid_argument("chi_mode: m must be >= 1");
  const RadialGrid& g = *p.grid;
  const std::size_t N = g.n_points;
  const double two_m = 2.0 * m;
  // psi = r^m chi solves -(r^{1-2m} psi')' + r^{1-2m} f^2 psi = 0; the face flux
  // r^{1-2m} psi' is exact for the f = 0 solutions 1 and r^{2m}.
  std::vector<double> pw(N);
  for (std::size_t i = 0; i < N; ++i) pw[i] = std::pow(g.nodes[i], two_m);
  std::vector<double> cond(N - 1);
  for (std::size_t j = 0; j + 1 < N; ++j) cond[j] = two_m / (pw[j + 1] - pw[j]);

  const std::size_t U = N - 2;  // unknowns psi_1 .. psi_{N-2}
  std::vector<double> lower(U - 1), diag(U), upper(U - 1), rhs(U, 0.0);
  for (std::size_t u = 0; u < U; ++u) {
    const std::size_t i = u + 1;
    const double r = g.nodes[i];
    diag[u] = cond[i - 1] + cond[i] + g.h * std::pow(r, 1.0 - two_m) * p.f[i] * p.f[i];
    if (u > 0) lower[u - 1] = -cond[i - 1];
    if (u + 1 < U) upper[u] = -cond[i];
  }
  rhs[0] = cond[0];  // psi_0 = 1
  // rows scaled to unit diagonal for conditioning
  for (std::size_t u = 0; u < U; ++u) {
    const double s = 1.0 / diag[u];
    diag[u] = 1.0;
    rhs[u] *= s;
    if (u > 0) lower[u - 1] *= s;
    if (u + 1 < U) upper[u] *= s;
  }
  solve_tridiagonal(lower, diag, upper, rhs);
  std::vector<double> psi(N, 0.0);
  psi[0] = 1.0;
  for (std::size_t u = 0; u < U; ++u) psi[u + 1] = rhs[u];

  ChiMode out;
  out.chi.resize(N);
  out.chi_plus.resize(N);
  std::vector<double> flux(N - 1);
  for (std::size_t j = 0; j + 1 < N; ++j) flux[j] = cond[j] * (psi[j + 1] - psi[j]);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = g.nodes[i];
    out.chi[i] = psi[i] / std::pow(r, m);
    double fl;
    if (i == 0) {
      fl = flux[0];
    } else if (i + 1 == N) {
      fl = flux[N - 2];
    } else {
      fl = 0.5 * (flux[i - 1] + flux[i]);
    }
    out.chi_plus[i] = std::pow(r, m - 1) * fl;
  }
  return out;
}

namespace {

SpecialVector w_vector(const VortexProfile& p, int m, bool tilde) {
  const ChiMode chi = chi_mode(p, m);
  const RadialGrid& g = *p.grid;
  const std::vector<double> q = tilde ? q_profile(p) : std::vector<double>(g.n_points, 1.0);
  SpecialVector w;
  w.kind = tilde ? "tildeW" : "W";
  w.m = m;
  w.grid = p.grid;
  w.values.assign(4, std::vector<double>(g.n_points));
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double fc = p.f[i] * chi.chi[i];
    w.values[0][i] = fc / q[i];
    w.values[1][i] = fc;
    w.values[2][i] = -chi.chi_plus[i];
    w.values[3][i] = -chi.chi_plus[i];
  }
  return w;
}

}  // namespace

SpecialVector W_mode(const VortexProfile& p, int m) { return w_vector(p, m, false); }
SpecialVector tildeW_mode(const VortexProfile& p, int m) { return w_vector(p, m, true); }

std::vector<double> smooth_test_vector(const RadialGrid& grid, std::size_t components, std::uint64_t seed, double r_lo,
                                       double r_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> comps(components, std::vector<double>(grid.n_points, 0.0));
  for (auto& c : comps) {
    for (int bump = 0; bump < 3; ++bump) {
      const double width = 0.5 + 2.0 * unit(rng);
      const double centre = r_lo + width + (r_hi - r_lo - 2.0 * width) * unit(rng);
      const double amp = 2.0 * unit(rng) - 1.0;
      for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double t = (grid.nodes[i] - centre) / width;
        if (std::abs(t) < 1.0) c[i] += amp * std::exp(1.0 - 1.0 / (1.0 - t * t));
      }
    }
  }
  return pack(grid, comps);
}

double keysplit_residual(const VortexProfile& p, int m, int trials, std::uint64_t seed) {
  const BlockOperator l = assemble_Lm(p, m);
  const auto [ft, mm] = assemble_tildeFm_and_Mm(p, m);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> v = smooth_test_vector(*p.grid, 4, seed + static_cast<std::uint64_t>(t));
    std::vector<double> r = sub(l.apply(v), ft.adjoint(ft.apply(v)));
    const std::size_t M = p.grid->interior();
    std::vector<double> v1(M);
    for (std::size_t i = 0; i < M; ++i) v1[i] = v[4 * i];
    const std::vector<double> mv = mm.apply(v1);
    for (std::size_t i = 0; i < M; ++i) r[4 * i] -= mv[i];
    worst = std::max(worst, weighted_norm(l.matrix, r) / weighted_norm(l.matrix, v));
  }
  return worst;
}

double g0_factor_residual(const VortexProfile& p, int trials, std::uint64_t seed) {
  const FactorOperator g0 = assemble_G0(p);
  const BlockOperator n0 = assemble_M0_N0(p).second;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> v = smooth_test_vector(*p.grid, 2, seed + static_cast<std::uint64_t>(t));
    const std::vector<double> r = sub(g0.adjoint(g0.apply(v)), n0.apply(v));
    worst = std::max(worst, weighted_norm(n0.matrix, r) / weighted_norm(n0.matrix, v));
  }
  return worst;
}

double fm_factor_residual(const VortexProfile& p, int m, int trials, std::uint64_t seed) {
  const FactorOperator fm = assemble_Fm(p, m);
  const BlockOperator l = assemble_Lm(p, m);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> v = smooth_test_vector(*p.grid, 4, seed + static_cast<std::uint64_t>(t));
    const std::vector<double> r = sub(fm.adjoint(fm.apply(v)), l.apply(v));
    worst = std::max(worst, weighted_norm(l.matrix, r) / weighted_norm(l.matrix, v));
  }
  return worst;
}

Z0Report appendix_Z0_check(const VortexProfile& p) {
  require_profile(p);
  const RadialGrid& g = *p.grid;
  Z0Report rep;
  rep.min_trace = rep.min_det = rep.min_det_hessian = std::numeric_limits<double>::infinity();
  const double lam = p.lambda;
  const double nn = double(p.n) * p.n;
  for (std::size_t i = 0; i + 1 < g.n_points; ++i) {
    const double r = g.nodes[i], f = p.f[i], b = p.b(i);
    const double f2 = f * f, om = 1.0 - p.a[i];
    const double z22 = 1.0 / (r * r) + f2;
    rep.min_trace = std::min(rep.min_trace, 2.0 * lam * f2 + z22);
    const double det = 2.0 * lam * f2 * f2 + (2.0 * f2 / (r * r)) * (lam - 2.0 * nn * om * om);
    rep.min_det = std::min(rep.min_det, det);
    if (!(det > 0.0)) ++rep.negative_det_nodes;
    rep.min_det_hessian = std::min(rep.min_det_hessian, lam * f2 * z22 - 4.0 * b * b * f2);
  }
  const BlockOperator l = assemble_lm(p, 0);
  const EigenResult eig = smallest_eigenpairs(l.matrix, 1);
  rep.l_min_eigenvalue = eig.eigenvalues.front();
  const std::vector<double> fvec(p.f.begin(), p.f.end() - 1);
  const double one = 1.0;
  const std::vector<double> lf = l.matrix.apply(fvec, std::span<const double>(&one, 1));
  rep.lf_residual = weighted_norm(l.matrix, lf) / weighted_norm(l.matrix, fvec);
  return rep;
}

LambdaDerivativeCheck lambda_derivative_check(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                                              double dlambda, const ProfileSolveConfig& cfg) {
  if (!(dlambda > 0.0) || dlambda >= lambda) throw std::invalid_argument("lambda_derivative_check: invalid step");
  const VortexProfile mid = solve_profile(n, lambda, grid, cfg);
  const VortexProfile hi = solve_profile(n, lambda + dlambda, grid, cfg, &mid);
  const VortexProfile lo = solve_profile(n, lambda - dlambda, grid, cfg, &mid);
  const RadialGrid& g = *grid;
  const std::size_t M = g.interior();
  std::vector<double> xi(2 * M), eta(2 * M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    const double r = g.nodes[i];
    // differences of the deficits keep the far-field digits
    xi[2 * i] = -(hi.f_deficit[i] - lo.f_deficit[i]) / (2.0 * dlambda);
    xi[2 * i + 1] = n * (hi.a[i] - lo.a[i]) / (2.0 * dlambda * r);
    eta[2 * i] = 0.5 * (1.0 - mid.f[i] * mid.f[i]) * mid.f[i];
  }
  const BlockOperator m0 = assemble_M0_N0(mid).first;
  const std::vector<double> r = sub(m0.apply(xi), eta);
  LambdaDerivativeCheck out;
  out.residual = weighted_norm(m0.matrix, r) / weighted_norm(m0.matrix, eta);
  out.xi_positive = true;
  out.eta_nonnegative = true;
  for (std::size_t i = 0; i < M; ++i) {
    if (!(xi[2 * i] > 0.0 && xi[2 * i + 1] > 0.0)) out.xi_positive = false;
    if (eta[2 * i] < 0.0) out.eta_nonnegative = false;
  }
  return out;
}

}  // namespace glvortex
