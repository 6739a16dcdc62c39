#include "glvortex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "glvortex/operators.hpp"

#ifndef GLVORTEX_VERSION
#define GLVORTEX_VERSION "0.0.0"
#endif

namespace glvortex {

std::string version() { return GLVORTEX_VERSION; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
}

}  // namespace

std::string profile_csv(const VortexProfile& p, const Metadata& extra) {
  const RadialGrid& g = *p.grid;
  std::ostringstream os;
  Metadata meta = {{"version", version()},
                   {"n", std::to_string(p.n)},
                   {"lambda", format_double(p.lambda)},
                   {"r_min", format_double(g.r_min)},
                   {"r_max", format_double(g.r_max)},
                   {"n_points", std::to_string(g.n_points)},
                   {"newton_residual", format_double(p.residual)},
                   {"newton_iterations", std::to_string(p.iterations)}};
  meta.insert(meta.end(), extra.begin(), extra.end());
  write_metadata(os, meta);
  os << "r,f,a,f_prime,a_prime\n";
  for (std::size_t i = 0; i < g.n_points; ++i) {
    os << format_double(g.nodes[i]) << ',' << format_double(p.f[i]) << ',' << format_double(p.a[i]) << ','
       << format_double(p.f_prime[i]) << ',' << format_double(p.a_prime[i]) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const GridConfig& g) {
  return {{"r_max", g.r_max}, {"n_points", g.n_points}, {"r_min", g.r_min}};
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.per_block) {
    blocks.push_back({{"m", b.m},
                      {"mu_deflated", b.mu_deflated},
                      {"mu_raw", b.mu_raw},
                      {"zero_mode_residual", std::isnan(b.zero_mode_residual) ? nlohmann::json(nullptr)
                                                                              : nlohmann::json(b.zero_mode_residual)},
                      {"negative_count", b.negative_count},
                      {"eigenvalues", b.eigenvalues},
                      {"deflated", b.deflated}});
  }
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : r.witnesses) witnesses.push_back({{"m", w.m}, {"rayleigh_quotient", w.rayleigh_quotient}});
  return {{"version", version()},
          {"n", r.n},
          {"lambda", r.lambda},
          {"m_max", r.m_max},
          {"grid", to_json(r.grid)},
          {"h", r.h},
          {"zero_threshold", r.zero_threshold},
          {"per_block", blocks},
          {"witnesses", witnesses},
          {"classification", to_string(r.classification)},
          {"gap", r.gap},
          {"worst_m", r.worst_m},
          {"essential_edge", r.essential_edge},
          {"tail_monotone", r.tail_monotone},
          {"profile_residual", r.profile_residual},
          {"profile_iterations", r.profile_iterations}};
}

nlohmann::json to_json(const EigenResult& r) {
  return {{"eigenvalues", r.eigenvalues},
          {"residuals", r.residual_norms},
          {"deflated", r.deflated_labels},
          {"norm_estimate", r.norm_estimate},
          {"iterations", r.iterations},
          {"dense", r.dense}};
}

std::string sweep_csv(const std::vector<SweepCell>& cells, const Metadata& extra) {
  std::ostringstream os;
  Metadata meta = {{"version", version()}};
  meta.insert(meta.end(), extra.begin(), extra.end());
  write_metadata(os, meta);
  os << "n,lambda,gap,classification,worst_m,witness_RQ\n";
  for (const auto& c : cells) {
    os << c.n << ',' << format_double(c.lambda) << ',';
    if (!c.report) {
      os << ",error,,\n";
      continue;
    }
    const auto& r = *c.report;
    os << format_double(r.gap) << ',' << to_string(r.classification) << ',' << r.worst_m << ',';
    if (!r.witnesses.empty()) {
      double w = std::numeric_limits<double>::infinity();
      for (const auto& x : r.witnesses) w = std::min(w, x.rayleigh_quotient);
      os << format_double(w);
    }
    os << '\n';
  }
  return os.str();
}

void write_banded(std::ostream& os, const WeightedMatrix& a) {
  const BandedMatrix& k = a.stiffness();
  const std::size_t n = k.dimension();
  const std::size_t bw = k.bandwidth();
  os << n << ' ' << bw << ' ' << a.components() << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d <= 2 * bw; ++d) {
      const long j = static_cast<long>(i) + static_cast<long>(d) - static_cast<long>(bw);
      const double v = (j < 0 || j >= static_cast<long>(n)) ? 0.0 : a.entry(i, static_cast<std::size_t>(j));
      os << (d ? " " : "") << format_double(v);
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) os << (i ? " " : "") << format_double(a.weights()[i]);
  os << '\n';
}

}  // namespace glvortex
