#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "glvortex/error.hpp"
#include "glvortex/io.hpp"
#include "glvortex/operators.hpp"
#include "glvortex/profiles.hpp"
#include "glvortex/spectra.hpp"

namespace glvortex::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string context(int n, double lambda) {
  return "(n=" + std::to_string(n) + ", lambda=" + format_double(lambda) + ")";
}

std::string context(int n, double lambda, int m) {
  return "(n=" + std::to_string(n) + ", lambda=" + format_double(lambda) + ", m=" + std::to_string(m) + ")";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw UsageError("bad number '" + s + "' in " + what);
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw UsageError("bad integer '" + s + "' in " + what);
  return v;
}

// start:stop:count, inclusive endpoints
std::vector<double> lambda_range(double start, double stop, int count) {
  if (count < 1) throw UsageError("lambda range needs count >= 1");
  if (count == 1) return {start};
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(start + (stop - start) * k / (count - 1));
  return out;
}

std::vector<double> parse_lambda_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("--lambda-range expects start:stop:count, got '" + s + "'");
  return lambda_range(to_double(parts[0], "--lambda-range"), to_double(parts[1], "--lambda-range"),
                      to_int(parts[2], "--lambda-range"));
}

Metadata metadata(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"seed", std::to_string(c.seed)},
          {"eigenpairs", std::to_string(c.eigenpairs)}};
}

json metadata_json(const RunConfig& c, const std::string& command) {
  json j = {{"version", version()}, {"grid", to_json(c.grid)}};
  for (const auto& [k, v] : metadata(c, command)) j[k] = v;
  return j;
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.output.empty()) {
    out << content;
  } else {
    write_atomic(c.output, content);
  }
}

void validate(RunConfig& c) {
  if (!(c.grid.r_max > 0.0)) throw UsageError("--r-max must be positive");
  if (c.grid.r_min < 0.0 || c.grid.r_min >= c.grid.r_max) throw UsageError("--r-min must lie in [0, r_max)");
  if (c.grid.n_points < 8) throw UsageError("--n-points must be at least 8");
  for (int n : c.n_list) {
    if (n < 1) throw UsageError("--n must be >= 1, got " + std::to_string(n));
  }
  for (double l : c.lambda_list) {
    if (!(l > 0.0) || !std::isfinite(l)) throw UsageError("--lambda must be positive, got " + format_double(l));
  }
  if (c.eigenpairs < 1) throw UsageError("--k must be >= 1");
  if (c.trials < 1) throw UsageError("--trials must be >= 1");
  if (c.jobs < 1) throw UsageError("--jobs must be >= 1");
  const bool single = c.command == Command::profile || c.command == Command::spectrum ||
                      c.command == Command::verdict;
  if (single) {
    if (c.n_list.size() != 1) throw UsageError("this command takes exactly one --n");
    if (c.lambda_list.size() != 1) throw UsageError("this command takes exactly one --lambda");
  }
  if (c.command == Command::sweep && (c.n_list.empty() || c.lambda_list.empty())) {
    throw UsageError("sweep needs n and lambda values (flags or --config)");
  }
  if (c.m_lo > c.m_hi) throw UsageError("empty m range");
}

// ---- commands ----

int do_profile(const RunConfig& c, std::ostream& out) {
  const int n = c.n_list.front();
  const double lambda = c.lambda_list.front();
  VortexProfile p;
  try {
    p = solve_profile(n, lambda, c.grid.make());
  } catch (const NumericalError& e) {
    throw NumericalError("profile " + context(n, lambda) + ": " + e.what(), e.residual(), e.iterations());
  }
  if (c.format == Format::csv) {
    emit(c, profile_csv(p, metadata(c, "profile")), out);
    return 0;
  }
  json j = {{"metadata", metadata_json(c, "profile")},
            {"n", n},
            {"lambda", lambda},
            {"newton_residual", p.residual},
            {"newton_iterations", p.iterations},
            {"energy", vortex_energy(p)},
            {"r", p.grid->nodes},
            {"f", p.f},
            {"a", p.a},
            {"f_prime", p.f_prime},
            {"a_prime", p.a_prime}};
  emit(c, j.dump(2) + "\n", out);
  return 0;
}

BlockOperator spectrum_operator(const VortexProfile& p, const std::string& op, int m) {
  if (op == "L") return assemble_Lm(p, std::abs(m));
  if (op == "hatL") return assemble_hatLm(p, m);
  if (op == "M") return assemble_tildeFm_and_Mm(p, m).second;
  if (op == "M0") return assemble_M0_N0(p).first;
  return assemble_lm(p, m);
}

int do_spectrum(const RunConfig& c, std::ostream& out) {
  const int n = c.n_list.front();
  const double lambda = c.lambda_list.front();
  VortexProfile p;
  try {
    p = solve_profile(n, lambda, c.grid.make());
  } catch (const NumericalError& e) {
    throw NumericalError("spectrum " + context(n, lambda) + ": " + e.what(), e.residual(), e.iterations());
  }
  EigenOptions eo;
  eo.seed = c.seed;
  json blocks = json::array();
  std::ostringstream csv;
  Metadata meta = {{"version", version()},
                   {"n", std::to_string(n)},
                   {"lambda", format_double(lambda)},
                   {"r_min", format_double(c.grid.r_min)},
                   {"r_max", format_double(c.grid.r_max)},
                   {"n_points", std::to_string(c.grid.n_points)},
                   {"operator", c.op}};
  for (const auto& kv : metadata(c, "spectrum")) meta.push_back(kv);
  for (const auto& [k, v] : meta) csv << "# " << k << " = " << v << '\n';
  csv << "m,index,eigenvalue,residual\n";
  for (int m = c.m_lo; m <= c.m_hi; ++m) {
    try {
      const BlockOperator a = spectrum_operator(p, c.op, m);
      std::vector<std::vector<double>> defl;
      std::vector<std::string> labels;
      if (c.deflate && c.op == "L" && std::abs(m) == 1) {
        defl.push_back(translational_mode(p).packed());
        labels.push_back("T");
      }
      const EigenResult r = smallest_eigenpairs(a.matrix, c.eigenpairs, defl, eo, labels);
      json jb = to_json(r);
      jb["m"] = m;
      blocks.push_back(jb);
      for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
        csv << m << ',' << k << ',' << format_double(r.eigenvalues[k]) << ',' << format_double(r.residual_norms[k])
            << '\n';
      }
    } catch (const NumericalError& e) {
      throw NumericalError("spectrum " + context(n, lambda, m) + ": " + e.what(), e.residual(), e.iterations());
    } catch (const std::invalid_argument& e) {
      throw UsageError("spectrum " + context(n, lambda, m) + ": " + e.what());
    }
  }
  if (c.format == Format::csv) {
    emit(c, csv.str(), out);
  } else {
    json j = {{"metadata", metadata_json(c, "spectrum")},
              {"n", n},
              {"lambda", lambda},
              {"operator", c.op},
              {"blocks", blocks}};
    emit(c, j.dump(2) + "\n", out);
  }
  return 0;
}

ClassifyOptions classify_options(const RunConfig& c) {
  ClassifyOptions o;
  o.eigenpairs = c.eigenpairs;
  return o;
}

int do_verdict(const RunConfig& c, std::ostream& out) {
  const int n = c.n_list.front();
  const double lambda = c.lambda_list.front();
  SweepCell cell{n, lambda, std::nullopt, {}};
  try {
    cell.report = classify(n, lambda, c.grid, classify_options(c));
  } catch (const NumericalError& e) {
    throw NumericalError("verdict " + context(n, lambda) + ": " + e.what(), e.residual(), e.iterations());
  }
  if (c.format == Format::csv) {
    emit(c, sweep_csv({cell}, metadata(c, "verdict")), out);
  } else {
    json j = to_json(*cell.report);
    j["metadata"] = metadata_json(c, "verdict");
    emit(c, j.dump(2) + "\n", out);
  }
  return 0;
}

int do_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto cells = sweep(c.n_list, c.lambda_list, c.grid, c.jobs, classify_options(c));
  int status = 0;
  for (const auto& cell : cells) {
    if (!cell.report) {
      err << "sweep " << context(cell.n, cell.lambda) << ": " << cell.error << '\n';
      status = 1;
    }
  }
  Metadata meta = metadata(c, "sweep");
  meta.push_back({"r_min", format_double(c.grid.r_min)});
  meta.push_back({"r_max", format_double(c.grid.r_max)});
  meta.push_back({"n_points", std::to_string(c.grid.n_points)});
  if (c.format == Format::csv) {
    emit(c, sweep_csv(cells, meta), out);
  } else {
    json arr = json::array();
    for (const auto& cell : cells) {
      if (cell.report) {
        arr.push_back(to_json(*cell.report));
      } else {
        arr.push_back({{"n", cell.n}, {"lambda", cell.lambda}, {"error", cell.error}});
      }
    }
    json j = {{"metadata", metadata_json(c, "sweep")}, {"cells", arr}};
    emit(c, j.dump(2) + "\n", out);
  }
  return status;
}

int do_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<CheckItem> items;
  auto guarded = [&](int n, double lambda, auto&& fn) {
    try {
      auto part = fn();
      items.insert(items.end(), part.begin(), part.end());
    } catch (const std::exception& e) {
      err << "check " << context(n, lambda) << ": " << e.what() << '\n';
      items.push_back({"solve", n, lambda, std::nan(""), 0.0, false});
    }
  };
  for (int n : c.n_list) {
    for (double lambda : c.lambda_list) {
      guarded(n, lambda, [&] { return invariant_suite(n, lambda, c.grid, c.seed, c.trials); });
    }
  }
  for (const auto& [n, lambda] : c.z0_only) {
    guarded(n, lambda, [&] { return z0_suite(n, lambda, c.grid); });
  }
  std::size_t failed = 0;
  for (const auto& it : items) {
    if (!it.pass) ++failed;
  }
  std::ostringstream table;
  char line[200];
  for (const auto& it : items) {
    std::snprintf(line, sizeof line, "%-4s n=%d lambda=%-6g %-28s %12.4e  (limit %.1e)\n", it.pass ? "ok" : "FAIL",
                  it.n, it.lambda, it.name.c_str(), it.value, it.limit);
    table << line;
  }
  table << (items.size() - failed) << '/' << items.size() << " checks passed\n";

  if (c.output.empty()) {
    out << table.str();
  } else {
    out << table.str();
    if (c.format == Format::csv) {
      std::ostringstream csv;
      Metadata meta = {{"version", version()},
                       {"r_min", format_double(c.grid.r_min)},
                       {"r_max", format_double(c.grid.r_max)},
                       {"n_points", std::to_string(c.grid.n_points)}};
      for (const auto& kv : metadata(c, "check")) meta.push_back(kv);
      for (const auto& [k, v] : meta) csv << "# " << k << " = " << v << '\n';
      csv << "n,lambda,name,value,limit,pass\n";
      for (const auto& it : items) {
        csv << it.n << ',' << format_double(it.lambda) << ',' << it.name << ',' << format_double(it.value) << ','
            << format_double(it.limit) << ',' << (it.pass ? 1 : 0) << '\n';
      }
      write_atomic(c.output, csv.str());
    } else {
      json arr = json::array();
      for (const auto& it : items) {
        arr.push_back({{"n", it.n},
                       {"lambda", it.lambda},
                       {"name", it.name},
                       {"value", std::isnan(it.value) ? json(nullptr) : json(it.value)},
                       {"limit", it.limit},
                       {"pass", it.pass}});
      }
      json j = {{"metadata", metadata_json(c, "check")}, {"checks", arr}, {"failed", failed}};
      write_atomic(c.output, j.dump(2) + "\n");
    }
  }
  return failed == 0 ? 0 : 1;
}

void apply_sweep_config(RunConfig& c, const std::string& path, bool have_n, bool have_lambda, bool have_jobs,
                        bool have_k, const std::map<std::string, bool>& have_grid) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  try {
    if (!have_n && j.contains("n")) c.n_list = j.at("n").get<std::vector<int>>();
    if (!have_lambda) {
      if (j.contains("lambda")) c.lambda_list = j.at("lambda").get<std::vector<double>>();
      if (j.contains("lambda_range")) {
        const json& r = j.at("lambda_range");
        const auto more = lambda_range(r.at("start").get<double>(), r.at("stop").get<double>(),
                                       r.at("count").get<int>());
        c.lambda_list.insert(c.lambda_list.end(), more.begin(), more.end());
      }
    }
    if (!have_jobs && j.contains("jobs")) c.jobs = j.at("jobs").get<std::size_t>();
    if (!have_k && j.contains("eigenpairs")) c.eigenpairs = j.at("eigenpairs").get<std::size_t>();
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (!have_grid.at("r_max") && g.contains("r_max")) c.grid.r_max = g.at("r_max").get<double>();
      if (!have_grid.at("r_min") && g.contains("r_min")) c.grid.r_min = g.at("r_min").get<double>();
      if (!have_grid.at("n_points") && g.contains("n_points")) c.grid.n_points = g.at("n_points").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

}  // namespace

std::vector<CheckItem> invariant_suite(int n, double lambda, const GridConfig& grid, std::uint64_t seed,
                                       int trials) {
  std::vector<CheckItem> items;
  auto add = [&](const std::string& name, double value, double limit, bool pass) {
    items.push_back({name, n, lambda, value, limit, pass});
  };
  auto below = [&](const std::string& name, double value, double limit) {
    add(name, value, limit, std::isfinite(value) && value <= limit);
  };

  const auto g = grid.make();
  const VortexProfile p = solve_profile(n, lambda, g);
  const bool critical = std::abs(lambda - 1.0) < 1e-12;

  const ProfileProperties props = check_profile_properties(p);
  add("profile.properties", props.far_field, 1e-6, props.ok(n));

  const std::vector<double> e = profile_inequality_margin(p);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double r = g->nodes[i];
    if (r < 0.1 || r > 15.0) continue;
    lo = std::min(lo, e[i]);
    hi = std::max(hi, e[i]);
  }
  if (critical) {
    below("inequality.max_abs", std::max(std::abs(lo), std::abs(hi)), 1e-4);
    const BogomolnyiResidual b = bogomolnyi_residual(p, 0.1, 15.0);
    below("bogomolnyi.residual", std::max(b.vortex_equation, b.field_equation), 1e-4);
    below("bogomolnyi.energy", std::abs(vortex_energy(p) / (std::numbers::pi * n) - 1.0), 1e-2);
  } else if (lambda < 1.0) {
    add("inequality.min_positive", lo, 0.0, lo > 0.0);
  } else {
    add("inequality.max_negative", hi, 0.0, hi < 0.0);
  }

  below("zero_mode.L1_T", relative_residual(assemble_Lm(p, 1), translational_mode(p)), 1e-3);
  const auto [ft1, m1] = assemble_tildeFm_and_Mm(p, 1);
  below("zero_mode.M1_fprime", relative_residual(m1, scalar_vector(g, p.f_prime, "f'")), 1e-3);
  if (critical) {
    for (int m = 2; m <= n; ++m) {
      below("zero_mode.L" + std::to_string(m) + "_W", relative_residual(assemble_Lm(p, m), W_mode(p, m)), 1e-3);
    }
    const ChiMode chi = chi_mode(p, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->n_points; ++i) {
      const double r = g->nodes[i];
      if (r < 0.1 || r > 10.0) continue;
      worst = std::max(worst, std::abs(chi.chi[i] / ((1.0 - p.a[i]) / r) - 1.0));
    }
    below("chi1.identity", worst, 1e-3);
  }

  double rot = 0.0;
  for (int m : {0, 1, 2, 3, -1, -2, -3}) rot = std::max(rot, rotation_defect(p, m).relative());
  below("rotation.identity", rot, 1e-12);

  double mm = 0.0;
  bool diagonal = true;
  for (int m : {2, 3}) {
    const MmDifference d = mm_difference(p, m);
    diagonal = diagonal && d.diagonal;
    mm = std::max(mm, d.relative());
  }
  add("Mm_minus_M1.formula", mm, 1e-10, diagonal && mm <= 1e-10);

  below("keysplit.residual", keysplit_residual(p, 2, trials, seed), 1e-1);
  below("G0.factor_residual", g0_factor_residual(p, trials, seed), 1e-2);

  const Z0Report z = appendix_Z0_check(p);
  below("Z0.lf_residual", z.lf_residual, 1e-3);
  // det > 0 is guaranteed once lambda >= 2 n^2, since 0 <= 1 - a <= 1
  if (lambda >= 2.0 * n * n) add("Z0.min_det", z.min_det, 0.0, z.min_det > 0.0 && z.negative_det_nodes == 0);

  const LambdaDerivativeCheck d = lambda_derivative_check(n, lambda, g, 1e-3);
  add("lambda_derivative.residual", d.residual, 5e-2, d.residual <= 5e-2 && d.xi_positive);
  return items;
}

std::vector<CheckItem> z0_suite(int n, double lambda, const GridConfig& grid) {
  const VortexProfile p = solve_profile(n, lambda, grid.make());
  const Z0Report z = appendix_Z0_check(p);
  return {{"Z0.lf_residual", n, lambda, z.lf_residual, 1e-3, z.lf_residual <= 1e-3},
          {"Z0.min_det", n, lambda, z.min_det, 0.0, z.min_det > 0.0 && z.negative_det_nodes == 0}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Stability of magnetic Ginzburg-Landau vortices", "glvortex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  std::vector<int> n_list;
  std::vector<double> lambda_list;
  std::string lambda_range_str, m_range_str, format_str = "json", config_path;
  std::vector<int> m_list;

  auto common = [&](CLI::App* sub, bool multi) {
    sub->add_option("--n", n_list, multi ? "Vortex degrees (comma separated)" : "Vortex degree")
        ->delimiter(',')
        ->expected(1, multi ? -1 : 1);
    sub->add_option("--lambda", lambda_list, multi ? "Coupling constants (comma separated)" : "Coupling constant")
        ->delimiter(',')
        ->expected(1, multi ? -1 : 1);
    if (multi) sub->add_option("--lambda-range", lambda_range_str, "start:stop:count, endpoints included");
    sub->add_option("--r-max", c.grid.r_max, "Outer radius")->capture_default_str();
    sub->add_option("--r-min", c.grid.r_min, "Inner radius (0 uses the cell-centered origin grid)")
        ->capture_default_str();
    sub->add_option("--n-points", c.grid.n_points, "Number of grid nodes")->capture_default_str();
    sub->add_option("--out,-o", c.output, "Output file (default stdout)");
    sub->add_option("--format", format_str, "Output format")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "Seed for randomized test vectors")->capture_default_str();
  };

  CLI::App* profile = app.add_subcommand("profile", "Solve the radial vortex profile");
  common(profile, false);
  CLI::App* spectrum = app.add_subcommand("spectrum", "Lowest eigenvalues of a radial block");
  common(spectrum, false);
  spectrum->add_option("--m", m_list, "Angular mode")->expected(1);
  spectrum->add_option("--m-range", m_range_str, "lo:hi, inclusive");
  spectrum->add_option("--operator", c.op, "Block family")->check(CLI::IsMember({"L", "hatL", "M", "M0", "l"}))
      ->capture_default_str();
  spectrum->add_option("-k,--k", c.eigenpairs, "Number of eigenpairs")->capture_default_str();
  spectrum->add_flag("!--no-deflate", c.deflate, "Keep the translational mode in L_1");
  CLI::App* verdict = app.add_subcommand("verdict", "Classify one vortex as stable, unstable or marginal");
  common(verdict, false);
  verdict->add_option("-k,--k", c.eigenpairs, "Eigenpairs per block")->capture_default_str();
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Classify a grid of (n, lambda) values");
  common(sweep_cmd, true);
  sweep_cmd->add_option("--config", config_path, "JSON config with n, lambda or lambda_range, grid, jobs");
  sweep_cmd->add_option("--jobs,-j", c.jobs, "Cells computed in parallel")->capture_default_str();
  sweep_cmd->add_option("-k,--k", c.eigenpairs, "Eigenpairs per block")->capture_default_str();
  CLI::App* check = app.add_subcommand("check", "Run the invariant suite (default n = 1,2 and lambda = 0.5,1,2, plus Z0 at (1,2) and (2,8))");
  common(check, true);
  check->add_option("--trials", c.trials, "Random vectors per residual")->capture_default_str();

  std::vector<std::string> argv_store{"glvortex"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    c.command = name == "profile"    ? Command::profile
                : name == "spectrum" ? Command::spectrum
                : name == "verdict"  ? Command::verdict
                : name == "sweep"    ? Command::sweep
                                     : Command::check;
    c.format = format_str == "csv" ? Format::csv : Format::json;
    c.n_list = n_list;
    c.lambda_list = lambda_list;
    if (!lambda_range_str.empty()) {
      const auto more = parse_lambda_range(lambda_range_str);
      c.lambda_list.insert(c.lambda_list.end(), more.begin(), more.end());
    }
    if (c.command == Command::sweep && !config_path.empty()) {
      apply_sweep_config(c, config_path, !n_list.empty(), !c.lambda_list.empty(), sub->count("--jobs") > 0,
                         sub->count("--k") > 0,
                         {{"r_max", sub->count("--r-max") > 0},
                          {"r_min", sub->count("--r-min") > 0},
                          {"n_points", sub->count("--n-points") > 0}});
    }
    if (c.command == Command::check) {
      if (c.n_list.empty() && c.lambda_list.empty()) c.z0_only = {{1, 2.0}, {2, 8.0}};
      if (c.n_list.empty()) c.n_list = {1, 2};
      if (c.lambda_list.empty()) c.lambda_list = {0.5, 1.0, 2.0};
    }
    if (c.command == Command::spectrum) {
      if (!m_list.empty() && !m_range_str.empty()) throw UsageError("give either --m or --m-range");
      if (!m_list.empty()) {
        c.m_lo = c.m_hi = m_list.front();
      } else if (!m_range_str.empty()) {
        const auto parts = split(m_range_str, ':');
        if (parts.size() != 2) throw UsageError("--m-range expects lo:hi, got '" + m_range_str + "'");
        c.m_lo = to_int(parts[0], "--m-range");
        c.m_hi = to_int(parts[1], "--m-range");
      } else {
        throw UsageError("spectrum needs --m or --m-range");
      }
    }
    validate(c);

    switch (c.command) {
      case Command::profile: return do_profile(c, out);
      case Command::spectrum: return do_spectrum(c, out);
      case Command::verdict: return do_verdict(c, out);
      case Command::sweep: return do_sweep(c, out, err);
      case Command::check: return do_check(c, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace glvortex::cli
