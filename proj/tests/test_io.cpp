#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "glvortex/io.hpp"
#include "glvortex/operators.hpp"

using namespace glvortex;
namespace fs = std::filesystem;

TEST_CASE("doubles round-trip through text") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("atomic write leaves no temporary file") {
  const fs::path dir = fs::temp_directory_path() / "glvortex_io_test";
  fs::create_directories(dir);
  const fs::path file = dir / "out.txt";
  write_atomic(file, "first\n");
  write_atomic(file, "second\n");
  std::ifstream in(file);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(fs::exists(dir / "out.txt.tmp"));
  CHECK_THROWS(write_atomic(dir / "missing" / "x.txt", "x"));
  fs::remove_all(dir);
}

TEST_CASE("profile CSV carries metadata and one row per node") {
  const GridConfig grid{10.0, 200, 0.0};
  const VortexProfile p = solve_profile(1, 1.0, grid.make());
  const std::string csv = profile_csv(p, {{"command", "profile"}});
  std::istringstream is(csv);
  std::string line;
  std::size_t meta = 0, rows = 0;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++meta;
    } else if (line == "r,f,a,f_prime,a_prime") {
      header = true;
    } else {
      ++rows;
    }
  }
  CHECK(header);
  CHECK(rows == 200);
  CHECK(csv.find("# n = 1\n") != std::string::npos);
  CHECK(csv.find("# lambda = 1\n") != std::string::npos);
  CHECK(csv.find("# n_points = 200\n") != std::string::npos);
  CHECK(csv.find("# version = " + version()) != std::string::npos);
  CHECK(csv.find("# command = profile\n") != std::string::npos);
}

TEST_CASE("report JSON uses the report field names") {
  const StabilityReport r = classify(2, 2.0, GridConfig{20.0, 600, 0.0});
  const nlohmann::json j = to_json(r);
  for (const char* key : {"n", "lambda", "m_max", "grid", "h", "zero_threshold", "per_block", "witnesses",
                          "classification", "gap", "worst_m", "essential_edge", "tail_monotone"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["classification"] == "unstable");
  CHECK(j["per_block"][1]["deflated"][0] == "T");
  CHECK(j["per_block"][0]["zero_mode_residual"].is_null());
  const std::string csv = sweep_csv({{2, 2.0, r, {}}, {3, 1.0, std::nullopt, "boom"}});
  CHECK(csv.find("n,lambda,gap,classification,worst_m,witness_RQ\n") != std::string::npos);
  CHECK(csv.find("\n3,1,,error,,\n") != std::string::npos);
}

TEST_CASE("banded dump lists the band row by row") {
  const RadialGrid g = build_origin_grid(1.0, 16);
  const WeightedMatrix a = radial_schrodinger_matrix(g, 0.0, std::vector<double>(16, 0.0));
  std::ostringstream os;
  write_banded(os, a);
  std::istringstream is(os.str());
  std::size_t n, bw, c;
  is >> n >> bw >> c;
  CHECK(n == 15);
  CHECK(bw == 1);
  CHECK(c == 1);
  double lower, diag, upper;
  is >> lower >> diag >> upper;
  CHECK(lower == 0.0);
  CHECK(diag == doctest::Approx(a.entry(0, 0)));
  CHECK(upper == doctest::Approx(a.entry(0, 1)));
}
