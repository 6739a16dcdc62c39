#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glvortex/verdict.hpp"

namespace glvortex::cli {

enum class Command { profile, spectrum, verdict, sweep, check };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::verdict;
  std::vector<int> n_list;
  std::vector<double> lambda_list;
  GridConfig grid;
  int m_lo = 0;
  int m_hi = 0;
  std::string op = "L";      // spectrum: L, hatL, M or l
  std::size_t eigenpairs = 6;
  bool deflate = true;
  std::string output;         // empty writes to stdout
  Format format = Format::json;
  std::uint64_t seed = 2024;
  std::size_t jobs = 1;
  int trials = 3;
  std::vector<std::pair<int, double>> z0_only;  // check: (n, lambda) pairs that only get the Z0 tests
};

/// Outcome of one invariant of the check suite.
struct CheckItem {
  std::string name;
  int n = 0;
  double lambda = 0.0;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

/// Runs every invariant for one (n, lambda).
std::vector<CheckItem> invariant_suite(int n, double lambda, const GridConfig& grid, std::uint64_t seed, int trials);

/// Z0 determinant and l f residual for one (n, lambda).
std::vector<CheckItem> z0_suite(int n, double lambda, const GridConfig& grid);

/// Parses arguments (without the program name), runs the command and returns the exit status:
/// 0 success, 1 numerical failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace glvortex::cli
