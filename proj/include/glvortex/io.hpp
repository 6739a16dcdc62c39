#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "glvortex/profiles.hpp"
#include "glvortex/radial_grid.hpp"
#include "glvortex/spectra.hpp"
#include "glvortex/verdict.hpp"

namespace glvortex {

std::string version();

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double x);

/// '#'-prefixed metadata lines followed by r,f,a,f_prime,a_prime rows.
std::string profile_csv(const VortexProfile& p, const Metadata& extra = {});

nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const EigenResult& r);
nlohmann::json to_json(const GridConfig& g);

/// Columns n, lambda, gap, classification, worst_m, witness_RQ (most negative witness, empty if none).
std::string sweep_csv(const std::vector<SweepCell>& cells, const Metadata& extra = {});

/// "dimension bandwidth components" header, then one line per row with 2*bandwidth+1 band entries
/// (columns i-bw .. i+bw, zero outside the matrix), then a line of weights.
void write_banded(std::ostream& os, const WeightedMatrix& a);

}  // namespace glvortex
