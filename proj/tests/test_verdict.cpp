#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "glvortex/verdict.hpp"

using namespace glvortex;

namespace {
const GridConfig small{20.0, 1000, 0.0};
}

TEST_CASE("decision rule") {
  const double t = 1e-4;
  CHECK(classify_values({0.1, 0.2}, {}, t) == Classification::stable);
  CHECK(classify_values({0.1, -0.2}, {}, t) == Classification::unstable);
  CHECK(classify_values({0.1, 0.2}, {-0.01}, t) == Classification::unstable);
  CHECK(classify_values({0.1, 5e-5}, {}, t) == Classification::marginal);
  CHECK(classify_values({0.1, -5e-5}, {-5e-5}, t) == Classification::marginal);
  CHECK(to_string(Classification::unstable) == "unstable");
  CHECK(choose_m_max(1, 0.5) >= 2);
  CHECK(choose_m_max(3, 2.0) > 3);
}

TEST_CASE("degree one is stable") {
  for (double lambda : {0.5, 2.0}) {
    const StabilityReport r = classify(1, lambda, small);
    CHECK(r.classification == Classification::stable);
    CHECK(r.per_block.size() == static_cast<std::size_t>(r.m_max + 1));
    CHECK(r.witnesses.empty());
    CHECK(r.per_block[1].deflated == std::vector<std::string>{"T"});
    CHECK(std::abs(r.per_block[1].mu_raw) <= r.zero_threshold);
    CHECK(r.per_block[1].zero_mode_residual <= 1e-3);
    CHECK(r.essential_edge == doctest::Approx(std::min(1.0, lambda)));
    CHECK(r.gap > r.zero_threshold);
  }
}

TEST_CASE("degree two changes stability at critical coupling") {
  const StabilityReport lo = classify(2, 0.5, small);
  const StabilityReport hi = classify(2, 2.0, small);
  const StabilityReport mid = classify(2, 1.0, small);
  CHECK(lo.classification == Classification::stable);
  CHECK(hi.classification == Classification::unstable);
  CHECK(mid.classification == Classification::marginal);
  CHECK(hi.worst_m == 2);
  REQUIRE(hi.witnesses.size() == 1);
  CHECK(hi.witnesses[0].rayleigh_quotient < -1e-3);
  CHECK(hi.per_block[2].negative_count >= 1);
  CHECK(mid.per_block[2].zero_mode_residual <= 1e-3);
  CHECK(hi.tail_monotone);
}

TEST_CASE("sweep orders, deduplicates and isolates failures") {
  const auto cells = sweep({2, 1, 2}, {2.0, 0.5, -1.0}, small, 3);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].n == 1);
  CHECK(cells[0].lambda == -1.0);
  CHECK_FALSE(cells[0].report.has_value());
  CHECK_FALSE(cells[0].error.empty());
  CHECK(cells[1].report->classification == Classification::stable);
  CHECK(cells[5].n == 2);
  CHECK(cells[5].lambda == 2.0);
  CHECK(cells[5].report->classification == Classification::unstable);
  CHECK_THROWS_AS(sweep({}, {1.0}, small), std::invalid_argument);
  CHECK_THROWS_AS(sweep({1}, {}, small), std::invalid_argument);
}

TEST_CASE("sweep results do not depend on the number of jobs") {
  const auto a = sweep({1, 2}, {0.5, 2.0}, small, 1);
  const auto b = sweep({1, 2}, {0.5, 2.0}, small, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].report->gap == b[i].report->gap);
    CHECK(a[i].report->classification == b[i].report->classification);
  }
}

TEST_CASE("classify validates input") {
  CHECK_THROWS_AS(classify(0, 1.0, small), std::invalid_argument);
  CHECK_THROWS_AS(classify(1, 0.0, small), std::invalid_argument);
}

TEST_CASE("grid config builds either grid") {
  CHECK(GridConfig{20.0, 500, 0.0}.make()->inner_face == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(GridConfig{20.0, 500, 0.01}.make()->nodes.front() == doctest::Approx(0.01));
}
