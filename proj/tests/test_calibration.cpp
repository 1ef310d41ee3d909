#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "seqdist/calibration.hpp"
#include "seqdist/errors.hpp"

using namespace seqdist;

namespace {

CalibrationGrid tiny_grid(std::uint64_t seed) {
  CalibrationGrid g;
  g.ns = {2, 10};
  g.ds = {0.1, 0.3};
  g.ts = {50, 400};
  g.trials = 200;
  g.seed = seed;
  return g;
}

CalibrationCell cell(std::size_t n, double d, std::uint64_t t) {
  CalibrationCell c;
  c.n = n;
  c.d = d;
  c.t = t;
  const double tt = static_cast<double>(t), nn = static_cast<double>(n);
  c.z_floor = std::min({tt * d, tt * tt * d * d / nn, std::pow(tt, 1.5) * d * d / std::sqrt(nn)});
  c.tv_floor = std::min({d * d * tt * tt / (nn * nn), d * d * std::sqrt(tt / nn), d});
  return c;
}

}  // namespace

TEST_CASE("fit follows the stated formulas on synthetic cells") {
  auto null_cell = cell(2, 0.0, 100);
  null_cell.mean_abs_z = 8.0;
  null_cell.se_abs_z = 0.5;
  auto far = cell(2, 0.2, 100);
  far.mean_z = 10.0;
  far.se_z = 1.0;
  far.mean_tv = 0.3;
  far.se_tv = 0.01;
  far.mu = 0.05;
  const auto r = fit_constants({null_cell, far});
  CHECK(r.constants.c_small == doctest::Approx(0.95));
  CHECK(r.constants.C_big == doctest::Approx((13.0 + 9.5) / far.z_floor));
  CHECK(r.constants.C_unif == doctest::Approx(0.28 / far.tv_floor));
  CHECK(r.warnings.empty());
}

TEST_CASE("a grid point with no admissible constant is named") {
  auto far = cell(10, 0.3, 50);
  far.mean_tv = 0.01;
  far.mu = 0.2;
  try {
    fit_constants({far});
    FAIL("expected CalibrationError");
  } catch (const CalibrationError& e) {
    CHECK(std::string(e.what()).find("n=10 d=0.29999999999999999 t=50") != std::string::npos);
  }
}

TEST_CASE("null-only grid leaves the large constants unconstrained") {
  auto g = tiny_grid(1);
  g.ds = {};
  const auto r = calibrate_constants(g);
  CHECK(r.constants.C_big == std::numeric_limits<double>::infinity());
  CHECK(r.constants.C_unif == std::numeric_limits<double>::infinity());
  CHECK(r.constants.c_small > 0.0);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("+inf") != std::string::npos);
}

TEST_CASE("calibration is deterministic for a fixed seed") {
  const auto a = calibrate_constants(tiny_grid(5));
  const auto b = calibrate_constants(tiny_grid(5));
  CHECK(a.constants.c_small == b.constants.c_small);
  CHECK(a.constants.C_big == b.constants.C_big);
  CHECK(a.constants.C_unif == b.constants.C_unif);
  CHECK(a.cells.size() == 2 * 3 * 2);
  std::ostringstream x, y;
  write_calibration(x, a);
  write_calibration(y, b);
  CHECK(x.str() == y.str());
}

TEST_CASE("calibration grid validation") {
  auto g = tiny_grid(1);
  g.ns = {3};
  CHECK_THROWS_AS(calibrate_constants(g), DomainError);
  g = tiny_grid(1);
  g.ts = {};
  CHECK_THROWS_AS(calibrate_constants(g), DomainError);
}

TEST_CASE("built-in constants hold on a held-out grid") {
  CalibrationGrid held_out;
  held_out.trials = 300;
  held_out.seed = 777;
  const auto v = validate_constants(kCalibratedConstants, held_out);
  CHECK(v.far_cells == 27);
  CHECK(v.violation_rate() <= 0.01);
}
