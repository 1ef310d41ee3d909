#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqdist/harness.hpp"

namespace seqdist {

/// Checkpoint grid for estimating the universal constants by simulation.
///
/// For every n, a null pair (U_n, U_n) is simulated; for every n and every
/// d > 0, the far pair (U_n, twobump:n:d) with TV = d. Each trajectory is run
/// to the largest checkpoint and measured at every checkpoint on the way.
struct CalibrationGrid {
  std::vector<std::size_t> ns{2, 10, 100};
  std::vector<double> ds{0.05, 0.1, 0.3};
  std::vector<std::uint64_t> ts{50, 500, 5000};
  std::uint64_t trials = 2000;
  std::uint64_t seed = 20240601;
};

/// Monte-Carlo estimates at one (n, d, t); d = 0 marks a null cell.
struct CalibrationCell {
  std::size_t n = 0;
  double d = 0.0;
  std::uint64_t t = 0;
  double mean_z = 0.0;
  double se_z = 0.0;
  double mean_abs_z = 0.0;
  double se_abs_z = 0.0;
  double mean_tv = 0.0;   ///< TV(empirical of the second source, U_n)
  double se_tv = 0.0;
  double mu = 0.0;        ///< expected empirical TV under U_n at this t
  double z_floor = 0.0;   ///< min(t d, t^2 d^2 / n, t^1.5 d^2 / sqrt n)
  double tv_floor = 0.0;  ///< min(d^2 t^2 / n^2, d^2 sqrt(t / n), d)
};

struct CalibrationResult {
  Constants constants{};
  std::vector<CalibrationCell> cells;
  std::vector<std::string> warnings;
};

/// No positive constant fits the measurements; `what()` names the grid point.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulates every cell of the grid; deterministic in grid.seed.
std::vector<CalibrationCell> measure_cells(const CalibrationGrid& grid);

/// c_small = max over null cells of (mean|Z| + 3 SE) / sqrt t.
/// C_big = min over far cells of (mean Z + 3 SE + c_small sqrt t) / z_floor.
/// C_unif = min over far cells of (mean TV - mu + 3 SE) / tv_floor.
/// Without far cells both large constants are +infinity and a warning is added.
CalibrationResult calibrate_constants(const CalibrationGrid& grid);

/// Same fit applied to cells that were already measured.
CalibrationResult fit_constants(std::vector<CalibrationCell> cells);

struct ValidationResult {
  std::size_t far_cells = 0;
  std::size_t violations = 0;  ///< far cells whose mean Z falls below the floor by more than 3 SE
  std::vector<CalibrationCell> violating;

  double violation_rate() const {
    return far_cells == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(far_cells);
  }
};

/// Checks C_big * z_floor - c_small sqrt t <= mean Z + 3 SE on a fresh grid.
ValidationResult validate_constants(const Constants& constants, const CalibrationGrid& grid);

void write_calibration(std::ostream& os, const CalibrationResult& result);

}  // namespace seqdist
