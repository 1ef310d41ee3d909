#include "seqdist/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "seqdist/errors.hpp"
#include "seqdist/testers_general.hpp"
#include "seqdist/thresholds.hpp"

namespace seqdist {

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
  }
};

double tv_to_uniform(const EmpiricalState& s) {
  const auto n = static_cast<std::int64_t>(s.size());
  const auto t = static_cast<std::int64_t>(s.t());
  std::int64_t total = 0;
  for (auto c : s.counts()) total += std::llabs(n * static_cast<std::int64_t>(c) - t);
  return static_cast<double>(total) / (2.0 * static_cast<double>(n) * static_cast<double>(t));
}

std::string describe(const CalibrationCell& c) {
  return "n=" + std::to_string(c.n) + " d=" + format_real(c.d) + " t=" + std::to_string(c.t);
}

// Simulates one (n, d) pair through every checkpoint; `pair` keeps substreams disjoint.
std::vector<CalibrationCell> measure_pair(std::size_t n, double d, const CalibrationGrid& grid, std::uint64_t pair) {
  const Distribution uniform = Distribution::uniform(n);
  const Distribution other = d > 0.0 ? parse_distribution("twobump:" + std::to_string(n) + ":" + format_real(d))
                                     : uniform;
  std::vector<std::uint64_t> ts = grid.ts;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<Moments> z(ts.size()), abs_z(ts.size()), tv(ts.size());
  ThresholdParams params;
  params.n = n;

  for (std::uint64_t trial = 0; trial < grid.trials; ++trial) {
    const std::uint64_t id = pair * grid.trials + trial;
    SampleStream first(uniform, make_engine(grid.seed, id, 0));
    SampleStream second(other, make_engine(grid.seed, id, 1));
    SampleStream single(other, make_engine(grid.seed, id, 3));
    ZTester tester(params, make_engine(grid.seed, id, 2));
    EmpiricalState emp(n);
    std::size_t next = 0;
    for (std::uint64_t t = 1; next < ts.size(); ++t) {
      const Allocation a = tester.grow_counts();
      for (int g = 0; g < 4; ++g) {
        SymbolSource& src = g < 2 ? static_cast<SymbolSource&>(first) : second;
        for (int b = 0; b < a.balls[g]; ++b) tester.add_sample(static_cast<Group>(g), src.next());
      }
      emp.update(single.next());
      if (t == ts[next]) {
        const auto zt = static_cast<double>(tester.z());
        z[next].add(zt);
        abs_z[next].add(std::fabs(zt));
        tv[next].add(tv_to_uniform(emp));
        ++next;
      }
    }
  }

  std::vector<CalibrationCell> cells;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CalibrationCell c;
    const double t = static_cast<double>(ts[i]);
    const double nn = static_cast<double>(n);
    c.n = n;
    c.d = d;
    c.t = ts[i];
    c.mean_z = z[i].mean();
    c.se_z = z[i].se();
    c.mean_abs_z = abs_z[i].mean();
    c.se_abs_z = abs_z[i].se();
    c.mean_tv = tv[i].mean();
    c.se_tv = tv[i].se();
    c.mu = mu_uniform(n, ts[i]);
    c.z_floor = std::min({t * d, t * t * d * d / nn, std::pow(t, 1.5) * d * d / std::sqrt(nn)});
    c.tv_floor = std::min({d * d * t * t / (nn * nn), d * d * std::sqrt(t / nn), d});
    cells.push_back(c);
  }
  return cells;
}

}  // namespace

std::vector<CalibrationCell> measure_cells(const CalibrationGrid& grid) {
  if (grid.ns.empty() || grid.ts.empty()) throw DomainError("calibration grid needs at least one n and one t");
  if (grid.trials < 2) throw DomainError("calibration needs at least two trials per cell");
  for (auto n : grid.ns) {
    if (n < 2 || n % 2 != 0) throw DomainError("calibration alphabet sizes must be even and >= 2");
  }
  for (auto t : grid.ts) {
    if (t < 1) throw DomainError("calibration checkpoints must be >= 1");
  }
  for (auto d : grid.ds) {
    if (!(d >= 0.0 && d <= 0.5)) throw DomainError("calibration distances must lie in [0, 1/2]");
  }

  std::vector<CalibrationCell> cells;
  std::uint64_t pair = 0;
  for (auto n : grid.ns) {
    std::vector<double> ds{0.0};
    for (auto d : grid.ds)
      if (d > 0.0 && std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
    for (auto d : ds) {
      auto part = measure_pair(n, d, grid, pair++);
      cells.insert(cells.end(), part.begin(), part.end());
    }
  }
  return cells;
}

CalibrationResult fit_constants(std::vector<CalibrationCell> cells) {
  CalibrationResult out;
  const double inf = std::numeric_limits<double>::infinity();

  double c_small = 0.0;
  bool any_null = false;
  for (const auto& c : cells) {
    if (c.d != 0.0) continue;
    any_null = true;
    c_small = std::max(c_small, (c.mean_abs_z + 3.0 * c.se_abs_z) / std::sqrt(static_cast<double>(c.t)));
  }
  if (!any_null) out.warnings.push_back("no null cells: c_small left at 0");

  double C_big = inf;
  double C_unif = inf;
  bool any_far = false;
  for (const auto& c : cells) {
    if (c.d == 0.0) continue;
    any_far = true;
    const double big = (c.mean_z + 3.0 * c.se_z + c_small * std::sqrt(static_cast<double>(c.t))) / c.z_floor;
    if (!(big > 0.0)) throw CalibrationError("no positive C_big fits the grid point " + describe(c));
    C_big = std::min(C_big, big);
    const double unif = (c.mean_tv - c.mu + 3.0 * c.se_tv) / c.tv_floor;
    if (!(unif > 0.0)) throw CalibrationError("no positive C_unif fits the grid point " + describe(c));
    C_unif = std::min(C_unif, unif);
  }
  if (!any_far) out.warnings.push_back("no far cells: C_big and C_unif are unconstrained (+inf)");

  out.constants = {c_small, C_big, C_unif};
  out.cells = std::move(cells);
  return out;
}

CalibrationResult calibrate_constants(const CalibrationGrid& grid) { return fit_constants(measure_cells(grid)); }

ValidationResult validate_constants(const Constants& constants, const CalibrationGrid& grid) {
  ValidationResult out;
  for (const auto& c : measure_cells(grid)) {
    if (c.d == 0.0) continue;
    ++out.far_cells;
    const double floor = constants.C_big * c.z_floor - constants.c_small * std::sqrt(static_cast<double>(c.t));
    if (floor > c.mean_z + 3.0 * c.se_z) {
      ++out.violations;
      out.violating.push_back(c);
    }
  }
  return out;
}

void write_calibration(std::ostream& os, const CalibrationResult& result) {
  os << "# c_small=" << format_real(result.constants.c_small) << '\n';
  os << "# C_big=" << format_real(result.constants.C_big) << '\n';
  os << "# C_unif=" << format_real(result.constants.C_unif) << '\n';
  for (const auto& w : result.warnings) os << "# warning: " << w << '\n';
  os << "n,d,t,mean_z,se_z,mean_abs_z,se_abs_z,mean_tv,se_tv,mu,z_floor,tv_floor\n";
  for (const auto& c : result.cells) {
    os << c.n << ',' << format_real(c.d) << ',' << c.t << ',' << format_real(c.mean_z) << ',' << format_real(c.se_z)
       << ',' << format_real(c.mean_abs_z) << ',' << format_real(c.se_abs_z) << ',' << format_real(c.mean_tv) << ','
       << format_real(c.se_tv) << ',' << format_real(c.mu) << ',' << format_real(c.z_floor) << ','
       << format_real(c.tv_floor) << '\n';
  }
}

}  // namespace seqdist
