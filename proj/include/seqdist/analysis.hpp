#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqdist/thresholds.hpp"

namespace seqdist {

/// Which stopping time a bound speaks about: tau_1 under equality, tau_2 under farness.
enum class Side { Tau1, Tau2 };

enum class Problem { Identity, Closeness };

/// One evaluated sample-complexity expression plus the inputs it was fed.
struct BoundReport {
  std::string setting;     ///< e.g. "closeness/sequential/tau1"
  std::string formula_id;  ///< stable key of the expression
  double leading_value = 0.0;
  double multiplier = 1.0;         ///< unspecified universal constant, carried symbolically
  bool symbolic_constant = false;  ///< true when `multiplier` stands in for an unknown constant
  bool leading_term_only = true;   ///< lower-order terms of unknown size were dropped
  std::size_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double d = 0.0;
  std::size_t b_opt = 0;
};

/// Sequential lower bound for identity to U_n. Tau1: ln(1/(3 delta)) over the
/// smallest kl(b/n, b/n +- eps), b in 1..n. Tau2: ln(1/(3 delta)) over the
/// smallest kl(b_opt/n +- d, b_opt/n). Branches with an argument outside (0,1)
/// are skipped; DomainError if none remain.
double seq_lower_identity(std::size_t n, double eps, double delta, Side side, double d = 0.0,
                          std::size_t b_opt = 0);

/// Sequential lower bound for closeness: ln(1/(3 delta)) over
/// kl(1/2, 1/2 + eps/2) + kl(1/2, 1/2 - eps/2) (Tau1) or
/// kl(1/2 + d/2, 1/2) + kl(1/2 - d/2, 1/2) (Tau2).
double seq_lower_closeness(double eps, double delta, Side side, double d = 0.0);

/// Batch lower bounds, leading term only. Identity: the largest over d in 1..n
/// of min{ln(1/delta)/kl(d/n + eps/2, d/n + eps), ln(1/delta)/kl(d/n + eps/2, d/n)}.
/// Closeness: min{ln(1/(2 delta)) / (2 kl(1/2 - eps/4, 1/2 - eps/2)),
/// ln(1/(2 delta)) / (2 kl(1/2 + eps/4, 1/2))}.
double batch_lower_bounds(Problem problem, std::size_t n, double eps, double delta);

/// Three-branch bound on the expected stopping time of the Z-statistic tester
/// at rate eta, using params.delta, params.n, params.C_big and params.c_small.
double n_eta(const ThresholdParams& params, double eta);

/// Index (0, 1, 2) of the branch that attains n_eta.
int n_eta_branch(const ThresholdParams& params, double eta);

enum class WorstCase { Uniform, Closeness, EqualVsDifferent };

/// Impossibility thresholds for worst-case sequential testing, one report per
/// stated variant with the universal constant left as multiplier 1.
///
/// Uniform: sqrt(n ln(1/(3 delta)))/d^2 and ln(1/(3 delta))/d^2.
/// Closeness: those two plus n^(2/3) ln(1/(3 delta))^(1/3) / d^(4/3).
/// EqualVsDifferent (delta unused, d in (0, 1/e)): sqrt(n ln ln(1/d))/d^2,
/// ln ln(1/d)/d^2 and n^(2/3) (ln ln(1/d))^(1/3) / d^(4/3).
std::vector<BoundReport> worst_case_lower_general(WorstCase problem, std::size_t n, double delta, double d);

/// Coefficient of ln(1/delta) in rate^2 * bound(delta), measured as a central
/// difference in ln(1/delta) around `delta`. This separates the leading
/// constant from additive O(rate^-2) terms such as ln(3)/rate^2.
double leading_log_coefficient(const std::function<double(double)>& bound, double rate, double delta);

// Tables of leading terms.

/// Parameters of one table block. `b_opt` feeds the uniformity tau_2 row and
/// `b_d` its heavy-set variant; `d` is the farness used for tau_2 rows.
struct TableConfig {
  int table = 1;  ///< 1: uniformity, 2: closeness
  std::size_t n = 2;
  double eps = 0.1;
  double delta = 0.05;
  double d = 0.0;
  std::size_t b_opt = 1;
  std::optional<std::size_t> b_d;
};

/// Measured mean stopping time for one (algorithm, n, eps, delta, tv, side).
struct Measurement {
  std::string algorithm;
  std::size_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double tv_true = 0.0;
  Side side = Side::Tau1;
  double mean_tau = 0.0;
  std::size_t count = 0;
};

struct TableRow {
  int table = 1;
  std::string model;  ///< Batch, Sequential
  std::string side;   ///< "-", tau1, tau2, tau2(B_d)
  std::size_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double d = 0.0;
  double formula = 0.0;
  std::optional<double> measured;
  std::optional<double> ratio;  ///< measured / formula
};

/// Leading-term rows of Tables 1-2 with matching measurements attached.
/// Rows without a measurement keep empty measured/ratio cells.
std::vector<TableRow> table_summary(std::span<const TableConfig> configs, std::span<const Measurement> measured);

std::string render_csv(std::span<const TableRow> rows);
std::string render_text(std::span<const TableRow> rows);

}  // namespace seqdist
