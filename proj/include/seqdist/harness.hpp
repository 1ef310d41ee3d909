#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqdist/analysis.hpp"
#include "seqdist/core_stats.hpp"
#include "seqdist/decision.hpp"

namespace seqdist {

enum class Algorithm { BatchId, SeqId, BatchClos, SeqClosSmall, SeqUnif, SeqClosGeneral, Doubling };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);
bool is_closeness(Algorithm a);

/// Universal constants used when a spec does not set them. Produced by
/// `seqdist calibrate` on the default grid (n in {2, 10, 100},
/// d in {0.05, 0.1, 0.3}, t in {50, 500, 5000}, 2000 trials, seed 20240601).
struct Constants {
  double c_small;
  double C_big;
  double C_unif;
};
extern const Constants kCalibratedConstants;

/// Expands the distribution mini-language:
///   uniform:n | twobump:n:b | heavy:n:k:m | explicit:p1,p2,...
/// twobump alternates (1 + 2b)/n and (1 - 2b)/n (n even, b <= 1/2), so its TV
/// to U_n is b. heavy gives symbols 0..k-1 an extra m/k on top of (1 - m)/n.
Distribution parse_distribution(std::string_view spec);

/// Invalid experiment description; `problems` lists every offending field.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ExperimentSpec {
  Algorithm algorithm = Algorithm::SeqClosSmall;
  std::size_t n = 2;
  double eps = 0.1;
  double delta = 0.05;
  std::string dist;   ///< D' for identity testers, D1 for closeness; empty means uniform:n
  std::string dist2;  ///< D2 for closeness testers; empty means uniform:n
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_steps;
  std::optional<double> eps_min;  ///< doubling floor; rate for the step cap when eps = 0
  double c_small = kCalibratedConstants.c_small;
  double C_big = kCalibratedConstants.C_big;
  double C_unif = kCalibratedConstants.C_unif;
  bool trajectory = false;
  unsigned workers = 1;

  ThresholdParams params() const;

  /// Every problem with the spec, or empty when it can run.
  std::vector<std::string> problems() const;
};

/// Reads line-oriented key=value text ('#' starts a comment). Unknown keys and
/// malformed values are reported together as a SpecError.
ExperimentSpec parse_spec(std::string_view text);

/// Applies one key=value assignment; returns a problem description or empty.
std::string apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

struct TrialRecord {
  std::uint64_t trial_id = 0;
  Algorithm algorithm = Algorithm::SeqClosSmall;
  std::size_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double tv_true = 0.0;
  Verdict decision = Verdict::Undecided;
  std::uint64_t tau = 0;
  std::uint64_t samples_consumed = 0;
  std::uint64_t seed = 0;
  double c_small = 0.0;
  double C_big = 0.0;
  double C_unif = 0.0;
  std::vector<TracePoint> trajectory;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Step cap used when the spec leaves max_steps unset; 0 for batch algorithms
/// and the doubling baseline, which have no cap.
std::uint64_t default_max_steps(const ExperimentSpec& spec);

/// First t at which the uniformity tester's stop regions cover every TV value,
/// i.e. uniform_separation >= 2 * uniform_envelope.
std::uint64_t uniform_meeting_time(const ThresholdParams& params);

/// Runs one trial; substreams 0, 1, 2 of (seed, trial_id) feed the first
/// source, the second source and the allocation of the Z-statistic tester.
TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial_id);

/// Exactly spec.trials records ordered by trial_id; identical for any worker count.
std::vector<TrialRecord> run_trials(const ExperimentSpec& spec);

/// A wrong verdict is RejectFar when tv_true = 0, or AcceptEqual when tv_true > eps.
bool is_error(const TrialRecord& r);

// CSV persistence.

inline constexpr std::string_view kCsvHeader =
    "trial_id,algorithm,n,eps,delta,tv_true,decision,tau,samples_consumed,seed,c_small,C_big,C_unif";
inline constexpr std::string_view kTrajectoryHeader = "trial_id,t,statistic,reject_above,accept_below";

/// %.17g rendering used for every real column.
std::string format_real(double x);

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_trajectories(std::ostream& os, const std::vector<TrialRecord>& records);

struct CsvIssue {
  std::size_t line = 0;
  std::string message;
};

struct CsvReadResult {
  std::vector<TrialRecord> records;
  std::vector<CsvIssue> issues;
};

/// Parses records; malformed rows are skipped and reported with their line number.
CsvReadResult read_csv(std::istream& is);

// Aggregation.

struct GroupSummary {
  Algorithm algorithm = Algorithm::SeqClosSmall;
  std::size_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double tv_true = 0.0;
  std::size_t count = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t undecided = 0;
  double mean_tau = 0.0;
  std::optional<double> mean_tau_accept;  ///< tau_1 side
  std::optional<double> mean_tau_reject;  ///< tau_2 side
  double mean_samples = 0.0;
  double error_rate = 0.0;
  double error_ci = 0.0;  ///< 1.96 standard errors
};

/// Groups by (algorithm, n, eps, delta, tv_true) in first-seen order.
std::vector<GroupSummary> summarize(const std::vector<TrialRecord>& records);

/// Per-side mean stopping times in the form table_summary consumes.
std::vector<Measurement> to_measurements(const std::vector<GroupSummary>& groups);

/// Table configurations implied by the groups (one per algorithm family and
/// (n, eps, delta); closeness farness taken from the far groups).
std::vector<TableConfig> implied_tables(const std::vector<GroupSummary>& groups);

std::string render_groups(const std::vector<GroupSummary>& groups);

}  // namespace seqdist
