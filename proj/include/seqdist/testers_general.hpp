#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqdist/core_stats.hpp"
#include "seqdist/decision.hpp"
#include "seqdist/rng.hpp"
#include "seqdist/testers_small.hpp"
#include "seqdist/thresholds.hpp"

namespace seqdist {

/// The three stop conditions of the uniformity tester at one step.
struct UniformEvaluation {
  bool phi_reject = false;  ///< a size-k deviation crossed its KL-inversion bar
  bool tv_reject = false;   ///< TV exceeded mu_t + envelope
  bool accept = false;      ///< TV fell below mu_t + separation - envelope
  double tv = 0.0;
  double mu = 0.0;
  double envelope = 0.0;
  double separation = 0.0;
};

/// Conditions of the uniformity tester for a state with t >= the start time.
UniformEvaluation evaluate_uniform(const ThresholdParams& params, const EmpiricalState& state);

/// Sequential uniformity tester for arbitrary alphabets.
///
/// Symbols before uniform_start_time(n, delta) only accumulate. From then on it
/// rejects when either a size-k deviation exceeds max{phi(k/n), phi(1-k/n)} or
/// TV(emp, U_n) > mu_t + envelope, and accepts when
/// TV(emp, U_n) < mu_t + C_unif * min(t^2 eps^2/n^2, eps^2 sqrt(t/n), eps) - envelope.
class UniformTester {
 public:
  explicit UniformTester(const ThresholdParams& params);

  Decision push(std::size_t symbol);
  Decision step(SymbolSource& source) { return push(source.next()); }

  /// Evaluates every condition at the current t without changing state;
  /// requires t >= start_time().
  UniformEvaluation evaluate() const;

  Decision decision() const { return decision_; }
  std::uint64_t t() const { return emp_.t(); }
  std::uint64_t start_time() const { return start_; }
  bool started() const { return emp_.t() >= start_; }
  const EmpiricalState& state() const { return emp_; }
  const ThresholdParams& params() const { return params_; }
  const UniformEvaluation& last_evaluation() const { return last_; }
  TracePoint trace() const { return trace_; }

 private:
  ThresholdParams params_;
  EmpiricalState emp_;
  std::uint64_t start_;
  Decision decision_ = Decision::Continue;
  UniformEvaluation last_;
  TracePoint trace_;
};

/// Count groups of the closeness statistic: two sample sets from each source.
enum class Group : std::uint8_t { X = 0, XPrime = 1, Y = 2, YPrime = 3 };

/// Balls added to each group by one allocation step; they sum to 4.
struct Allocation {
  std::array<std::uint8_t, 4> balls{};

  std::size_t from_first() const { return std::size_t{balls[0]} + balls[1]; }
  std::size_t from_second() const { return std::size_t{balls[2]} + balls[3]; }
};

/// sum_i |X_i - Y_i| + |X'_i - Y'_i| - |X_i - X'_i| - |Y_i - Y'_i|.
std::int64_t z_statistic(std::span<const std::uint64_t> x, std::span<const std::uint64_t> x_prime,
                         std::span<const std::uint64_t> y, std::span<const std::uint64_t> y_prime);

/// Sequential closeness tester for arbitrary alphabets, built on the Z statistic.
///
/// Each step throws four balls, each uniformly into one of the four groups, so
/// after t steps the group totals are Multinomial(4t, 1/4 each) and never
/// shrink. Only the new balls need fresh samples. The tester rejects when
/// |Z_t| > psi_general(delta, t) and accepts when
/// |Z_t| <= delta_floor(params, t, eps) - psi_general(delta, t). With eps = 0
/// the floor is negative and the tester can only reject.
class ZTester {
 public:
  ZTester(const ThresholdParams& params, Engine allocation);

  /// Advances t and allocates four balls; the caller then supplies exactly
  /// that many samples through add_sample before calling evaluate.
  Allocation grow_counts();
  void add_sample(Group group, std::size_t symbol);
  Decision evaluate();

  /// grow_counts, draws the demanded samples (first-source groups first), evaluate.
  Decision step(SymbolSource& first, SymbolSource& second);

  Decision decision() const { return decision_; }
  std::uint64_t t() const { return t_; }
  std::int64_t z() const { return z_; }
  const ThresholdParams& params() const { return params_; }
  std::span<const std::uint64_t> counts(Group g) const { return counts_[index(g)]; }
  std::uint64_t total(Group g) const { return totals_[index(g)]; }
  TracePoint trace() const { return trace_; }

 private:
  static std::size_t index(Group g) { return static_cast<std::size_t>(g); }
  std::int64_t contribution(std::size_t symbol) const;

  ThresholdParams params_;
  Engine allocation_;
  std::array<std::vector<std::uint64_t>, 4> counts_;
  std::array<std::uint64_t, 4> totals_{};
  std::array<std::uint8_t, 4> pending_{};
  std::uint64_t t_ = 0;
  std::int64_t z_ = 0;
  Decision decision_ = Decision::Continue;
  TracePoint trace_;
};

struct RunOptions {
  std::uint64_t max_steps = 1;
  bool trajectory = false;
  std::uint64_t seed = 0;  ///< echoed into the report only
};

/// Outcome of driving a tester to a stop or to the step cap.
struct StopReport {
  Verdict verdict = Verdict::Undecided;
  std::uint64_t tau = 0;        ///< tester time at stop (the cap when Undecided)
  std::uint64_t steps_run = 0;  ///< steps taken by this call
  std::uint64_t samples = 0;    ///< symbols drawn from all sources by this call
  std::uint64_t seed = 0;
  ThresholdParams config;
  std::vector<TracePoint> trajectory;
};

StopReport run_tester(IdentityTester& tester, SymbolSource& source, const RunOptions& options);
StopReport run_tester(UniformTester& tester, SymbolSource& source, const RunOptions& options);
StopReport run_tester(SmallClosenessTester& tester, SymbolSource& first, SymbolSource& second,
                      const RunOptions& options);
StopReport run_tester(ZTester& tester, SymbolSource& first, SymbolSource& second, const RunOptions& options);

/// Whether step t lands on the downsampled trajectory grid (every ceil(t/1000) steps).
bool on_trace_grid(std::uint64_t t);

struct DoublingReport {
  Verdict verdict = Verdict::AcceptEqual;
  unsigned level = 0;           ///< level that decided (last level on acceptance)
  unsigned levels = 0;          ///< ceil(log2(1/eps_min))
  std::uint64_t per_source = 0; ///< samples drawn from each source
  std::uint64_t samples = 0;    ///< samples drawn from both sources
  double risk_spent = 0.0;      ///< sum of per-level risks actually used
};

/// Doubling search over tolerances: level j = 1..ceil(log2(1/eps_min)) runs the
/// batch closeness tester at tolerance 2^-j and risk delta / j^2 on fresh
/// samples, rejecting at the first level that rejects.
DoublingReport doubling_baseline(SymbolSource& first, SymbolSource& second, double delta, double eps_min);

}  // namespace seqdist
