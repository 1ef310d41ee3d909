#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqdist/core_stats.hpp"
#include "seqdist/decision.hpp"
#include "seqdist/thresholds.hpp"

namespace seqdist {

// Batch identity to the uniform distribution.

/// Fixed sample size of the batch identity tester: the ceiling of the largest
/// of ln(2/delta) / kl(b/n +- eps/2, b/n +- eps) and
/// ln(2^(n+1)/delta) / kl(b/n +- eps/2, b/n) over b in 1..n, skipping every
/// sign choice whose arguments leave the kl domain.
std::uint64_t batch_identity_size(const ThresholdParams& params);

/// AcceptEqual iff TV(empirical, U_n) <= eps/2. `samples` must have exactly
/// batch_identity_size(params) entries.
Decision batch_identity(const ThresholdParams& params, std::span<const std::size_t> samples);

// Batch closeness.

/// ceil(4 ln(2^floor(n/2) / delta) / eps^2).
std::uint64_t batch_closeness_size(const ThresholdParams& params);

/// AcceptEqual iff TV(empirical1, empirical2) <= eps/2; both sequences must
/// have batch_closeness_size(params) entries.
Decision batch_closeness(const ThresholdParams& params, std::span<const std::size_t> samples1,
                         std::span<const std::size_t> samples2);

/// Sequential identity-to-uniform tester for small alphabets.
///
/// After each symbol the size-k deviation table is compared to KL-inversion
/// thresholds: reject as soon as some size-k deviation exceeds
/// max{phi(k/n), phi(1-k/n)}, accept once every positive (negative) size-k
/// deviation sits below eps - phi(k/n + eps) (eps - phi(k/n - eps)).
/// Reject is checked first.
class IdentityTester {
 public:
  explicit IdentityTester(const ThresholdParams& params);

  Decision push(std::size_t symbol);
  Decision step(SymbolSource& source) { return push(source.next()); }

  Decision decision() const { return decision_; }
  std::uint64_t t() const { return emp_.t(); }
  const EmpiricalState& state() const { return emp_; }
  const ThresholdParams& params() const { return params_; }
  /// Bars are solved for the trace only while tracing is on.
  void enable_trace(bool on) { tracing_ = on; }
  TracePoint trace() const { return trace_; }

 private:
  ThresholdParams params_;
  EmpiricalState emp_;
  bool tracing_ = false;
  Decision decision_ = Decision::Continue;
  TracePoint trace_;
};

/// Sequential closeness tester for small alphabets, one paired draw per step.
/// With Phi_t = closeness_radius(delta, n, t): reject if TV > Phi_t, accept
/// if TV <= eps - Phi_t.
class SmallClosenessTester {
 public:
  explicit SmallClosenessTester(const ThresholdParams& params);

  Decision push(std::size_t a, std::size_t b);
  Decision step(SymbolSource& first, SymbolSource& second) {
    const std::size_t a = first.next();
    return push(a, second.next());
  }

  Decision decision() const { return decision_; }
  std::uint64_t t() const { return emp1_.t(); }
  const EmpiricalState& first() const { return emp1_; }
  const EmpiricalState& second() const { return emp2_; }
  const ThresholdParams& params() const { return params_; }
  TracePoint trace() const { return trace_; }

  /// TV between the two running empirical distributions.
  double empirical_tv() const;

 private:
  ThresholdParams params_;
  EmpiricalState emp1_;
  EmpiricalState emp2_;
  Decision decision_ = Decision::Continue;
  TracePoint trace_;
};

/// Stop rule of IdentityTester applied to a state, without absorption.
/// Fills `trace` with the statistic and the tightest bars when given.
Decision identity_rule(const ThresholdParams& params, const EmpiricalState& state, TracePoint* trace = nullptr);

/// Verdict logic of the small closeness tester at a given t, exposed so the
/// two stop regions can be probed without sampling.
Decision small_closeness_rule(double empirical_tv, double eps, double radius);

/// Rejection bar for size-k deviations at step t: max{phi(k/n), phi(1-k/n)},
/// or +infinity when either root is missing.
double size_reject_threshold(double delta, std::size_t n, std::size_t k, std::uint64_t t);

/// deviation > size_reject_threshold(delta, n, k, t), decided without
/// solving for the bar.
bool size_deviation_rejects(double deviation, double delta, std::size_t n, std::size_t k, std::uint64_t t);

/// TV between two equal-length count vectors, computed on integers.
double empirical_tv(const EmpiricalState& a, const EmpiricalState& b);

}  // namespace seqdist
