#pragma once

#include <cstdint>
#include <string_view>

namespace seqdist {

/// Per-step output of a sequential tester. AcceptEqual is the "equal"
/// hypothesis (rule output 1), RejectFar the "far" one (rule output 2).
/// Once a tester leaves Continue it never changes its answer.
enum class Decision : std::uint8_t { Continue, AcceptEqual, RejectFar };

/// Final outcome of a run; Undecided only when a step cap was hit.
enum class Verdict : std::uint8_t { AcceptEqual, RejectFar, Undecided };

std::string_view to_string(Decision d);
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

/// One downsampled trajectory sample: the running statistic with the two
/// decision boundaries in force at step t.
struct TracePoint {
  std::uint64_t t = 0;
  double statistic = 0.0;
  double reject_above = 0.0;
  double accept_below = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

}  // namespace seqdist
