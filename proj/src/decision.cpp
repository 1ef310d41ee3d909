#include "seqdist/decision.hpp"

#include <string>

#include "seqdist/errors.hpp"

namespace seqdist {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Continue: return "Continue";
    case Decision::AcceptEqual: return "AcceptEqual";
    case Decision::RejectFar: return "RejectFar";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::AcceptEqual: return "AcceptEqual";
    case Verdict::RejectFar: return "RejectFar";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "AcceptEqual") return Verdict::AcceptEqual;
  if (s == "RejectFar") return Verdict::RejectFar;
  if (s == "Undecided") return Verdict::Undecided;
  throw DomainError("unknown decision '" + std::string(s) + "'");
}

}  // namespace seqdist
