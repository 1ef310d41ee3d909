#include "seqdist/testers_small.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqdist/errors.hpp"

namespace seqdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool open_unit(double x) { return x > 0.0 && x < 1.0; }
bool closed_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require_length(std::size_t got, std::uint64_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) + " samples, got " +
                         std::to_string(got));
  }
}

EmpiricalState tally(std::size_t n, std::span<const std::size_t> samples) {
  EmpiricalState s(n);
  for (std::size_t x : samples) s.update(x);
  return s;
}

// Threshold that one directional acceptance condition must beat; -inf when
// the direction cannot be realized by a far distribution.
double accept_margin(double eps, double delta, double p, std::uint64_t t, std::size_t n) {
  if (!open_unit(p)) return kInf;
  const PhiValue phi = phi_solve(delta, p, t, n);
  return phi.is_finite() ? eps - phi.value : -kInf;
}

}  // namespace

std::uint64_t batch_identity_size(const ThresholdParams& params) {
  params.validate();
  if (!(params.eps > 0.0)) throw DomainError("batch identity needs eps > 0");
  const double n = static_cast<double>(params.n);
  const double eps = params.eps;
  const double log_pair = std::log(2.0 / params.delta);
  const double log_union = (n + 1.0) * std::log(2.0) - std::log(params.delta);

  double worst = -1.0;
  for (std::size_t b = 1; b <= params.n; ++b) {
    const double q = static_cast<double>(b) / n;
    for (double sign : {1.0, -1.0}) {
      const double mid = q + sign * eps / 2.0;
      const double far = q + sign * eps;
      if (closed_unit(mid) && open_unit(far)) worst = std::max(worst, log_pair / kl_bernoulli(mid, far));
      if (closed_unit(mid) && open_unit(q)) worst = std::max(worst, log_union / kl_bernoulli(mid, q));
    }
  }
  if (worst < 0.0) throw DomainError("batch identity size: every kl branch leaves (0,1)");
  return static_cast<std::uint64_t>(std::ceil(worst));
}

Decision batch_identity(const ThresholdParams& params, std::span<const std::size_t> samples) {
  require_length(samples.size(), batch_identity_size(params), "batch_identity");
  const EmpiricalState emp = tally(params.n, samples);
  const auto table = best_deviation_by_size(emp, Distribution::uniform(params.n));
  return max_deviation(table) <= params.eps / 2.0 ? Decision::AcceptEqual : Decision::RejectFar;
}

std::uint64_t batch_closeness_size(const ThresholdParams& params) {
  params.validate();
  if (!(params.eps > 0.0)) throw DomainError("batch closeness needs eps > 0");
  const double half = static_cast<double>(params.n / 2);
  const double log_term = half * std::log(2.0) - std::log(params.delta);
  return static_cast<std::uint64_t>(std::ceil(4.0 * log_term / (params.eps * params.eps)));
}

Decision batch_closeness(const ThresholdParams& params, std::span<const std::size_t> samples1,
                         std::span<const std::size_t> samples2) {
  const std::uint64_t size = batch_closeness_size(params);
  require_length(samples1.size(), size, "batch_closeness");
  require_length(samples2.size(), size, "batch_closeness");
  const double tv = empirical_tv(tally(params.n, samples1), tally(params.n, samples2));
  return tv <= params.eps / 2.0 ? Decision::AcceptEqual : Decision::RejectFar;
}

IdentityTester::IdentityTester(const ThresholdParams& params)
    : params_(params), emp_(params.n) {
  params_.validate();
}

Decision identity_rule(const ThresholdParams& params, const EmpiricalState& state, TracePoint* trace) {
  const std::uint64_t t = state.t();
  const std::size_t n = params.n;
  const double eps = params.eps;
  const auto table = best_deviation_by_size(state, Distribution::uniform(n));

  // Both sides are decided by comparing against phi through kl monotonicity;
  // the bars themselves are only solved for when a trace is requested.
  auto accept_side = [&](double dev, double q) {
    if (!open_unit(q)) return true;
    return phi_below(eps - std::max(dev, 0.0), params.delta, q, t, n);
  };
  bool reject = false;
  bool accept = true;
  for (std::size_t k = 1; k <= table.size(); ++k) {
    const auto& dev = table[k - 1];
    const double p = static_cast<double>(k) / static_cast<double>(n);
    if (size_deviation_rejects(std::max(dev.positive, dev.negative), params.delta, n, k, t)) reject = true;
    if (!(accept_side(dev.positive, p + eps) && accept_side(dev.negative, p - eps))) accept = false;
  }

  if (trace) {
    double reject_floor = kInf;
    double accept_ceiling = kInf;
    for (std::size_t k = 1; k <= table.size(); ++k) {
      const double p = static_cast<double>(k) / static_cast<double>(n);
      reject_floor = std::min(reject_floor, size_reject_threshold(params.delta, n, k, t));
      accept_ceiling = std::min({accept_ceiling, accept_margin(eps, params.delta, p + eps, t, n),
                                 accept_margin(eps, params.delta, p - eps, t, n)});
    }
    *trace = {t, max_deviation(table), reject_floor, accept_ceiling};
  }
  if (reject) return Decision::RejectFar;
  return accept ? Decision::AcceptEqual : Decision::Continue;
}

Decision IdentityTester::push(std::size_t symbol) {
  if (decision_ != Decision::Continue) throw AbsorbedStateError();
  emp_.update(symbol);
  decision_ = identity_rule(params_, emp_, tracing_ ? &trace_ : nullptr);
  return decision_;
}

double size_reject_threshold(double delta, std::size_t n, std::size_t k, std::uint64_t t) {
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const PhiValue lo = phi_solve(delta, p, t, n);
  if (!lo.is_finite()) return kInf;
  const PhiValue hi = (2 * k == n) ? lo : phi_solve(delta, 1.0 - p, t, n);
  return hi.is_finite() ? std::max(lo.value, hi.value) : kInf;
}

bool size_deviation_rejects(double deviation, double delta, std::size_t n, std::size_t k, std::uint64_t t) {
  const double p = static_cast<double>(k) / static_cast<double>(n);
  return phi_below(deviation, delta, p, t, n) && phi_below(deviation, delta, 1.0 - p, t, n);
}

double empirical_tv(const EmpiricalState& a, const EmpiricalState& b) {
  if (a.size() != b.size()) throw DimensionError("empirical_tv: alphabet sizes differ");
  if (a.t() != b.t() || a.t() == 0) throw DomainError("empirical_tv: needs equal, non-zero sample counts");
  std::uint64_t l1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t x = a.count(i);
    const std::uint64_t y = b.count(i);
    l1 += x > y ? x - y : y - x;
  }
  return static_cast<double>(l1) / (2.0 * static_cast<double>(a.t()));
}

Decision small_closeness_rule(double empirical_tv, double eps, double radius) {
  if (empirical_tv > radius) return Decision::RejectFar;
  if (empirical_tv <= eps - radius) return Decision::AcceptEqual;
  return Decision::Continue;
}

SmallClosenessTester::SmallClosenessTester(const ThresholdParams& params)
    : params_(params), emp1_(params.n), emp2_(params.n) {
  params_.validate();
}

double SmallClosenessTester::empirical_tv() const { return seqdist::empirical_tv(emp1_, emp2_); }

Decision SmallClosenessTester::push(std::size_t a, std::size_t b) {
  if (decision_ != Decision::Continue) throw AbsorbedStateError();
  if (a >= params_.n || b >= params_.n) throw DomainError("symbol outside the alphabet");
  emp1_.update(a);
  emp2_.update(b);
  const double radius = closeness_radius(params_.delta, params_.n, emp1_.t());
  const double tv = empirical_tv();
  trace_ = {emp1_.t(), tv, radius, params_.eps - radius};
  decision_ = small_closeness_rule(tv, params_.eps, radius);
  return decision_;
}

}  // namespace seqdist
