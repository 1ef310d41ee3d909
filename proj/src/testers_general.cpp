#include "seqdist/testers_general.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "seqdist/errors.hpp"

namespace seqdist {

namespace {

std::int64_t abs_diff(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::int64_t>(a > b ? a - b : b - a);
}

}  // namespace

UniformTester::UniformTester(const ThresholdParams& params)
    : params_(params),
      emp_(params.n),
      start_(uniform_start_time(params.n, params.delta)) {
  params_.validate();
}

UniformEvaluation evaluate_uniform(const ThresholdParams& params, const EmpiricalState& state) {
  const std::uint64_t t = state.t();
  if (t < uniform_start_time(params.n, params.delta)) {
    throw DomainError("uniformity rule evaluated before its start time");
  }
  const auto table = best_deviation_by_size(state, Distribution::uniform(params.n));

  UniformEvaluation ev;
  for (std::size_t k = 1; k <= table.size() && !ev.phi_reject; ++k) {
    const double dev = std::max(table[k - 1].positive, table[k - 1].negative);
    ev.phi_reject = size_deviation_rejects(dev, params.delta, params.n, k, t);
  }
  ev.tv = max_deviation(table);
  ev.mu = mu_uniform(params.n, t);
  ev.envelope = uniform_envelope(params.delta, params.n, t);
  ev.separation = uniform_separation(params.C_unif, params.eps, params.n, t);
  ev.tv_reject = ev.tv > ev.mu + ev.envelope;
  ev.accept = ev.tv < ev.mu + ev.separation - ev.envelope;
  return ev;
}

UniformEvaluation UniformTester::evaluate() const { return evaluate_uniform(params_, emp_); }

Decision UniformTester::push(std::size_t symbol) {
  if (decision_ != Decision::Continue) throw AbsorbedStateError();
  emp_.update(symbol);
  if (!started()) return decision_;

  last_ = evaluate();
  trace_ = {emp_.t(), last_.tv, last_.mu + last_.envelope, last_.mu + last_.separation - last_.envelope};
  if (last_.phi_reject || last_.tv_reject) {
    decision_ = Decision::RejectFar;
  } else if (last_.accept) {
    decision_ = Decision::AcceptEqual;
  }
  return decision_;
}

std::int64_t z_statistic(std::span<const std::uint64_t> x, std::span<const std::uint64_t> x_prime,
                         std::span<const std::uint64_t> y, std::span<const std::uint64_t> y_prime) {
  const std::size_t n = x.size();
  if (x_prime.size() != n || y.size() != n || y_prime.size() != n) {
    throw DimensionError("z_statistic: count vectors differ in length");
  }
  std::int64_t z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    z += abs_diff(x[i], y[i]) + abs_diff(x_prime[i], y_prime[i]) - abs_diff(x[i], x_prime[i]) -
         abs_diff(y[i], y_prime[i]);
  }
  return z;
}

ZTester::ZTester(const ThresholdParams& params, Engine allocation)
    : params_(params), allocation_(std::move(allocation)) {
  params_.validate();
  for (auto& c : counts_) c.assign(params_.n, 0);
}

Allocation ZTester::grow_counts() {
  if (decision_ != Decision::Continue) throw AbsorbedStateError();
  if (pending_ != std::array<std::uint8_t, 4>{}) {
    throw DomainError("grow_counts called before the previous allocation was filled");
  }
  Allocation a;
  for (int ball = 0; ball < 4; ++ball) ++a.balls[uniform_below(allocation_, 4)];
  pending_ = a.balls;
  ++t_;
  return a;
}

std::int64_t ZTester::contribution(std::size_t i) const {
  const auto x = counts_[0][i], xp = counts_[1][i], y = counts_[2][i], yp = counts_[3][i];
  return abs_diff(x, y) + abs_diff(xp, yp) - abs_diff(x, xp) - abs_diff(y, yp);
}

void ZTester::add_sample(Group group, std::size_t symbol) {
  const std::size_t g = index(group);
  if (pending_[g] == 0) throw DomainError("no pending allocation for this group");
  if (symbol >= params_.n) throw DomainError("symbol outside the alphabet");
  const std::int64_t before = contribution(symbol);
  ++counts_[g][symbol];
  ++totals_[g];
  --pending_[g];
  z_ += contribution(symbol) - before;
}

Decision ZTester::evaluate() {
  if (decision_ != Decision::Continue) throw AbsorbedStateError();
  if (t_ == 0) throw DomainError("evaluate called before the first allocation");
  if (pending_ != std::array<std::uint8_t, 4>{}) throw DomainError("allocation not yet filled");
  const double psi = psi_general(params_.delta, t_);
  const double floor = delta_floor(params_, t_, params_.eps);
  const double mag = static_cast<double>(std::llabs(z_));
  trace_ = {t_, mag, psi, floor - psi};
  if (mag > psi) {
    decision_ = Decision::RejectFar;
  } else if (mag <= floor - psi) {
    decision_ = Decision::AcceptEqual;
  }
  return decision_;
}

Decision ZTester::step(SymbolSource& first, SymbolSource& second) {
  const Allocation a = grow_counts();
  for (std::size_t g = 0; g < 4; ++g) {
    SymbolSource& src = g < 2 ? first : second;
    for (std::uint8_t b = 0; b < a.balls[g]; ++b) add_sample(static_cast<Group>(g), src.next());
  }
  return evaluate();
}

bool on_trace_grid(std::uint64_t t) {
  const std::uint64_t stride = std::max<std::uint64_t>(1, (t + 999) / 1000);
  return t % stride == 0;
}

namespace {

Verdict to_verdict(Decision d) {
  switch (d) {
    case Decision::AcceptEqual: return Verdict::AcceptEqual;
    case Decision::RejectFar: return Verdict::RejectFar;
    case Decision::Continue: break;
  }
  return Verdict::Undecided;
}

template <class Tester, class Step>
StopReport drive(Tester& tester, const RunOptions& options, Step&& step,
                 std::initializer_list<const SymbolSource*> sources) {
  if (options.max_steps < 1) throw DomainError("max_steps must be >= 1");
  auto drawn = [&] {
    std::uint64_t s = 0;
    for (const SymbolSource* src : sources) s += src->drawn();
    return s;
  };
  StopReport report;
  report.seed = options.seed;
  report.config = tester.params();
  const std::uint64_t drawn0 = drawn();
  if constexpr (requires { tester.enable_trace(true); }) tester.enable_trace(options.trajectory);

  while (tester.decision() == Decision::Continue && report.steps_run < options.max_steps) {
    step();
    ++report.steps_run;
    if (options.trajectory && tester.trace().t == tester.t() &&
        (on_trace_grid(tester.t()) || tester.decision() != Decision::Continue)) {
      report.trajectory.push_back(tester.trace());
    }
  }
  report.verdict = to_verdict(tester.decision());
  report.tau = tester.t();
  report.samples = drawn() - drawn0;
  return report;
}

}  // namespace

StopReport run_tester(IdentityTester& tester, SymbolSource& source, const RunOptions& options) {
  return drive(tester, options, [&] { tester.step(source); }, {&source});
}

StopReport run_tester(UniformTester& tester, SymbolSource& source, const RunOptions& options) {
  return drive(tester, options, [&] { tester.step(source); }, {&source});
}

StopReport run_tester(SmallClosenessTester& tester, SymbolSource& first, SymbolSource& second,
                      const RunOptions& options) {
  return drive(tester, options, [&] { tester.step(first, second); }, {&first, &second});
}

StopReport run_tester(ZTester& tester, SymbolSource& first, SymbolSource& second, const RunOptions& options) {
  return drive(tester, options, [&] { tester.step(first, second); }, {&first, &second});
}

DoublingReport doubling_baseline(SymbolSource& first, SymbolSource& second, double delta, double eps_min) {
  if (!(eps_min > 0.0 && eps_min < 1.0)) throw DomainError("doubling_baseline: eps_min must lie in (0,1)");
  if (first.alphabet_size() != second.alphabet_size()) throw DimensionError("doubling_baseline: alphabets differ");

  DoublingReport report;
  report.levels = static_cast<unsigned>(std::ceil(std::log2(1.0 / eps_min)));
  report.levels = std::max(report.levels, 1u);
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  for (unsigned j = 1; j <= report.levels; ++j) {
    ThresholdParams level;
    level.n = first.alphabet_size();
    level.eps = std::ldexp(1.0, -static_cast<int>(j));
    level.delta = delta / (static_cast<double>(j) * j);
    report.risk_spent += level.delta;
    const std::uint64_t size = batch_closeness_size(level);
    a.resize(size);
    b.resize(size);
    for (auto& s : a) s = first.next();
    for (auto& s : b) s = second.next();
    report.per_source += size;
    report.level = j;
    if (batch_closeness(level, a, b) == Decision::RejectFar) {
      report.verdict = Verdict::RejectFar;
      break;
    }
  }
  report.samples = 2 * report.per_source;
  if (!(report.risk_spent <= delta * std::numbers::pi * std::numbers::pi / 6.0)) {
    throw std::logic_error("doubling_baseline: per-level risks exceed the series budget");
  }
  return report;
}

}  // namespace seqdist
