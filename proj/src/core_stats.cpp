#include "seqdist/core_stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "seqdist/errors.hpp"

namespace seqdist {

namespace {

constexpr double kRenormTolerance = 1e-9;

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError("alphabet sizes differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw DomainError("a distribution needs an alphabet of size >= 2");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability entry outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRenormTolerance) {
    throw DomainError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  // Rounding residue of an exact vector (1/3 three times, say) is left alone.
  if (std::abs(sum - 1.0) > 1e-13) {
    for (double& p : probs_) p /= sum;
  }
}

Distribution Distribution::uniform(std::size_t n) {
  if (n < 2) throw DomainError("a distribution needs an alphabet of size >= 2");
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool Distribution::is_uniform() const {
  const double u = 1.0 / static_cast<double>(probs_.size());
  return std::all_of(probs_.begin(), probs_.end(), [u](double p) { return p == u; });
}

EmpiricalState::EmpiricalState(std::size_t n) : counts_(n, 0) {
  if (n < 2) throw DomainError("alphabet size must be >= 2");
}

void EmpiricalState::update(std::size_t symbol) {
  if (symbol >= counts_.size()) {
    throw DomainError("symbol " + std::to_string(symbol) + " outside alphabet of size " +
                      std::to_string(counts_.size()));
  }
  ++counts_[symbol];
  ++t_;
}

std::vector<double> EmpiricalState::empirical() const {
  if (t_ == 0) throw DomainError("empirical distribution undefined at t = 0");
  std::vector<double> out(counts_.size());
  const double t = static_cast<double>(t_);
  std::transform(counts_.begin(), counts_.end(), out.begin(),
                 [t](std::uint64_t c) { return static_cast<double>(c) / t; });
  return out;
}

EmpiricalState empirical_update(EmpiricalState state, std::size_t symbol) {
  state.update(symbol);
  return state;
}

SampleStream::SampleStream(Distribution source, Engine engine)
    : source_(std::move(source)), cdf_(source_.size()), engine_(engine) {
  std::partial_sum(source_.probs().begin(), source_.probs().end(), cdf_.begin());
  cdf_.back() = 1.0;
}

std::size_t SampleStream::next() {
  const double u = uniform01(engine_);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  ++drawn_;
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

ReplayStream::ReplayStream(std::vector<std::size_t> symbols, std::size_t n)
    : symbols_(std::move(symbols)), n_(n) {
  for (std::size_t s : symbols_) {
    if (s >= n_) throw DomainError("replayed symbol outside alphabet");
  }
}

std::size_t ReplayStream::next() {
  if (pos_ >= symbols_.size()) {
    throw StreamExhausted("replay stream exhausted after " + std::to_string(pos_) + " symbols");
  }
  return symbols_[pos_++];
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  require_same_size(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double tv_distance(const Distribution& p, const Distribution& q) {
  return tv_distance(p.probs(), q.probs());
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("kl_bernoulli: p outside [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("kl_bernoulli: q outside [0,1]");
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return std::numeric_limits<double>::infinity();
  const double a = p == 0.0 ? 0.0 : p * std::log(p / q);
  const double b = p == 1.0 ? 0.0 : (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(0.0, a + b);
}

double kl_discrete(std::span<const double> p, std::span<const double> q) {
  require_same_size(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(0.0, s);
}

double kl_discrete(const Distribution& p, const Distribution& q) {
  return kl_discrete(p.probs(), q.probs());
}

std::vector<SizeDeviation> best_deviation_by_size(const EmpiricalState& state,
                                                  const Distribution& reference) {
  require_same_size(state.size(), reference.size());
  if (state.t() == 0) throw DomainError("best_deviation_by_size needs t >= 1");
  const std::size_t n = state.size();
  const std::size_t half = n / 2;
  std::vector<SizeDeviation> table(half);

  if (reference.is_uniform()) {
    std::vector<std::uint64_t> c(state.counts().begin(), state.counts().end());
    std::sort(c.begin(), c.end(), std::greater<>());
    const auto nn = static_cast<std::int64_t>(n);
    const auto t = static_cast<std::int64_t>(state.t());
    const double denom = static_cast<double>(nn * t);
    std::int64_t top = 0;
    std::int64_t bottom = 0;
    for (std::size_t k = 1; k <= half; ++k) {
      top += static_cast<std::int64_t>(c[k - 1]);
      bottom += static_cast<std::int64_t>(c[n - k]);
      const auto kk = static_cast<std::int64_t>(k);
      table[k - 1].positive = static_cast<double>(nn * top - kk * t) / denom;
      table[k - 1].negative = static_cast<double>(kk * t - nn * bottom) / denom;
    }
    return table;
  }

  const double t = static_cast<double>(state.t());
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = static_cast<double>(state.count(i)) / t - reference[i];
  std::sort(diff.begin(), diff.end(), std::greater<>());
  double top = 0.0;
  double bottom = 0.0;
  for (std::size_t k = 1; k <= half; ++k) {
    top += diff[k - 1];
    bottom += diff[n - k];
    table[k - 1] = {top, -bottom};
  }
  return table;
}

double max_deviation(std::span<const SizeDeviation> table) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : table) m = std::max({m, row.positive, row.negative});
  return m;
}

}  // namespace seqdist
