#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqdist/rng.hpp"

namespace seqdist {

/// Probability vector over the alphabet {0, ..., n-1}, n >= 2.
///
/// Construction validates entries and renormalizes when the sum is within
/// 1e-9 of one; anything further off is rejected.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  /// True when every entry equals 1/n.
  bool is_uniform() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

/// Running symbol counts. `t` always equals the sum of `counts`.
class EmpiricalState {
 public:
  explicit EmpiricalState(std::size_t n);

  std::size_t size() const { return counts_.size(); }
  std::uint64_t t() const { return t_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::uint64_t count(std::size_t symbol) const { return counts_[symbol]; }

  void update(std::size_t symbol);

  /// counts / t; requires t >= 1.
  std::vector<double> empirical() const;

  friend bool operator==(const EmpiricalState&, const EmpiricalState&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t t_ = 0;
};

/// Functional form of EmpiricalState::update.
EmpiricalState empirical_update(EmpiricalState state, std::size_t symbol);

/// Anything that hands out alphabet symbols one at a time.
class SymbolSource {
 public:
  virtual ~SymbolSource() = default;
  virtual std::size_t next() = 0;
  virtual std::uint64_t drawn() const = 0;
  virtual std::size_t alphabet_size() const = 0;
};

/// I.i.d. draws from a distribution, replayable from the engine seed.
class SampleStream final : public SymbolSource {
 public:
  SampleStream(Distribution source, Engine engine);
  SampleStream(Distribution source, std::uint64_t seed) : SampleStream(std::move(source), Engine(seed)) {}

  std::size_t next() override;
  std::uint64_t drawn() const override { return drawn_; }
  std::size_t alphabet_size() const override { return source_.size(); }
  const Distribution& source() const { return source_; }

 private:
  Distribution source_;
  std::vector<double> cdf_;
  Engine engine_;
  std::uint64_t drawn_ = 0;
};

/// Replays a fixed symbol sequence; throws StreamExhausted past the end.
class ReplayStream final : public SymbolSource {
 public:
  ReplayStream(std::vector<std::size_t> symbols, std::size_t n);

  std::size_t next() override;
  std::uint64_t drawn() const override { return pos_; }
  std::size_t alphabet_size() const override { return n_; }

 private:
  std::vector<std::size_t> symbols_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const Distribution& p, const Distribution& q);

/// Bernoulli relative entropy kl(p, q) in nats with 0 log 0 = 0.
/// Returns +infinity when q is 0 or 1 and p differs from q.
double kl_bernoulli(double p, double q);

/// Discrete relative entropy; +infinity unless support(p) is inside support(q).
double kl_discrete(std::span<const double> p, std::span<const double> q);
double kl_discrete(const Distribution& p, const Distribution& q);

/// Largest signed deviations over subsets of one size.
struct SizeDeviation {
  double positive = 0.0;  ///< max over |B| = k of emp(B) - ref(B)
  double negative = 0.0;  ///< max over |B| = k of ref(B) - emp(B)
};

/// Entry k-1 holds the size-k deviations for k = 1..floor(n/2).
///
/// Only |B| matters for every threshold built on top of this, and for a fixed
/// size the extremes are attained by the k largest (resp. smallest) entries of
/// emp - ref, so the subset maximization reduces to one sort. For a uniform
/// reference the arithmetic runs on integer numerators (n * count - k * t) and
/// each entry is a single correctly rounded division.
std::vector<SizeDeviation> best_deviation_by_size(const EmpiricalState& state,
                                                  const Distribution& reference);

/// Largest entry (either sign) of a deviation table; this is TV(emp, ref).
double max_deviation(std::span<const SizeDeviation> table);

}  // namespace seqdist
