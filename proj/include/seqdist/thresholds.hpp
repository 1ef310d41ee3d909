#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace seqdist {

/// Risk, alphabet, tolerance and the universal constants the general testers
/// need. The constants have no numeric value in the underlying analysis; they
/// are always set explicitly (see calibrate_constants) and travel with every
/// result.
struct ThresholdParams {
  double delta = 0.05;
  std::size_t n = 2;
  double eps = 0.1;
  double c_small = 1.0;  ///< additive sqrt(t) slack in the Z-statistic mean floor
  double C_big = 1.0;    ///< multiplicative constant of the Z-statistic mean floor
  double C_unif = 1.0;   ///< multiplicative constant of the uniformity TV floor

  /// Throws DomainError on the first field that breaks its invariant.
  void validate() const;
};

/// KL-inversion threshold. Infinite when the defining equation has no root.
struct PhiValue {
  double value = std::numeric_limits<double>::infinity();

  static PhiValue infinite() { return {}; }
  bool is_finite() const { return value < std::numeric_limits<double>::infinity(); }
};

/// ln(2^(n-1) t (t+1) / delta) / t, the per-step budget shared by phi and Phi.
double log_budget_rate(double delta, std::size_t n, std::uint64_t t);

/// Root phi in (0, 1-p) of kl(p + phi, p) = log_budget_rate(delta, n, t).
///
/// The map phi -> kl(p + phi, p) is strictly increasing on the bracket, so the
/// root is found by bisection on [0, 1 - p - 1e-15] (200 halvings at most,
/// stopping once the residual drops below 1e-14). When the rate reaches
/// kl(1, p) = ln(1/p) no root exists and the infinite sentinel is returned.
PhiValue phi_solve(double delta, double p, std::uint64_t t, std::size_t n);

/// True iff phi_solve(delta, p, t, n) is finite and strictly below x. Decided
/// through the monotone map phi -> kl(p + phi, p), so no root is computed.
bool phi_below(double x, double delta, double p, std::uint64_t t, std::size_t n);

/// sqrt(log_budget_rate(delta, n, t)); the small-alphabet closeness radius.
double closeness_radius(double delta, std::size_t n, std::uint64_t t);

/// 2 sqrt(2t ln(pi^2 / (3 delta)) + 4 e t ln(ln(4t) + 1)).
double psi_general(double delta, std::uint64_t t);

/// Riemann zeta for s > 1.
double zeta(double s);

/// sqrt(2 eta t s ln(ln t / ln eta + 1) + 2 t ln(2 zeta(s) / delta)).
double j_bound(double eta, double s, double t, double delta);

/// C_big * min(t r, t^2 r^2 / n, t^(3/2) r^2 / sqrt(n)) - c_small * sqrt(t).
double delta_floor(const ThresholdParams& params, std::uint64_t t, double rate);

/// Index (0, 1, 2) of the active branch of the min in delta_floor, in the order
/// t^2 r^2 / n, t^(3/2) r^2 / sqrt(n), t r.
int delta_floor_branch(std::size_t n, std::uint64_t t, double rate);

/// Expected TV between the empirical distribution of t uniform draws on [n]
/// and the uniform distribution.
///
/// By exchangeability this is (n/2) E|B/t - 1/n| with B ~ Binomial(t, 1/n).
/// The binomial weights are built in log space by ratio recurrences outward
/// from the mode and normalized by their own sum; terms below e^-60 of the
/// mode weight are dropped.
double mu_uniform(std::size_t n, std::uint64_t t);

/// First step at which the uniformity tester may decide:
/// min{n, ceil(sqrt(n ln(2/delta)))}.
std::uint64_t uniform_start_time(std::size_t n, double delta);

/// 4 min(1, (t/n)^(3/2)) sqrt(ln(2t(t+1)/delta) / (2t)); requires
/// t >= uniform_start_time(n, delta).
double uniform_envelope(double delta, std::size_t n, std::uint64_t t);

/// C_unif * min(t^2 eps^2 / n^2, eps^2 sqrt(t/n), eps).
double uniform_separation(double C_unif, double eps, std::size_t n, std::uint64_t t);

}  // namespace seqdist
