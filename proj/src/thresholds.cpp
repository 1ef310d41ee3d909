#include "seqdist/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seqdist/core_stats.hpp"
#include "seqdist/errors.hpp"

namespace seqdist {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
}

void require_t(std::uint64_t t) {
  if (t < 1) throw DomainError("t must be >= 1");
}

}  // namespace

void ThresholdParams::validate() const {
  require_delta(delta);
  if (n < 2) throw DomainError("n must be >= 2");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0,1)");
  if (!(c_small >= 0.0)) throw DomainError("c_small must be non-negative");
  if (!(C_big > 0.0)) throw DomainError("C_big must be positive");
  if (!(C_unif > 0.0)) throw DomainError("C_unif must be positive");
}

double log_budget_rate(double delta, std::size_t n, std::uint64_t t) {
  require_delta(delta);
  require_t(t);
  const double tt = static_cast<double>(t);
  const double log_num = static_cast<double>(n - 1) * std::numbers::ln2 + std::log(tt) + std::log(tt + 1.0);
  return (log_num - std::log(delta)) / tt;
}

PhiValue phi_solve(double delta, double p, std::uint64_t t, std::size_t n) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("phi_solve: p must lie in (0,1)");
  const double rate = log_budget_rate(delta, n, t);
  if (rate >= -std::log(p)) return PhiValue::infinite();

  auto residual = [p, rate](double phi) { return kl_bernoulli(std::min(1.0, p + phi), p) - rate; };
  double lo = 0.0;
  double hi = 1.0 - p - 1e-15;
  if (hi <= lo || residual(hi) < 0.0) hi = 1.0 - p;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) < 1e-14) break;
    (r < 0.0 ? lo : hi) = mid;
  }
  return {mid};
}

bool phi_below(double x, double delta, double p, std::uint64_t t, std::size_t n) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("phi_below: p must lie in (0,1)");
  const double rate = log_budget_rate(delta, n, t);
  if (rate >= -std::log(p)) return false;
  if (!(x > 0.0)) return false;
  if (p + x >= 1.0) return true;
  return kl_bernoulli(p + x, p) > rate;
}

double closeness_radius(double delta, std::size_t n, std::uint64_t t) {
  return std::sqrt(log_budget_rate(delta, n, t));
}

double psi_general(double delta, std::uint64_t t) {
  require_t(t);
  if (!(delta > 0.0 && delta < std::numbers::pi * std::numbers::pi / 3.0)) {
    throw DomainError("psi_general: delta must lie in (0, pi^2/3)");
  }
  const double tt = static_cast<double>(t);
  const double a = 2.0 * tt * std::log(std::numbers::pi * std::numbers::pi / (3.0 * delta));
  const double b = 4.0 * std::numbers::e * tt * std::log(std::log(4.0 * tt) + 1.0);
  return 2.0 * std::sqrt(a + b);
}

double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: s must exceed 1");
  return std::riemann_zeta(s);
}

double j_bound(double eta, double s, double t, double delta) {
  if (!(eta > 1.0)) throw DomainError("j_bound: eta must exceed 1");
  if (!(s > 1.0)) throw DomainError("j_bound: s must exceed 1");
  if (!(t >= 1.0)) throw DomainError("j_bound: t must be >= 1");
  require_delta(delta);
  const double a = 2.0 * eta * t * s * std::log(std::log(t) / std::log(eta) + 1.0);
  const double b = 2.0 * t * std::log(2.0 * zeta(s) / delta);
  return std::sqrt(a + b);
}

namespace {

struct FloorBranches {
  double quadratic;   // t^2 r^2 / n
  double three_half;  // t^(3/2) r^2 / sqrt(n)
  double linear;      // t r
};

FloorBranches floor_branches(std::size_t n, std::uint64_t t, double rate) {
  const double tt = static_cast<double>(t);
  const double nn = static_cast<double>(n);
  const double r2 = rate * rate;
  return {tt * tt * r2 / nn, tt * std::sqrt(tt) * r2 / std::sqrt(nn), tt * rate};
}

}  // namespace

double delta_floor(const ThresholdParams& params, std::uint64_t t, double rate) {
  require_t(t);
  if (!(rate >= 0.0)) throw DomainError("delta_floor: rate must be >= 0");
  const auto b = floor_branches(params.n, t, rate);
  const double m = std::min({b.quadratic, b.three_half, b.linear});
  return params.C_big * m - params.c_small * std::sqrt(static_cast<double>(t));
}

int delta_floor_branch(std::size_t n, std::uint64_t t, double rate) {
  const auto b = floor_branches(n, t, rate);
  if (b.quadratic <= b.three_half && b.quadratic <= b.linear) return 0;
  if (b.three_half <= b.linear) return 1;
  return 2;
}

double mu_uniform(std::size_t n, std::uint64_t t) {
  if (n < 2) throw DomainError("mu_uniform: n must be >= 2");
  require_t(t);
  const double p = 1.0 / static_cast<double>(n);
  const double tt = static_cast<double>(t);
  const double log_odds = std::log(p) - std::log1p(-p);
  constexpr double kCutoff = -60.0;

  const auto mode = std::min<std::uint64_t>(t, static_cast<std::uint64_t>(std::floor((tt + 1.0) * p)));
  auto term = [&](std::uint64_t b) { return std::abs(static_cast<double>(b) / tt - p); };

  double weight_sum = 1.0;
  double dev_sum = term(mode);
  double lw = 0.0;
  for (std::uint64_t b = mode + 1; b <= t; ++b) {
    lw += std::log((tt - static_cast<double>(b) + 1.0) / static_cast<double>(b)) + log_odds;
    if (lw < kCutoff) break;
    const double w = std::exp(lw);
    weight_sum += w;
    dev_sum += w * term(b);
  }
  lw = 0.0;
  for (std::uint64_t b = mode; b-- > 0;) {
    lw += std::log((static_cast<double>(b) + 1.0) / (tt - static_cast<double>(b))) - log_odds;
    if (lw < kCutoff) break;
    const double w = std::exp(lw);
    weight_sum += w;
    dev_sum += w * term(b);
  }
  return 0.5 * static_cast<double>(n) * dev_sum / weight_sum;
}

std::uint64_t uniform_start_time(std::size_t n, double delta) {
  require_delta(delta);
  const double root = std::ceil(std::sqrt(static_cast<double>(n) * std::log(2.0 / delta)));
  return std::min<std::uint64_t>(n, static_cast<std::uint64_t>(root));
}

double uniform_envelope(double delta, std::size_t n, std::uint64_t t) {
  if (t < uniform_start_time(n, delta)) {
    throw DomainError("uniform_envelope: t = " + std::to_string(t) + " precedes the start time");
  }
  const double tt = static_cast<double>(t);
  const double ratio = tt / static_cast<double>(n);
  const double factor = ratio >= 1.0 ? 1.0 : ratio * std::sqrt(ratio);
  return 4.0 * factor * std::sqrt(std::log(2.0 * tt * (tt + 1.0) / delta) / (2.0 * tt));
}

double uniform_separation(double C_unif, double eps, std::size_t n, std::uint64_t t) {
  const double tt = static_cast<double>(t);
  const double nn = static_cast<double>(n);
  const double e2 = eps * eps;
  return C_unif * std::min({tt * tt * e2 / (nn * nn), e2 * std::sqrt(tt / nn), eps});
}

}  // namespace seqdist
