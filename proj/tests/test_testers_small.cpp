#include <cmath>
#include <vector>

#include "doctest.h"
#include "seqdist/errors.hpp"
#include "seqdist/testers_general.hpp"
#include "seqdist/testers_small.hpp"
#include "stats_util.hpp"

using namespace seqdist;

namespace {

ThresholdParams params(std::size_t n, double eps, double delta) {
  ThresholdParams p;
  p.n = n;
  p.eps = eps;
  p.delta = delta;
  return p;
}

EmpiricalState from_counts(const std::vector<std::uint64_t>& counts) {
  EmpiricalState s(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::uint64_t c = 0; c < counts[i]; ++c) s.update(i);
  return s;
}

std::vector<std::size_t> sequence_with_counts(const std::vector<std::uint64_t>& counts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out.insert(out.end(), counts[i], i);
  return out;
}

}  // namespace

TEST_CASE("batch identity size") {
  // ln(2^3/0.05) / kl(0.55, 0.5) = 1013.339..., the binding branch at n = 2.
  CHECK(batch_identity_size(params(2, 0.1, 0.05)) == 1014);

  // Independent loop over every (b, sign) with the kl arguments written out.
  for (std::size_t n : {3, 4, 7}) {
    const double eps = 0.05, delta = 0.01;
    double worst = 0.0;
    for (std::size_t b = 1; b <= n; ++b) {
      const double q = double(b) / double(n);
      for (int s = -1; s <= 1; s += 2) {
        const double mid = q + s * eps / 2, far = q + s * eps;
        if (mid >= 0 && mid <= 1 && far > 0 && far < 1)
          worst = std::max(worst, std::log(2 / delta) / kl_bernoulli(mid, far));
        if (mid >= 0 && mid <= 1 && q > 0 && q < 1)
          worst = std::max(worst, std::log(std::pow(2.0, double(n + 1)) / delta) / kl_bernoulli(mid, q));
      }
    }
    CHECK(batch_identity_size(params(n, eps, delta)) == static_cast<std::uint64_t>(std::ceil(worst)));
  }
}

TEST_CASE("batch identity decisions") {
  const auto p = params(2, 0.1, 0.05);
  const std::uint64_t size = batch_identity_size(p);
  CHECK(batch_identity(p, sequence_with_counts({size / 2, size - size / 2})) == Decision::AcceptEqual);
  // TV = 609/1014 - 1/2 = 0.1006.
  CHECK(batch_identity(p, sequence_with_counts({609, 405})) == Decision::RejectFar);
  CHECK(batch_identity(p, sequence_with_counts({557, 457})) == Decision::AcceptEqual);
  CHECK_THROWS_AS(batch_identity(p, sequence_with_counts({10, 10})), DimensionError);
}

TEST_CASE("batch closeness") {
  const auto p = params(2, 0.1, 0.05);
  CHECK(batch_closeness_size(p) == 1476);
  const std::vector<std::size_t> a(1476, 0);
  const std::vector<std::size_t> b(1476, 1);
  CHECK(batch_closeness(p, a, a) == Decision::AcceptEqual);
  CHECK(batch_closeness(p, a, b) == Decision::RejectFar);
  CHECK_THROWS_AS(batch_closeness(p, a, std::vector<std::size_t>(10, 0)), DimensionError);
}

TEST_CASE("identity rule worked cases") {
  const auto p = params(2, 0.1, 0.05);
  // At t = 1 every phi is infinite: neither side can fire.
  CHECK(identity_rule(p, from_counts({1, 0})) == Decision::Continue);
  CHECK(identity_rule(p, from_counts({0, 1})) == Decision::Continue);
  // Deviation 0.3 against phi(0.05, 0.5, 500) = 0.12628.
  TracePoint tr;
  CHECK(identity_rule(p, from_counts({400, 100}), &tr) == Decision::RejectFar);
  CHECK(tr.statistic == doctest::Approx(0.3));
  CHECK(tr.reject_above == doctest::Approx(0.12627785246525172).epsilon(1e-9));
}

TEST_CASE("identity tester absorbs") {
  IdentityTester tester(params(2, 0.1, 0.05));
  ReplayStream s(std::vector<std::size_t>(5000, 0), 2);
  const auto r = run_tester(tester, s, {5000, false, 0});
  CHECK(r.verdict == Verdict::RejectFar);
  CHECK_THROWS_AS(tester.push(0), AbsorbedStateError);
  const auto again = run_tester(tester, s, {10, false, 0});
  CHECK(again.steps_run == 0);
  CHECK(again.verdict == Verdict::RejectFar);
}

TEST_CASE("identity tester under the uniform distribution") {
  const auto p = params(2, 0.1, 0.05);
  int accepted = 0, rejected = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    IdentityTester tester(p);
    SampleStream s(Distribution::uniform(2), make_engine(41, i, 0));
    const auto r = run_tester(tester, s, {100000, false, 0});
    accepted += r.verdict == Verdict::AcceptEqual;
    rejected += r.verdict == Verdict::RejectFar;
  }
  CHECK(accepted >= 950);
  CHECK(double(rejected) / trials <= oracle::binomial_band(0.05, trials));
}

TEST_CASE("small closeness rule worked cases") {
  const double radius = closeness_radius(0.05, 2, 2000);
  CHECK(radius == doctest::Approx(0.0971884).epsilon(1e-6));
  CHECK(small_closeness_rule(0.01, 0.2, radius) == Decision::AcceptEqual);
  CHECK(small_closeness_rule(0.12, 0.2, radius) == Decision::RejectFar);
  // Radius >= max(eps, 1): both regions empty.
  const double wide = closeness_radius(0.05, 2, 1);
  for (double tv = 0.0; tv <= 1.0; tv += 0.01) CHECK(small_closeness_rule(tv, 0.1, wide) == Decision::Continue);
}

TEST_CASE("small closeness decision regions") {
  const double eps = 0.1;
  for (std::uint64_t t = 1; t < 20000; t += 13) {
    const double radius = closeness_radius(0.05, 2, t);
    for (double tv = 0.0; tv <= 1.0; tv += 0.0025) {
      const bool reject = tv > radius;
      const bool accept = tv <= eps - radius;
      const Decision d = small_closeness_rule(tv, eps, radius);
      if (radius >= eps / 2.0) CHECK_FALSE((reject && accept));
      if (reject && accept) CHECK(d == Decision::RejectFar);
      if (radius <= eps / 2.0) CHECK(d != Decision::Continue);
    }
  }
}

TEST_CASE("small closeness tester absorbs and pairs samples") {
  SmallClosenessTester tester(params(2, 0.1, 0.05));
  ReplayStream a(std::vector<std::size_t>(2000, 0), 2);
  ReplayStream b(std::vector<std::size_t>(2000, 1), 2);
  const auto r = run_tester(tester, a, b, {2000, false, 0});
  CHECK(r.verdict == Verdict::RejectFar);
  CHECK(tester.first().t() == tester.second().t());
  CHECK(r.samples == 2 * r.tau);
  CHECK_THROWS_AS(tester.push(0, 0), AbsorbedStateError);
}

TEST_CASE("small closeness tester error rates") {
  const auto p = params(2, 0.1, 0.05);
  const int trials = 300;
  int wrong_h1 = 0, wrong_h2 = 0;
  const Distribution far({0.7, 0.3});  // TV 0.2 = 2 eps from uniform
  for (int i = 0; i < trials; ++i) {
    SmallClosenessTester h1(p);
    SampleStream a(Distribution::uniform(2), make_engine(51, i, 0));
    SampleStream b(Distribution::uniform(2), make_engine(51, i, 1));
    wrong_h1 += run_tester(h1, a, b, {1'000'000, false, 0}).verdict != Verdict::AcceptEqual;

    SmallClosenessTester h2(p);
    SampleStream c(Distribution::uniform(2), make_engine(52, i, 0));
    SampleStream d(far, make_engine(52, i, 1));
    wrong_h2 += run_tester(h2, c, d, {1'000'000, false, 0}).verdict != Verdict::RejectFar;
  }
  CHECK(double(wrong_h1) / trials <= oracle::binomial_band(0.05, trials));
  CHECK(double(wrong_h2) / trials <= oracle::binomial_band(0.05, trials));
}

TEST_CASE("sequential closeness beats batch at small risk") {
  // The stop regions meet once Phi_t <= eps/2, i.e. at t ~ 4 ln(1/delta)/eps^2
  // for small delta, while typical H1 runs stop near ln(1/delta)/eps^2.
  for (double eps : {0.1, 0.2}) {
    const auto p = params(2, eps, 1e-8);
    const int trials = 100;
    double total = 0.0;
    for (int i = 0; i < trials; ++i) {
      SmallClosenessTester tester(p);
      SampleStream a(Distribution::uniform(2), make_engine(61, i, 0));
      SampleStream b(Distribution::uniform(2), make_engine(61, i, 1));
      total += double(run_tester(tester, a, b, {10'000'000, false, 0}).tau);
    }
    CHECK(total / trials < double(batch_closeness_size(p)));
  }
}
