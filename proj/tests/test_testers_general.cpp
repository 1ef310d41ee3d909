#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "seqdist/errors.hpp"
#include "seqdist/testers_general.hpp"
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

// Straight transcription of the Z sum, independent of the incremental update.
std::int64_t z_reference(const std::vector<std::vector<std::int64_t>>& g) {
  std::int64_t z = 0;
  for (std::size_t i = 0; i < g[0].size(); ++i) {
    z += std::abs(g[0][i] - g[2][i]);
    z += std::abs(g[1][i] - g[3][i]);
    z -= std::abs(g[0][i] - g[1][i]);
    z -= std::abs(g[2][i] - g[3][i]);
  }
  return z;
}

double log_multinomial_pmf(const std::array<int, 4>& k) {
  const int total = k[0] + k[1] + k[2] + k[3];
  double lp = std::lgamma(total + 1.0) - total * std::log(4.0);
  for (int x : k) lp -= std::lgamma(x + 1.0);
  return lp;
}

}  // namespace

TEST_CASE("uniformity tester start gate") {
  const auto p = params(100, 0.1, 0.05);
  UniformTester tester(p);
  CHECK(tester.start_time() == 20);
  ReplayStream s(std::vector<std::size_t>(100, 0), 100);
  for (int i = 0; i < 19; ++i) CHECK(tester.step(s) == Decision::Continue);
  CHECK_FALSE(tester.started());
  CHECK_THROWS_AS(tester.evaluate(), DomainError);
  tester.step(s);
  CHECK(tester.started());
}

TEST_CASE("uniformity tester: an exactly uniform state never trips the TV branch") {
  const auto p = params(10, 0.1, 0.05);
  EmpiricalState s(10);
  for (int round = 0; round < 300; ++round) {
    for (std::size_t i = 0; i < 10; ++i) s.update(i);
    const auto ev = evaluate_uniform(p, s);
    CHECK(ev.tv == 0.0);
    CHECK_FALSE(ev.tv_reject);
    CHECK_FALSE(ev.phi_reject);
  }
}

TEST_CASE("uniformity tester: one heavy symbol trips the phi branch first") {
  ThresholdParams p = params(10, 0.1, 0.05);
  p.C_unif = 1.0;
  const Distribution heavy({0.28, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08});
  const int trials = 200;
  int phi_first = 0;
  for (int i = 0; i < trials; ++i) {
    SampleStream s(heavy, make_engine(71, i, 0));
    EmpiricalState st(10);
    std::uint64_t phi_at = 0, tv_at = 0;
    const std::uint64_t start = uniform_start_time(10, p.delta);
    while (phi_at == 0 && tv_at == 0 && st.t() < 200000) {
      st.update(s.next());
      if (st.t() < start) continue;
      const auto ev = evaluate_uniform(p, st);
      if (ev.phi_reject && phi_at == 0) phi_at = st.t();
      if (ev.tv_reject && tv_at == 0) tv_at = st.t();
    }
    phi_first += phi_at != 0 && (tv_at == 0 || phi_at < tv_at);
  }
  CHECK(phi_first > trials / 2);
}

TEST_CASE("uniformity tester rejects a far distribution and keeps risk under H1") {
  const auto p = params(10, 0.1, 0.05);
  const Distribution far({0.28, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08});
  int wrong = 0, false_reject = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    UniformTester t1(p);
    SampleStream s(far, make_engine(72, i, 0));
    wrong += run_tester(t1, s, {200000, false, 0}).verdict != Verdict::RejectFar;

    UniformTester t2(p);
    SampleStream u(Distribution::uniform(10), make_engine(73, i, 0));
    false_reject += run_tester(t2, u, {3000, false, 0}).verdict == Verdict::RejectFar;
  }
  CHECK(wrong == 0);
  CHECK(double(false_reject) / trials <= oracle::binomial_band(0.05, trials));
}

TEST_CASE("z_statistic values") {
  const std::vector<std::uint64_t> a{3, 1, 4}, five{5, 0}, none{0, 5};
  CHECK(z_statistic(a, a, a, a) == 0);
  CHECK(z_statistic(five, five, none, none) == 20);
  CHECK_THROWS_AS(z_statistic(five, five, none, a), DimensionError);
}

TEST_CASE("z tester incremental statistic matches a direct recount") {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 2 + gen() % 3;
    ZTester z(params(n, 0.1, 0.05), make_engine(5, rep, 2));
    std::vector<std::vector<std::int64_t>> mirror(4, std::vector<std::int64_t>(n, 0));
    for (int step = 0; step < 2; ++step) {
      const Allocation a = z.grow_counts();
      for (std::size_t g = 0; g < 4; ++g) {
        CHECK(a.balls[g] <= 4);
        for (int b = 0; b < a.balls[g]; ++b) {
          const std::size_t sym = gen() % n;
          z.add_sample(static_cast<Group>(g), sym);
          ++mirror[g][sym];
        }
      }
      z.evaluate();
      CHECK(z.z() == z_reference(mirror));
      CHECK(z.z() == z_statistic(z.counts(Group::X), z.counts(Group::XPrime), z.counts(Group::Y),
                                 z.counts(Group::YPrime)));
      CHECK(std::llabs(z.z()) <= static_cast<std::int64_t>(8 * z.t()));
      if (z.decision() != Decision::Continue) break;
    }
  }
}

TEST_CASE("z tester allocation protocol") {
  ZTester z(params(3, 0.1, 0.05), make_engine(1, 1, 2));
  z.grow_counts();
  CHECK_THROWS_AS(z.grow_counts(), DomainError);
  CHECK_THROWS_AS(z.evaluate(), DomainError);
}

TEST_CASE("z tester group totals are multinomial") {
  // Goodness of fit of (m1, m1', m2, m2') after 10 steps against
  // Multinomial(40, 1/4 each); sparse cells are pooled.
  const int runs = 100000;
  std::map<std::array<int, 4>, int> seen;
  const auto p = params(2, 0.0, 0.05);
  for (int r = 0; r < runs; ++r) {
    ZTester z(p, make_engine(9, r, 2));
    std::uint64_t prev[4] = {0, 0, 0, 0};
    for (int step = 0; step < 10; ++step) {
      const Allocation a = z.grow_counts();
      for (std::size_t g = 0; g < 4; ++g)
        for (int b = 0; b < a.balls[g]; ++b) z.add_sample(static_cast<Group>(g), 0);
      for (std::size_t g = 0; g < 4; ++g) {
        CHECK(z.total(static_cast<Group>(g)) >= prev[g]);
        prev[g] = z.total(static_cast<Group>(g));
      }
    }
    CHECK(prev[0] + prev[1] + prev[2] + prev[3] == 40);
    ++seen[{int(prev[0]), int(prev[1]), int(prev[2]), int(prev[3])}];
  }
  double chi2 = 0.0, pooled_expected = 0.0;
  int pooled_observed = 0, cells = 0;
  for (int a = 0; a <= 40; ++a)
    for (int b = 0; a + b <= 40; ++b)
      for (int c = 0; a + b + c <= 40; ++c) {
        const std::array<int, 4> k{a, b, c, 40 - a - b - c};
        const double expected = runs * std::exp(log_multinomial_pmf(k));
        const auto it = seen.find(k);
        const int observed = it == seen.end() ? 0 : it->second;
        if (expected < 5.0) {
          pooled_expected += expected;
          pooled_observed += observed;
          continue;
        }
        chi2 += (observed - expected) * (observed - expected) / expected;
        ++cells;
      }
  chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
  ++cells;
  // Wilson-Hilferty 99.9% quantile for cells - 1 degrees of freedom.
  const double k = cells - 1;
  const double q = k * std::pow(1.0 - 2.0 / (9.0 * k) + 3.09 * std::sqrt(2.0 / (9.0 * k)), 3.0);
  CHECK(chi2 < q);
}

TEST_CASE("z tester decisions") {
  CHECK(psi_general(0.05, 1) > 8.0);  // |Z_1| <= 8 cannot reject at t = 1
  for (int r = 0; r < 200; ++r) {
    ZTester z(params(2, 0.1, 0.05), make_engine(13, r, 2));
    ReplayStream a(std::vector<std::size_t>(8, 0), 2), b(std::vector<std::size_t>(8, 1), 2);
    CHECK(z.step(a, b) != Decision::RejectFar);
  }

  // eps = 0: the floor is negative, so acceptance is unreachable.
  for (int r = 0; r < 20; ++r) {
    ZTester z(params(5, 0.0, 0.05), make_engine(14, r, 2));
    SampleStream a(Distribution::uniform(5), make_engine(14, r, 0));
    SampleStream b(Distribution::uniform(5), make_engine(14, r, 1));
    const auto rep = run_tester(z, a, b, {3000, false, 0});
    CHECK(rep.verdict != Verdict::AcceptEqual);
  }

  ZTester z(params(2, 0.1, 0.05), make_engine(15, 0, 2));
  ReplayStream a(std::vector<std::size_t>(100000, 0), 2), b(std::vector<std::size_t>(100000, 1), 2);
  const auto rep = run_tester(z, a, b, {20000, false, 0});
  CHECK(rep.verdict == Verdict::RejectFar);
  CHECK_THROWS_AS(z.step(a, b), AbsorbedStateError);
}

TEST_CASE("z statistic has zero mean under equality") {
  const auto p = params(20, 0.0, 0.05);
  std::vector<double> z50, z500;
  for (int r = 0; r < 2000; ++r) {
    ZTester z(p, make_engine(21, r, 2));
    SampleStream a(Distribution::uniform(20), make_engine(21, r, 0));
    SampleStream b(Distribution::uniform(20), make_engine(21, r, 1));
    for (int t = 1; t <= 500; ++t) {
      const Allocation al = z.grow_counts();
      for (std::size_t g = 0; g < 4; ++g)
        for (int k = 0; k < al.balls[g]; ++k) z.add_sample(static_cast<Group>(g), (g < 2 ? a : b).next());
      if (t == 50) z50.push_back(double(z.z()));
    }
    z500.push_back(double(z.z()));
  }
  for (const auto* xs : {&z50, &z500}) {
    const auto ms = oracle::mean_se(*xs);
    CHECK(std::abs(ms.mean) <= 3.0 * ms.se);
  }
}

TEST_CASE("run_tester contract") {
  SmallClosenessTester capped(params(2, 0.1, 0.05));
  SampleStream a(Distribution::uniform(2), 1), b(Distribution::uniform(2), 2);
  const auto r = run_tester(capped, a, b, {5, true, 77});
  CHECK(r.verdict == Verdict::Undecided);
  CHECK(r.tau == 5);
  CHECK(r.steps_run == 5);
  CHECK(r.samples == 10);
  CHECK(r.seed == 77);
  CHECK(r.trajectory.size() == 5);
  CHECK_THROWS_AS(run_tester(capped, a, b, {0, false, 0}), DomainError);

  // Resuming continues the same state.
  const auto more = run_tester(capped, a, b, {100000, true, 77});
  CHECK(more.verdict == Verdict::AcceptEqual);
  CHECK(more.steps_run + 5 == more.tau);
  CHECK(more.trajectory.back().t == more.tau);
  for (std::size_t i = 1; i < more.trajectory.size(); ++i) {
    CHECK(more.trajectory[i].t > more.trajectory[i - 1].t);
  }
  CHECK(more.trajectory.size() < 4000);
}

TEST_CASE("doubling baseline") {
  ReplayStream a(std::vector<std::size_t>(2'000'000, 0), 3), b(std::vector<std::size_t>(2'000'000, 0), 3);
  const auto r = doubling_baseline(a, b, 0.05, 0.1);
  CHECK(r.verdict == Verdict::AcceptEqual);
  CHECK(r.levels == 4);
  std::uint64_t expected = 0;
  for (unsigned j = 1; j <= 4; ++j) {
    ThresholdParams lv;
    lv.n = 3;
    lv.eps = std::pow(2.0, -double(j));
    lv.delta = 0.05 / (j * j);
    expected += batch_closeness_size(lv);
  }
  CHECK(r.per_source == expected);
  CHECK(r.samples == 2 * expected);
  CHECK(r.risk_spent <= 0.05 * std::numbers::pi * std::numbers::pi / 6.0);

  ReplayStream c(std::vector<std::size_t>(100000, 0), 2), d(std::vector<std::size_t>(100000, 1), 2);
  const auto far = doubling_baseline(c, d, 0.05, 0.1);
  CHECK(far.verdict == Verdict::RejectFar);
  CHECK(far.level == 1);
}
