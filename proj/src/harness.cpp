#include "seqdist/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "seqdist/errors.hpp"
#include "seqdist/testers_general.hpp"
#include "seqdist/testers_small.hpp"

namespace seqdist {

namespace {

constexpr std::pair<Algorithm, std::string_view> kAlgorithmNames[] = {
    {Algorithm::BatchId, "batch-id"},
    {Algorithm::SeqId, "seq-id"},
    {Algorithm::BatchClos, "batch-clos"},
    {Algorithm::SeqClosSmall, "seq-clos-small"},
    {Algorithm::SeqUnif, "seq-unif"},
    {Algorithm::SeqClosGeneral, "seq-clos-general"},
    {Algorithm::Doubling, "doubling"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

double real_or_throw(std::string_view s, const char* what) {
  const auto v = parse_number<double>(s);
  if (!v) throw DomainError(std::string("bad number '") + std::string(s) + "' in " + what);
  return *v;
}

std::size_t size_or_throw(std::string_view s, const char* what) {
  const auto v = parse_number<std::size_t>(s);
  if (!v) throw DomainError(std::string("bad integer '") + std::string(s) + "' in " + what);
  return *v;
}

}  // namespace

const Constants kCalibratedConstants{1.2224454807980774, 2.354680263951729, 0.68001949401153206};

std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithmNames)
    if (alg == a) return name;
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  for (const auto& [alg, name] : kAlgorithmNames)
    if (name == s) return alg;
  throw DomainError("unknown algorithm '" + std::string(s) + "'");
}

bool is_closeness(Algorithm a) {
  return a == Algorithm::BatchClos || a == Algorithm::SeqClosSmall || a == Algorithm::SeqClosGeneral ||
         a == Algorithm::Doubling;
}

Distribution parse_distribution(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw DomainError("distribution '" + std::string(spec) + "' has no kind prefix");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  const auto args = split(rest, ':');

  if (kind == "uniform") {
    if (args.size() != 1) throw DomainError("uniform takes one argument: uniform:n");
    return Distribution::uniform(size_or_throw(args[0], "uniform"));
  }
  if (kind == "twobump") {
    if (args.size() != 2) throw DomainError("twobump takes two arguments: twobump:n:b");
    const std::size_t n = size_or_throw(args[0], "twobump");
    const double b = real_or_throw(args[1], "twobump");
    if (n < 2 || n % 2 != 0) throw DomainError("twobump needs an even alphabet size");
    if (!(b >= 0.0 && b <= 0.5)) throw DomainError("twobump needs 0 <= b <= 1/2");
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i % 2 == 0 ? 1.0 + 2.0 * b : 1.0 - 2.0 * b) / static_cast<double>(n);
    return Distribution(std::move(p));
  }
  if (kind == "heavy") {
    if (args.size() != 3) throw DomainError("heavy takes three arguments: heavy:n:k:m");
    const std::size_t n = size_or_throw(args[0], "heavy");
    const std::size_t k = size_or_throw(args[1], "heavy");
    const double m = real_or_throw(args[2], "heavy");
    if (n < 2 || k < 1 || k > n) throw DomainError("heavy needs n >= 2 and 1 <= k <= n");
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("heavy needs 0 <= m <= 1");
    const double base = (1.0 - m) / static_cast<double>(n);
    std::vector<double> p(n, base);
    for (std::size_t i = 0; i < k; ++i) p[i] += m / static_cast<double>(k);
    return Distribution(std::move(p));
  }
  if (kind == "explicit") {
    std::vector<double> p;
    for (auto part : split(rest, ',')) p.push_back(real_or_throw(part, "explicit"));
    return Distribution(std::move(p));
  }
  throw DomainError("unknown distribution kind '" + std::string(kind) + "'");
}

SpecError::SpecError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid experiment spec:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

ThresholdParams ExperimentSpec::params() const {
  ThresholdParams p;
  p.delta = delta;
  p.n = n;
  p.eps = eps;
  p.c_small = c_small;
  p.C_big = C_big;
  p.C_unif = C_unif;
  return p;
}

namespace {

std::string dist_or_uniform(const std::string& d, std::size_t n) {
  return d.empty() ? "uniform:" + std::to_string(n) : d;
}

}  // namespace

std::vector<std::string> ExperimentSpec::problems() const {
  std::vector<std::string> out;
  if (n < 2) out.push_back("n: must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) out.push_back("delta: must lie in (0,1)");
  if (!(eps >= 0.0 && eps < 1.0)) out.push_back("eps: must lie in [0,1)");
  if (trials < 1) out.push_back("trials: must be >= 1");
  if (!(c_small >= 0.0)) out.push_back("c_small: must be >= 0");
  if (!(C_big > 0.0)) out.push_back("C_big: must be > 0");
  if (!(C_unif > 0.0)) out.push_back("C_unif: must be > 0");
  if (max_steps && *max_steps < 1) out.push_back("max_steps: must be >= 1");
  if (workers < 1) out.push_back("workers: must be >= 1");
  if (eps_min && !(*eps_min > 0.0 && *eps_min < 1.0)) out.push_back("eps_min: must lie in (0,1)");

  const bool needs_eps = algorithm != Algorithm::SeqClosGeneral && algorithm != Algorithm::Doubling;
  if (needs_eps && !(eps > 0.0)) out.push_back("eps: must be > 0 for " + std::string(to_string(algorithm)));
  if (algorithm == Algorithm::SeqClosGeneral && eps == 0.0 && !eps_min && !max_steps) {
    out.push_back("eps_min: required to size the step cap when eps = 0 (or set max_steps)");
  }
  if (algorithm == Algorithm::Doubling && !eps_min && !(eps > 0.0)) {
    out.push_back("eps_min: the doubling baseline needs eps_min (or eps > 0)");
  }

  auto check_dist = [&](const std::string& field, const std::string& text) {
    try {
      const Distribution d = parse_distribution(dist_or_uniform(text, n));
      if (d.size() != n) {
        out.push_back(field + ": alphabet size " + std::to_string(d.size()) + " differs from n = " + std::to_string(n));
      }
    } catch (const std::exception& e) {
      out.push_back(field + ": " + e.what());
    }
  };
  if (n >= 2) {
    check_dist("dist", dist);
    if (is_closeness(algorithm)) {
      check_dist("dist2", dist2);
    } else if (!dist2.empty()) {
      out.push_back("dist2: only closeness algorithms take a second distribution");
    }
  }
  return out;
}

std::string apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  const std::string_view v = trim(value);
  auto bad = [&](const char* what) { return k + ": expected " + what + ", got '" + std::string(v) + "'"; };
  auto set_real = [&](double& dst) -> std::string {
    const auto x = parse_number<double>(v);
    if (!x) return bad("a number");
    dst = *x;
    return {};
  };
  auto set_uint = [&](auto& dst) -> std::string {
    const auto x = parse_number<std::uint64_t>(v);
    if (!x) return bad("a non-negative integer");
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(*x);
    return {};
  };

  if (k == "algorithm") {
    try {
      spec.algorithm = parse_algorithm(v);
    } catch (const DomainError&) {
      return bad("one of batch-id, seq-id, batch-clos, seq-clos-small, seq-unif, seq-clos-general, doubling");
    }
    return {};
  }
  if (k == "n") return set_uint(spec.n);
  if (k == "eps") return set_real(spec.eps);
  if (k == "delta") return set_real(spec.delta);
  if (k == "dist" || k == "dist1") {
    spec.dist = std::string(v);
    return {};
  }
  if (k == "dist2") {
    spec.dist2 = std::string(v);
    return {};
  }
  if (k == "trials") return set_uint(spec.trials);
  if (k == "seed") return set_uint(spec.seed);
  if (k == "max_steps") {
    std::uint64_t m = 0;
    auto r = set_uint(m);
    if (r.empty()) spec.max_steps = m;
    return r;
  }
  if (k == "eps_min") {
    double m = 0.0;
    auto r = set_real(m);
    if (r.empty()) spec.eps_min = m;
    return r;
  }
  if (k == "c_small") return set_real(spec.c_small);
  if (k == "C_big") return set_real(spec.C_big);
  if (k == "C_unif") return set_real(spec.C_unif);
  if (k == "workers") return set_uint(spec.workers);
  if (k == "trajectory") {
    if (v == "true" || v == "1" || v == "yes") {
      spec.trajectory = true;
    } else if (v == "false" || v == "0" || v == "no") {
      spec.trajectory = false;
    } else {
      return bad("true or false");
    }
    return {};
  }
  return "unknown key '" + k + "'";
}

ExperimentSpec parse_spec(std::string_view text) {
  ExperimentSpec spec;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected key=value");
      continue;
    }
    if (auto p = apply_setting(spec, line.substr(0, eq), line.substr(eq + 1)); !p.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": " + p);
    }
  }
  for (auto& p : spec.problems()) problems.push_back(std::move(p));
  if (!problems.empty()) throw SpecError(std::move(problems));
  return spec;
}

std::uint64_t uniform_meeting_time(const ThresholdParams& params) {
  const std::uint64_t start = uniform_start_time(params.n, params.delta);
  auto covered = [&](std::uint64_t t) {
    return uniform_separation(params.C_unif, params.eps, params.n, t) >= 2.0 * uniform_envelope(params.delta, params.n, t);
  };
  std::uint64_t hi = std::max<std::uint64_t>(start, 1);
  while (!covered(hi)) {
    if (hi > (std::uint64_t{1} << 50)) throw DomainError("uniform stop regions never meet");
    hi *= 2;
  }
  std::uint64_t lo = std::max(start, hi / 2);
  if (covered(lo)) return lo;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (covered(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::uint64_t default_max_steps(const ExperimentSpec& spec) {
  const ThresholdParams p = spec.params();
  switch (spec.algorithm) {
    case Algorithm::BatchId:
    case Algorithm::BatchClos:
    case Algorithm::Doubling:
      return 0;
    case Algorithm::SeqId:
      return 10 * batch_identity_size(p);
    case Algorithm::SeqClosSmall:
      return 10 * batch_closeness_size(p);
    case Algorithm::SeqUnif:
      return 10 * uniform_meeting_time(p);
    case Algorithm::SeqClosGeneral: {
      const double rate = spec.eps > 0.0 ? spec.eps : spec.eps_min.value_or(0.0);
      if (!(rate > 0.0)) throw DomainError("default_max_steps: eps = 0 needs eps_min");
      return static_cast<std::uint64_t>(std::ceil(10.0 * n_eta(p, rate)));
    }
  }
  return 0;
}

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial_id) {
  const ThresholdParams params = spec.params();
  const Distribution d1 = parse_distribution(dist_or_uniform(spec.dist, spec.n));
  const Distribution d2 = parse_distribution(dist_or_uniform(spec.dist2, spec.n));
  const bool closeness = is_closeness(spec.algorithm);

  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.algorithm = spec.algorithm;
  rec.n = spec.n;
  rec.eps = spec.eps;
  rec.delta = spec.delta;
  rec.tv_true = closeness ? tv_distance(d1, d2) : tv_distance(d1, Distribution::uniform(spec.n));
  rec.seed = spec.seed;
  rec.c_small = spec.c_small;
  rec.C_big = spec.C_big;
  rec.C_unif = spec.C_unif;

  SampleStream first(d1, make_engine(spec.seed, trial_id, 0));
  SampleStream second(d2, make_engine(spec.seed, trial_id, 1));
  const std::uint64_t cap = spec.max_steps ? *spec.max_steps : default_max_steps(spec);
  const RunOptions options{cap, spec.trajectory, spec.seed};

  auto take = [](SymbolSource& s, std::uint64_t count) {
    std::vector<std::size_t> out(count);
    for (auto& x : out) x = s.next();
    return out;
  };
  auto as_verdict = [](Decision d) { return d == Decision::AcceptEqual ? Verdict::AcceptEqual : Verdict::RejectFar; };
  auto absorb = [&rec](const StopReport& r) {
    rec.decision = r.verdict;
    rec.tau = r.tau;
    rec.samples_consumed = r.samples;
    rec.trajectory = r.trajectory;
  };

  switch (spec.algorithm) {
    case Algorithm::BatchId: {
      const std::uint64_t size = batch_identity_size(params);
      rec.decision = as_verdict(batch_identity(params, take(first, size)));
      rec.tau = size;
      rec.samples_consumed = size;
      break;
    }
    case Algorithm::BatchClos: {
      const std::uint64_t size = batch_closeness_size(params);
      const auto a = take(first, size);
      rec.decision = as_verdict(batch_closeness(params, a, take(second, size)));
      rec.tau = size;
      rec.samples_consumed = 2 * size;
      break;
    }
    case Algorithm::SeqId: {
      IdentityTester t(params);
      absorb(run_tester(t, first, options));
      break;
    }
    case Algorithm::SeqUnif: {
      UniformTester t(params);
      absorb(run_tester(t, first, options));
      break;
    }
    case Algorithm::SeqClosSmall: {
      SmallClosenessTester t(params);
      absorb(run_tester(t, first, second, options));
      break;
    }
    case Algorithm::SeqClosGeneral: {
      ZTester t(params, make_engine(spec.seed, trial_id, 2));
      absorb(run_tester(t, first, second, options));
      break;
    }
    case Algorithm::Doubling: {
      const double floor = spec.eps_min.value_or(spec.eps);
      const DoublingReport r = doubling_baseline(first, second, spec.delta, floor);
      rec.decision = r.verdict;
      rec.tau = r.per_source;
      rec.samples_consumed = r.samples;
      break;
    }
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const ExperimentSpec& spec) {
  if (auto p = spec.problems(); !p.empty()) throw SpecError(std::move(p));
  std::vector<TrialRecord> records(spec.trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    while (!failed.load()) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= spec.trials) return;
      try {
        records[i] = run_trial(spec, i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(spec.workers, spec.trials));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

bool is_error(const TrialRecord& r) {
  if (r.tv_true == 0.0) return r.decision == Verdict::RejectFar;
  if (r.tv_true > r.eps) return r.decision == Verdict::AcceptEqual;
  return false;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.trial_id << ',' << to_string(r.algorithm) << ',' << r.n << ',' << format_real(r.eps) << ','
       << format_real(r.delta) << ',' << format_real(r.tv_true) << ',' << to_string(r.decision) << ',' << r.tau << ','
       << r.samples_consumed << ',' << r.seed << ',' << format_real(r.c_small) << ',' << format_real(r.C_big) << ','
       << format_real(r.C_unif) << '\n';
  }
}

void write_trajectories(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : records) {
    for (const auto& p : r.trajectory) {
      os << r.trial_id << ',' << p.t << ',' << format_real(p.statistic) << ',' << format_real(p.reject_above) << ','
         << format_real(p.accept_below) << '\n';
    }
  }
}

CsvReadResult read_csv(std::istream& is) {
  CsvReadResult out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line != kCsvHeader) out.issues.push_back({line_no, "header does not match the record schema"});
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 13) {
      out.issues.push_back({line_no, "expected 13 fields, found " + std::to_string(f.size())});
      continue;
    }
    try {
      TrialRecord r;
      auto u64 = [](std::string_view s, const char* what) {
        const auto v = parse_number<std::uint64_t>(s);
        if (!v) throw DomainError(std::string("bad ") + what + " '" + std::string(s) + "'");
        return *v;
      };
      r.trial_id = u64(f[0], "trial_id");
      r.algorithm = parse_algorithm(f[1]);
      r.n = static_cast<std::size_t>(u64(f[2], "n"));
      r.eps = real_or_throw(f[3], "eps");
      r.delta = real_or_throw(f[4], "delta");
      r.tv_true = real_or_throw(f[5], "tv_true");
      r.decision = parse_verdict(f[6]);
      r.tau = u64(f[7], "tau");
      r.samples_consumed = u64(f[8], "samples_consumed");
      r.seed = u64(f[9], "seed");
      r.c_small = real_or_throw(f[10], "c_small");
      r.C_big = real_or_throw(f[11], "C_big");
      r.C_unif = real_or_throw(f[12], "C_unif");
      out.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.issues.push_back({line_no, e.what()});
    }
  }
  return out;
}

std::vector<GroupSummary> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<Algorithm, std::size_t, double, double, double>;
  std::vector<GroupSummary> groups;
  std::map<Key, std::size_t> index;
  struct Sums {
    double tau = 0, accept_tau = 0, reject_tau = 0, samples = 0;
    std::size_t errors = 0;
  };
  std::vector<Sums> sums;
  for (const auto& r : records) {
    const Key key{r.algorithm, r.n, r.eps, r.delta, r.tv_true};
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) {
      GroupSummary g;
      g.algorithm = r.algorithm;
      g.n = r.n;
      g.eps = r.eps;
      g.delta = r.delta;
      g.tv_true = r.tv_true;
      groups.push_back(g);
      sums.emplace_back();
    }
    auto& g = groups[it->second];
    auto& s = sums[it->second];
    ++g.count;
    s.tau += static_cast<double>(r.tau);
    s.samples += static_cast<double>(r.samples_consumed);
    s.errors += is_error(r);
    switch (r.decision) {
      case Verdict::AcceptEqual:
        ++g.accepted;
        s.accept_tau += static_cast<double>(r.tau);
        break;
      case Verdict::RejectFar:
        ++g.rejected;
        s.reject_tau += static_cast<double>(r.tau);
        break;
      case Verdict::Undecided:
        ++g.undecided;
        break;
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& g = groups[i];
    const auto& s = sums[i];
    const double c = static_cast<double>(g.count);
    g.mean_tau = s.tau / c;
    g.mean_samples = s.samples / c;
    if (g.accepted) g.mean_tau_accept = s.accept_tau / static_cast<double>(g.accepted);
    if (g.rejected) g.mean_tau_reject = s.reject_tau / static_cast<double>(g.rejected);
    g.error_rate = static_cast<double>(s.errors) / c;
    g.error_ci = 1.96 * std::sqrt(g.error_rate * (1.0 - g.error_rate) / c);
  }
  return groups;
}

std::vector<Measurement> to_measurements(const std::vector<GroupSummary>& groups) {
  std::vector<Measurement> out;
  for (const auto& g : groups) {
    const std::string alg(to_string(g.algorithm));
    if (g.mean_tau_accept) {
      out.push_back({alg, g.n, g.eps, g.delta, g.tv_true, Side::Tau1, *g.mean_tau_accept, g.accepted});
    }
    if (g.mean_tau_reject) {
      out.push_back({alg, g.n, g.eps, g.delta, g.tv_true, Side::Tau2, *g.mean_tau_reject, g.rejected});
    }
  }
  return out;
}

std::vector<TableConfig> implied_tables(const std::vector<GroupSummary>& groups) {
  std::vector<TableConfig> out;
  auto find = [&](int table, std::size_t n, double eps, double delta, double d) {
    return std::find_if(out.begin(), out.end(), [&](const TableConfig& c) {
      return c.table == table && c.n == n && c.eps == eps && c.delta == delta && c.d == d;
    });
  };
  for (const auto& g : groups) {
    int table = 0;
    switch (g.algorithm) {
      case Algorithm::BatchId:
      case Algorithm::SeqId: table = 1; break;
      case Algorithm::BatchClos:
      case Algorithm::SeqClosSmall: table = 2; break;
      default: continue;
    }
    // Uniformity tau_2 rows need |B_opt|, which the records do not carry.
    const double d = (table == 2 && g.tv_true > g.eps) ? g.tv_true : 0.0;
    if (find(table, g.n, g.eps, g.delta, d) != out.end()) continue;
    TableConfig c;
    c.table = table;
    c.n = g.n;
    c.eps = g.eps;
    c.delta = g.delta;
    c.d = d;
    out.push_back(c);
  }
  return out;
}

std::string render_groups(const std::vector<GroupSummary>& groups) {
  std::ostringstream os;
  auto opt = [](const std::optional<double>& x) { return x ? format_real(*x) : std::string(); };
  os << "algorithm,n,eps,delta,tv_true,count,accepted,rejected,undecided,mean_tau,mean_tau_accept,mean_tau_reject,"
        "mean_samples,error_rate,error_ci95\n";
  for (const auto& g : groups) {
    os << to_string(g.algorithm) << ',' << g.n << ',' << format_real(g.eps) << ',' << format_real(g.delta) << ','
       << format_real(g.tv_true) << ',' << g.count << ',' << g.accepted << ',' << g.rejected << ',' << g.undecided
       << ',' << format_real(g.mean_tau) << ',' << opt(g.mean_tau_accept) << ',' << opt(g.mean_tau_reject) << ','
       << format_real(g.mean_samples) << ',' << format_real(g.error_rate) << ',' << format_real(g.error_ci) << '\n';
  }
  return os.str();
}

}  // namespace seqdist
