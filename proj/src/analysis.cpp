#include "seqdist/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "seqdist/core_stats.hpp"
#include "seqdist/errors.hpp"

namespace seqdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

void require_risk(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
}

// ln(1/(3 delta)), clamped at zero for delta >= 1/3.
double log_third(double delta) {
  require_risk(delta);
  return std::max(0.0, -std::log(3.0 * delta));
}

double finish_min(double smallest_kl, double numerator, const char* what) {
  if (smallest_kl == kInf) throw DomainError(std::string(what) + ": every kl branch leaves (0,1)");
  return numerator / smallest_kl;
}

}  // namespace

double seq_lower_identity(std::size_t n, double eps, double delta, Side side, double d, std::size_t b_opt) {
  if (n < 2) throw DomainError("seq_lower_identity: n must be >= 2");
  const double nn = static_cast<double>(n);
  double smallest = kInf;
  if (side == Side::Tau1) {
    for (std::size_t b = 1; b <= n; ++b) {
      const double q = static_cast<double>(b) / nn;
      for (double s : {1.0, -1.0}) {
        if (open_unit(q) && open_unit(q + s * eps)) smallest = std::min(smallest, kl_bernoulli(q, q + s * eps));
      }
    }
  } else {
    if (b_opt < 1 || b_opt > n) throw DomainError("seq_lower_identity: b_opt must lie in 1..n");
    const double q = static_cast<double>(b_opt) / nn;
    for (double s : {1.0, -1.0}) {
      if (open_unit(q) && open_unit(q + s * d)) smallest = std::min(smallest, kl_bernoulli(q + s * d, q));
    }
  }
  return finish_min(smallest, log_third(delta), "seq_lower_identity");
}

double seq_lower_closeness(double eps, double delta, Side side, double d) {
  const double r = side == Side::Tau1 ? eps : d;
  if (!(r > 0.0 && r < 1.0)) throw DomainError("seq_lower_closeness: rate must lie in (0,1)");
  const double denom = side == Side::Tau1 ? kl_bernoulli(0.5, 0.5 + r / 2.0) + kl_bernoulli(0.5, 0.5 - r / 2.0)
                                          : kl_bernoulli(0.5 + r / 2.0, 0.5) + kl_bernoulli(0.5 - r / 2.0, 0.5);
  return log_third(delta) / denom;
}

double batch_lower_bounds(Problem problem, std::size_t n, double eps, double delta) {
  require_risk(delta);
  if (problem == Problem::Closeness) {
    const double num = std::log(1.0 / (2.0 * delta));
    const double a = num / (2.0 * kl_bernoulli(0.5 - eps / 4.0, 0.5 - eps / 2.0));
    const double b = num / (2.0 * kl_bernoulli(0.5 + eps / 4.0, 0.5));
    return std::min(a, b);
  }
  if (n < 2) throw DomainError("batch_lower_bounds: n must be >= 2");
  const double num = -std::log(delta);
  double best = -1.0;
  for (std::size_t b = 1; b <= n; ++b) {
    const double q = static_cast<double>(b) / static_cast<double>(n);
    const double mid = q + eps / 2.0;
    double branch = kInf;
    if (open_unit(mid) && open_unit(q + eps)) branch = std::min(branch, num / kl_bernoulli(mid, q + eps));
    if (open_unit(mid) && open_unit(q)) branch = std::min(branch, num / kl_bernoulli(mid, q));
    if (branch < kInf) best = std::max(best, branch);
  }
  if (best < 0.0) throw DomainError("batch_lower_bounds: every kl branch leaves (0,1)");
  return best;
}

namespace {

// One branch of the expected-stopping-time bound: the bracketed expression of
// scale `scale` (1, n^2 or n) over eta^power, before the outer root.
double n_eta_inner(const ThresholdParams& p, double eta, double scale, double power) {
  const double log_risk = std::log(std::numbers::pi * std::numbers::pi / (3.0 * p.delta));
  const double c2 = p.C_big * p.C_big;
  const double ep = std::pow(eta, power);
  const double lead = 128.0 / c2 * scale * log_risk / ep;
  const double loglog = 512.0 * std::numbers::e * scale / (c2 * ep) * std::log(std::log(lead) + 1.0);
  const double slack = 16.0 * p.c_small * p.c_small * scale / (ep * c2);
  return lead + loglog + slack;
}

std::array<double, 3> n_eta_branches(const ThresholdParams& params, double eta) {
  if (!(eta > 0.0)) throw DomainError("n_eta: eta must be positive");
  params.validate();
  const double n = static_cast<double>(params.n);
  return {n_eta_inner(params, eta, 1.0, 2.0), std::cbrt(n_eta_inner(params, eta, n * n, 4.0)),
          std::sqrt(n_eta_inner(params, eta, n, 4.0))};
}

}  // namespace

double n_eta(const ThresholdParams& params, double eta) {
  const auto b = n_eta_branches(params, eta);
  return std::max({b[0], b[1], b[2]});
}

int n_eta_branch(const ThresholdParams& params, double eta) {
  const auto b = n_eta_branches(params, eta);
  return static_cast<int>(std::max_element(b.begin(), b.end()) - b.begin());
}

std::vector<BoundReport> worst_case_lower_general(WorstCase problem, std::size_t n, double delta, double d) {
  if (n < 2) throw DomainError("worst_case_lower_general: n must be >= 2");
  const double nn = static_cast<double>(n);
  std::vector<BoundReport> out;
  auto push = [&](std::string setting, std::string id, double value) {
    BoundReport r;
    r.setting = std::move(setting);
    r.formula_id = std::move(id);
    r.leading_value = value;
    r.symbolic_constant = true;
    r.n = n;
    r.delta = delta;
    r.d = d;
    out.push_back(std::move(r));
  };

  if (problem == WorstCase::EqualVsDifferent) {
    if (!(d > 0.0 && d < std::exp(-1.0))) {
      throw DomainError("worst_case_lower_general: d must lie in (0, 1/e) for the equal-vs-different bound");
    }
    const double ll = std::log(std::log(1.0 / d));
    push("equal-vs-different/sequential/tau2", "neq.sqrt_n", std::sqrt(nn * ll) / (d * d));
    push("equal-vs-different/sequential/tau2", "neq.loglog", ll / (d * d));
    push("equal-vs-different/sequential/tau2", "neq.n23", std::pow(nn, 2.0 / 3.0) * std::cbrt(ll) / std::pow(d, 4.0 / 3.0));
    return out;
  }

  if (!(d > 0.0 && d <= 1.0)) throw DomainError("worst_case_lower_general: d must lie in (0,1]");
  const double lt = log_third(delta);
  const std::string name = problem == WorstCase::Uniform ? "uniform" : "closeness";
  push(name + "/sequential/worst", name + ".sqrt_n", std::sqrt(nn * lt) / (d * d));
  push(name + "/sequential/worst", name + ".log", lt / (d * d));
  if (problem == WorstCase::Closeness) {
    push(name + "/sequential/worst", name + ".n23", std::pow(nn, 2.0 / 3.0) * std::cbrt(lt) / std::pow(d, 4.0 / 3.0));
  }
  return out;
}

double leading_log_coefficient(const std::function<double(double)>& bound, double rate, double delta) {
  require_risk(delta);
  constexpr double h = 0.5;
  const double hi = bound(delta * std::exp(-h));
  const double lo = bound(delta * std::exp(h));
  return rate * rate * (hi - lo) / (2.0 * h);
}

namespace {

double quarter_square(std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::floor(nn * nn / 4.0) / (nn * nn);
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

std::optional<double> lookup(std::span<const Measurement> ms, const std::string& algorithm, const TableConfig& c,
                             std::optional<Side> side, std::optional<double> tv) {
  for (const auto& m : ms) {
    if (m.algorithm != algorithm || m.n != c.n || !same(m.eps, c.eps) || !same(m.delta, c.delta)) continue;
    if (side && m.side != *side) continue;
    if (tv && !same(m.tv_true, *tv)) continue;
    if (m.count == 0) continue;
    return m.mean_tau;
  }
  return std::nullopt;
}

}  // namespace

std::vector<TableRow> table_summary(std::span<const TableConfig> configs, std::span<const Measurement> measured) {
  std::vector<TableRow> rows;
  for (const auto& c : configs) {
    require_risk(c.delta);
    const double lg = -std::log(c.delta);
    const double e2 = c.eps * c.eps;
    const double d2 = c.d * c.d;
    const bool uniformity = c.table == 1;
    const std::string batch_alg = uniformity ? "batch-id" : "batch-clos";
    const std::string seq_alg = uniformity ? "seq-id" : "seq-clos-small";

    auto add = [&](std::string model, std::string side, double formula, std::optional<double> m) {
      TableRow r;
      r.table = c.table;
      r.model = std::move(model);
      r.side = std::move(side);
      r.n = c.n;
      r.eps = c.eps;
      r.delta = c.delta;
      r.d = c.d;
      r.formula = formula;
      r.measured = m;
      if (m && formula > 0.0) r.ratio = *m / formula;
      rows.push_back(std::move(r));
    };

    if (uniformity) {
      const double q = quarter_square(c.n);
      add("Batch", "-", 8.0 * q * lg / e2, lookup(measured, batch_alg, c, std::nullopt, std::nullopt));
      add("Sequential", "tau1", 2.0 * q * lg / e2, lookup(measured, seq_alg, c, Side::Tau1, 0.0));
      if (c.d > 0.0) {
        const auto tau2 = lookup(measured, seq_alg, c, Side::Tau2, c.d);
        const double b = static_cast<double>(c.b_opt) / static_cast<double>(c.n);
        add("Sequential", "tau2", 2.0 * b * (1.0 - b) * lg / d2, tau2);
        if (c.b_d) {
          const double bd = static_cast<double>(*c.b_d) / static_cast<double>(c.n);
          add("Sequential", "tau2(B_d)", 2.0 * bd * (1.0 - bd) * lg / d2, tau2);
        }
      }
    } else {
      add("Batch", "-", 4.0 * lg / e2, lookup(measured, batch_alg, c, std::nullopt, std::nullopt));
      add("Sequential", "tau1", lg / e2, lookup(measured, seq_alg, c, Side::Tau1, 0.0));
      if (c.d > 0.0) add("Sequential", "tau2", lg / d2, lookup(measured, seq_alg, c, Side::Tau2, c.d));
    }
  }
  return rows;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

}  // namespace

std::string render_csv(std::span<const TableRow> rows) {
  std::ostringstream os;
  os << "table,model,side,n,eps,delta,d,formula,measured,ratio\n";
  for (const auto& r : rows) {
    os << r.table << ',' << r.model << ',' << r.side << ',' << r.n << ',' << num(r.eps) << ',' << num(r.delta)
       << ',' << num(r.d) << ',' << num(r.formula) << ',' << opt(r.measured) << ',' << opt(r.ratio) << '\n';
  }
  return os.str();
}

std::string render_text(std::span<const TableRow> rows) {
  const std::vector<std::string> head{"table", "model", "side", "n", "eps", "delta", "d", "formula", "measured", "ratio"};
  std::vector<std::vector<std::string>> cells{head};
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.table), r.model, r.side, std::to_string(r.n), num(r.eps), num(r.delta),
                     num(r.d), num(r.formula), opt(r.measured), opt(r.ratio)});
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace seqdist
