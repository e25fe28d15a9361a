#include "qpd/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpd {

StrategyParam::StrategyParam(double t) : t_(t) {
  if (!std::isfinite(t) || std::abs(t) > 1.0) throw std::invalid_argument("strategy parameter must lie in [-1, 1]");
}

ConverterParams StrategyParam::params() const {
  if (t_ >= 0.0) return {0.0, t_ * kPi};
  return {45.0, -t_ * kPi};
}

std::vector<double> param_grid(std::size_t n_per_segment) {
  if (n_per_segment < 2) throw std::invalid_argument("need at least 2 points per segment");
  const auto half = static_cast<double>(n_per_segment - 1);
  std::vector<double> ts(2 * n_per_segment - 1);
  for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = (static_cast<double>(k) - half) / half;
  return ts;
}

Surface sweep(std::size_t n_per_segment, Backend backend, const PayoffTable& table) {
  Surface s;
  s.ts = param_grid(n_per_segment);
  std::vector<Element2> moves;
  moves.reserve(s.ts.size());
  for (double t : s.ts) moves.push_back(StrategyParam(t).strategy().matrix());

  s.points.resize(s.ts.size() * s.ts.size());
  for (std::size_t ia = 0; ia < s.ts.size(); ++ia)
    for (std::size_t ib = 0; ib < s.ts.size(); ++ib) {
      const Outcome o = run_protocol(moves[ia], moves[ib], backend, table);
      s.points[ia * s.ts.size() + ib] = {s.ts[ia], s.ts[ib], o.payoff_a, o.payoff_b};
    }
  return s;
}

BestResponse best_response(const Strategy& opponent, std::size_t grid, Backend backend, const PayoffTable& table,
                           Role responder) {
  if (grid < 3) throw std::invalid_argument("best response grid must be at least 3");
  const Element2 fixed = opponent.matrix();

  std::vector<double> ts = param_grid(grid);
  std::vector<double> values(ts.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Element2 mine = StrategyParam(ts[k]).strategy().matrix();
    if (responder == Role::Alice) {
      values[k] = run_protocol(mine, fixed, backend, table).payoff_a;
    } else {
      values[k] = run_protocol(fixed, mine, backend, table).payoff_b;
    }
    best = std::max(best, values[k]);
  }

  std::size_t pick = ts.size();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (values[k] < best - kEquilibriumTolerance) continue;
    if (pick == ts.size()) {
      pick = k;
      continue;
    }
    const double cur = std::abs(ts[pick]);
    const double cand = std::abs(ts[k]);
    if (cand < cur || (cand == cur && ts[k] >= 0.0 && ts[pick] < 0.0)) pick = k;
  }
  return {StrategyParam(ts[pick]), values[pick]};
}

bool EquilibriumReport::is_equilibrium(std::size_t i, std::size_t j) const {
  return std::find(equilibria.begin(), equilibria.end(), std::make_pair(i, j)) != equilibria.end();
}

bool EquilibriumReport::is_pareto(std::size_t i, std::size_t j) const {
  return std::find(pareto_front.begin(), pareto_front.end(), std::make_pair(i, j)) != pareto_front.end();
}

double max_unilateral_gain(const EquilibriumReport& report, std::size_t i, std::size_t j) {
  const auto [a, b] = report.payoffs[i][j];
  double gain = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < report.strategies.size(); ++k) {
    gain = std::max(gain, report.payoffs[k][j].first - a);
    gain = std::max(gain, report.payoffs[i][k].second - b);
  }
  return gain;
}

namespace {

// (x_a, x_b) Pareto-dominates (y_a, y_b): no worse for either, better for one.
bool dominates(std::pair<double, double> x, std::pair<double, double> y) {
  const double tol = kEquilibriumTolerance;
  return x.first >= y.first - tol && x.second >= y.second - tol &&
         (x.first > y.first + tol || x.second > y.second + tol);
}

}  // namespace

EquilibriumReport nash_discrete(const std::vector<Strategy>& set, Backend backend, const PayoffTable& table) {
  if (set.empty()) throw std::invalid_argument("strategy set must be nonempty");
  EquilibriumReport r;
  r.strategies = set;
  const auto outcomes = coefficient_table(set, backend, table);
  const std::size_t n = set.size();
  r.payoffs.assign(n, std::vector<std::pair<double, double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.payoffs[i][j] = {outcomes[i][j].payoff_a, outcomes[i][j].payoff_b};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (max_unilateral_gain(r, i, j) <= kEquilibriumTolerance) r.equilibria.emplace_back(i, j);

      bool dominated = false;
      for (std::size_t k = 0; k < n && !dominated; ++k)
        for (std::size_t l = 0; l < n && !dominated; ++l) dominated = dominates(r.payoffs[k][l], r.payoffs[i][j]);
      if (!dominated) r.pareto_front.emplace_back(i, j);
    }

  const auto iz = std::find(set.begin(), set.end(), Strategy(NamedStrategy::iZ));
  if (iz != set.end()) {
    const auto k = static_cast<std::size_t>(iz - set.begin());
    r.reference = std::make_pair(k, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dominates(r.payoffs[k][k], r.payoffs[i][j])) r.dominated_pairs.emplace_back(i, j);
  }
  return r;
}

ClassicalCheck classical_minimum_check(std::size_t grid, const PayoffTable& table) {
  if (grid < 2) throw std::invalid_argument("classical grid must be at least 2");
  std::vector<double> ps(grid);
  for (std::size_t k = 0; k < grid; ++k) ps[k] = static_cast<double>(k) / static_cast<double>(grid - 1);

  // pay[ia][ib] = (payoff_a, payoff_b)
  std::vector<std::vector<std::pair<double, double>>> pay(grid, std::vector<std::pair<double, double>>(grid));
  for (std::size_t ia = 0; ia < grid; ++ia)
    for (std::size_t ib = 0; ib < grid; ++ib) pay[ia][ib] = classical_mixed(ps[ia], ps[ib], table);

  std::vector<double> best_a(grid, -std::numeric_limits<double>::infinity());
  std::vector<double> best_b(grid, -std::numeric_limits<double>::infinity());
  for (std::size_t ia = 0; ia < grid; ++ia)
    for (std::size_t ib = 0; ib < grid; ++ib) {
      best_a[ib] = std::max(best_a[ib], pay[ia][ib].first);
      best_b[ia] = std::max(best_b[ia], pay[ia][ib].second);
    }

  ClassicalCheck check;
  bool all_defect = false;
  for (std::size_t ia = 0; ia < grid; ++ia)
    for (std::size_t ib = 0; ib < grid; ++ib) {
      if (pay[ia][ib].first < best_a[ib] - kEquilibriumTolerance) continue;
      if (pay[ia][ib].second < best_b[ia] - kEquilibriumTolerance) continue;
      check.equilibria.emplace_back(ps[ia], ps[ib]);
      if (ia == grid - 1 && ib == grid - 1) all_defect = true;
    }

  check.unique_all_defect = all_defect && check.equilibria.size() == 1;
  if (all_defect) {
    check.pa_d = check.pb_d = 1.0;
  } else if (!check.equilibria.empty()) {
    std::tie(check.pa_d, check.pb_d) = check.equilibria.front();
  }
  check.payoffs = classical_mixed(check.pa_d, check.pb_d, table);
  return check;
}

OpponentPolicy OpponentPolicy::parse(std::string_view text) {
  std::string lowered(text);
  for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lowered == "nash") return nash();
  if (lowered == "best" || lowered == "best_response" || lowered == "best-response") return best_response();
  if (const auto n = named_strategy_from_string(text)) return fixed(*n);
  throw std::invalid_argument("unknown opponent policy '" + std::string(text) +
                              "' (expected nash, best or a strategy name)");
}

std::string OpponentPolicy::to_string() const {
  switch (kind_) {
    case Kind::Fixed: return std::string(qpd::to_string(fixed_));
    case Kind::BestResponse: return "best_response";
    case Kind::Nash: return "nash";
  }
  return "?";
}

Strategy OpponentPolicy::choose(const Strategy& alice, std::size_t grid, Backend backend,
                                const PayoffTable& table) const {
  switch (kind_) {
    case Kind::Fixed: return fixed_;
    case Kind::Nash: return NamedStrategy::iZ;
    case Kind::BestResponse:
      return qpd::best_response(alice, grid, backend, table, Role::Bob).param.strategy().canonical();
  }
  return NamedStrategy::iZ;
}

}  // namespace qpd
