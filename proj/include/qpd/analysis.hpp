#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpd/game.hpp"

namespace qpd {

/// One coordinate along the two swept strategy segments.
///
/// t in [0, 1] maps to C(0°, t·π) (I towards iZ); t in [-1, 0) maps to
/// C(45°, |t|·π) (I towards iX). Both sides meet at the identity for t = 0.
class StrategyParam {
 public:
  /// Throws std::invalid_argument when |t| > 1 or t is not finite.
  explicit StrategyParam(double t);

  double t() const { return t_; }
  ConverterParams params() const;
  Strategy strategy() const { return Strategy(params()); }

 private:
  double t_;
};

/// The 2n−1 fused sweep coordinates −1, …, 0, …, 1 (segments share t = 0).
std::vector<double> param_grid(std::size_t n_per_segment);

struct SurfacePoint {
  double t_a = 0.0;
  double t_b = 0.0;
  double payoff_a = 0.0;
  double payoff_b = 0.0;
};

/// Payoff surface over the fused (t_a, t_b) grid, row-major with t_a as rows.
struct Surface {
  std::vector<double> ts;
  std::vector<SurfacePoint> points;

  std::size_t side() const { return ts.size(); }
  const SurfacePoint& at(std::size_t ia, std::size_t ib) const { return points[ia * ts.size() + ib]; }
};

/// Evaluates run_protocol on the full (2n−1)² grid. Requires n ≥ 2.
Surface sweep(std::size_t n_per_segment, Backend backend = Backend::Abstract, const PayoffTable& table = {});

enum class Role { Alice, Bob };

struct BestResponse {
  StrategyParam param{0.0};
  double payoff = 0.0;
};

/// Grid search over the two-segment family for the move that maximizes the
/// responder's payoff against `opponent`. Ties within 1e-9 go to the smallest
/// |t|, then to t ≥ 0. Requires grid ≥ 3.
BestResponse best_response(const Strategy& opponent, std::size_t grid, Backend backend = Backend::Abstract,
                           const PayoffTable& table = {}, Role responder = Role::Alice);

struct EquilibriumReport {
  std::vector<Strategy> strategies;
  /// payoffs[i][j] for Alice on strategies[i], Bob on strategies[j].
  std::vector<std::vector<std::pair<double, double>>> payoffs;
  std::vector<std::pair<std::size_t, std::size_t>> equilibria;
  /// Pairs Pareto-dominated by the reference pair (iZ, iZ) when it is in the set.
  std::vector<std::pair<std::size_t, std::size_t>> dominated_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> pareto_front;
  std::optional<std::pair<std::size_t, std::size_t>> reference;

  bool is_equilibrium(std::size_t i, std::size_t j) const;
  bool is_pareto(std::size_t i, std::size_t j) const;
};

inline constexpr double kEquilibriumTolerance = 1e-9;

/// Exhaustive pure-strategy Nash check over every ordered pair of `set`.
EquilibriumReport nash_discrete(const std::vector<Strategy>& set, Backend backend = Backend::Abstract,
                                const PayoffTable& table = {});

/// Largest gain either player could get by deviating unilaterally within the set.
double max_unilateral_gain(const EquilibriumReport& report, std::size_t i, std::size_t j);

struct ClassicalCheck {
  /// True iff (1, 1) is the only mutual best response on the grid.
  bool unique_all_defect = false;
  std::vector<std::pair<double, double>> equilibria;
  double pa_d = 0.0;
  double pb_d = 0.0;
  std::pair<double, double> payoffs{0.0, 0.0};
};

/// Searches the (p_A(D), p_B(D)) grid for mutual best responses of the
/// classical mixed game. `pa_d`/`pb_d` hold the first equilibrium found
/// (or (1, 1) when it is among them). Requires grid ≥ 2.
ClassicalCheck classical_minimum_check(std::size_t grid, const PayoffTable& table = {});

/// How the computer-controlled player (Bob) picks a move each round.
class OpponentPolicy {
 public:
  enum class Kind { Fixed, BestResponse, Nash };

  static OpponentPolicy fixed(NamedStrategy s) { return OpponentPolicy(Kind::Fixed, s); }
  static OpponentPolicy best_response() { return OpponentPolicy(Kind::BestResponse, NamedStrategy::iZ); }
  static OpponentPolicy nash() { return OpponentPolicy(Kind::Nash, NamedStrategy::iZ); }

  /// Accepts "nash", "best", "best_response" or a catalogue name.
  static OpponentPolicy parse(std::string_view text);

  Kind kind() const { return kind_; }
  std::string to_string() const;

  /// Bob's move against Alice's `alice`; best-response scans `grid` points per
  /// segment and maps exact catalogue hits back to their names.
  Strategy choose(const Strategy& alice, std::size_t grid, Backend backend = Backend::Abstract,
                  const PayoffTable& table = {}) const;

 private:
  OpponentPolicy(Kind kind, NamedStrategy s) : kind_(kind), fixed_(s) {}
  Kind kind_;
  NamedStrategy fixed_;
};

}  // namespace qpd
