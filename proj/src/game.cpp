#include "qpd/game.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qpd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<double> parse_plain_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// number | pi | [number*]pi[/number]
std::optional<double> parse_angle(std::string_view s) {
  s = trim(s);
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return parse_plain_number(s);

  double factor = 1.0;
  std::string_view head = trim(s.substr(0, pos));
  if (!head.empty()) {
    if (head == "-") {
      factor = -1.0;
    } else {
      if (head.back() != '*') return std::nullopt;
      head.remove_suffix(1);
      const auto f = parse_plain_number(head);
      if (!f) return std::nullopt;
      factor = *f;
    }
  }
  std::string_view tail = trim(s.substr(pos + 2));
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const auto d = parse_plain_number(tail.substr(1));
    if (!d || *d == 0.0) return std::nullopt;
    divisor = *d;
  }
  return factor * kPi / divisor;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void PayoffTable::set(Move alice, Move bob, double a, double b) {
  r_a[static_cast<int>(alice)][static_cast<int>(bob)] = a;
  r_b[static_cast<int>(alice)][static_cast<int>(bob)] = b;
}

double PayoffTable::min_entry() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& grid : {r_a, r_b})
    for (const auto& row : grid)
      for (double v : row) m = std::min(m, v);
  return m;
}

double PayoffTable::max_entry() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& grid : {r_a, r_b})
    for (const auto& row : grid)
      for (double v : row) m = std::max(m, v);
  return m;
}

bool PayoffTable::is_symmetric() const {
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n)
      if (r_a[m][n] != r_b[n][m]) return false;
  return true;
}

void PayoffTable::validate() const {
  for (const auto& grid : {r_a, r_b})
    for (const auto& row : grid)
      for (double v : row)
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("payoff entries must be finite and nonnegative");
}

std::string_view to_string(NamedStrategy s) {
  switch (s) {
    case NamedStrategy::iX: return "iX";
    case NamedStrategy::Q1: return "Q1";
    case NamedStrategy::I: return "I";
    case NamedStrategy::Q2: return "Q2";
    case NamedStrategy::iZ: return "iZ";
  }
  return "?";
}

std::optional<NamedStrategy> named_strategy_from_string(std::string_view name) {
  name = trim(name);
  for (NamedStrategy s : kNamedStrategies)
    if (iequals(name, to_string(s))) return s;
  return std::nullopt;
}

ConverterParams params_of(NamedStrategy s) {
  switch (s) {
    case NamedStrategy::iX: return {45.0, kPi};
    case NamedStrategy::Q1: return {45.0, kPi / 2.0};
    case NamedStrategy::I: return {0.0, 0.0};
    case NamedStrategy::Q2: return {0.0, kPi / 2.0};
    case NamedStrategy::iZ: return {0.0, kPi};
  }
  return {};
}

bool is_classical(NamedStrategy s) { return s == NamedStrategy::I || s == NamedStrategy::iX; }

std::optional<NamedStrategy> Strategy::name() const {
  if (const auto* n = std::get_if<NamedStrategy>(&value_)) return *n;
  return std::nullopt;
}

ConverterParams Strategy::params() const {
  if (const auto* n = std::get_if<NamedStrategy>(&value_)) return params_of(*n);
  return std::get<ConverterParams>(value_);
}

Strategy Strategy::canonical() const {
  if (name()) return *this;
  const ConverterParams p = params();
  for (NamedStrategy s : kNamedStrategies)
    if (params_of(s) == p) return s;
  return *this;
}

std::string Strategy::label() const {
  if (const auto n = name()) return std::string(to_string(*n));
  const auto p = params();
  return "C(" + format_number(p.theta_deg) + ", " + format_number(p.phi_rad) + ")";
}

bool operator==(const Strategy& a, const Strategy& b) { return a.value_ == b.value_; }

Strategy parse_strategy(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto n = named_strategy_from_string(s)) return *n;

  if (s.size() >= 2 && (s[0] == 'C' || s[0] == 'c')) {
    std::string_view rest = trim(s.substr(1));
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
      rest = rest.substr(1, rest.size() - 2);
      const auto comma = rest.find(',');
      if (comma != std::string_view::npos) {
        const auto theta = parse_plain_number(rest.substr(0, comma));
        const auto phi = parse_angle(rest.substr(comma + 1));
        if (theta && phi) return Strategy::converter(*theta, *phi);
      }
    }
  }
  throw StrategyParseError("cannot parse strategy '" + std::string(s) +
                           "' (expected iX, Q1, I, Q2, iZ or C(<deg>, <rad>))");
}

std::string_view to_string(Backend b) { return b == Backend::Abstract ? "abstract" : "optical"; }

Backend parse_backend(std::string_view text) {
  if (iequals(trim(text), "abstract")) return Backend::Abstract;
  if (iequals(trim(text), "optical")) return Backend::Optical;
  throw std::invalid_argument("unknown backend '" + std::string(text) + "' (expected abstract or optical)");
}

std::pair<double, double> payoffs(const std::array<double, 4>& probs, const PayoffTable& table) {
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw BadDistribution("probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw BadDistribution("probabilities must sum to 1");

  double a = 0.0;
  double b = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      const double p = probs[SpinOrbitState::index_of(m, n)];
      a += p * table.r_a[m][n];
      b += p * table.r_b[m][n];
    }
  return {a, b};
}

std::pair<double, double> classical_mixed(double pa_d, double pb_d, const PayoffTable& table) {
  if (!(pa_d >= 0.0 && pa_d <= 1.0 && pb_d >= 0.0 && pb_d <= 1.0))
    throw std::invalid_argument("defection probabilities must lie in [0, 1]");
  const std::array<double, 2> pa{1.0 - pa_d, pa_d};
  const std::array<double, 2> pb{1.0 - pb_d, pb_d};
  std::array<double, 4> joint{};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) joint[SpinOrbitState::index_of(m, n)] = pa[m] * pb[n];
  return payoffs(joint, table);
}

Outcome run_protocol(const Element2& a, const Element2& b, Backend backend, const PayoffTable& table) {
  if (!a.is_unitary(Tolerances{}.pipeline) || !b.is_unitary(Tolerances{}.pipeline))
    throw std::invalid_argument("player moves must be unitary");
  const Element4 moves = tensor(a, b);
  SpinOrbitState final_state;
  if (backend == Backend::Abstract) {
    const Element4 u = entangler();
    final_state = apply(adjoint(u) * moves * u, SpinOrbitState::basis(0));
  } else {
    const Element4& undo = disentangler_calibration().calibrated();
    final_state = apply(undo * moves, prepare_initial());
  }

  Outcome out;
  out.amplitudes = final_state.amplitudes();
  for (std::size_t i = 0; i < 4; ++i) out.probs[i] = std::norm(out.amplitudes[i]);
  // Renormalize away rounding so the payoff precondition holds exactly.
  double total = 0.0;
  for (double p : out.probs) total += p;
  for (double& p : out.probs) p /= total;
  std::tie(out.payoff_a, out.payoff_b) = payoffs(out.probs, table);
  return out;
}

Outcome run_protocol(const Strategy& a, const Strategy& b, Backend backend, const PayoffTable& table) {
  return run_protocol(a.matrix(), b.matrix(), backend, table);
}

NormalizedIntensities intensities_to_probs(const Intensities& x) {
  if (!std::isfinite(x.background) || x.background < 0.0)
    throw std::invalid_argument("background must be finite and nonnegative");
  NormalizedIntensities out;
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(x.i_mn[i]) || x.i_mn[i] < 0.0)
      throw std::invalid_argument("intensities must be finite and nonnegative");
    double v = x.i_mn[i] - x.background;
    if (v < 0.0) {
      v = 0.0;
      out.clamped = true;
    }
    out.probs[i] = v;
    total += v;
  }
  if (total <= 0.0) throw AllDark();
  for (double& p : out.probs) p /= total;
  return out;
}

std::vector<std::vector<Outcome>> coefficient_table(const std::vector<Strategy>& strategies, Backend backend,
                                                    const PayoffTable& table) {
  std::vector<std::vector<Outcome>> grid(strategies.size(), std::vector<Outcome>(strategies.size()));
  for (std::size_t i = 0; i < strategies.size(); ++i)
    for (std::size_t j = 0; j < strategies.size(); ++j)
      grid[i][j] = run_protocol(strategies[i], strategies[j], backend, table);
  return grid;
}

std::vector<Strategy> named_strategy_set() { return {kNamedStrategies.begin(), kNamedStrategies.end()}; }

}  // namespace qpd
