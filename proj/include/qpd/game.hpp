#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qpd/optics.hpp"
#include "qpd/qmath.hpp"

namespace qpd {

enum class Move { C = 0, D = 1 };

/// Penalty reductions R_A(m, n) and R_B(m, n), indexed [alice move][bob move].
struct PayoffTable {
  using Grid = std::array<std::array<double, 2>, 2>;

  Grid r_a{{{3.0, 0.0}, {5.0, 1.0}}};
  Grid r_b{{{3.0, 5.0}, {0.0, 1.0}}};

  static PayoffTable standard() { return {}; }

  /// Sets both reductions for one outcome.
  void set(Move alice, Move bob, double a, double b);

  double min_entry() const;
  double max_entry() const;
  bool is_symmetric() const;

  /// Throws std::invalid_argument on negative or non-finite entries.
  void validate() const;
};

enum class NamedStrategy { iX, Q1, I, Q2, iZ };

inline constexpr std::array<NamedStrategy, 5> kNamedStrategies{
    NamedStrategy::iX, NamedStrategy::Q1, NamedStrategy::I, NamedStrategy::Q2, NamedStrategy::iZ};

std::string_view to_string(NamedStrategy s);
std::optional<NamedStrategy> named_strategy_from_string(std::string_view name);
ConverterParams params_of(NamedStrategy s);
/// I and iX are the embedded classical moves (cooperate, defect).
bool is_classical(NamedStrategy s);

/// A player's move: one of the catalogue strategies or an arbitrary C(θ, φ).
class Strategy {
 public:
  Strategy(NamedStrategy name) : value_(name) {}  // NOLINT(google-explicit-constructor)
  Strategy(ConverterParams params) : value_(params) {}  // NOLINT(google-explicit-constructor)

  static Strategy converter(double theta_deg, double phi_rad) { return Strategy(ConverterParams{theta_deg, phi_rad}); }

  std::optional<NamedStrategy> name() const;
  ConverterParams params() const;
  Element2 matrix() const { return mode_converter(params()); }

  /// The catalogue strategy with exactly these parameters, if any; else *this.
  Strategy canonical() const;

  /// "iZ" for catalogue moves, "C(30, 1)" otherwise.
  std::string label() const;

  friend bool operator==(const Strategy& a, const Strategy& b);

 private:
  std::variant<NamedStrategy, ConverterParams> value_;
};

class StrategyParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `NAME` (iX, Q1, I, Q2, iZ) or `C(<deg>, <rad>)`.
Strategy parse_strategy(std::string_view text);

enum class Backend { Abstract, Optical };

std::string_view to_string(Backend b);
/// Accepts "abstract" / "optical" (case-insensitive).
Backend parse_backend(std::string_view text);

/// Amplitudes and probabilities indexed 2·alice_bit + bob_bit (CC, CD, DC, DD).
struct Outcome {
  std::array<Complex, 4> amplitudes{};
  std::array<double, 4> probs{};
  double payoff_a = 0.0;
  double payoff_b = 0.0;
};

inline constexpr std::array<std::string_view, 4> kPortLabels{"CC", "CD", "DC", "DD"};

class BadDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Expected penalty reductions Σ p(m,n)·R_j(m,n). Throws BadDistribution on
/// negative entries or a total off by more than 1e-9.
std::pair<double, double> payoffs(const std::array<double, 4>& probs, const PayoffTable& table = {});

/// Payoffs when Alice defects with probability pa_d and Bob with pb_d
/// independently.
std::pair<double, double> classical_mixed(double pa_d, double pb_d, const PayoffTable& table = {});

/// Plays one round: entangle, apply C_A ⊗ C_B, disentangle, project.
///
/// The abstract backend uses the algebraic entangler and its adjoint; the
/// optical backend starts from the preparation bench output and uses the
/// calibrated MZ/QWP/MZ disentangler. Probabilities are |c_mn|².
/// The optical backend propagates CalibrationFailed.
Outcome run_protocol(const Strategy& a, const Strategy& b, Backend backend = Backend::Abstract,
                     const PayoffTable& table = {});
Outcome run_protocol(const Element2& a, const Element2& b, Backend backend = Backend::Abstract,
                     const PayoffTable& table = {});

/// Photodetector readings for the four ports plus a common background level.
struct Intensities {
  std::array<double, 4> i_mn{};
  double background = 0.0;
};

struct NormalizedIntensities {
  std::array<double, 4> probs{};
  /// Set when background subtraction drove at least one channel negative.
  bool clamped = false;
};

class AllDark : public std::runtime_error {
 public:
  AllDark() : std::runtime_error("all ports dark after background subtraction") {}
};

/// Subtracts the background, clamps negative channels to zero and divides by
/// the corrected total.
NormalizedIntensities intensities_to_probs(const Intensities& x);

/// Outcome for every ordered pair; result[i][j] has Alice on strategies[i].
std::vector<std::vector<Outcome>> coefficient_table(const std::vector<Strategy>& strategies,
                                                    Backend backend = Backend::Abstract,
                                                    const PayoffTable& table = {});

std::vector<Strategy> named_strategy_set();

}  // namespace qpd
