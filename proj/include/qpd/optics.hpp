#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "qpd/qmath.hpp"

namespace qpd {

/// Rotation angle (degrees) and retardation (radians) of a mode converter.
struct ConverterParams {
  double theta_deg = 0.0;
  double phi_rad = 0.0;

  friend bool operator==(const ConverterParams&, const ConverterParams&) = default;
};

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// SU(2) mode converter rotated by theta with retardation phi between the two
/// eigenmodes. Acts on either polarization (wave plates) or the first-order
/// spatial modes (Dove prism, cylindrical lens pairs).
Element2 mode_converter(const ConverterParams& p);

/// Mach-Zehnder stage with polarizing beam splitters and a Dove prism in the
/// V arm; phi is the relative arm phase.
Element4 mz(double phi_rad);

/// The game's entangling operation (I + i X⊗X)/√2.
Element4 entangler();

/// Runs the preparation bench (QWP at 45° on polarization, then a balanced
/// MZ) on ψ_h ê_H. Throws std::logic_error if the result drifts from
/// (1, 0, 0, i)/√2 by more than 1e-9 after global-phase alignment.
SpinOrbitState prepare_initial();

/// Literal product MZ(0)·[C(−45°, π/2) ⊗ I]·MZ(π/2). The rightmost stage is
/// the first one the beam traverses.
Element4 disentangler_pipeline();

/// Result of fitting a realized optical pipeline to a target matrix.
struct PipelineReport {
  Element4 target;
  Element4 realized;
  /// Diagonal unimodular phases D applied before `realized`; D[0] == 1.
  std::array<Complex, 4> calibration{1.0, 1.0, 1.0, 1.0};
  /// Global phase g with realized·D ≈ g·target.
  Complex global_phase{1.0, 0.0};
  /// ‖realized·D − g·target‖_max
  double residual = 0.0;

  /// realized·D, the matrix the optical backend actually uses.
  Element4 calibrated() const;
};

class CalibrationFailed : public std::runtime_error {
 public:
  explicit CalibrationFailed(PipelineReport best);
  double residual() const { return best_.residual; }
  const PipelineReport& best() const { return best_; }

 private:
  PipelineReport best_;
};

/// Fits a diagonal phase D (first entry pinned to 1) and a global phase g
/// minimizing ‖realized·D − g·target‖. Throws CalibrationFailed when the best
/// residual exceeds `tol.pipeline`; a failure means the two matrices differ by
/// more than a phase gauge.
PipelineReport calibrate(const Element4& realized, const Element4& target, const Tolerances& tol = {});

/// calibrate(disentangler_pipeline(), adjoint(entangler())), computed once.
const PipelineReport& disentangler_calibration();

enum class ElementKind { QWP, HWP, DovePrism, CylindricalConverter };

std::string_view to_string(ElementKind kind);

class MissingPhase : public std::invalid_argument {
 public:
  MissingPhase() : std::invalid_argument("cylindrical converter requires a retardation phase") {}
};

/// Catalogue element rotated by theta_deg. Only the cylindrical converter has a
/// variable retardation and therefore needs phi.
Element2 named_element(ElementKind kind, double theta_deg, std::optional<double> phi_rad = std::nullopt);

}  // namespace qpd
