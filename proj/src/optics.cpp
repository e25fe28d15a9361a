#include "qpd/optics.hpp"

#include <cstdio>
#include <string>

namespace qpd {

namespace {

Complex unit_phase(Complex z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : Complex{1.0, 0.0};
}

std::string calibration_message(double residual) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "calibration failed: best residual %.3e", residual);
  return buf;
}

}  // namespace

Element2 mode_converter(const ConverterParams& p) {
  if (!std::isfinite(p.theta_deg) || !std::isfinite(p.phi_rad))
    throw std::invalid_argument("converter angles must be finite");
  const double two_theta = 2.0 * deg_to_rad(p.theta_deg);
  const double c = std::cos(p.phi_rad / 2.0);
  const double s = std::sin(p.phi_rad / 2.0);
  const Complex off = kI * s * std::sin(two_theta);
  return Element2({Complex{c, s * std::cos(two_theta)}, off,  //
                   off, Complex{c, -s * std::cos(two_theta)}});
}

Element4 mz(double phi_rad) {
  const Complex e = std::polar(1.0, phi_rad);
  Element4 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  m(2, 3) = -e;
  m(3, 2) = e;
  return m;
}

Element4 entangler() {
  const double h = 1.0 / std::sqrt(2.0);
  return Element4({h, 0.0, 0.0, kI * h,  //
                   0.0, h, kI * h, 0.0,  //
                   0.0, kI * h, h, 0.0,  //
                   kI * h, 0.0, 0.0, h});
}

SpinOrbitState prepare_initial() {
  const Element4 qwp = tensor(mode_converter({45.0, kPi / 2.0}), Element2::identity());
  const SpinOrbitState out = apply(mz(0.0) * qwp, SpinOrbitState::basis(0));

  const double h = 1.0 / std::sqrt(2.0);
  const SpinOrbitState expected({h, 0.0, 0.0, kI * h});
  if (distance_up_to_global_phase(out, expected) > Tolerances{}.pipeline)
    throw std::logic_error("preparation bench does not produce (|CC> + i|DD>)/sqrt(2)");
  return out;
}

Element4 disentangler_pipeline() {
  const Element4 qwp = tensor(mode_converter({-45.0, kPi / 2.0}), Element2::identity());
  return mz(0.0) * qwp * mz(kPi / 2.0);
}

Element4 PipelineReport::calibrated() const {
  Element4 r = realized;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) *= calibration[j];
  return r;
}

CalibrationFailed::CalibrationFailed(PipelineReport best)
    : std::runtime_error(calibration_message(best.residual)), best_(std::move(best)) {}

PipelineReport calibrate(const Element4& realized, const Element4& target, const Tolerances& tol) {
  if (!realized.is_unitary(tol.pipeline) || !target.is_unitary(tol.pipeline))
    throw std::invalid_argument("calibrate expects unitary matrices");

  // Column j of realized·D is d_j·r_j. For fixed g the least-squares phase is
  // d_j = g·phase(<r_j, t_j>); pinning d_0 = 1 then fixes g from column 0.
  std::array<Complex, 4> overlap{};
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) overlap[j] += std::conj(realized(i, j)) * target(i, j);

  PipelineReport report;
  report.target = target;
  report.realized = realized;
  report.global_phase = std::conj(unit_phase(overlap[0]));
  for (std::size_t j = 0; j < 4; ++j) report.calibration[j] = report.global_phase * unit_phase(overlap[j]);
  report.calibration[0] = 1.0;
  report.residual = max_abs_diff(report.calibrated(), report.global_phase * target);

  if (report.residual > tol.pipeline) throw CalibrationFailed(report);
  return report;
}

const PipelineReport& disentangler_calibration() {
  static const PipelineReport report = calibrate(disentangler_pipeline(), adjoint(entangler()));
  return report;
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::QWP: return "QWP";
    case ElementKind::HWP: return "HWP";
    case ElementKind::DovePrism: return "DovePrism";
    case ElementKind::CylindricalConverter: return "CylindricalConverter";
  }
  return "unknown";
}

Element2 named_element(ElementKind kind, double theta_deg, std::optional<double> phi_rad) {
  switch (kind) {
    case ElementKind::QWP: return mode_converter({theta_deg, kPi / 2.0});
    case ElementKind::HWP:
    case ElementKind::DovePrism: return mode_converter({theta_deg, kPi});
    case ElementKind::CylindricalConverter:
      if (!phi_rad) throw MissingPhase();
      return mode_converter({theta_deg, *phi_rad});
  }
  throw std::invalid_argument("unknown element kind");
}

}  // namespace qpd
