#include "qpd/qmath.hpp"

#include <cstdio>
#include <string>

namespace qpd {

NotNormalized::NotNormalized(double norm)
    : std::invalid_argument("state is not normalized (norm " + std::to_string(norm) + ")"),
      norm_(norm) {}

Element2 pauli_x() { return Element2({0.0, 1.0, 1.0, 0.0}); }
Element2 pauli_y() { return Element2({0.0, -kI, kI, 0.0}); }
Element2 pauli_z() { return Element2({1.0, 0.0, 0.0, -1.0}); }

SpinOrbitState::SpinOrbitState(const Amplitudes& amp) : amp_(amp) {
  for (const auto& a : amp_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("spin-orbit amplitudes must be finite");
  }
}

SpinOrbitState SpinOrbitState::basis(std::size_t index) {
  if (index >= 4) throw std::out_of_range("basis index must be in [0, 4)");
  Amplitudes amp{};
  amp[index] = 1.0;
  return SpinOrbitState(amp);
}

double SpinOrbitState::norm() const {
  double sum = 0.0;
  for (const auto& a : amp_) sum += std::norm(a);
  return std::sqrt(sum);
}

SpinOrbitState SpinOrbitState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero state");
  Amplitudes amp = amp_;
  for (auto& a : amp) a /= n;
  return SpinOrbitState(amp);
}

bool SpinOrbitState::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

double max_abs_diff(const SpinOrbitState& a, const SpinOrbitState& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < 4; ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

double distance_up_to_global_phase(const SpinOrbitState& a, const SpinOrbitState& b) {
  // The overlap <b|a> fixes the phase that best aligns b onto a.
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(b[i]) * a[i];
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  double best = 0.0;
  for (std::size_t i = 0; i < 4; ++i) best = std::max(best, std::abs(a[i] - phase * b[i]));
  return best;
}

Element4 tensor(const Element2& a, const Element2& b) {
  Element4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
  return r;
}

SpinOrbitState apply(const Element4& m, const SpinOrbitState& s) {
  SpinOrbitState::Amplitudes out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) out[i] += m(i, k) * s[k];
  return SpinOrbitState(out);
}

Element4 adjoint(const Element4& m) { return m.adjoint(); }

double concurrence(const SpinOrbitState& s) {
  const double n = s.norm();
  if (std::abs(n - 1.0) > 1e-6) throw NotNormalized(n);
  return 2.0 * std::abs(s[0] * s[3] - s[1] * s[2]);
}

std::string to_string(const Complex& z, int precision) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*g%+.*gi", precision, z.real(), precision, z.imag());
  return buf;
}

}  // namespace qpd
