#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpd {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Comparison thresholds used across the library.
///
/// `algebraic` bounds exact identities (unitarity, mixed products, phase
/// composition); `pipeline` bounds end-to-end comparisons that chain several
/// matrix products together.
struct Tolerances {
  double algebraic = 1e-12;
  double pipeline = 1e-9;
};

/// Thrown when an operation requires a unit-norm state and gets something else.
class NotNormalized : public std::invalid_argument {
 public:
  explicit NotNormalized(double norm);
  double norm() const { return norm_; }

 private:
  double norm_;
};

/// Dense N x N complex matrix stored row-major.
template <std::size_t N>
class SquareMatrix {
 public:
  static constexpr std::size_t kDim = N;

  constexpr SquareMatrix() = default;
  explicit constexpr SquareMatrix(const std::array<Complex, N * N>& entries) : m_(entries) {}

  static SquareMatrix identity() {
    SquareMatrix r;
    for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
    return r;
  }

  Complex& operator()(std::size_t row, std::size_t col) { return m_[row * N + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return m_[row * N + col]; }

  const std::array<Complex, N * N>& entries() const { return m_; }

  SquareMatrix adjoint() const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend SquareMatrix operator*(Complex s, const SquareMatrix& a) {
    SquareMatrix r = a;
    for (auto& v : r.m_) v *= s;
    return r;
  }

  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix r = a;
    for (std::size_t i = 0; i < N * N; ++i) r.m_[i] += b.m_[i];
    return r;
  }

  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix r = a;
    for (std::size_t i = 0; i < N * N; ++i) r.m_[i] -= b.m_[i];
    return r;
  }

  /// Largest entry modulus.
  double max_abs() const {
    double best = 0.0;
    for (const auto& v : m_) best = std::max(best, std::abs(v));
    return best;
  }

  /// ‖M†M − I‖_max
  double unitarity_defect() const { return (adjoint() * (*this) - identity()).max_abs(); }

  bool is_unitary(double tol = Tolerances{}.algebraic) const { return unitarity_defect() <= tol; }

  bool all_finite() const {
    for (const auto& v : m_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  std::array<Complex, N * N> m_{};
};

/// Single degree of freedom element (polarization or first-order spatial mode).
using Element2 = SquareMatrix<2>;
/// Full spin-orbit mode element.
using Element4 = SquareMatrix<4>;

template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  return (a - b).max_abs();
}

inline Complex determinant(const Element2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Pauli matrices in the single-qubit basis {C, D}.
Element2 pauli_x();
Element2 pauli_y();
Element2 pauli_z();

/// Four-component spin-orbit mode.
///
/// Basis order is polarization-major: [ψ_h ê_H, ψ_v ê_H, ψ_h ê_V, ψ_v ê_V].
/// Polarization carries Alice's qubit (H = C, V = D) and the spatial mode
/// carries Bob's (h = C, v = D), so amplitude index = 2 * alice_bit + bob_bit.
class SpinOrbitState {
 public:
  using Amplitudes = std::array<Complex, 4>;

  SpinOrbitState() : amp_{Complex{1.0, 0.0}, 0.0, 0.0, 0.0} {}
  /// Throws std::invalid_argument on non-finite amplitudes.
  explicit SpinOrbitState(const Amplitudes& amp);

  static SpinOrbitState basis(std::size_t index);
  static constexpr std::size_t index_of(int alice_bit, int bob_bit) {
    return static_cast<std::size_t>(2 * alice_bit + bob_bit);
  }

  const Complex& operator[](std::size_t i) const { return amp_[i]; }
  const Amplitudes& amplitudes() const { return amp_; }

  double norm() const;
  /// Throws std::invalid_argument for the zero vector.
  SpinOrbitState normalized() const;
  bool is_normalized(double tol = Tolerances{}.algebraic) const;

  double probability(std::size_t i) const { return std::norm(amp_[i]); }

 private:
  Amplitudes amp_;
};

double max_abs_diff(const SpinOrbitState& a, const SpinOrbitState& b);

/// Max-norm distance between `a` and `b` after rotating b onto a's global phase.
double distance_up_to_global_phase(const SpinOrbitState& a, const SpinOrbitState& b);

/// Kronecker product. The first factor acts on polarization (Alice), the
/// second on the spatial mode (Bob).
Element4 tensor(const Element2& a, const Element2& b);

SpinOrbitState apply(const Element4& m, const SpinOrbitState& s);

Element4 adjoint(const Element4& m);

/// Spin-orbit concurrence 2·|αδ − βγ|, in [0, 1] for unit-norm states.
/// Throws NotNormalized if ‖s‖ is off by more than 1e-6.
double concurrence(const SpinOrbitState& s);

std::string to_string(const Complex& z, int precision = 6);

}  // namespace qpd
