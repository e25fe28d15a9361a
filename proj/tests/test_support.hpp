#pragma once

#include <cmath>
#include <random>

#include "qpd/qmath.hpp"

namespace qpd::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240607);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Complex gaussian_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

/// Haar-random SU(2) from a uniformly random unit quaternion.
inline Element2 random_su2() {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  for (double& v : q) {
    v = n(rng());
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  return Element2({Complex{q[0], q[1]}, Complex{q[2], q[3]}, Complex{-q[2], q[3]}, Complex{q[0], -q[1]}});
}

/// Random U(N) by Gram-Schmidt on a complex Gaussian matrix.
template <std::size_t N>
SquareMatrix<N> random_unitary() {
  SquareMatrix<N> m;
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t r = 0; r < N; ++r) m(r, c) = gaussian_complex();
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < N; ++r) dot += std::conj(m(r, p)) * m(r, c);
      for (std::size_t r = 0; r < N; ++r) m(r, c) -= dot * m(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < N; ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < N; ++r) m(r, c) /= norm;
  }
  return m;
}

inline SpinOrbitState random_state() {
  SpinOrbitState::Amplitudes amp;
  for (auto& a : amp) a = gaussian_complex();
  return SpinOrbitState(amp).normalized();
}

}  // namespace qpd::testing
