#include "doctest.h"

#include "oracle.hpp"
#include "qpd/optics.hpp"
#include "qpd/qmath.hpp"
#include "test_support.hpp"

using namespace qpd;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("tensor of identities is the 4x4 identity") {
  CHECK(max_abs_diff(tensor(Element2::identity(), Element2::identity()), Element4::identity()) == 0.0);
}

TEST_CASE("tensor(X, I) flips Alice's bit only") {
  const auto out = apply(tensor(pauli_x(), Element2::identity()), SpinOrbitState::basis(0));
  CHECK(max_abs_diff(out, SpinOrbitState::basis(2)) == 0.0);
  const auto out3 = apply(tensor(pauli_x(), Element2::identity()), SpinOrbitState::basis(3));
  CHECK(max_abs_diff(out3, SpinOrbitState::basis(1)) == 0.0);
}

TEST_CASE("tensor follows the index formula on random factors") {
  for (int trial = 0; trial < 20; ++trial) {
    const Element2 a = testing::random_unitary<2>();
    const Element2 b = testing::random_unitary<2>();
    const SpinOrbitState v = testing::random_state();
    const SpinOrbitState got = apply(tensor(a, b), v);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        Complex expect = 0.0;
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t l = 0; l < 2; ++l) expect += a(i, k) * b(j, l) * v[2 * k + l];
        CHECK(std::abs(got[2 * i + j] - expect) < 1e-14);
      }
  }
}

TEST_CASE("tensor(iZ, iX) on the entangled state") {
  const Element2 iz = kI * pauli_z();
  const Element2 ix = kI * pauli_x();
  const auto start = apply(entangler(), SpinOrbitState::basis(0));
  const auto got = apply(tensor(iz, ix), start);
  // (−|CD⟩ + i|DC⟩)/√2
  const SpinOrbitState expected({0.0, -kH, kI * kH, 0.0});
  CHECK(max_abs_diff(got, expected) < 1e-12);

  // Same thing through the brute-force oracle.
  const oracle::Mat2 oz{{{oracle::C(0, 1), 0}, {0, oracle::C(0, -1)}}};
  const oracle::Mat2 ox{{{0, oracle::C(0, 1)}, {oracle::C(0, 1), 0}}};
  const auto o = oracle::mul(oracle::kron(oz, ox), oracle::mul(oracle::entangler(), oracle::Vec4{1, 0, 0, 0}));
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(o[k] - got[k]) < 1e-12);
}

TEST_CASE("apply") {
  const SpinOrbitState s = testing::random_state();
  CHECK(max_abs_diff(apply(Element4::identity(), s), s) == 0.0);

  const auto bell = apply(entangler(), SpinOrbitState::basis(0));
  CHECK(max_abs_diff(bell, SpinOrbitState({kH, 0.0, 0.0, kI * kH})) < 1e-15);

  const Element4 u = entangler();
  CHECK(max_abs_diff(apply(adjoint(u), apply(u, s)), s) < 1e-12);
}

TEST_CASE("adjoint") {
  CHECK(max_abs_diff(adjoint(Element4::identity()), Element4::identity()) == 0.0);
  CHECK(max_abs_diff(adjoint(entangler()) * entangler(), Element4::identity()) < 1e-12);
  const Element4 m = testing::random_unitary<4>();
  CHECK(max_abs_diff(adjoint(adjoint(m)), m) == 0.0);
  Element4 g;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = testing::gaussian_complex();
  CHECK(max_abs_diff(adjoint(adjoint(g)), g) == 0.0);
  CHECK(adjoint(g)(1, 3) == std::conj(g(3, 1)));
}

TEST_CASE("concurrence") {
  CHECK(concurrence(SpinOrbitState::basis(0)) == doctest::Approx(0.0));
  CHECK(concurrence(SpinOrbitState({kH, 0.0, 0.0, kI * kH})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(concurrence(SpinOrbitState({std::sqrt(0.9), 0.0, 0.0, std::sqrt(0.1)})) ==
        doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(concurrence(SpinOrbitState({1.0, 1.0, 0.0, 0.0})), NotNormalized);
  // Within the 1e-6 window is still accepted.
  CHECK_NOTHROW(concurrence(SpinOrbitState({1.0 + 5e-7, 0.0, 0.0, 0.0})));
}

TEST_CASE("SpinOrbitState rejects non-finite amplitudes") {
  CHECK_THROWS_AS(SpinOrbitState({std::nan(""), 0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpinOrbitState({0.0, Complex{0.0, INFINITY}, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpinOrbitState::basis(4), std::out_of_range);
  CHECK_THROWS_AS(SpinOrbitState({0.0, 0.0, 0.0, 0.0}).normalized(), std::invalid_argument);
}

TEST_CASE("normalize yields unit norm") {
  for (int trial = 0; trial < 100; ++trial) {
    SpinOrbitState::Amplitudes amp;
    for (auto& a : amp) a = testing::uniform(0.1, 10.0) * testing::gaussian_complex();
    CHECK(std::abs(SpinOrbitState(amp).normalized().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: norm preservation under random unitaries") {
  for (int trial = 0; trial < 200; ++trial) {
    const Element4 u = testing::random_unitary<4>();
    REQUIRE(u.is_unitary());
    const SpinOrbitState s = testing::random_state();
    CHECK(std::abs(apply(u, s).norm() - s.norm()) <= 1e-12);
  }
}

TEST_CASE("property: tensor mixed product") {
  for (int trial = 0; trial < 200; ++trial) {
    const Element2 a = testing::random_unitary<2>(), b = testing::random_unitary<2>();
    const Element2 c = testing::random_unitary<2>(), d = testing::random_unitary<2>();
    CHECK(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) <= 1e-12);
  }
}

TEST_CASE("property: concurrence is invariant under local unitaries") {
  for (int trial = 0; trial < 200; ++trial) {
    // U(2) factors: |det| = 1 but det itself is an arbitrary phase.
    const Element2 a = testing::random_unitary<2>();
    const Element2 b = testing::random_unitary<2>();
    const SpinOrbitState s = testing::random_state();
    const double c = concurrence(s);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
    CHECK(std::abs(concurrence(apply(tensor(a, b), s)) - c) <= 1e-12);
  }
}

TEST_CASE("distance up to global phase ignores a common phase") {
  const SpinOrbitState s = testing::random_state();
  SpinOrbitState::Amplitudes rotated = s.amplitudes();
  for (auto& a : rotated) a *= std::polar(1.0, 2.1);
  CHECK(distance_up_to_global_phase(SpinOrbitState(rotated), s) < 1e-14);
  CHECK(distance_up_to_global_phase(SpinOrbitState::basis(0), SpinOrbitState::basis(1)) == doctest::Approx(1.0));
}
