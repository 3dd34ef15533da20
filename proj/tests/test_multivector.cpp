#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conflat/multivector.hpp"

using namespace conflat;

namespace {
Multivector e(int n, int j) { return Multivector::basis_vector(n, j); }
}  // namespace

TEST_CASE("defining relation e_i e_j + e_j e_i = -2 delta_ij") {
  for (int n = 2; n <= kMaxDim; ++n) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Multivector lhs = e(n, i) * e(n, j) + e(n, j) * e(n, i);
        Multivector rhs = Multivector::scalar(n, i == j ? -2.0 : 0.0);
        CHECK((lhs - rhs).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("generator products") {
  const int n = 3;
  CHECK(((e(n, 0) * e(n, 0)) - Multivector::scalar(n, -1.0)).norm() == 0.0);
  Multivector e12 = Multivector::blade(n, 0b011);
  CHECK(((e(n, 0) * e(n, 1)) - e12).norm() == 0.0);
  CHECK(((e(n, 1) * e(n, 0)) + e12).norm() == 0.0);
  // (1 + e1)(1 - e1) = 1 - e1^2 = 2
  Multivector one = Multivector::scalar(n, 1.0);
  Multivector p = (one + e(n, 0)) * (one - e(n, 0));
  CHECK((p - Multivector::scalar(n, 2.0)).norm() == 0.0);
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + trial % 3;
    Multivector a(n), b(n), c(n);
    for (std::uint32_t m = 0; m < a.size(); ++m) {
      a[m] = u(rng);
      b[m] = u(rng);
      c[m] = u(rng);
    }
    const double scale = a.norm() * b.norm() * c.norm();
    worst = std::max(worst, ((a * b) * c - a * (b * c)).norm() / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("reversion") {
  const int n = 4;
  CHECK((reversion(e(n, 0)) - e(n, 0)).norm() == 0.0);
  Multivector e12 = Multivector::blade(n, 0b011);
  CHECK((reversion(e12) + e12).norm() == 0.0);
  Multivector e123 = Multivector::blade(n, 0b111);
  CHECK((reversion(e123) + e123).norm() == 0.0);

  // involution and anti-automorphism on random blades
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::uint32_t> pick(0, (1u << n) - 1);
    Multivector a = Multivector::blade(n, pick(rng), 1.0);
    Multivector b = Multivector::blade(n, pick(rng), 1.0);
    CHECK((reversion(reversion(a)) - a).norm() == 0.0);
    CHECK((reversion(a * b) - reversion(b) * reversion(a)).norm() == 0.0);
  }
}

TEST_CASE("vector inverse") {
  const int n = 3;
  Multivector x = 2.0 * e(n, 0);
  CHECK((vector_inverse(x) + 0.5 * e(n, 0)).norm() == 0.0);

  Multivector y = e(n, 0) + e(n, 1);
  CHECK((vector_inverse(y) + 0.5 * y).norm() == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4;
    Vec coords(d);
    for (double& c : coords) c = u(rng);
    Multivector v = Multivector::from_vector(coords);
    if (v.norm() < 0.1) continue;
    Multivector p = v * vector_inverse(v);
    CHECK((p - Multivector::scalar(d, 1.0)).norm() <= 1e-14);
  }

  CHECK_THROWS_AS(vector_inverse(Multivector(3)), std::domain_error);
  CHECK_THROWS_AS(vector_inverse(Multivector::scalar(3, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("norm") {
  const int n = 3;
  CHECK(doctest::Approx((e(n, 0) + e(n, 1)).norm()).epsilon(1e-15) ==
        std::sqrt(2.0));
  CHECK(Multivector(n).norm() == 0.0);

  // multiplicativity on products of vectors
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3 + trial % 3;
    Vec a(d), b(d);
    for (double& c : a) c = u(rng);
    for (double& c : b) c = u(rng);
    Multivector va = Multivector::from_vector(a);
    Multivector vb = Multivector::from_vector(b);
    CHECK((va * vb).norm() ==
          doctest::Approx(va.norm() * vb.norm()).epsilon(1e-13));
  }
}

TEST_CASE("vector square is minus norm squared") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 5;
    Vec a(d);
    for (double& c : a) c = u(rng);
    Multivector v = Multivector::from_vector(a);
    Multivector sq = v * v;
    const double want = -v.norm() * v.norm();
    CHECK(std::abs(sq.scalar_part() - want) <= 1e-14 * std::abs(want) + 1e-300);
    CHECK(sq.off_grade_mass({0}) == 0.0);
  }
}

TEST_CASE("dimension mismatch rejected") {
  CHECK_THROWS_AS(Multivector(3) * Multivector(4), std::invalid_argument);
  CHECK_THROWS_AS(Multivector(13), std::invalid_argument);
}

TEST_CASE("clifford conjugate inverts products of vectors") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 3 + trial % 2;
    Multivector w = Multivector::scalar(d, 1.0);
    for (int f = 0; f < 3; ++f) {
      Vec a(d);
      for (double& c : a) c = u(rng);
      Multivector v = Multivector::from_vector(a);
      if (v.norm() < 0.2) v = Multivector::basis_vector(d, 0);
      w = w * v;
    }
    Multivector winv = product_of_vectors_inverse(w);
    CHECK((w * winv - Multivector::scalar(d, 1.0)).norm() <= 1e-12);
  }
}
