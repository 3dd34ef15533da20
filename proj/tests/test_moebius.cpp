#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conflat/diffops.hpp"
#include "conflat/kernels.hpp"
#include "conflat/moebius.hpp"

using namespace conflat;

TEST_CASE("vahlen validity") {
  const int n = 3;
  SUBCASE("identity passes with pseudo-det +1") {
    ValidityReport r = validate_vahlen(VahlenMatrix::identity(n));
    CHECK(r.pass);
    CHECK(r.pseudo_det == doctest::Approx(1.0));
  }
  SUBCASE("translation passes") {
    ValidityReport r =
        validate_vahlen(VahlenMatrix::translation({1.0, 0.0, 0.0}));
    CHECK(r.pass);
  }
  SUBCASE("a=2 fails with pseudo-det 2") {
    VahlenMatrix M = VahlenMatrix::identity(n);
    M.a = Multivector::scalar(n, 2.0);
    ValidityReport r = validate_vahlen(M);
    CHECK_FALSE(r.pass);
    CHECK(r.pseudo_det == doctest::Approx(2.0));
  }
  SUBCASE("kelvin, dilation, transversion pass") {
    CHECK(validate_vahlen(VahlenMatrix::kelvin_inversion(n)).pass);
    CHECK(validate_vahlen(VahlenMatrix::dilation(n, std::sqrt(2.0))).pass);
    CHECK(validate_vahlen(VahlenMatrix::transversion({1.0, 1.0, 0.0})).pass);
  }
}

TEST_CASE("apply_moebius") {
  const int n = 3;
  SUBCASE("translation") {
    Vec y = apply_moebius(VahlenMatrix::translation({1.0, 0.0, 0.0}),
                          {0.0, 1.0, 0.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[2] == doctest::Approx(0.0));
  }
  SUBCASE("kelvin inversion: x -> -x^{-1} = x/|x|^2") {
    Vec x = {0.3, -0.4, 0.5};
    Vec y = apply_moebius(VahlenMatrix::kelvin_inversion(n), x);
    const double r2 = 0.3 * 0.3 + 0.4 * 0.4 + 0.5 * 0.5;
    for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i] / r2));
  }
  SUBCASE("dilation a=sqrt2, d=1/sqrt2 doubles") {
    Vec x = {0.2, 0.5, -0.1};
    Vec y = apply_moebius(VahlenMatrix::dilation(n, std::sqrt(2.0)), x);
    for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(2.0 * x[i]));
  }
  SUBCASE("pole signals point at infinity") {
    CHECK_THROWS_AS(
        apply_moebius(VahlenMatrix::kelvin_inversion(n), {0.0, 0.0, 0.0}),
        pole_error);
  }
}

TEST_CASE("weight_j") {
  const int n = 3;
  Vec x = {0.4, -0.2, 0.7};
  SUBCASE("translation weights are 1") {
    VahlenMatrix T = VahlenMatrix::translation({0.5, 0.5, 0.0});
    CHECK((weight_j(T, x, 1) - Multivector::scalar(n, 1.0)).norm() == 0.0);
    CHECK((weight_j(T, x, 2) - Multivector::scalar(n, 1.0)).norm() == 0.0);
  }
  SUBCASE("kelvin weight k=1 is x/|x|^n") {
    Multivector w = weight_j(VahlenMatrix::kelvin_inversion(n), x, 1);
    const double r = std::sqrt(0.4 * 0.4 + 0.2 * 0.2 + 0.7 * 0.7);
    Multivector want = Multivector::from_vector(x) * std::pow(r, -n);
    CHECK((w - want).norm() <= 1e-15);
  }
  SUBCASE("unsupported weight rejected") {
    CHECK_THROWS_AS(weight_j(VahlenMatrix::identity(n), x, 3),
                    std::invalid_argument);
  }
}

TEST_CASE("pullback examples") {
  const int n = 3;
  SUBCASE("constants pull back to constants under translation") {
    VahlenMatrix T = VahlenMatrix::translation({0.3, 0.0, 0.0});
    PointFn one = [](const Vec&) { return Multivector::scalar(3, 1.0); };
    Multivector v = pullback_monogenic(T, one, {0.1, 0.2, 0.3});
    CHECK((v - Multivector::scalar(n, 1.0)).norm() == 0.0);
  }
  SUBCASE("translation substitutes the argument of G") {
    Vec b = {0.3, -0.1, 0.2}, y0 = {2.0, 0.0, 0.0}, x = {0.5, 0.4, -0.3};
    VahlenMatrix T = VahlenMatrix::translation(b);
    PointFn g = [&](const Vec& p) {
      Vec v(p);
      for (int i = 0; i < 3; ++i) v[i] -= y0[i];
      return euclid_G(v);
    };
    Vec shifted(x);
    for (int i = 0; i < 3; ++i) shifted[i] += b[i] - y0[i];
    CHECK((pullback_monogenic(T, g, x) - euclid_G(shifted)).norm() <= 1e-14);
  }
  SUBCASE("kelvin pullback of a monogenic field stays monogenic") {
    VahlenMatrix K = VahlenMatrix::kelvin_inversion(n);
    FieldFn pulled;
    pulled.dim = n;
    pulled.eval = [&K](const Vec& x) {
      PointFn lin = [](const Vec& p) {
        Multivector m(3);
        m[1] = p[0];
        m[2] = -p[1];
        return m;
      };
      return pullback_monogenic(K, lin, x);
    };
    pulled.singular_distance = [](const Vec& x) {
      double r2 = 0;
      for (double c : x) r2 += c * c;
      return std::sqrt(r2);
    };
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < 20) {
      Vec x = {g(rng), g(rng), g(rng)};
      double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      if (r < 0.5 || r > 2.0) continue;
      worst = std::max(worst, dirac_fd(pulled, x, 1e-3).norm());
      ++done;
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("sign ambiguity: M and -M") {
  const int n = 3;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<VahlenMatrix> maps = {VahlenMatrix::translation({0.2, 0.1, -0.3}),
                                    VahlenMatrix::kelvin_inversion(n),
                                    VahlenMatrix::dilation(n, 1.7)};
  for (const VahlenMatrix& M : maps) {
    VahlenMatrix N = -M;
    for (int trial = 0; trial < 10; ++trial) {
      Vec x = {u(rng) + 1.5, u(rng), u(rng)};
      Vec a = apply_moebius(M, x), b = apply_moebius(N, x);
      for (int i = 0; i < n; ++i) CHECK(a[i] == b[i]);
      CHECK((weight_j(M, x, 1) + weight_j(N, x, 1)).norm() == 0.0);
    }
  }
}

TEST_CASE("matrix inverse round trip") {
  const int n = 3;
  std::vector<VahlenMatrix> maps = {VahlenMatrix::translation({0.2, 0.1, -0.3}),
                                    VahlenMatrix::kelvin_inversion(n),
                                    VahlenMatrix::dilation(n, 1.7),
                                    VahlenMatrix::transversion({1.0, 0.0, 0.0})};
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.3, 1.2);
  for (const VahlenMatrix& M : maps) {
    for (int trial = 0; trial < 10; ++trial) {
      Vec x = {u(rng), u(rng), u(rng)};
      Vec y = apply_moebius(M.inverse(), apply_moebius(M, x));
      double d2 = 0;
      for (int i = 0; i < n; ++i) d2 += (y[i] - x[i]) * (y[i] - x[i]);
      CHECK(std::sqrt(d2) <= 1e-10);
    }
  }
}
