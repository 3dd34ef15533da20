#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conflat/quadrature.hpp"

using namespace conflat;

namespace {

constexpr double kPi = std::numbers::pi;

KernelXY euclid_kernel() {
  return [](const Vec& x, const Vec& y) {
    Vec v(x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= y[i];
    return euclid_G(v);
  };
}

FieldFn linear_monogenic() {
  FieldFn f;
  f.dim = 3;
  f.eval = [](const Vec& x) {
    Multivector m(3);
    m[1] = x[0];
    m[2] = -x[1];
    return m;
  };
  return f;
}

FieldFn const_one(int n) {
  FieldFn f;
  f.dim = n;
  f.eval = [n](const Vec&) { return Multivector::scalar(n, 1.0); };
  return f;
}

FieldFn rp_section(int sphere_n, BundleSign bundle, Vec t0, Multivector w0) {
  FieldFn f;
  f.dim = sphere_n + 1;
  f.eval = [sphere_n, bundle, t0, w0](const Vec& x) {
    return rp_kernel(x, t0, sphere_n, bundle, 1) * w0;
  };
  return f;
}

}  // namespace

TEST_CASE("surface integrals on the unit sphere") {
  Surface s = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {64, 128});
  SUBCASE("area") {
    CHECK(std::abs(s.area() - 4.0 * kPi) <= 1e-10);
  }
  SUBCASE("x1^2 integrates to 4 pi / 3") {
    NodeFn f = [](const SurfaceNode& n) {
      return Multivector::scalar(3, n.x[0] * n.x[0]);
    };
    CHECK(std::abs(surface_integral(s, f).scalar_part() - 4.0 * kPi / 3.0) <=
          1e-8);
  }
  SUBCASE("odd integrand vanishes") {
    NodeFn f = [](const SurfaceNode& n) {
      return Multivector::scalar(3, n.x[0]);
    };
    CHECK(std::abs(surface_integral(s, f).scalar_part()) <= 1e-12);
  }
  SUBCASE("non-finite integrand names the node") {
    NodeFn f = [](const SurfaceNode& n) {
      return Multivector::scalar(3, n.x[0] > 0.999 ? 1.0 / 0.0 : 1.0);
    };
    CHECK_THROWS_WITH_AS(surface_integral(s, f),
                         doctest::Contains("node"), std::domain_error);
  }
  SUBCASE("normals are unit") {
    double worst = 0.0;
    for (const SurfaceNode& n : s.nodes) {
      double r2 = 0;
      for (double c : n.normal) r2 += c * c;
      worst = std::max(worst, std::abs(std::sqrt(r2) - 1.0));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("euclidean Cauchy reproduction") {
  Surface s = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {64, 128});
  const double omega = reproduction_normalization(3);
  SUBCASE("constant at interior point") {
    Multivector v = cauchy_reproduce(euclid_kernel(), s, const_one(3),
                                     {0.2, 0.0, 0.0}, omega);
    CHECK((v - Multivector::scalar(3, 1.0)).norm() <= 1e-8);
  }
  SUBCASE("exterior point gives zero") {
    Multivector v = cauchy_reproduce(euclid_kernel(), s, const_one(3),
                                     {3.0, 0.0, 0.0}, omega);
    CHECK(v.norm() <= 1e-8);
  }
  SUBCASE("linear monogenic field") {
    FieldFn f = linear_monogenic();
    Vec y = {0.1, 0.2, -0.1};
    Multivector v = cauchy_reproduce(euclid_kernel(), s, f, y, omega);
    CHECK((v - f.eval(y)).norm() <= 1e-7);
  }
  SUBCASE("singular node surfaces as an error") {
    // y placed exactly on a quadrature node
    const Vec y = s.nodes[10].x;
    CHECK_THROWS_AS(cauchy_reproduce(euclid_kernel(), s, const_one(3), y, omega),
                    singularity_error);
  }
  SUBCASE("doubling the rule shrinks the error at least 4x") {
    FieldFn f = linear_monogenic();
    Vec y = {0.35, 0.1, 0.2};
    const Multivector want = f.eval(y);
    Surface coarse = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {6, 12});
    Surface fine = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {12, 24});
    const double e1 =
        (cauchy_reproduce(euclid_kernel(), coarse, f, y, omega) - want).norm();
    const double e2 =
        (cauchy_reproduce(euclid_kernel(), fine, f, y, omega) - want).norm();
    CHECK(e2 * 4.0 <= e1);
  }
}

TEST_CASE("reproduction constant is a kernel property") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  const double omega = reproduction_normalization(3);
  std::vector<double> constants;
  for (int cfg = 0; cfg < 5; ++cfg) {
    Vec center = {u(rng), u(rng), u(rng)};
    const double radius = 0.8 + 0.1 * cfg;
    Surface s = make_euclid_sphere(3, center, radius, {48, 96});
    Vec y = center;
    y[0] += 0.3 * radius;
    Vec z0 = {2.5 + cfg * 0.3, 1.0, -2.0};
    FieldFn f;
    f.dim = 3;
    f.eval = [z0](const Vec& x) {
      Vec v(x);
      for (int i = 0; i < 3; ++i) v[i] -= z0[i];
      return euclid_G(v);
    };
    Multivector got = cauchy_reproduce(euclid_kernel(), s, f, y, omega);
    Multivector fy = f.eval(y);
    double num = 0, den = 0;
    for (std::uint32_t m = 0; m < fy.size(); ++m) {
      num += got[m] * fy[m];
      den += fy[m] * fy[m];
    }
    constants.push_back(num / den);
  }
  for (double c : constants) CHECK(std::abs(c - constants.front()) <= 1e-3);
  CHECK(std::abs(constants.front() - 1.0) <= 1e-6);
}

TEST_CASE("rp symmetric identities") {
  const int n = 2;
  Vec t0 = {0.0449, 0.018, 0.0};
  t0[2] = std::sqrt(1.0 - t0[0] * t0[0] - t0[1] * t0[1]);
  Multivector w0 = Multivector::from_vector(Vec{0.3, -0.2, 0.1});
  FieldFn f_even = rp_section(n, BundleSign::plus, t0, w0);
  FieldFn f_odd = rp_section(n, BundleSign::minus, t0, w0);
  Surface band = make_latitude_band(n, 0.7, {512});
  Vec y = {std::sin(1.2), 0.0, std::cos(1.2)};

  SUBCASE("plus bundle, odd symmetrized convolution: factor 2") {
    RpSymmetricValues v = rp_symmetric_identities(BundleSign::plus, band, f_odd, y);
    CHECK((v.symmetric_surface - 2.0 * f_odd.eval(y)).norm() <= 1e-5);
    CHECK((v.hemisphere - f_odd.eval(y)).norm() <= 1e-5);
  }
  SUBCASE("minus bundle, antisymmetric f: zero") {
    RpSymmetricValues v = rp_symmetric_identities(BundleSign::minus, band, f_odd, y);
    CHECK(v.symmetric_surface.norm() <= 1e-5);
    CHECK((v.hemisphere - f_odd.eval(y)).norm() <= 1e-5);
  }
  SUBCASE("plus bundle, even f reproduces on a hemisphere") {
    RpSymmetricValues v = rp_symmetric_identities(BundleSign::plus, band, f_even, y);
    CHECK((v.hemisphere - f_even.eval(y)).norm() <= 1e-5);
  }
  SUBCASE("mixed parity rejected") {
    FieldFn mixed;
    mixed.dim = 3;
    mixed.eval = [&](const Vec& x) {
      return f_even.eval(x) + f_odd.eval(x);
    };
    CHECK_THROWS_AS(
        rp_symmetric_identities(BundleSign::plus, band, mixed, y),
        std::invalid_argument);
  }
  SUBCASE("non-band surface rejected") {
    Surface sphere = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {8, 16});
    CHECK_THROWS_AS(
        rp_symmetric_identities(BundleSign::plus, sphere, f_odd, y),
        std::invalid_argument);
  }
}

TEST_CASE("higher order reproduction") {
  SUBCASE("q = 1 agrees with cauchy_reproduce on the cot kernel") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    Vec y = {0.1, 0.15, 0.2}, y0 = {0.5, 0.55, 0.6};
    FieldFn f;
    f.dim = 3;
    f.eval = [spec, y0](const Vec& x) { return cot_kernel(spec, x, y0); };
    Surface s = make_euclid_sphere(3, y, 0.3, {24, 48});
    Multivector a = higher_order_reproduce(spec, s, f, y, 1e-3);
    KernelXY kernel = [&spec](const Vec& x, const Vec& yy) {
      return cot_kernel(spec, x, yy);
    };
    Multivector b =
        cauchy_reproduce(kernel, s, f, y, reproduction_normalization(3));
    CHECK((a - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
    CHECK((a - f.eval(y)).norm() <= 1e-4);
  }
  SUBCASE("periodicity precondition enforced") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    FieldFn f;
    f.dim = 3;
    f.eval = [](const Vec& x) {
      Multivector m(3);
      m[1] = x[0];  // not periodic
      return m;
    };
    Surface s = make_euclid_sphere(3, Vec{0.1, 0.15, 0.2}, 0.3, {8, 16});
    CHECK_THROWS_AS(
        higher_order_reproduce(spec, s, f, {0.1, 0.15, 0.2}, 1e-3),
        std::invalid_argument);
  }
}

TEST_CASE("hopf reproduction") {
  const int n = 3;
  KernelSpec orb;
  orb.family = KernelFamily::hopf;
  orb.n = n;
  orb.mode = HopfMode::orbit;
  KernelSpec lit = orb;
  lit.mode = HopfMode::literal;

  Vec yc = {1.4, 0.0, 0.0};
  Surface s = make_euclid_sphere(n, yc, 0.25, {32, 64});
  FieldFn f;
  f.dim = n;
  f.eval = [](const Vec& x) {
    Vec v = {x[0], x[1], x[2] - 3.2};
    return euclid_G(v);
  };
  Multivector fy = f.eval(yc);

  SUBCASE("orbit mode reproduces with constant 1") {
    Multivector v = hopf_reproduce(orb, s, f, yc);
    CHECK((v - fy).norm() <= 1e-5 * fy.norm());
  }
  SUBCASE("literal mode reproduces with the collapse constant") {
    Multivector v = hopf_reproduce(lit, s, f, yc);
    CHECK((v - hopf_collapse_constant(n) * fy).norm() <= 1e-6);
  }
  SUBCASE("exterior point in the annulus gives zero") {
    Vec yout = {1.4 * std::cos(1.0), 1.4 * std::sin(1.0), 0.0};
    CHECK(hopf_reproduce(orb, s, f, yout).norm() <= 1e-6);
  }
  SUBCASE("surface outside the fundamental annulus rejected") {
    Surface big = make_euclid_sphere(n, Vec(3, 0.0), 2.5, {8, 16});
    CHECK_THROWS_AS(hopf_reproduce(orb, big, f, yc), std::invalid_argument);
  }
}

TEST_CASE("plemelj limits") {
  const int n = 3;
  Surface s = make_euclid_sphere(n, Vec(n, 0.0), 1.0, {96, 192});
  KernelSpec spec;
  spec.family = KernelFamily::euclid;
  spec.n = n;
  const Vec w = s.nodes[s.nodes.size() / 3].x;

  SUBCASE("constant density jump") {
    FieldFn eta = const_one(n);
    // eta = e1
    eta.eval = [](const Vec&) { return Multivector::basis_vector(3, 0); };
    PlemeljResult in = plemelj_limit(spec, s, eta, w, Side::inner);
    PlemeljResult out = plemelj_limit(spec, s, eta, w, Side::outer);
    CHECK((in.limit - out.limit - eta.eval(w)).norm() <= 1e-2);
  }
  SUBCASE("smooth density jump against pv") {
    FieldFn eta;
    eta.dim = n;
    eta.eval = [](const Vec& x) {
      Multivector m(3);
      m[2] = x[0];
      return m;
    };
    PlemeljResult in = plemelj_limit(spec, s, eta, w, Side::inner);
    PlemeljResult out = plemelj_limit(spec, s, eta, w, Side::outer);
    CHECK((in.limit - out.limit - eta.eval(w)).norm() <= 5e-2);
    // inner limit = pv + eta/2 within the loose tolerance
    Multivector half = 0.5 * eta.eval(w);
    CHECK((in.limit - in.principal_value - half).norm() <= 5e-2);
  }
  SUBCASE("hopf kernel over the |x| = 2 sphere flags no hardy split") {
    Surface s2 = make_euclid_sphere(n, Vec(n, 0.0), 2.0, {64, 128});
    KernelSpec hopf;
    hopf.family = KernelFamily::hopf;
    hopf.n = n;
    hopf.mode = HopfMode::literal;
    FieldFn eta = const_one(n);
    PlemeljResult r = plemelj_limit(hopf, s2, eta, s2.nodes[77].x, Side::inner);
    REQUIRE(r.hardy_split.has_value());
    CHECK_FALSE(*r.hardy_split);
  }
}

TEST_CASE("measure convolution parity") {
  const int n = 2;
  Vec t0 = {0.2, -0.1, 0.0};
  t0[2] = std::sqrt(1.0 - t0[0] * t0[0] - t0[1] * t0[1]);
  PointMeasure mu;
  mu.atoms.push_back({t0, Multivector::from_vector(Vec{0.4, 0.1, -0.2})});
  Vec t1(t0);
  for (double& c : t1) c = -c;
  mu.atoms.push_back({t1, Multivector::from_vector(Vec{0.4, 0.1, -0.2})});

  KernelXY plus = [n](const Vec& x, const Vec& t) {
    return rp_kernel(x, t, n, BundleSign::plus, 1);
  };
  KernelXY minus = [n](const Vec& x, const Vec& t) {
    return rp_kernel(x, t, n, BundleSign::minus, 1);
  };

  Vec x = {0.0, 0.6, 0.8};
  Vec mx = {0.0, -0.6, -0.8};
  SUBCASE("plus kernel gives an even section") {
    Multivector d = measure_convolution(plus, mu, x) -
                    measure_convolution(plus, mu, mx);
    CHECK(d.norm() <= 1e-12);
  }
  SUBCASE("minus kernel gives an odd section") {
    Multivector d = measure_convolution(minus, mu, x) +
                    measure_convolution(minus, mu, mx);
    CHECK(d.norm() <= 1e-12);
  }
  SUBCASE("single atom is the kernel itself") {
    PointMeasure single;
    Multivector weight = Multivector::from_vector(Vec{1.0, 2.0, 3.0});
    single.atoms.push_back({t0, weight});
    KernelXY G = euclid_kernel();
    Multivector got = measure_convolution(G, single, x);
    Vec v(x);
    for (int i = 0; i < 3; ++i) v[i] -= t0[i];
    CHECK((got - euclid_G(v) * weight).norm() == 0.0);
  }
  SUBCASE("atom proximity rejected") {
    CHECK_THROWS_AS(measure_convolution(plus, mu, t0), singularity_error);
  }
  SUBCASE("duplicate atoms rejected") {
    PointMeasure bad;
    bad.atoms.push_back({t0, Multivector::scalar(3, 1.0)});
    bad.atoms.push_back({t0, Multivector::scalar(3, 2.0)});
    CHECK_THROWS_AS(measure_convolution(plus, bad, x), std::invalid_argument);
  }
}

TEST_CASE("surface JSON round trip") {
  Surface s = make_euclid_sphere(3, {0.1, 0.2, 0.3}, 1.5, {16, 32});
  Surface t = surface_from_json(to_json(s));
  CHECK(t.nodes.size() == s.nodes.size());
  CHECK(t.radius == s.radius);
  CHECK(std::abs(t.area() - s.area()) <= 1e-13 * s.area());

  Surface band = make_latitude_band(2, 0.7, {64});
  Surface band2 = surface_from_json(to_json(band));
  CHECK(band2.nodes.size() == band.nodes.size());
  CHECK(band2.antipodally_symmetric());

  nlohmann::json bad = to_json(s);
  bad["extra"] = 1;
  CHECK_THROWS_WITH_AS(surface_from_json(bad), doctest::Contains("extra"),
                       std::invalid_argument);
}
