#include "conflat/diffops.hpp"

#include <cmath>

namespace conflat {

namespace {

Multivector dirac_stencil(const FieldFn& f, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Multivector out;
  for (int j = 0; j < d; ++j) {
    Vec xp(x), xm(x);
    xp[j] += h;
    xm[j] -= h;
    Multivector diff = f(xp) - f(xm);
    diff *= 1.0 / (2.0 * h);
    Multivector term = Multivector::basis_vector(d, j) * diff;
    out = (j == 0) ? term : out + term;
  }
  return out;
}

void rotate_inplace(Vec& x, int i, int j, double c, double s) {
  const double xi = x[i], xj = x[j];
  x[i] = xi * c - xj * s;
  x[j] = xi * s + xj * c;
}

// Lambda f = sum_{i<j} e_i e_j (x_i d_j - x_j d_i) f via rotations of angle h
// in the (i,j)-plane, Richardson-combined.
Multivector angular_stencil(const FieldFn& f, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Multivector out(d);
  const double c1 = std::cos(h), s1 = std::sin(h);
  const double c2 = std::cos(h / 2), s2 = std::sin(h / 2);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Vec a(x), b(x), a2(x), b2(x);
      rotate_inplace(a, i, j, c1, s1);
      rotate_inplace(b, i, j, c1, -s1);
      rotate_inplace(a2, i, j, c2, s2);
      rotate_inplace(b2, i, j, c2, -s2);
      Multivector dh = (f(a) - f(b)) * (1.0 / (2.0 * h));
      Multivector dh2 = (f(a2) - f(b2)) * (1.0 / h);
      Multivector deriv = (4.0 * dh2 - dh) * (1.0 / 3.0);
      const std::uint32_t mask = (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
      out += Multivector::blade(d, mask) * deriv;
    }
  }
  return out;
}

void check_on_sphere(const Vec& x, int n, const char* who) {
  if (x.size() != static_cast<std::size_t>(n + 1))
    throw std::invalid_argument(std::string(who) + ": need n+1 coordinates");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (std::abs(std::sqrt(r2) - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(who) + ": off-sphere input");
}

}  // namespace

Multivector dirac_fd(const FieldFn& f, const Vec& x, double h) {
  if (h <= 0) throw std::invalid_argument("dirac_fd: h must be positive");
  if (f.sdist(x) <= 2 * h)
    throw std::domain_error("dirac_fd: stencil too close to the singular set");
  Multivector a = dirac_stencil(f, x, h);
  Multivector a2 = dirac_stencil(f, x, h / 2);
  return (4.0 * a2 - a) * (1.0 / 3.0);
}

Multivector dirac_iter(const FieldFn& f, const Vec& x, int q, double h) {
  if (q < 1) throw std::invalid_argument("dirac_iter: q must be >= 1");
  if (f.sdist(x) <= 2.0 * h * q)
    throw std::domain_error("dirac_iter: stencil too close to the singular set");
  if (q == 1) return dirac_fd(f, x, h);
  FieldFn inner;
  inner.dim = f.dim;
  inner.eval = [&f, q, h](const Vec& z) { return dirac_iter(f, z, q - 1, h); };
  return dirac_fd(inner, x, h);
}

Multivector spherical_dirac(const FieldFn& f, const Vec& x, int n, double h) {
  check_on_sphere(x, n, "spherical_dirac");
  Multivector lam = angular_stencil(f, x, h);
  Multivector xv = Multivector::from_vector(x);
  return xv * (lam + (n / 2.0) * f(x));
}

Multivector spherical_laplacian_check(const FieldFn& f, const Vec& x, int n,
                                      double h) {
  check_on_sphere(x, n, "spherical_laplacian_check");
  FieldFn inner;
  inner.dim = f.dim;
  inner.eval = [&f, n, h](const Vec& z) {
    return spherical_dirac(f, z, n, h) - Multivector::from_vector(z) * f(z);
  };
  return spherical_dirac(inner, x, n, h);
}

ResidualSummary residual_scan(const FieldFn& f, const std::vector<Vec>& points,
                              DiffOp op, double h) {
  ResidualSummary out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec& x = points[i];
    const double reach = (op == DiffOp::dirac || op == DiffOp::spherical_dirac)
                             ? 2.0 * h
                             : 4.0 * h;
    if (f.sdist(x) <= reach) {
      out.skipped.push_back(i);
      continue;
    }
    Multivector r;
    switch (op) {
      case DiffOp::dirac: r = dirac_fd(f, x, h); break;
      case DiffOp::dirac_sq: r = dirac_iter(f, x, 2, h); break;
      case DiffOp::spherical_dirac:
        r = spherical_dirac(f, x, static_cast<int>(x.size()) - 1, h);
        break;
      case DiffOp::spherical_laplacian:
        r = spherical_laplacian_check(f, x, static_cast<int>(x.size()) - 1, h);
        break;
    }
    out.per_point.push_back(r.norm());
  }
  out.evaluated = out.per_point.size();
  for (double v : out.per_point) {
    out.max = std::max(out.max, v);
    out.mean += v;
  }
  if (out.evaluated > 0) out.mean /= static_cast<double>(out.evaluated);
  return out;
}

}  // namespace conflat
