#include "conflat/moebius.hpp"

#include <cmath>

namespace conflat {

namespace {

// cx + d for a point x in R^n.
Multivector denom_at(const VahlenMatrix& M, const Vec& x) {
  Multivector xv = Multivector::from_vector(x);
  return M.c * xv + M.d;
}

// Inverse of a Vahlen entry value (a product of vectors). Values that are
// close to grade <= 1 are projected there first; off-grade noise below 1e-10
// is numerical.
Multivector vahlen_value_inverse(const Multivector& w) {
  const double total = w.norm();
  if (total < 1e-14) throw pole_error("Moebius transformation pole");
  if (w.off_grade_mass({0, 1}) < 1e-10 * total) {
    Multivector clean = w.grade_projection(0) + w.grade_projection(1);
    return product_of_vectors_inverse(clean);
  }
  return product_of_vectors_inverse(w);
}

}  // namespace

VahlenMatrix VahlenMatrix::identity(int dim) {
  return {Multivector::scalar(dim, 1.0), Multivector(dim), Multivector(dim),
          Multivector::scalar(dim, 1.0), dim};
}

VahlenMatrix VahlenMatrix::translation(const Vec& t) {
  const int n = static_cast<int>(t.size());
  VahlenMatrix M = identity(n);
  M.b = Multivector::from_vector(t);
  return M;
}

VahlenMatrix VahlenMatrix::dilation(int dim, double lambda) {
  VahlenMatrix M = identity(dim);
  M.a = Multivector::scalar(dim, lambda);
  M.d = Multivector::scalar(dim, 1.0 / lambda);
  return M;
}

VahlenMatrix VahlenMatrix::kelvin_inversion(int dim) {
  VahlenMatrix M = identity(dim);
  M.a = Multivector(dim);
  M.d = Multivector(dim);
  M.b = Multivector::scalar(dim, -1.0);
  M.c = Multivector::scalar(dim, 1.0);
  return M;
}

VahlenMatrix VahlenMatrix::transversion(const Vec& m) {
  const int n = static_cast<int>(m.size());
  VahlenMatrix M = identity(n);
  M.c = Multivector::from_vector(m);
  return M;
}

VahlenMatrix VahlenMatrix::inverse() const {
  return {reversion(d), -reversion(b), -reversion(c), reversion(a), dim};
}

VahlenMatrix operator-(const VahlenMatrix& M) {
  return {-M.a, -M.b, -M.c, -M.d, M.dim};
}

ValidityReport validate_vahlen(const VahlenMatrix& M, double tol) {
  ValidityReport r;
  r.tolerance = tol;
  const Multivector prods[4] = {M.a * reversion(M.c), M.c * reversion(M.d),
                                M.d * reversion(M.b), M.b * reversion(M.a)};
  for (int i = 0; i < 4; ++i) r.entry_residual[i] = prods[i].off_grade_mass({1});
  Multivector pd = M.a * reversion(M.d) - M.b * reversion(M.c);
  r.pseudo_det_offscalar = pd.off_grade_mass({0});
  r.pseudo_det = pd.scalar_part();
  r.pseudo_det_unit_residual = std::abs(std::abs(r.pseudo_det) - 1.0);
  r.pass = r.pseudo_det_offscalar <= tol && r.pseudo_det_unit_residual <= tol;
  for (double e : r.entry_residual) r.pass = r.pass && e <= tol;
  return r;
}

Vec apply_moebius(const VahlenMatrix& M, const Vec& x) {
  Multivector xv = Multivector::from_vector(x);
  Multivector num = M.a * xv + M.b;
  Multivector img = num * vahlen_value_inverse(denom_at(M, x));
  if (img.off_grade_mass({1}) > 1e-10 * std::max(1.0, img.norm()))
    throw std::domain_error("apply_moebius: image is not a vector");
  return img.vector_part();
}

Multivector weight_j(const VahlenMatrix& M, const Vec& x, int k) {
  if (k != 1 && k != 2)
    throw std::invalid_argument(
        "weight_j: only k in {1,2} supported (general J_k out of scope)");
  Multivector w = denom_at(M, x);
  const double nw = w.norm();
  if (nw < 1e-14) throw pole_error("weight_j: pole");
  const int n = M.dim;
  if (k == 1) return reversion(w) * std::pow(nw, -n);
  return Multivector::scalar(M.dim, std::pow(nw, -(n - 2)));
}

Multivector pullback_monogenic(const VahlenMatrix& M, const PointFn& f,
                               const Vec& x) {
  return weight_j(M, x, 1) * f(apply_moebius(M, x));
}

}  // namespace conflat
