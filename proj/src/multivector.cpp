#include "conflat/multivector.hpp"

#include <cmath>
#include <sstream>

namespace conflat {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("Multivector dimension must be in [1, " +
                                std::to_string(kMaxDim) + "], got " +
                                std::to_string(dim));
}

}  // namespace

Multivector::Multivector(int dim) : dim_(dim) {
  check_dim(dim);
  coeffs_.assign(std::size_t{1} << dim, 0.0);
}

Multivector Multivector::scalar(int dim, double value) {
  Multivector m(dim);
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::basis_vector(int dim, int j) {
  check_dim(dim);
  if (j < 0 || j >= dim)
    throw std::invalid_argument("basis_vector index out of range");
  Multivector m(dim);
  m.coeffs_[std::uint32_t{1} << j] = 1.0;
  return m;
}

Multivector Multivector::blade(int dim, std::uint32_t mask, double coeff) {
  Multivector m(dim);
  if (mask >= m.coeffs_.size())
    throw std::invalid_argument("blade mask out of range for dimension");
  m.coeffs_[mask] = coeff;
  return m;
}

Multivector Multivector::from_vector(std::span<const double> coords) {
  Multivector m(static_cast<int>(coords.size()));
  for (std::size_t j = 0; j < coords.size(); ++j)
    m.coeffs_[std::uint32_t{1} << j] = coords[j];
  return m;
}

Multivector& Multivector::operator+=(const Multivector& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in +");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in -");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Vec Multivector::vector_part() const {
  Vec v(static_cast<std::size_t>(dim_));
  for (int j = 0; j < dim_; ++j) v[j] = coeffs_[std::uint32_t{1} << j];
  return v;
}

double Multivector::norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(s);
}

double Multivector::off_grade_mass(std::initializer_list<int> grades) const {
  std::uint32_t keep = 0;
  for (int g : grades) keep |= std::uint32_t{1} << g;
  double s = 0.0;
  for (std::uint32_t m = 0; m < coeffs_.size(); ++m)
    if (!(keep & (std::uint32_t{1} << blade_grade(m)))) s += coeffs_[m] * coeffs_[m];
  return std::sqrt(s);
}

Multivector Multivector::grade_projection(int grade) const {
  Multivector out(dim_);
  for (std::uint32_t m = 0; m < coeffs_.size(); ++m)
    if (blade_grade(m) == grade) out.coeffs_[m] = coeffs_[m];
  return out;
}

bool Multivector::is_vector(double tol) const {
  double total = norm();
  return off_grade_mass({1}) <= tol * std::max(1.0, total);
}

std::string blade_name(std::uint32_t mask) {
  if (mask == 0) return "s";
  std::ostringstream os;
  os << "e";
  for (int j = 0; j < kMaxDim; ++j)
    if (mask & (std::uint32_t{1} << j)) os << (j + 1);
  return os.str();
}

std::string Multivector::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::uint32_t m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m] == 0.0) continue;
    if (!first) os << " + ";
    os << coeffs_[m];
    if (m != 0) os << "*" << blade_name(m);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }

Multivector operator-(Multivector a) {
  a *= -1.0;
  return a;
}

Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }

Multivector operator*(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("dimension mismatch in geometric product");
  const std::uint32_t n = static_cast<std::uint32_t>(a.size());
  Multivector out(a.dim());
  for (std::uint32_t ma = 0; ma < n; ++ma) {
    const double ca = a[ma];
    if (ca == 0.0) continue;
    for (std::uint32_t mb = 0; mb < n; ++mb) {
      const double cb = b[mb];
      if (cb == 0.0) continue;
      out[ma ^ mb] += ca * cb * blade_product_sign(ma, mb);
    }
  }
  return out;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  return a * b;
}

Multivector reversion(const Multivector& a) {
  Multivector out(a.dim());
  for (std::uint32_t m = 0; m < a.size(); ++m) {
    const int r = blade_grade(m);
    const int s = (r * (r - 1) / 2) & 1 ? -1 : +1;
    out[m] = s * a[m];
  }
  return out;
}

Multivector clifford_conjugate(const Multivector& a) {
  Multivector out(a.dim());
  for (std::uint32_t m = 0; m < a.size(); ++m) {
    const int r = blade_grade(m);
    const int s = (r * (r + 1) / 2) & 1 ? -1 : +1;
    out[m] = s * a[m];
  }
  return out;
}

Multivector vector_inverse(const Multivector& x) {
  if (!x.is_vector(1e-12))
    throw std::invalid_argument("vector_inverse: input is not a vector");
  double r2 = 0.0;
  for (double c : x.coeffs()) r2 += c * c;
  if (r2 == 0.0) throw std::domain_error("vector_inverse: zero vector");
  Multivector out = x;
  out *= -1.0 / r2;
  return out;
}

Multivector product_of_vectors_inverse(const Multivector& w, double tol) {
  Multivector c = clifford_conjugate(w);
  Multivector p = w * c;
  const double total = p.norm();
  if (total == 0.0)
    throw std::domain_error("product_of_vectors_inverse: zero element");
  if (p.off_grade_mass({0}) > tol * total)
    throw std::domain_error(
        "product_of_vectors_inverse: w * conj(w) is not scalar; input is not "
        "a product of vectors");
  const double s = p.scalar_part();
  if (std::abs(s) < 1e-300)
    throw std::domain_error("product_of_vectors_inverse: singular element");
  c *= 1.0 / s;
  return c;
}

}  // namespace conflat
