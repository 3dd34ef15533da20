#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conflat {

using Vec = std::vector<double>;

// Maximum number of generators. 2^12 coefficients is the largest table we
// allow; everything in the verification suites runs at n <= 6.
inline constexpr int kMaxDim = 12;

// Sign of the product of two basis blades (bitmask encoded) in the algebra
// with e_i e_j + e_j e_i = -2 delta_ij. Counts generator transpositions plus
// one factor -1 per repeated generator.
inline int blade_product_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  std::uint32_t t = a >> 1;
  while (t) {
    swaps += __builtin_popcount(t & b);
    t >>= 1;
  }
  swaps += __builtin_popcount(a & b);  // e_i e_i = -1
  return (swaps & 1) ? -1 : +1;
}

inline int blade_grade(std::uint32_t mask) { return __builtin_popcount(mask); }

// Element of the real Clifford algebra Cl_n as a dense coefficient table
// indexed by blade bitmask (bit j set <=> generator e_{j+1} present).
class Multivector {
 public:
  Multivector() = default;
  explicit Multivector(int dim);

  static Multivector scalar(int dim, double value);
  static Multivector basis_vector(int dim, int j);  // e_{j+1}, j zero-based
  static Multivector blade(int dim, std::uint32_t mask, double coeff = 1.0);
  static Multivector from_vector(std::span<const double> coords);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }

  double operator[](std::uint32_t mask) const { return coeffs_[mask]; }
  double& operator[](std::uint32_t mask) { return coeffs_[mask]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  Multivector& operator+=(const Multivector& rhs);
  Multivector& operator-=(const Multivector& rhs);
  Multivector& operator*=(double s);

  double scalar_part() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  Vec vector_part() const;

  // Frobenius norm; equals the Euclidean norm for grade-1 elements.
  double norm() const;

  // Coefficient mass outside the given grade set, e.g. {0,1}.
  double off_grade_mass(std::initializer_list<int> grades) const;

  Multivector grade_projection(int grade) const;
  bool is_vector(double tol = 1e-12) const;

  std::string to_string() const;

 private:
  int dim_ = 0;
  std::vector<double> coeffs_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator-(Multivector a);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);

// Geometric (Clifford) product. Throws std::invalid_argument on dimension
// mismatch.
Multivector operator*(const Multivector& a, const Multivector& b);
Multivector geometric_product(const Multivector& a, const Multivector& b);

// Anti-automorphism ~: grade-r blades pick up (-1)^{r(r-1)/2}.
Multivector reversion(const Multivector& a);

// Clifford conjugation (reversion composed with grade involution),
// (-1)^{r(r+1)/2} per grade. For w a product of vectors, w * conj(w) is the
// scalar |v_1|^2 ... |v_k|^2, which is what makes Vahlen entries invertible.
Multivector clifford_conjugate(const Multivector& a);

// Inverse of a nonzero vector: x^{-1} = -x / |x|^2. Throws on zero or
// non-vector input.
Multivector vector_inverse(const Multivector& x);

// Inverse of a product of vectors via w^{-1} = conj(w) / (w conj(w)).
// Throws std::domain_error if w conj(w) is not a nonzero scalar.
Multivector product_of_vectors_inverse(const Multivector& w, double tol = 1e-10);

std::string blade_name(std::uint32_t mask);

}  // namespace conflat
