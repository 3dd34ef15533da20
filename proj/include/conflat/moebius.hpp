#pragma once

#include <functional>

#include "conflat/multivector.hpp"

namespace conflat {

// Signals that a Moebius transformation was evaluated at a pole
// (|cx + d| below threshold): the image is the point at infinity.
struct pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

// 2x2 matrix of Clifford numbers encoding the Moebius transformation
// y = (ax + b)(cx + d)^{-1}.
struct VahlenMatrix {
  Multivector a, b, c, d;
  int dim = 0;

  static VahlenMatrix identity(int dim);
  static VahlenMatrix translation(const Vec& t);
  static VahlenMatrix dilation(int dim, double lambda);  // x -> lambda^2 x
  static VahlenMatrix kelvin_inversion(int dim);         // x -> -x^{-1}
  static VahlenMatrix transversion(const Vec& m);        // x -> x(mx+1)^{-1}

  VahlenMatrix inverse() const;  // ( ~d, -~b ; -~c, ~a ) up to pseudo-det
};

VahlenMatrix operator-(const VahlenMatrix& M);

struct ValidityReport {
  // Off-vector mass of a~c, c~d, d~b, b~a (each should lie in R^n).
  double entry_residual[4] = {0, 0, 0, 0};
  // Off-scalar mass of the pseudo-determinant a~d - b~c.
  double pseudo_det_offscalar = 0.0;
  double pseudo_det = 0.0;          // scalar part
  double pseudo_det_unit_residual = 0.0;  // | |pseudo_det| - 1 |
  double tolerance = 1e-10;
  bool pass = false;
};

// Checks the algebraic Vahlen conditions (the practical proxy for "entries
// are products of vectors"). Always returns a report.
ValidityReport validate_vahlen(const VahlenMatrix& M, double tol = 1e-10);

// (ax + b)(cx + d)^{-1} as a point map. Throws pole_error near poles and
// std::domain_error if the image fails to be a vector.
Vec apply_moebius(const VahlenMatrix& M, const Vec& x);

// Conformal weight factors. k = 1: ~(cx+d)/|cx+d|^n, k = 2: 1/|cx+d|^{n-2}.
// Other k are out of scope and rejected.
Multivector weight_j(const VahlenMatrix& M, const Vec& x, int k);

using PointFn = std::function<Multivector(const Vec&)>;

// J_1(M, x) * f(M(x)); preserves left monogenicity of f.
Multivector pullback_monogenic(const VahlenMatrix& M, const PointFn& f,
                               const Vec& x);

}  // namespace conflat
