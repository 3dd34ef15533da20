#pragma once

#include <functional>
#include <limits>

#include "conflat/multivector.hpp"

namespace conflat {

// A field R^d -> Cl with an optional distance-to-singular-set callback so
// that stencils stay off singularities.
struct FieldFn {
  int dim = 0;
  std::function<Multivector(const Vec&)> eval;
  std::function<double(const Vec&)> singular_distance;

  Multivector operator()(const Vec& x) const { return eval(x); }
  double sdist(const Vec& x) const {
    return singular_distance ? singular_distance(x)
                             : std::numeric_limits<double>::infinity();
  }
};

// Central-difference Dirac operator sum_j e_j d/dx_j with one Richardson step
// (4 A(h/2) - A(h)) / 3. Default h = 1e-3.
Multivector dirac_fd(const FieldFn& f, const Vec& x, double h = 1e-3);

// q-fold nesting of the first-order stencil. Nested stencils default to
// h = 5e-3 to control cancellation.
Multivector dirac_iter(const FieldFn& f, const Vec& x, int q, double h = 5e-3);

// Spherical Dirac D_s = x (Lambda + n/2) on S^n in R^{n+1}. Lambda uses
// plane-rotation stencils, so every sample stays exactly on the sphere.
Multivector spherical_dirac(const FieldFn& f, const Vec& x, int n,
                            double h = 1e-3);

// Spherical Laplacian residual operator D_s((D_s - x*)f). The printed form
// D_s(D_s + x) does not annihilate the Green kernel H_s; the sign arbitrated
// by that oracle does (equivalently, the printed form with D_s of the
// opposite sign).
Multivector spherical_laplacian_check(const FieldFn& f, const Vec& x, int n,
                                      double h = 5e-3);

enum class DiffOp { dirac, dirac_sq, spherical_dirac, spherical_laplacian };

struct ResidualSummary {
  std::vector<double> per_point;   // residual norm per evaluated point
  std::vector<std::size_t> skipped;  // indices too close to the singular set
  double max = 0.0;
  double mean = 0.0;
  std::size_t evaluated = 0;
};

// Applies the chosen operator at each point; deterministic aggregation in
// input order.
ResidualSummary residual_scan(const FieldFn& f, const std::vector<Vec>& points,
                              DiffOp op, double h);

}  // namespace conflat
