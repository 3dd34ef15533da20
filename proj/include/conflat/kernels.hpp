#pragma once

#include <functional>

#include "conflat/kernel_spec.hpp"
#include "conflat/multivector.hpp"

namespace conflat {

// Serial runs the canonical shell-ordered reduction on one thread; parallel
// distributes shells (or node chunks) over OpenMP threads and combines the
// per-shell partials in shell order, reproducing the serial bits exactly.
enum class ExecPolicy { serial, parallel };

struct singularity_error : std::domain_error {
  using std::domain_error::domain_error;
};

// ---- pointwise kernels ----------------------------------------------------

// Euclidean Cauchy kernel G(v) = v / |v|^n in Cl_n, n = v.size().
Multivector euclid_G(const Vec& v);

// Fundamental solution of D^q: odd q -> v/|v|^{n-q+1}, even q -> |v|^{q-n}
// (scalar). Reduces to euclid_G at q = 1; satisfies D G_q = c_q G_{q-1} with
// c_q = q - n (q even), 1 - q (q odd).
Multivector euclid_Gk(const Vec& v, int q);

// Chain constant c_q in D G_q = c_q G_{q-1}.
double fundamental_chain_constant(int n, int q);

// Spherical Cauchy kernel on S^n in R^{n+1}: (x - y)/|x - y|^n in Cl_{n+1}.
Multivector sphere_Gs(const Vec& x, const Vec& y, int n);

// Spherical Green kernel (n > 2): |x - y|^{2-n} / (n - 2).
double sphere_Hs(const Vec& x, const Vec& y, int n);

// RP^n kernels: order 1 -> G_s(x,y) +- G_s(-x,y); order 2 -> H_s +- H_s(-x,.).
Multivector rp_kernel(const Vec& x, const Vec& y, int n, BundleSign bundle,
                      int order);

// ---- lattice-sum kernels ---------------------------------------------------

// Z^k-periodized fundamental solution with sign character, evaluated at the
// difference x - y. Generic and critical regimes run the +-paired signed
// shell sum; the supercritical regime runs the a/b-telescoped series.
Multivector cot_kernel(const KernelSpec& spec, const Vec& x, const Vec& y,
                       ExecPolicy exec = ExecPolicy::parallel);

// cot_{q,k,l}(x,y) +- cot_{q,k,l}(-x,y).
Multivector semidirect_kernel(const KernelSpec& spec, const Vec& x,
                              const Vec& y, ExecPolicy exec = ExecPolicy::parallel);

// Transversion-group kernel G(x) (sum over Z^k at x^{-1}-y^{-1}) G(y),
// with the k = n-1 and k = n regularizations.
Multivector transversion_kernel(const KernelSpec& spec, const Vec& x,
                                const Vec& y, ExecPolicy exec = ExecPolicy::parallel);

// ---- dilation-group (Hopf manifold) kernels --------------------------------

// mode literal: the printed series C_1 + 2^{2-2n} C_2, term-truncated at the
// dyadic bound. mode orbit: G(x-y) + sum_{j>=1} [2^{j(n-1)} G(2^j x - y) -
// G(x)] + sum_{j>=1} 2^{-j(n-1)} G(2^{-j} x - y).
Multivector hopf_kernel(const KernelSpec& spec, const Vec& x, const Vec& y);

// Scalar part of 2 C(x,y) e_n; x on the punctured hyperplane spanned by
// e_1..e_{n-1}.
double hopf_poisson(const Vec& x, const Vec& y, int n,
                    const TruncationPolicy& trunc, HopfMode mode);

using DifferenceKernel = std::function<Multivector(const Vec&)>;

// Calderon-Zygmund transfer series: the literal Hopf assembly with a caller
// supplied difference kernel K in place of G.
Multivector hopf_transfer(const DifferenceKernel& K, const Vec& x, const Vec& y,
                          int n, const TruncationPolicy& trunc);

// Closed-form collapse constants of the literal series (geometric sums):
// C_1 = G(x-y) / (1 - 2^{1-n}),  C = (1 - 2^{3-3n})/(1 - 2^{1-n}) G(x-y).
double hopf_c1_collapse_constant(int n);
double hopf_collapse_constant(int n);

// ---- truncation bookkeeping -------------------------------------------------

// Upper bound for the truncation tail in the generic cot regime:
// paired (shell-symmetric) summation ~ C R^{k-(n-q)-1}; the unpaired bound is
// C R^{k-(n-q)}. Constants calibrated against direct-sum measurements.
struct TailBounds {
  double paired = 0.0;
  double unpaired = 0.0;
};
TailBounds tail_bounds(const KernelSpec& spec);

// The paired bound (the summation policy in use). Throws std::domain_error
// for non-generic regimes.
double tail_estimate(const KernelSpec& spec);

// Predicted convergence order of |K_R - K_inf| for lattice families
// (generic: n-q-k+1; critical/supercritical: 1).
double predicted_convergence_order(const KernelSpec& spec);

// ---- dispatch ---------------------------------------------------------------

// Evaluates the kernel named by the spec at (x, y). hopf_transfer uses
// K = G_q with the spec's q.
Multivector kernel_value(const KernelSpec& spec, const Vec& x, const Vec& y,
                         ExecPolicy exec = ExecPolicy::parallel);

}  // namespace conflat
