#pragma once

#include <functional>
#include <optional>

#include "conflat/diffops.hpp"
#include "conflat/kernel_spec.hpp"
#include "conflat/kernels.hpp"
#include "conflat/surface.hpp"

namespace conflat {

using NodeFn = std::function<Multivector(const SurfaceNode&)>;
using KernelXY = std::function<Multivector(const Vec&, const Vec&)>;

// Weighted compensated sum over the nodes in canonical order (fixed-size
// chunks combined in chunk order; the parallel path reproduces the serial
// bits). Throws std::domain_error naming the node on non-finite values.
Multivector surface_integral(const Surface& s, const NodeFn& integrand,
                             ExecPolicy exec = ExecPolicy::parallel);

// (1/omega) * integral of kernel(x, y) n(x) f(x) dsigma(x). With
// omega = reproduction_normalization(n) the Euclidean Cauchy kernel
// reproduces monogenic f with constant exactly 1.
Multivector cauchy_reproduce(const KernelXY& kernel, const Surface& s,
                             const FieldFn& f, const Vec& y, double omega);

struct RpSymmetricValues {
  Multivector hemisphere;         // small cap around y: expect f(y)
  Multivector symmetric_surface;  // full antipodal band: expect 2 f(y) or 0
};

// The RP^n surface identities on S^n. The band surface must satisfy S = -S
// and enclose both y and -y; f must have a definite parity under x -> -x
// (sampled; mixed parity is rejected). The symmetric-surface contracts
// (plus: 2 f(y), minus: 0) hold for odd f, which is what the measure
// convolution with the minus kernel produces.
RpSymmetricValues rp_symmetric_identities(BundleSign bundle, const Surface& band,
                                          const FieldFn& f, const Vec& y,
                                          double cap_radius = 0.35,
                                          const std::vector<int>& cap_counts = {256});

// Theorem-style higher-order reproduction: (1/omega) * integral of
// sum_j mu_j cot_{j+1,k,l}(x,y) n(x) D^j f(x), with the chain coefficients
// mu_0 = 1, mu_j = -mu_{j-1}/c_{j+1} demanded by D G_q = c_q G_{q-1}
// (the printed (-1)^j assumes a normalized kernel chain). D^j f uses
// dirac_iter with step h.
Multivector higher_order_reproduce(const KernelSpec& spec, const Surface& s,
                                   const FieldFn& f, const Vec& y, double h);

// Cauchy reproduction on the Hopf manifold: surface must lie in the
// fundamental annulus 1 <= |x| < 2 and bound a region containing y.
Multivector hopf_reproduce(const KernelSpec& spec, const Surface& s,
                           const FieldFn& f, const Vec& y);

enum class Side { inner, outer };

struct PlemeljParams {
  std::vector<double> offsets = {0.2, 0.1, 0.05};  // nontangential path
  std::vector<double> exclusions = {0.2, 0.1, 0.05};  // PV cap radii
  double omega = 0.0;  // 0 = reproduction_normalization(dim)
  std::vector<Vec> extra_singular_points;  // e.g. -w for antipodal kernels
};

struct PlemeljResult {
  Multivector limit;            // extrapolated one-sided limit
  Multivector principal_value;  // epsilon-extrapolated PV
  std::vector<Multivector> path_values;
  std::vector<Multivector> pv_values;
  bool extrapolation_converged = true;
  std::optional<bool> hardy_split;  // set by the spec-aware wrapper
};

PlemeljResult plemelj_limit(const KernelXY& kernel, const Surface& s,
                            const FieldFn& eta, const Vec& w, Side side,
                            const PlemeljParams& params = {});

// Spec-aware wrapper: builds the kernel callable, adds the antipodal
// singular point for rp/semidirect families, and sets the Hardy-split flag
// (false for a Hopf kernel over an origin-centered sphere, whose projection
// has connected complement).
PlemeljResult plemelj_limit(const KernelSpec& spec, const Surface& s,
                            const FieldFn& eta, const Vec& w, Side side,
                            PlemeljParams params = {});

struct PointMeasure {
  struct Atom {
    Vec location;
    Multivector weight;
  };
  std::vector<Atom> atoms;
  void validate() const;  // pairwise distinct locations
};

// sum_atoms kernel(x, location) * weight. Throws near atom locations.
Multivector measure_convolution(const KernelXY& kernel, const PointMeasure& mu,
                                const Vec& x);

}  // namespace conflat
