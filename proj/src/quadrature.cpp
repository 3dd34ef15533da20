#include "conflat/quadrature.hpp"

#include <cmath>

#include "conflat/lattice.hpp"

namespace conflat {

namespace {

double dist(const Vec& a, const Vec& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

Vec negated(const Vec& v) {
  Vec out(v);
  for (double& c : out) c = -c;
  return out;
}

Vec axpy(double alpha, const Vec& x, double beta, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
  return out;
}

constexpr std::size_t kChunk = 256;  // canonical reduction block

}  // namespace

Multivector surface_integral(const Surface& s, const NodeFn& integrand,
                             ExecPolicy exec) {
  if (s.nodes.empty()) throw std::invalid_argument("surface_integral: no nodes");
  const int dim_probe = [&] {
    Multivector first = integrand(s.nodes[0]);
    return first.dim();
  }();
  const std::size_t ncomp = std::size_t{1} << dim_probe;
  const std::size_t nchunks = (s.nodes.size() + kChunk - 1) / kChunk;
  std::vector<double> partials(nchunks * ncomp, 0.0);
  std::vector<int> bad(nchunks, -1);
  std::vector<std::exception_ptr> errors(nchunks);

  // exceptions must not unwind through the OpenMP region; capture per chunk
  auto chunk_fn = [&](std::size_t c) noexcept {
    try {
      std::vector<Kahan> acc(ncomp);
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(lo + kChunk, s.nodes.size());
      for (std::size_t i = lo; i < hi; ++i) {
        Multivector v = integrand(s.nodes[i]);
        bool finite = true;
        for (std::uint32_t m = 0; m < v.size(); ++m)
          if (!std::isfinite(v[m])) finite = false;
        if (!finite) {
          bad[c] = static_cast<int>(i);
          return;
        }
        const double w = s.nodes[i].weight;
        for (std::uint32_t m = 0; m < v.size(); ++m) acc[m].add(w * v[m]);
      }
      for (std::size_t m = 0; m < ncomp; ++m) partials[c * ncomp + m] = acc[m].sum;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

#ifdef _OPENMP
  if (exec == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c)
      chunk_fn(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < nchunks; ++c) chunk_fn(c);
  }
#else
  (void)exec;
  for (std::size_t c = 0; c < nchunks; ++c) chunk_fn(c);
#endif

  for (std::size_t c = 0; c < nchunks; ++c)
    if (errors[c]) std::rethrow_exception(errors[c]);
  for (std::size_t c = 0; c < nchunks; ++c)
    if (bad[c] >= 0)
      throw std::domain_error("surface_integral: non-finite integrand at node " +
                              std::to_string(bad[c]));

  std::vector<Kahan> acc(ncomp);
  for (std::size_t c = 0; c < nchunks; ++c)
    for (std::size_t m = 0; m < ncomp; ++m) acc[m].add(partials[c * ncomp + m]);
  Multivector out(dim_probe);
  for (std::uint32_t m = 0; m < ncomp; ++m) out[m] = acc[m].sum;
  return out;
}

Multivector cauchy_reproduce(const KernelXY& kernel, const Surface& s,
                             const FieldFn& f, const Vec& y, double omega) {
  if (omega == 0.0)
    throw std::invalid_argument("cauchy_reproduce: omega must be nonzero");
  NodeFn integrand = [&](const SurfaceNode& node) {
    return kernel(node.x, y) * Multivector::from_vector(node.normal) *
           f(node.x);
  };
  Multivector total = surface_integral(s, integrand);
  total *= 1.0 / omega;
  return total;
}

RpSymmetricValues rp_symmetric_identities(BundleSign bundle, const Surface& band,
                                          const FieldFn& f, const Vec& y,
                                          double cap_radius,
                                          const std::vector<int>& cap_counts) {
  if (band.kind != SurfaceKind::latitude_band)
    throw std::invalid_argument(
        "rp_symmetric_identities: needs an antipodally symmetric band surface");
  const int n = band.sphere_dim;
  if (y.size() != static_cast<std::size_t>(n + 1))
    throw std::invalid_argument("rp_symmetric_identities: y needs n+1 coords");

  // sampled parity check: f must be even or odd under x -> -x
  {
    double even_def = 0.0, odd_def = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < band.nodes.size();
         i += std::max<std::size_t>(1, band.nodes.size() / 7)) {
      Multivector fp = f(band.nodes[i].x);
      Multivector fm = f(negated(band.nodes[i].x));
      even_def = std::max(even_def, (fp - fm).norm());
      odd_def = std::max(odd_def, (fp + fm).norm());
      scale = std::max(scale, fp.norm());
    }
    if (std::min(even_def, odd_def) > 1e-6 * std::max(1.0, scale))
      throw std::invalid_argument(
          "rp_symmetric_identities: f has no definite parity under x -> -x");
  }

  const double omega = reproduction_normalization(n);
  KernelXY kernel = [&](const Vec& x, const Vec& yy) {
    return rp_kernel(x, yy, n, bundle, 1);
  };

  RpSymmetricValues out;
  out.symmetric_surface = cauchy_reproduce(kernel, band, f, y, omega);

  // hemisphere case: geodesic sphere around y (small, so it lies in one
  // hemisphere), reproduction constant 1
  Vec yhat(y);
  double ny = 0.0;
  for (double c : yhat) ny += c * c;
  ny = std::sqrt(ny);
  for (double& c : yhat) c /= ny;
  Surface cap = make_cap_boundary(yhat, cap_radius, cap_counts);
  out.hemisphere = cauchy_reproduce(kernel, cap, f, yhat, omega);
  return out;
}

Multivector higher_order_reproduce(const KernelSpec& spec, const Surface& s,
                                   const FieldFn& f, const Vec& y, double h) {
  spec.validate();
  const int n = spec.n, q = spec.q, k = spec.k;
  if (q < 1 || q > n - 1)
    throw std::invalid_argument("higher_order_reproduce: need 1 <= q <= n-1");

  // orbit disjointness: the enclosed ball must avoid its lattice translates
  if (s.kind == SurfaceKind::euclid_sphere) {
    if (2.0 * s.radius >= 1.0)
      throw std::invalid_argument(
          "higher_order_reproduce: surface too large for the unit cell");
    if (dist(s.center, y) >= s.radius)
      throw std::invalid_argument("higher_order_reproduce: y outside the surface");
  }

  // sampled bundle periodicity of f: f(x + e_j) = (-1)^{[j <= l]} f(x)
  {
    KernelSpec probe = spec;
    double tol = 1e-6;
    if (probe.cot_regime() == CotRegime::generic)
      tol = std::max(tol, 10.0 * tail_bounds(probe).paired);
    const Vec& x0 = s.nodes[0].x;
    Multivector f0 = f(x0);
    for (int j = 0; j < k; ++j) {
      Vec xt(x0);
      xt[j] += 1.0;
      const double sign = j < spec.l ? -1.0 : 1.0;
      Multivector def = f(xt) - sign * f0;
      if (def.norm() > tol * std::max(1.0, f0.norm()))
        throw std::invalid_argument(
            "higher_order_reproduce: f fails the bundle periodicity check");
    }
  }

  const double omega = reproduction_normalization(n);
  Multivector total(n);
  double mu = 1.0;
  for (int j = 0; j < q; ++j) {
    KernelSpec layer = spec;
    layer.q = j + 1;
    layer.validate();
    NodeFn integrand = [&](const SurfaceNode& node) {
      Multivector dj =
          j == 0 ? f(node.x) : dirac_iter(f, node.x, j, h);
      return cot_kernel(layer, node.x, y) *
             Multivector::from_vector(node.normal) * dj;
    };
    Multivector term = surface_integral(s, integrand);
    term *= mu / omega;
    total += term;
    mu = -mu / fundamental_chain_constant(n, j + 2);
  }
  return total;
}

Multivector hopf_reproduce(const KernelSpec& spec, const Surface& s,
                           const FieldFn& f, const Vec& y) {
  for (const SurfaceNode& node : s.nodes) {
    double r = 0.0;
    for (double c : node.x) r += c * c;
    r = std::sqrt(r);
    if (r < 1.0 || r >= 2.0)
      throw std::invalid_argument(
          "hopf_reproduce: surface not contained in the fundamental annulus");
  }
  const double omega = reproduction_normalization(spec.n);
  KernelXY kernel = [&](const Vec& x, const Vec& yy) {
    return hopf_kernel(spec, x, yy);
  };
  return cauchy_reproduce(kernel, s, f, y, omega);
}

PlemeljResult plemelj_limit(const KernelXY& kernel, const Surface& s,
                            const FieldFn& eta, const Vec& w, Side side,
                            const PlemeljParams& params) {
  PlemeljResult out;
  const int dim = static_cast<int>(w.size());
  const double omega =
      params.omega != 0.0 ? params.omega : reproduction_normalization(
          s.kind == SurfaceKind::euclid_sphere ? dim : s.sphere_dim);

  // nontangential path: radial for euclidean spheres, geodesic along the
  // normal for on-sphere surfaces
  Vec nw;
  double best = 1e300;
  for (const SurfaceNode& node : s.nodes) {
    const double d = dist(node.x, w);
    if (d < best) {
      best = d;
      nw = node.normal;
    }
  }
  auto path_point = [&](double t) {
    const double dir = side == Side::inner ? -1.0 : 1.0;
    if (s.kind == SurfaceKind::euclid_sphere) {
      Vec p(w);
      for (int j = 0; j < dim; ++j) p[j] += dir * t * nw[j];
      return p;
    }
    // stay exactly on the sphere
    Vec p = axpy(std::cos(t), w, dir * std::sin(t), nw);
    double r = 0.0;
    for (double c : p) r += c * c;
    r = std::sqrt(r);
    for (double& c : p) c /= r;
    return p;
  };

  for (double t : params.offsets) {
    const Vec y = path_point(t);
    NodeFn integrand = [&](const SurfaceNode& node) {
      return kernel(node.x, y) * Multivector::from_vector(node.normal) *
             eta(node.x);
    };
    Multivector v = surface_integral(s, integrand);
    v *= 1.0 / omega;
    out.path_values.push_back(v);
  }
  {
    const std::size_t m = out.path_values.size();
    if (m >= 2)
      out.limit = 2.0 * out.path_values[m - 1] - out.path_values[m - 2];
    else
      out.limit = out.path_values.back();
  }

  // principal value by symmetric cap exclusion around w (and any antipodal
  // images of the singularity), Richardson in epsilon
  std::vector<Vec> holes = {w};
  for (const Vec& p : params.extra_singular_points) holes.push_back(p);
  for (double eps : params.exclusions) {
    NodeFn integrand = [&](const SurfaceNode& node) {
      for (const Vec& hole : holes)
        if (dist(node.x, hole) < eps)
          return Multivector(static_cast<int>(node.x.size()));
      return kernel(node.x, w) * Multivector::from_vector(node.normal) *
             eta(node.x);
    };
    Multivector v = surface_integral(s, integrand);
    v *= 1.0 / omega;
    out.pv_values.push_back(v);
  }
  {
    const std::size_t m = out.pv_values.size();
    if (m >= 2)
      out.principal_value = 2.0 * out.pv_values[m - 1] - out.pv_values[m - 2];
    else
      out.principal_value = out.pv_values.back();
    if (m >= 3) {
      const double d1 = (out.pv_values[m - 2] - out.pv_values[m - 3]).norm();
      const double d2 = (out.pv_values[m - 1] - out.pv_values[m - 2]).norm();
      // first-order epsilon law: successive halvings should shrink ~2x
      if (d2 > 1e-12 && (d1 / d2 < 1.2 || d1 / d2 > 4.5))
        out.extrapolation_converged = false;
    }
  }
  return out;
}

PlemeljResult plemelj_limit(const KernelSpec& spec, const Surface& s,
                            const FieldFn& eta, const Vec& w, Side side,
                            PlemeljParams params) {
  if (spec.family == KernelFamily::rp || spec.family == KernelFamily::semidirect)
    params.extra_singular_points.push_back(negated(w));
  if (params.omega == 0.0) {
    const int n = spec.family == KernelFamily::rp ||
                          spec.family == KernelFamily::sphere_cauchy
                      ? spec.n
                      : spec.n;
    params.omega = reproduction_normalization(n);
  }
  KernelXY kernel = [&spec](const Vec& x, const Vec& y) {
    return kernel_value(spec, x, y);
  };
  PlemeljResult out = plemelj_limit(kernel, s, eta, w, side, params);
  if (spec.family == KernelFamily::hopf) {
    // an origin-centered sphere projects to a slice whose complement in
    // S^1 x S^{n-1} is connected: no Hardy split
    bool centered = s.kind == SurfaceKind::euclid_sphere;
    if (centered)
      for (double c : s.center) centered = centered && std::abs(c) < 1e-14;
    out.hardy_split = !centered;
  }
  return out;
}

void PointMeasure::validate() const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (dist(atoms[i].location, atoms[j].location) < 1e-12)
        throw std::invalid_argument("PointMeasure: atom locations must be distinct");
}

Multivector measure_convolution(const KernelXY& kernel, const PointMeasure& mu,
                                const Vec& x) {
  mu.validate();
  if (mu.atoms.empty())
    throw std::invalid_argument("measure_convolution: empty measure");
  for (const auto& atom : mu.atoms)
    if (dist(atom.location, x) < 1e-9)
      throw singularity_error("measure_convolution: x too close to an atom");
  Multivector total = kernel(x, mu.atoms[0].location) * mu.atoms[0].weight;
  for (std::size_t i = 1; i < mu.atoms.size(); ++i)
    total += kernel(x, mu.atoms[i].location) * mu.atoms[i].weight;
  return total;
}

}  // namespace conflat
