#include "conflat/kernels.hpp"

#include <cmath>
#include <limits>

#include "conflat/lattice.hpp"

namespace conflat {

namespace {

constexpr double kSingular2 = 1e-24;  // squared-distance threshold

double inv_pow(double r2, int e) {
  // r^{-e} from r^2, e >= 0 small
  const double inv = 1.0 / r2;
  double acc = 1.0;
  for (int i = 0; i < e / 2; ++i) acc *= inv;
  if (e & 1) acc *= std::sqrt(inv);
  return acc;
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

Vec kelvin_coords(const Vec& x) {
  const double r2 = norm2(x);
  if (r2 < kSingular2) throw singularity_error("vector inverse at 0");
  Vec out(x);
  for (double& c : out) c *= -1.0 / r2;
  return out;
}

Vec diff(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("kernel arguments must share a dimension");
  Vec v(x);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= y[i];
  return v;
}

void check_on_sphere(const Vec& x, int n, const char* who) {
  if (x.size() != static_cast<std::size_t>(n + 1))
    throw std::invalid_argument(std::string(who) +
                                ": points on S^n need n+1 coordinates");
  if (std::abs(std::sqrt(norm2(x)) - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(who) + ": point is off the sphere");
}

// Distance^2 from v to the nearest point of Z^k x {0}^{n-k}.
double lattice_orbit_dist2(const Vec& v, int k) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = i < static_cast<std::size_t>(k)
                         ? v[i] - std::round(v[i])
                         : v[i];
    d2 += r * r;
  }
  return d2;
}

int sign_character(const int* m, int l) {
  int parity = 0;
  for (int i = 0; i < l; ++i) parity += std::abs(m[i]);
  return (parity & 1) ? -1 : +1;
}

// Canonical shell-ordered reduction. fn(s, partial) fills ncomp doubles with
// the shell-s partial sum; partials are combined in shell order with
// compensation. The parallel path distributes shells and combines the same
// partials in the same order, so it is bit-identical to the serial path.
template <typename ShellFn>
void shell_ordered_sum(int R, int ncomp, ExecPolicy exec, const ShellFn& fn,
                       double* out) {
  std::vector<double> partials(static_cast<std::size_t>(R + 1) * ncomp, 0.0);
#ifdef _OPENMP
  if (exec == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s <= R; ++s) fn(s, &partials[static_cast<std::size_t>(s) * ncomp]);
  } else {
    for (int s = 0; s <= R; ++s) fn(s, &partials[static_cast<std::size_t>(s) * ncomp]);
  }
#else
  (void)exec;
  for (int s = 0; s <= R; ++s) fn(s, &partials[static_cast<std::size_t>(s) * ncomp]);
#endif
  std::vector<Kahan> acc(ncomp);
  for (int s = 0; s <= R; ++s)
    for (int c = 0; c < ncomp; ++c)
      acc[c].add(partials[static_cast<std::size_t>(s) * ncomp + c]);
  for (int c = 0; c < ncomp; ++c) out[c] = acc[c].sum;
}

struct CotParams {
  int n, q, k, l, R;
  CotRegime regime;
  Vec a, b;  // supercritical only
};

CotParams cot_params(const KernelSpec& spec) {
  CotParams p;
  p.n = spec.n;
  p.q = spec.q;
  p.k = spec.k;
  p.l = spec.l;
  p.R = spec.effective_radius();
  p.regime = spec.cot_regime();
  if (p.regime == CotRegime::supercritical) {
    p.a = spec.a.empty() ? KernelSpec::default_a(spec.n) : spec.a;
    p.b = spec.b.empty() ? KernelSpec::default_b(spec.n) : spec.b;
  }
  return p;
}

// Signed +-paired lattice sum of G_q(v + m) over sup-norm shells. Serves the
// generic and critical regimes (the critical Lambda-pairing is exactly the
// paired shell sum; the -G_q(m) regularizers of the k = n-1 transversion
// display cancel pairwise and are omitted). Output: n doubles for odd q
// (vector value), 1 double for even q.
void paired_cot_sum(const CotParams& p, const Vec& v, ExecPolicy exec,
                    double* out) {
  const bool odd = p.q & 1;
  const int ncomp = odd ? p.n : 1;
  const int e = odd ? p.n - p.q + 1 : p.n - p.q;
  const int n = p.n, k = p.k, l = p.l;
  const double* vd = v.data();
  auto shell = [&](int s, double* partial) {
    std::array<Kahan, kMaxDim> acc{};
    if (s == 0) {
      double r2 = norm2(v);
      const double c = inv_pow(r2, e);
      if (odd)
        for (int i = 0; i < n; ++i) acc[i].add(vd[i] * c);
      else
        acc[0].add(c);
    } else {
      for_each_shell_pair(k, s, [&](const int* m) {
        const int sgn = sign_character(m, l);
        double rp = 0.0, rm = 0.0;
        for (int i = 0; i < k; ++i) {
          const double wp = vd[i] + m[i];
          const double wm = vd[i] - m[i];
          rp += wp * wp;
          rm += wm * wm;
        }
        for (int i = k; i < n; ++i) rp += vd[i] * vd[i], rm += vd[i] * vd[i];
        const double cp = sgn * inv_pow(rp, e);
        const double cm = sgn * inv_pow(rm, e);
        if (odd) {
          for (int i = 0; i < k; ++i)
            acc[i].add((vd[i] + m[i]) * cp + (vd[i] - m[i]) * cm);
          for (int i = k; i < n; ++i) acc[i].add(vd[i] * (cp + cm));
        } else {
          acc[0].add(cp + cm);
        }
      });
    }
    for (int c = 0; c < ncomp; ++c) partial[c] = acc[c].sum;
  };
  shell_ordered_sum(p.R, ncomp, exec, shell, out);
}

// Supercritical telescoped series: base G_q(v-a) - G_q(v-b) plus paired
// signed shell terms; for l = 0 the constant pair -G_q(m-a) + G_q(m-b) is
// included. For l >= 1 the constants are omitted: the signed series already
// converges and keeping them breaks the antiperiodic bundle law (arbitrated
// by the periodicity oracle).
void telescoped_cot_sum(const CotParams& p, const Vec& v, ExecPolicy exec,
                        double* out) {
  const bool odd = p.q & 1;
  const int ncomp = odd ? p.n : 1;
  const int e = odd ? p.n - p.q + 1 : p.n - p.q;
  const int n = p.n, k = p.k, l = p.l;
  const bool constants = (l == 0);
  const Vec va = diff(v, p.a), vb = diff(v, p.b);
  Vec neg_a(p.a), neg_b(p.b);
  for (double& c : neg_a) c = -c;
  for (double& c : neg_b) c = -c;
  const double* da = va.data();
  const double* db = vb.data();
  const double* na = neg_a.data();
  const double* nb = neg_b.data();
  static constexpr int kZero[16] = {0};

  // adds sgn * G_q(w + pm*m) into acc
  auto add_term = [&](std::array<Kahan, kMaxDim>& acc, const double* w,
                      const int* m, int pm, double sgn) {
    double r2 = 0.0;
    for (int i = 0; i < k; ++i) {
      const double wi = w[i] + pm * m[i];
      r2 += wi * wi;
    }
    for (int i = k; i < n; ++i) r2 += w[i] * w[i];
    const double c = sgn * inv_pow(r2, e);
    if (odd) {
      for (int i = 0; i < k; ++i) acc[i].add((w[i] + pm * m[i]) * c);
      for (int i = k; i < n; ++i) acc[i].add(w[i] * c);
    } else {
      acc[0].add(c);
    }
  };

  auto shell = [&](int s, double* partial) {
    std::array<Kahan, kMaxDim> acc{};
    if (s == 0) {
      add_term(acc, da, kZero, 0, +1.0);
      add_term(acc, db, kZero, 0, -1.0);
    } else {
      for_each_shell_pair(k, s, [&](const int* m) {
        const double sgn = sign_character(m, l);
        for (int pm : {+1, -1}) {
          add_term(acc, da, m, pm, +sgn);
          add_term(acc, db, m, pm, -sgn);
          if (constants) {
            add_term(acc, na, m, pm, -sgn);  // -G_q(m - a)
            add_term(acc, nb, m, pm, +sgn);  // +G_q(m - b)
          }
        }
      });
    }
    for (int c = 0; c < ncomp; ++c) partial[c] = acc[c].sum;
  };
  shell_ordered_sum(p.R, ncomp, exec, shell, out);
}

Multivector cot_value_at(const CotParams& p, const Vec& v, ExecPolicy exec) {
  if (p.regime == CotRegime::supercritical) {
    if (lattice_orbit_dist2(diff(v, p.a), p.k) < kSingular2 ||
        lattice_orbit_dist2(diff(v, p.b), p.k) < kSingular2)
      throw singularity_error("cot kernel argument on the singular orbit");
    double out[kMaxDim] = {0};
    telescoped_cot_sum(p, v, exec, out);
    Multivector r(p.n);
    if (p.q & 1)
      for (int i = 0; i < p.n; ++i) r[std::uint32_t{1} << i] = out[i];
    else
      r[0] = out[0];
    return r;
  }
  if (lattice_orbit_dist2(v, p.k) < kSingular2)
    throw singularity_error("cot kernel argument on the lattice orbit");
  double out[kMaxDim] = {0};
  paired_cot_sum(p, v, exec, out);
  Multivector r(p.n);
  if (p.q & 1)
    for (int i = 0; i < p.n; ++i) r[std::uint32_t{1} << i] = out[i];
  else
    r[0] = out[0];
  return r;
}

}  // namespace

Multivector euclid_G(const Vec& v) {
  const int n = static_cast<int>(v.size());
  const double r2 = norm2(v);
  if (r2 < kSingular2) throw singularity_error("euclid_G at 0");
  const double c = inv_pow(r2, n);
  Vec w(v);
  for (double& x : w) x *= c;
  return Multivector::from_vector(w);
}

double fundamental_chain_constant(int n, int q) {
  return (q % 2 == 0) ? static_cast<double>(q - n)
                      : static_cast<double>(1 - q);
}

Multivector euclid_Gk(const Vec& v, int q) {
  const int n = static_cast<int>(v.size());
  if (q < 1 || q > n - 1)
    throw std::invalid_argument("euclid_Gk: need 1 <= q <= n-1");
  const double r2 = norm2(v);
  if (r2 < kSingular2) throw singularity_error("euclid_Gk at 0");
  if (q & 1) {
    const double c = inv_pow(r2, n - q + 1);
    Vec w(v);
    for (double& x : w) x *= c;
    return Multivector::from_vector(w);
  }
  return Multivector::scalar(n, inv_pow(r2, n - q));
}

Multivector sphere_Gs(const Vec& x, const Vec& y, int n) {
  check_on_sphere(x, n, "sphere_Gs");
  check_on_sphere(y, n, "sphere_Gs");
  Vec v = diff(x, y);
  const double r2 = norm2(v);
  if (r2 < kSingular2) throw singularity_error("sphere_Gs at x = y");
  const double c = inv_pow(r2, n);
  for (double& w : v) w *= c;
  return Multivector::from_vector(v);
}

double sphere_Hs(const Vec& x, const Vec& y, int n) {
  if (n <= 2) throw std::invalid_argument("sphere_Hs: needs n > 2");
  check_on_sphere(x, n, "sphere_Hs");
  check_on_sphere(y, n, "sphere_Hs");
  const double r2 = norm2(diff(x, y));
  if (r2 < kSingular2) throw singularity_error("sphere_Hs at x = y");
  return inv_pow(r2, n - 2) / (n - 2);
}

Multivector rp_kernel(const Vec& x, const Vec& y, int n, BundleSign bundle,
                      int order) {
  const double s = bundle == BundleSign::plus ? 1.0 : -1.0;
  Vec mx(x);
  for (double& c : mx) c = -c;
  if (order == 1) {
    return sphere_Gs(x, y, n) + s * sphere_Gs(mx, y, n);
  }
  if (order == 2) {
    const double h = sphere_Hs(x, y, n) + s * sphere_Hs(mx, y, n);
    return Multivector::scalar(n + 1, h);
  }
  throw std::invalid_argument("rp_kernel: order must be 1 or 2");
}

Multivector cot_kernel(const KernelSpec& spec, const Vec& x, const Vec& y,
                       ExecPolicy exec) {
  spec.validate();
  if (x.size() != static_cast<std::size_t>(spec.n) || x.size() != y.size())
    throw std::invalid_argument("cot_kernel: points need n coordinates");
  return cot_value_at(cot_params(spec), diff(x, y), exec);
}

Multivector semidirect_kernel(const KernelSpec& spec, const Vec& x,
                              const Vec& y, ExecPolicy exec) {
  spec.validate();
  const CotParams p = cot_params(spec);
  Vec mx(x);
  for (double& c : mx) c = -c;
  Multivector first = cot_value_at(p, diff(x, y), exec);
  Multivector second = cot_value_at(p, diff(mx, y), exec);
  return spec.bundle_sign == BundleSign::plus ? first + second : first - second;
}

Multivector transversion_kernel(const KernelSpec& spec, const Vec& x,
                                const Vec& y, ExecPolicy exec) {
  spec.validate();
  const int n = spec.n, k = spec.k;
  if (x.size() != static_cast<std::size_t>(n) || y.size() != x.size())
    throw std::invalid_argument("transversion_kernel: points need n coordinates");
  const Vec vhat = diff(kelvin_coords(x), kelvin_coords(y));

  CotParams p;
  p.n = n;
  p.q = 1;
  p.k = k;
  p.l = spec.l;
  p.R = spec.effective_radius();
  if (k < n - 1) {
    p.regime = CotRegime::generic;
  } else if (k == n - 1) {
    p.regime = CotRegime::critical;
  } else {
    p.regime = CotRegime::supercritical;
    p.a = spec.a.empty() ? KernelSpec::default_a(n) : spec.a;
    p.b = spec.b.empty() ? KernelSpec::default_b(n) : spec.b;
  }
  Multivector inner = cot_value_at(p, vhat, exec);
  return euclid_G(x) * inner * euclid_G(y);
}

Multivector hopf_kernel(const KernelSpec& spec, const Vec& x, const Vec& y) {
  const int n = spec.n;
  if (x.size() != static_cast<std::size_t>(n) || y.size() != x.size())
    throw std::invalid_argument("hopf_kernel: points need n coordinates");
  if (norm2(x) < kSingular2 || norm2(y) < kSingular2)
    throw singularity_error("hopf_kernel: zero input vector");
  const int J = spec.dyadic_bound();

  if (spec.mode == HopfMode::literal) {
    TruncationPolicy trunc = spec.trunc;
    trunc.radius = J;
    return hopf_transfer([](const Vec& w) { return euclid_G(w); }, x, y, n,
                         trunc);
  }

  // orbit mode: G(x-y) + sum_{j>=1} [2^{j(n-1)} G(2^j x - y) - G(x)]
  //                    + sum_{j>=1} 2^{-j(n-1)} G(2^{-j} x - y)
  Multivector gx = euclid_G(x);
  std::vector<Kahan> acc(static_cast<std::size_t>(n));
  {
    Multivector g0 = euclid_G(diff(x, y));
    for (int i = 0; i < n; ++i) acc[i].add(g0[std::uint32_t{1} << i]);
  }
  double pow2 = 1.0, weight = 1.0;
  const double wfac = std::pow(2.0, n - 1);
  for (int j = 1; j <= J; ++j) {
    pow2 *= 2.0;
    weight *= wfac;
    Vec w(x);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = pow2 * x[i] - y[i];
    if (norm2(w) < kSingular2)
      throw singularity_error("hopf_kernel: dyadic orbit singularity");
    Multivector g = euclid_G(w);
    for (int i = 0; i < n; ++i)
      acc[i].add(weight * g[std::uint32_t{1} << i] - gx[std::uint32_t{1} << i]);
  }
  pow2 = 1.0;
  weight = 1.0;
  for (int j = 1; j <= J; ++j) {
    pow2 *= 0.5;
    weight /= wfac;
    Vec w(x);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = pow2 * x[i] - y[i];
    if (norm2(w) < kSingular2)
      throw singularity_error("hopf_kernel: dyadic orbit singularity");
    Multivector g = euclid_G(w);
    for (int i = 0; i < n; ++i) acc[i].add(weight * g[std::uint32_t{1} << i]);
  }
  Multivector out(n);
  for (int i = 0; i < n; ++i) out[std::uint32_t{1} << i] = acc[i].sum;
  return out;
}

double hopf_poisson(const Vec& x, const Vec& y, int n,
                    const TruncationPolicy& trunc, HopfMode mode) {
  if (x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("hopf_poisson: x needs n coordinates");
  if (std::abs(x[n - 1]) > 1e-9)
    throw std::invalid_argument(
        "hopf_poisson: x must lie on the punctured hyperplane x_n = 0");
  KernelSpec spec;
  spec.family = KernelFamily::hopf;
  spec.n = n;
  spec.mode = mode;
  spec.trunc = trunc;
  Multivector c = hopf_kernel(spec, x, y);
  Multivector en = Multivector::basis_vector(n, n - 1);
  return (2.0 * (c * en)).scalar_part();
}

Multivector hopf_transfer(const DifferenceKernel& K, const Vec& x, const Vec& y,
                          int n, const TruncationPolicy& trunc) {
  if (norm2(x) < kSingular2 || norm2(y) < kSingular2)
    throw singularity_error("hopf_transfer: zero input vector");
  const int J = trunc.radius > 0 ? trunc.radius : 60;
  const std::size_t ncomp = std::size_t{1} << n;
  Multivector first(n), second_inner(n);
  {
    std::vector<Kahan> acc(ncomp);
    double scale = 1.0;
    for (int j = 0; j <= J; ++j, scale *= 2.0) {
      Vec w(x);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * (x[i] - y[i]);
      if (norm2(w) < kSingular2)
        throw singularity_error("hopf_transfer: dyadic orbit singularity");
      Multivector g = K(w);
      for (std::uint32_t m = 0; m < ncomp; ++m) acc[m].add(g[m]);
    }
    for (std::uint32_t m = 0; m < ncomp; ++m) first[m] = acc[m].sum;
  }
  const Vec xi = kelvin_coords(x), yi = kelvin_coords(y);
  {
    std::vector<Kahan> acc(ncomp);
    double scale = 2.0;
    for (int j = 1; j <= J; ++j, scale *= 2.0) {
      Vec w(xi);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * (xi[i] - yi[i]);
      if (norm2(w) < kSingular2)
        throw singularity_error("hopf_transfer: dyadic orbit singularity");
      Multivector g = K(w);
      for (std::uint32_t m = 0; m < ncomp; ++m) acc[m].add(g[m]);
    }
    for (std::uint32_t m = 0; m < ncomp; ++m) second_inner[m] = acc[m].sum;
  }
  return first +
         std::pow(2.0, 2 - 2 * n) * (euclid_G(x) * second_inner * euclid_G(y));
}

double hopf_c1_collapse_constant(int n) {
  return 1.0 / (1.0 - std::pow(2.0, 1 - n));
}

double hopf_collapse_constant(int n) {
  return (1.0 - std::pow(2.0, 3 - 3 * n)) / (1.0 - std::pow(2.0, 1 - n));
}

TailBounds tail_bounds(const KernelSpec& spec) {
  const CotRegime regime = spec.cot_regime();
  if (regime == CotRegime::supercritical)
    throw std::domain_error(
        "tail_bounds: not applicable to the supercritical regime");
  const double R = spec.effective_radius();
  const int decay = spec.n - spec.q;  // G_q ~ |m|^{-decay}
  // Constants calibrated against direct-sum tails over the acceptance
  // configurations (n,k,l up to (4,2,2), |x-y| <= 1.5), with ~4x headroom.
  const double c_unpaired = 6.0 * spec.k * std::pow(2.0, spec.k - 1);
  const double c_paired = 10.0 * spec.k * std::pow(2.0, spec.k - 1);
  TailBounds t;
  // paired law R^{k-(n-q)-1} holds in the critical regime too; the unpaired
  // sum only converges in the generic regime
  t.unpaired = regime == CotRegime::generic
                   ? c_unpaired * std::pow(R, spec.k - decay)
                   : std::numeric_limits<double>::infinity();
  t.paired = c_paired * std::pow(R, spec.k - decay - 1);
  return t;
}

double tail_estimate(const KernelSpec& spec) { return tail_bounds(spec).paired; }

double predicted_convergence_order(const KernelSpec& spec) {
  switch (spec.cot_regime()) {
    case CotRegime::generic:
      return static_cast<double>(spec.n - spec.q - spec.k + 1);
    default:
      return 1.0;
  }
}

Multivector kernel_value(const KernelSpec& spec, const Vec& x, const Vec& y,
                         ExecPolicy exec) {
  switch (spec.family) {
    case KernelFamily::euclid:
      return euclid_G(diff(x, y));
    case KernelFamily::euclid_k:
      return euclid_Gk(diff(x, y), spec.q);
    case KernelFamily::sphere_cauchy:
      return sphere_Gs(x, y, spec.n);
    case KernelFamily::sphere_green:
      return Multivector::scalar(spec.n + 1, sphere_Hs(x, y, spec.n));
    case KernelFamily::rp:
      return rp_kernel(x, y, spec.n, spec.bundle_sign, spec.q);
    case KernelFamily::cot:
      return cot_kernel(spec, x, y, exec);
    case KernelFamily::hopf:
      return hopf_kernel(spec, x, y);
    case KernelFamily::transversion:
      return transversion_kernel(spec, x, y, exec);
    case KernelFamily::semidirect:
      return semidirect_kernel(spec, x, y, exec);
    case KernelFamily::hopf_poisson:
      return Multivector::scalar(
          spec.n, hopf_poisson(x, y, spec.n, spec.trunc, spec.mode));
    case KernelFamily::hopf_transfer: {
      const int q = spec.q;
      DifferenceKernel K = [q](const Vec& v) { return euclid_Gk(v, q); };
      return hopf_transfer(K, x, y, spec.n, spec.trunc);
    }
  }
  throw std::invalid_argument("kernel_value: unhandled family");
}

}  // namespace conflat
