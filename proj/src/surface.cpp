#include "conflat/surface.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace conflat {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> expand_counts(int needed, const std::vector<int>& counts) {
  if (counts.empty())
    throw std::invalid_argument("surface rule: empty node counts");
  if (counts.size() == 1) return std::vector<int>(needed, counts[0]);
  if (static_cast<int>(counts.size()) != needed)
    throw std::invalid_argument("surface rule: wrong number of node counts");
  return counts;
}

Vec negated(const Vec& v) {
  Vec out(v);
  for (double& c : out) c = -c;
  return out;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

void unit_sphere_rule(int m, const std::vector<int>& counts,
                      std::vector<Vec>& dirs, std::vector<double>& weights) {
  if (m < 2) throw std::invalid_argument("unit_sphere_rule: m >= 2");
  dirs.clear();
  weights.clear();
  if (m == 2) {
    const int M = expand_counts(1, counts)[0];
    const double w = 2.0 * kPi / M;
    for (int i = 0; i < M; ++i) {
      const double phi = 2.0 * kPi * i / M;
      dirs.push_back({std::cos(phi), std::sin(phi)});
      weights.push_back(w);
    }
    return;
  }
  // m - 2 polar angles via Gauss-Legendre on [0, pi], azimuth uniform.
  const std::vector<int> cnt = expand_counts(m - 1, counts);
  std::vector<std::vector<double>> tn(m - 2), tw(m - 2);
  for (int i = 0; i < m - 2; ++i) {
    std::vector<double> gn, gw;
    gauss_legendre(cnt[i], gn, gw);
    tn[i].resize(gn.size());
    tw[i].resize(gn.size());
    for (std::size_t j = 0; j < gn.size(); ++j) {
      tn[i][j] = 0.5 * kPi * (gn[j] + 1.0);
      tw[i][j] = 0.5 * kPi * gw[j];
    }
  }
  const int M = cnt[m - 2];
  const double wphi = 2.0 * kPi / M;

  std::vector<std::size_t> idx(m - 2, 0);
  while (true) {
    double wpolar = 1.0;
    double sines = 1.0;
    Vec u(m, 0.0);
    double prod_sin = 1.0;
    for (int i = 0; i < m - 2; ++i) {
      const double th = tn[i][idx[i]];
      u[i] = prod_sin * std::cos(th);
      wpolar *= tw[i][idx[i]];
      // density sin^{m-2-i'} with i' 1-based: exponent m-2-i for 0-based i
      sines *= std::pow(std::sin(th), m - 2 - i);
      prod_sin *= std::sin(th);
    }
    for (int p = 0; p < M; ++p) {
      const double phi = 2.0 * kPi * p / M;
      Vec dir(u);
      dir[m - 2] = prod_sin * std::cos(phi);
      dir[m - 1] = prod_sin * std::sin(phi);
      dirs.push_back(std::move(dir));
      weights.push_back(wpolar * sines * wphi);
    }
    int c = m - 3;
    while (c >= 0 && ++idx[c] == tn[c].size()) idx[c--] = 0;
    if (c < 0) break;
  }
}

double Surface::area() const {
  double a = 0.0;
  for (const SurfaceNode& n : nodes) a += n.weight;
  return a;
}

bool Surface::antipodally_symmetric() const {
  if (kind == SurfaceKind::latitude_band) return true;
  return false;
}

Surface make_euclid_sphere(int n, const Vec& center, double radius,
                           const std::vector<int>& counts) {
  if (center.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("make_euclid_sphere: center needs n coordinates");
  if (radius <= 0) throw std::invalid_argument("make_euclid_sphere: radius > 0");
  Surface s;
  s.kind = SurfaceKind::euclid_sphere;
  s.ambient_dim = n;
  s.center = center;
  s.radius = radius;
  s.counts = counts;
  std::vector<Vec> dirs;
  std::vector<double> w;
  unit_sphere_rule(n, counts, dirs, w);
  const double rpow = std::pow(radius, n - 1);
  s.nodes.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    SurfaceNode node;
    node.normal = dirs[i];
    node.x = center;
    for (int j = 0; j < n; ++j) node.x[j] += radius * dirs[i][j];
    node.weight = w[i] * rpow;
    s.nodes.push_back(std::move(node));
  }
  return s;
}

Surface make_latitude(int sphere_n, double theta, const std::vector<int>& counts) {
  if (theta <= 0 || theta >= kPi)
    throw std::invalid_argument("make_latitude: theta in (0, pi)");
  Surface s;
  s.kind = SurfaceKind::latitude;
  s.sphere_dim = sphere_n;
  s.ambient_dim = sphere_n + 1;
  s.theta = theta;
  s.counts = counts;
  std::vector<Vec> dirs;
  std::vector<double> w;
  unit_sphere_rule(sphere_n, counts, dirs, w);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double density = std::pow(st, sphere_n - 1);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    SurfaceNode node;
    node.x.assign(sphere_n + 1, 0.0);
    node.normal.assign(sphere_n + 1, 0.0);
    for (int j = 0; j < sphere_n; ++j) {
      node.x[j] = st * dirs[i][j];
      node.normal[j] = ct * dirs[i][j];
    }
    node.x[sphere_n] = ct;
    node.normal[sphere_n] = -st;
    node.weight = w[i] * density;
    s.nodes.push_back(std::move(node));
  }
  return s;
}

Surface make_latitude_band(int sphere_n, double theta0,
                           const std::vector<int>& counts) {
  if (theta0 <= 0 || theta0 >= kPi / 2)
    throw std::invalid_argument("make_latitude_band: theta0 in (0, pi/2)");
  Surface s = make_latitude(sphere_n, theta0, counts);
  s.kind = SurfaceKind::latitude_band;
  s.theta = theta0;
  const std::size_t half = s.nodes.size();
  // upper component: outward of the band = toward the pole
  for (std::size_t i = 0; i < half; ++i) s.nodes[i].normal = negated(s.nodes[i].normal);
  // lower component: exact antipodes, normals negated again
  for (std::size_t i = 0; i < half; ++i) {
    SurfaceNode node;
    node.x = negated(s.nodes[i].x);
    node.normal = negated(s.nodes[i].normal);
    node.weight = s.nodes[i].weight;
    s.nodes.push_back(std::move(node));
  }
  return s;
}

Surface make_cap_boundary(const Vec& p, double alpha,
                          const std::vector<int>& counts) {
  const int m = static_cast<int>(p.size());  // ambient R^m, sphere S^{m-1}
  if (m < 3) throw std::invalid_argument("make_cap_boundary: ambient >= 3");
  double r2 = 0.0;
  for (double c : p) r2 += c * c;
  if (std::abs(std::sqrt(r2) - 1.0) > 1e-12)
    throw std::invalid_argument("make_cap_boundary: p must lie on the sphere");
  if (alpha <= 0 || alpha >= kPi)
    throw std::invalid_argument("make_cap_boundary: alpha in (0, pi)");

  // orthonormal frame of p^perp
  std::vector<Vec> frame;
  for (int axis = 0; axis < m && static_cast<int>(frame.size()) < m - 1; ++axis) {
    Vec v(m, 0.0);
    v[axis] = 1.0;
    double dp = 0.0;
    for (int j = 0; j < m; ++j) dp += v[j] * p[j];
    for (int j = 0; j < m; ++j) v[j] -= dp * p[j];
    for (const Vec& f : frame) {
      double d = 0.0;
      for (int j = 0; j < m; ++j) d += v[j] * f[j];
      for (int j = 0; j < m; ++j) v[j] -= d * f[j];
    }
    double nv = 0.0;
    for (double c : v) nv += c * c;
    if (nv < 1e-20) continue;
    nv = std::sqrt(nv);
    for (double& c : v) c /= nv;
    frame.push_back(std::move(v));
  }

  Surface s;
  s.kind = SurfaceKind::cap_boundary;
  s.sphere_dim = m - 1;
  s.ambient_dim = m;
  s.point = p;
  s.alpha = alpha;
  s.counts = counts;
  std::vector<Vec> dirs;
  std::vector<double> w;
  unit_sphere_rule(m - 1, counts, dirs, w);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double density = std::pow(sa, m - 2);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    Vec q(m, 0.0);
    for (int f = 0; f < m - 1; ++f)
      for (int j = 0; j < m; ++j) q[j] += dirs[i][f] * frame[f][j];
    SurfaceNode node;
    node.x.assign(m, 0.0);
    node.normal.assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
      node.x[j] = ca * p[j] + sa * q[j];
      node.normal[j] = -sa * p[j] + ca * q[j];
    }
    node.weight = w[i] * density;
    s.nodes.push_back(std::move(node));
  }
  return s;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

double reproduction_normalization(int n) { return -unit_sphere_area(n); }

nlohmann::ordered_json to_json(const Surface& s) {
  nlohmann::ordered_json j;
  switch (s.kind) {
    case SurfaceKind::euclid_sphere:
      j["kind"] = "euclid_sphere";
      j["n"] = s.ambient_dim;
      j["center"] = s.center;
      j["radius"] = s.radius;
      break;
    case SurfaceKind::latitude:
      j["kind"] = "latitude";
      j["n"] = s.sphere_dim;
      j["theta"] = s.theta;
      break;
    case SurfaceKind::latitude_band:
      j["kind"] = "latitude_band";
      j["n"] = s.sphere_dim;
      j["theta"] = s.theta;
      break;
    case SurfaceKind::cap_boundary:
      j["kind"] = "cap_boundary";
      j["point"] = s.point;
      j["alpha"] = s.alpha;
      break;
  }
  j["counts"] = s.counts;
  return j;
}

Surface surface_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"kind",  "n",     "center",
                                              "radius", "theta", "point",
                                              "alpha", "counts"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown Surface field '/" + it.key() + "'");
  const std::string kind = j.at("kind").get<std::string>();
  const std::vector<int> counts = j.at("counts").get<std::vector<int>>();
  if (kind == "euclid_sphere")
    return make_euclid_sphere(j.at("n").get<int>(), j.at("center").get<Vec>(),
                              j.at("radius").get<double>(), counts);
  if (kind == "latitude")
    return make_latitude(j.at("n").get<int>(), j.at("theta").get<double>(), counts);
  if (kind == "latitude_band")
    return make_latitude_band(j.at("n").get<int>(), j.at("theta").get<double>(),
                              counts);
  if (kind == "cap_boundary")
    return make_cap_boundary(j.at("point").get<Vec>(), j.at("alpha").get<double>(),
                             counts);
  throw std::invalid_argument("unknown Surface kind '" + kind + "'");
}

}  // namespace conflat
