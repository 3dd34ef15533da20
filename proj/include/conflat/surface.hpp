#pragma once

#include <string>

#include <json.hpp>

#include "conflat/multivector.hpp"

namespace conflat {

// Quadrature node of a hypersurface patch: position, unit outward normal and
// weight (rule weight times measure density).
struct SurfaceNode {
  Vec x;
  Vec normal;
  double weight = 0.0;
};

enum class SurfaceKind {
  euclid_sphere,   // S^{n-1}(center, radius) in R^n
  latitude,        // latitude hypersurface {theta = const} on S^n in R^{n+1}
  latitude_band,   // two antipodal latitude components bounding a band
  cap_boundary,    // geodesic sphere of radius alpha around a point of S^n
};

struct Surface {
  SurfaceKind kind = SurfaceKind::euclid_sphere;
  int ambient_dim = 0;   // length of node coordinates
  int sphere_dim = 0;    // n of S^n for the spherical kinds
  Vec center;            // euclid_sphere
  double radius = 1.0;   // euclid_sphere
  double theta = 0.0;    // latitude / latitude_band
  Vec point;             // cap_boundary center point on S^n
  double alpha = 0.0;    // cap_boundary geodesic radius
  std::vector<int> counts;
  std::vector<SurfaceNode> nodes;

  double area() const;
  // True if the node set is exactly closed under x -> -x with negated
  // normals and equal weights (the latitude_band construction).
  bool antipodally_symmetric() const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Tensor rule for the unit sphere S^{m-1} in R^m: Gauss-Legendre in the
// polar angles, uniform in the azimuth. counts has m-1 entries (or one entry
// used for all angles).
void unit_sphere_rule(int m, const std::vector<int>& counts,
                      std::vector<Vec>& dirs, std::vector<double>& weights);

Surface make_euclid_sphere(int n, const Vec& center, double radius,
                           const std::vector<int>& counts);

// Latitude hypersurface of S^n at polar angle theta from the +e_{n+1} pole.
// Outward normal points away from the polar cap (increasing theta).
Surface make_latitude(int sphere_n, double theta, const std::vector<int>& counts);

// Two latitude components at theta0 and pi - theta0 with normals outward of
// the enclosed band; the second component's nodes are exact negations of the
// first, so antipodal identities hold to roundoff.
Surface make_latitude_band(int sphere_n, double theta0,
                           const std::vector<int>& counts);

// Geodesic sphere of radius alpha around point p on S^n; outward normal
// points away from p.
Surface make_cap_boundary(const Vec& p, double alpha,
                          const std::vector<int>& counts);

// Area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

// The normalization for which the Euclidean Cauchy kernel G(x-y) reproduces
// with constant exactly 1 in this signature (e_j^2 = -1, outward normals):
// measured to be -unit_sphere_area(n).
double reproduction_normalization(int n);

nlohmann::ordered_json to_json(const Surface& s);
Surface surface_from_json(const nlohmann::json& j);

}  // namespace conflat
