#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "wulff/convex_body.hpp"

namespace wulff {

/// Straight boundary piece oriented start -> end; the outward normal is the
/// right-hand normal of the direction.
struct SegmentFacet {
  Eigen::Vector2d start;
  Eigen::Vector2d end;
  Eigen::Vector2d normal;
};

/// Circular arc c + rho (cos t, sin t), t from theta_begin to theta_end.
/// Counterclockwise arcs (theta_end > theta_begin) have outward normal
/// pointing away from the center; clockwise arcs point toward it.
struct ArcFacet {
  Eigen::Vector2d center;
  double radius = 0.0;
  double theta_begin = 0.0;
  double theta_end = 0.0;

  bool counterclockwise() const { return theta_end > theta_begin; }
  Eigen::Vector2d point(double theta) const;
  Eigen::Vector2d start() const { return point(theta_begin); }
  Eigen::Vector2d end() const { return point(theta_end); }
  Eigen::Vector2d normal(double theta) const;
};

/// Planar polygonal facet of a 3D boundary.
struct PolygonFacet {
  Eigen::Matrix3Xd vertices;
  Eigen::Vector3d normal;
};

using Facet = std::variant<SegmentFacet, ArcFacet, PolygonFacet>;

SegmentFacet make_segment(const Eigen::Vector2d& start, const Eigen::Vector2d& end);

/// Length or area of a facet.
double facet_measure(const Facet& facet);

/// Throws ValidationError unless the normal is unit, agrees with the vertex
/// orientation and the measure is positive.
void validate_facet(const Facet& facet);

/// A boundary decomposed into facets.
class Surface {
 public:
  Surface() = default;
  explicit Surface(std::vector<Facet> facets);

  void add(Facet facet);
  const std::vector<Facet>& facets() const { return facets_; }
  bool empty() const { return facets_.empty(); }
  std::size_t size() const { return facets_.size(); }

 private:
  std::vector<Facet> facets_;
};

/// sum over facets of Phi(nu_F) |F|, with Phi the support function of W.
double anisotropic_perimeter(const ConvexBody& body, const Surface& surface);

/// Anisotropic measure of a single facet.
double anisotropic_measure(const ConvexBody& body, const Facet& facet);

/// Integral of Phi(s (cos t, sin t)) dt over [t0, t1] (t0 <= t1), s = +-1.
/// Exact for polygons and balls; Gauss-Legendre for ellipses.
double support_angular_integral(const ConvexBody& body, double t0, double t1, double sign = 1.0);

/// The boundary of a polytope (or of a 2D ball as a single full arc).
Surface boundary_surface(const ConvexBody& body);

/// P_Phi(dW), including analytic bodies.
double wulff_perimeter(const ConvexBody& body);

}  // namespace wulff
