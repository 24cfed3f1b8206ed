#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wulff/convex_body.hpp"
#include "wulff/surface.hpp"

namespace wulff {

enum class BoundaryTag { sigma, gamma };

std::string to_string(BoundaryTag tag);

/// Arc of the obstacle circle, angles measured from the obstacle center.
/// Domains lie outside the ball, so Gamma is traversed clockwise
/// (theta_end < theta_start) when the domain is kept on the left.
struct GammaArc {
  double theta_start = 0.0;
  double theta_end = 0.0;
};

/// A boundary piece (segment or arc) with its part tag.
struct BoundaryCurve {
  Facet geometry;
  BoundaryTag tag = BoundaryTag::sigma;
};

using BoundaryLoop = std::vector<BoundaryCurve>;

struct Junction {
  Eigen::Vector2d point;
  bool tangential = false;
};

/// A planar region outside the open ball B_r(center). Its boundary splits
/// into the free part Sigma and the contact part Gamma on the obstacle circle.
/// Construction validates every invariant and throws ValidationError.
class ObstacleDomain {
 public:
  ObstacleDomain(const Eigen::Vector2d& center, double radius, Surface sigma, std::vector<GammaArc> gamma);

  /// B_outer(center) minus B_inner(center); Gamma is the full inner circle.
  static ObstacleDomain annulus(const Eigen::Vector2d& center, double inner, double outer);

  const Eigen::Vector2d& center() const { return center_; }
  double radius() const { return radius_; }
  const Surface& sigma() const { return sigma_; }
  const std::vector<GammaArc>& gamma() const { return gamma_; }
  ArcFacet gamma_facet(std::size_t i) const;

  /// Closed boundary loops linking Sigma and Gamma pieces head to tail.
  const std::vector<BoundaryLoop>& loops() const { return loops_; }
  const std::vector<Junction>& junctions() const { return junctions_; }
  int tangential_junctions() const;

  /// Outward normal of the obstacle ball, sigma(p) = (p - center) / r.
  Eigen::Vector2d sphere_normal(const Eigen::Vector2d& p) const { return (p - center_) / radius_; }

  /// Exact area by Green's theorem with circular-segment terms.
  double area() const { return area_; }
  /// Winding-number interior test.
  bool contains(const Eigen::Vector2d& p) const;
  /// Axis-aligned bounding box (min, max) of the boundary.
  std::pair<Eigen::Vector2d, Eigen::Vector2d> bounding_box() const;

 private:
  void validate_and_link();

  Eigen::Vector2d center_;
  double radius_;
  Surface sigma_;
  std::vector<GammaArc> gamma_;
  std::vector<BoundaryLoop> loops_;
  std::vector<Junction> junctions_;
  double area_ = 0.0;
};

struct DomainMeasures {
  double area = 0.0;
  /// P_Phi(Sigma); Gamma never contributes.
  double perim_sigma = 0.0;
  double length_gamma = 0.0;
};

DomainMeasures measures(const ObstacleDomain& domain, const ConvexBody& body);

// Curve helpers shared with the mesher.
Eigen::Vector2d curve_start(const Facet& curve);
Eigen::Vector2d curve_end(const Facet& curve);
/// Point at fraction s in [0, 1] of the parameter range.
Eigen::Vector2d curve_point(const Facet& curve, double s);
Eigen::Vector2d curve_tangent(const Facet& curve, double s);
double curve_length(const Facet& curve);
/// Contribution of a curve to the integral of (x dy - y dx) / 2.
double curve_green_area(const Facet& curve);

/// W minus the closed ball B_r(center). W must be a 2D polygon or disk.
ObstacleDomain carve_domain(const ConvexBody& body, const Eigen::Vector2d& center, double radius);

/// Omega_r = W - B_r(-r v): the ball is tangent to {<x, v> = 0} at 0.
ObstacleDomain build_sharpness_domain(const ConvexBody& body, const UnitDirection& v, double radius);

/// Seeded star-shaped polygon outside B_r(0), attached to the circle along
/// one arc (about one seed in five is detached, with empty Gamma).
ObstacleDomain random_domain(std::uint64_t seed, double radius, int complexity);

/// Domain file: `obstacle cx cy r`, a `sigma` block (`x1 y1 x2 y2` or
/// `arc cx cy R t0 t1`), a `gamma` block (`theta_start theta_end`).
ObstacleDomain read_domain(std::istream& in);
ObstacleDomain load_domain(const std::string& path);
void write_domain(std::ostream& out, const ObstacleDomain& domain);

}  // namespace wulff
