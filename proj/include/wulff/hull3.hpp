#pragma once

#include <Eigen/Core>
#include <vector>

#include "wulff/convex_body.hpp"

namespace wulff {

struct Hull3 {
  std::vector<PolytopeFacet> facets;
  /// Indices of input points that are hull vertices, ascending.
  std::vector<int> extreme_points;
  double volume = 0.0;
};

/// Brute-force facet enumeration for small point sets (O(m^4)). Facet planes
/// are oriented outward; offsets are measured from the origin.
/// Throws ValidationError for fewer than 4 affinely independent points.
Hull3 convex_hull_3d(const Eigen::Matrix3Xd& points, double eps = 1e-10);

}  // namespace wulff
