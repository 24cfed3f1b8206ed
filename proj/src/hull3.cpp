#include "wulff/hull3.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <set>

#include "wulff/errors.hpp"
#include "wulff/polygon.hpp"

namespace wulff {

Hull3 convex_hull_3d(const Eigen::Matrix3Xd& points, double eps) {
  const int m = static_cast<int>(points.cols());
  if (m < 4) throw ValidationError("3D hull needs at least 4 points");
  const Eigen::Vector3d centroid = points.rowwise().mean();
  const double scale = std::max(1.0, (points.colwise() - centroid).colwise().norm().maxCoeff());
  const double tol = eps * scale;

  struct Plane {
    Eigen::Vector3d n;
    double d;
  };
  std::vector<Plane> planes;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Eigen::Vector3d n = (points.col(j) - points.col(i)).cross(points.col(k) - points.col(i));
        const double len = n.norm();
        if (len <= tol * scale) continue;
        n /= len;
        double d = n.dot(points.col(i));
        if (n.dot(centroid) > d) {
          n = -n;
          d = -d;
        }
        bool supporting = true;
        for (int q = 0; q < m && supporting; ++q) supporting = n.dot(points.col(q)) <= d + tol;
        if (!supporting) continue;
        const bool seen = std::any_of(planes.begin(), planes.end(), [&](const Plane& p) {
          return (p.n - n).norm() <= 1e3 * eps && std::abs(p.d - d) <= tol * 1e3;
        });
        if (!seen) planes.push_back({n, d});
      }
  if (planes.size() < 4) throw ValidationError("degenerate point set: zero volume");

  Hull3 hull;
  std::set<int> extreme;
  for (const Plane& plane : planes) {
    std::vector<int> on;
    for (int q = 0; q < m; ++q)
      if (std::abs(plane.n.dot(points.col(q)) - plane.d) <= tol) on.push_back(q);
    // In-plane basis (e1, e2) with e1 x e2 = n, so 2D CCW is CCW from outside.
    Eigen::Vector3d e1 = plane.n.unitOrthogonal();
    Eigen::Vector3d e2 = plane.n.cross(e1);
    Eigen::Matrix2Xd flat(2, static_cast<Eigen::Index>(on.size()));
    for (std::size_t q = 0; q < on.size(); ++q) {
      const auto idx = static_cast<Eigen::Index>(q);
      flat(0, idx) = e1.dot(points.col(on[q]));
      flat(1, idx) = e2.dot(points.col(on[q]));
    }
    const Eigen::Matrix2Xd ring = convex_hull(flat, tol * tol);
    PolytopeFacet facet;
    facet.normal = plane.n;
    facet.offset = plane.d;
    facet.area = signed_area(ring);
    for (Eigen::Index c = 0; c < ring.cols(); ++c) {
      for (std::size_t q = 0; q < on.size(); ++q)
        if ((flat.col(static_cast<Eigen::Index>(q)) - ring.col(c)).norm() == 0.0) {
          facet.vertices.push_back(on[q]);
          extreme.insert(on[q]);
          break;
        }
    }
    hull.volume += (plane.d - plane.n.dot(centroid)) * facet.area / 3.0;
    hull.facets.push_back(std::move(facet));
  }
  hull.extreme_points.assign(extreme.begin(), extreme.end());
  return hull;
}

}  // namespace wulff
