#pragma once

// Planar polygon kernels. Polygons are 2 x m matrices whose columns are the
// vertices in order; every kernel is templated on the scalar type.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wulff {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Polygon2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cross2(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  return a(0) * b(1) - a(1) * b(0);
}

/// Right-hand normal of a direction, (d_y, -d_x). Outward for CCW boundaries.
template <typename Derived>
Point2<typename Derived::Scalar> right_normal(const Eigen::MatrixBase<Derived>& d) {
  return Point2<typename Derived::Scalar>(d(1), -d(0));
}

/// Shoelace area; positive for counterclockwise vertex order.
template <typename Derived>
typename Derived::Scalar signed_area(const Eigen::MatrixBase<Derived>& poly) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = poly.cols();
  Scalar twice = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    twice += poly(0, i) * poly(1, j) - poly(0, j) * poly(1, i);
  }
  return twice / 2;
}

/// Sutherland-Hodgman clip against the closed half-plane {x : <n, x> >= offset}.
/// Orientation of the input is preserved.
template <typename Derived, typename DerivedN>
Polygon2<typename Derived::Scalar> clip_halfplane(const Eigen::MatrixBase<Derived>& poly,
                                                  const Eigen::MatrixBase<DerivedN>& normal,
                                                  typename Derived::Scalar offset) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = poly.cols();
  std::vector<Point2<Scalar>> out;
  out.reserve(static_cast<std::size_t>(m) + 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point2<Scalar> p = poly.col(i);
    const Point2<Scalar> q = poly.col((i + 1) % m);
    const Scalar sp = normal.dot(p) - offset;
    const Scalar sq = normal.dot(q) - offset;
    if (sp >= 0) out.push_back(p);
    if ((sp >= 0) != (sq >= 0)) {
      const Scalar t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  // Drop consecutive duplicates produced by vertices lying on the line.
  std::vector<Point2<Scalar>> clean;
  for (const auto& p : out)
    if (clean.empty() || (p - clean.back()).norm() > Scalar(1e-14)) clean.push_back(p);
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= Scalar(1e-14)) clean.pop_back();

  Polygon2<Scalar> result(2, static_cast<Eigen::Index>(clean.size()));
  for (std::size_t i = 0; i < clean.size(); ++i) result.col(static_cast<Eigen::Index>(i)) = clean[i];
  return result;
}

/// Andrew's monotone chain. Returns the strictly convex hull, counterclockwise,
/// starting from the lexicographically smallest point. Collinear points are
/// dropped when their turn is below `eps`.
template <typename Derived>
Polygon2<typename Derived::Scalar> convex_hull(const Eigen::MatrixBase<Derived>& points,
                                               typename Derived::Scalar eps = 1e-12) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = points.cols();
  if (m < 3) return points;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return points(0, a) < points(0, b) || (points(0, a) == points(0, b) && points(1, a) < points(1, b));
  });
  auto turn = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    return (points(0, a) - points(0, o)) * (points(1, b) - points(1, o)) -
           (points(1, a) - points(1, o)) * (points(0, b) - points(0, o));
  };
  std::vector<Eigen::Index> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], order[i]) <= eps) --k;
    hull[k++] = order[i];
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], order[i]) <= eps) --k;
    hull[k++] = order[i];
  }
  if (k > 1) --k;
  Polygon2<Scalar> result(2, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) result.col(static_cast<Eigen::Index>(i)) = points.col(hull[i]);
  return result;
}

/// Even-odd crossing test for a closed polyline given as consecutive columns.
template <typename Derived, typename DerivedP>
bool crossing_inside(const Eigen::MatrixBase<Derived>& poly, const Eigen::MatrixBase<DerivedP>& p) {
  const Eigen::Index m = poly.cols();
  bool inside = false;
  for (Eigen::Index i = 0, j = m - 1; i < m; j = i++) {
    const auto yi = poly(1, i), yj = poly(1, j);
    if ((yi > p(1)) != (yj > p(1))) {
      const auto x = poly(0, j) + (p(1) - yj) / (yi - yj) * (poly(0, i) - poly(0, j));
      if (p(0) < x) inside = !inside;
    }
  }
  return inside;
}

/// Euclidean distance from p to the segment [a, b].
template <typename DerivedP, typename DerivedA, typename DerivedB>
typename DerivedP::Scalar segment_distance(const Eigen::MatrixBase<DerivedP>& p,
                                           const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedP::Scalar;
  const Point2<Scalar> d = b - a;
  const Scalar len2 = d.squaredNorm();
  Scalar t = len2 > 0 ? (p - a).dot(d) / len2 : Scalar(0);
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * d)).norm();
}

}  // namespace wulff
