#include "wulff/surface.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "wulff/errors.hpp"
#include "wulff/polygon.hpp"

namespace wulff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  double total = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width, mid = lo + width / 2.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) total += kGaussWeights[k] * f(mid + width / 2.0 * kGaussNodes[k]);
  }
  return total * width / 2.0;
}

Eigen::Vector2d polar(double t) { return {std::cos(t), std::sin(t)}; }

}  // namespace

Eigen::Vector2d ArcFacet::point(double theta) const { return center + radius * polar(theta); }

Eigen::Vector2d ArcFacet::normal(double theta) const {
  return counterclockwise() ? polar(theta) : Eigen::Vector2d(-polar(theta));
}

SegmentFacet make_segment(const Eigen::Vector2d& start, const Eigen::Vector2d& end) {
  const Eigen::Vector2d d = end - start;
  const double len = d.norm();
  if (!(len > 0.0)) throw ValidationError("zero-length segment");
  return {start, end, right_normal(d) / len};
}

double facet_measure(const Facet& facet) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SegmentFacet>) {
          return (f.end - f.start).norm();
        } else if constexpr (std::is_same_v<T, ArcFacet>) {
          return f.radius * std::abs(f.theta_end - f.theta_begin);
        } else {
          Eigen::Vector3d twice = Eigen::Vector3d::Zero();
          const Eigen::Index m = f.vertices.cols();
          for (Eigen::Index i = 0; i < m; ++i)
            twice += Eigen::Vector3d(f.vertices.col(i)).cross(Eigen::Vector3d(f.vertices.col((i + 1) % m)));
          return 0.5 * std::abs(twice.dot(f.normal));
        }
      },
      facet);
}

void validate_facet(const Facet& facet) {
  std::visit(
      [&facet](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SegmentFacet>) {
          if (std::abs(f.normal.norm() - 1.0) > 1e-9) throw ValidationError("facet normal is not a unit vector");
          const Eigen::Vector2d d = f.end - f.start;
          if (!(d.norm() > 0.0)) throw ValidationError("facet has zero measure");
          if ((right_normal(d).normalized() - f.normal).norm() > 1e-9)
            throw ValidationError("facet normal disagrees with its orientation");
        } else if constexpr (std::is_same_v<T, ArcFacet>) {
          if (!(f.radius > 0.0)) throw ValidationError("arc radius must be positive");
          const double sweep = std::abs(f.theta_end - f.theta_begin);
          if (!(sweep > 0.0) || sweep > kTwoPi + 1e-12) throw ValidationError("arc sweep must be in (0, 2pi]");
        } else {
          if (std::abs(f.normal.norm() - 1.0) > 1e-9) throw ValidationError("facet normal is not a unit vector");
          if (f.vertices.cols() < 3) throw ValidationError("polygon facet needs 3 vertices");
          Eigen::Vector3d twice = Eigen::Vector3d::Zero();
          const Eigen::Index m = f.vertices.cols();
          for (Eigen::Index i = 0; i < m; ++i)
            twice += Eigen::Vector3d(f.vertices.col(i)).cross(Eigen::Vector3d(f.vertices.col((i + 1) % m)));
          if (!(twice.norm() > 0.0)) throw ValidationError("facet has zero measure");
          if ((twice.normalized() - f.normal).norm() > 1e-9)
            throw ValidationError("facet normal disagrees with its orientation");
        }
        (void)facet;
      },
      facet);
}

Surface::Surface(std::vector<Facet> facets) {
  for (auto& f : facets) add(std::move(f));
}

void Surface::add(Facet facet) {
  validate_facet(facet);
  facets_.push_back(std::move(facet));
}

double support_angular_integral(const ConvexBody& body, double t0, double t1, double sign) {
  if (body.dimension() != 2) throw ValidationError("angular support integral needs a 2D body");
  if (t1 < t0) std::swap(t0, t1);
  if (body.kind() == BodyKind::ball && !body.cut_normal()) return body.parameters()(0) * (t1 - t0);
  if (!body.is_polytope()) {
    const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / (std::numbers::pi / 64.0))));
    return gauss_legendre([&](double t) { return support(body, Eigen::Vector2d(sign * polar(t))); }, t0, t1, panels);
  }
  // Piecewise: on each angular window one vertex w maximizes <s w, u(t)>,
  // and the integral of <w, u(t)> is closed form.
  const Eigen::MatrixXd& V = body.vertices();
  const Eigen::Matrix2Xd& N = body.edge_normals();
  std::vector<double> cuts = {t0, t1};
  for (Eigen::Index i = 0; i < N.cols(); ++i) {
    double a = std::atan2(sign * N(1, i), sign * N(0, i));
    a += kTwoPi * std::ceil((t0 - a) / kTwoPi);
    for (; a < t1; a += kTwoPi)
      if (a > t0) cuts.push_back(a);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    Eigen::Index best = 0;
    (V.transpose() * (sign * polar(0.5 * (a + b)))).maxCoeff(&best);
    const Eigen::Vector2d w = sign * V.col(best);
    total += w(0) * (std::sin(b) - std::sin(a)) - w(1) * (std::cos(b) - std::cos(a));
  }
  return total;
}

double anisotropic_measure(const ConvexBody& body, const Facet& facet) {
  return std::visit(
      [&body](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SegmentFacet>) {
          if (body.dimension() != 2) throw ValidationError("planar facet on a non-planar body");
          return support(body, f.normal) * (f.end - f.start).norm();
        } else if constexpr (std::is_same_v<T, ArcFacet>) {
          if (body.dimension() != 2) throw ValidationError("planar facet on a non-planar body");
          return f.radius *
                 support_angular_integral(body, f.theta_begin, f.theta_end, f.counterclockwise() ? 1.0 : -1.0);
        } else {
          if (body.dimension() != 3) throw ValidationError("spatial facet on a planar body");
          return support(body, f.normal) * facet_measure(Facet(f));
        }
      },
      facet);
}

double anisotropic_perimeter(const ConvexBody& body, const Surface& surface) {
  double total = 0.0;
  for (const auto& f : surface.facets()) {
    validate_facet(f);
    total += anisotropic_measure(body, f);
  }
  return total;
}

Surface boundary_surface(const ConvexBody& body) {
  Surface s;
  if (body.is_polytope() && body.dimension() == 2) {
    const Eigen::MatrixXd& V = body.vertices();
    for (Eigen::Index i = 0; i < V.cols(); ++i)
      s.add(make_segment(V.col(i), V.col((i + 1) % V.cols())));
    return s;
  }
  if (body.is_polytope()) {
    for (const auto& f : body.facets()) {
      PolygonFacet pf;
      pf.normal = f.normal;
      pf.vertices.resize(3, static_cast<Eigen::Index>(f.vertices.size()));
      for (std::size_t i = 0; i < f.vertices.size(); ++i)
        pf.vertices.col(static_cast<Eigen::Index>(i)) = body.vertices().col(f.vertices[i]);
      s.add(std::move(pf));
    }
    return s;
  }
  if (body.kind() == BodyKind::ball && body.dimension() == 2 && !body.cut_normal()) {
    s.add(ArcFacet{Eigen::Vector2d::Zero(), body.parameters()(0), 0.0, kTwoPi});
    return s;
  }
  throw ValidationError("boundary of this body is not representable as a facet surface");
}

double wulff_perimeter(const ConvexBody& body) {
  if (body.is_polytope() || (body.kind() == BodyKind::ball && body.dimension() == 2 && !body.cut_normal()))
    return anisotropic_perimeter(body, boundary_surface(body));
  if (body.cut_normal()) throw ValidationError("perimeter of a cut analytic body is not supported");
  if (body.kind() == BodyKind::ball) {
    const double r = body.parameters()(0);
    return r * 4.0 * std::numbers::pi * r * r;
  }
  // Ellipse (a cos t, b sin t): Phi(nu) |x'(t)| = Phi((b cos t, a sin t)).
  const double a = body.parameters()(0), b = body.parameters()(1);
  return gauss_legendre([&](double t) { return support(body, Eigen::Vector2d(b * std::cos(t), a * std::sin(t))); },
                        0.0, kTwoPi, 128);
}

}  // namespace wulff
