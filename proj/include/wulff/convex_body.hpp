#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wulff {

/// Geometric tolerance on coordinates of order one.
inline constexpr double kGeomEps = 1e-12;
/// Largest accepted coordinate magnitude.
inline constexpr double kMaxCoordinate = 1e6;

enum class BodyKind { polytope, ball, ellipse };

std::string to_string(BodyKind kind);

/// A vector on the unit sphere S^{n-1}.
class UnitDirection {
 public:
  /// Throws ValidationError unless |v| = 1 within 1e-12.
  explicit UnitDirection(Eigen::VectorXd v);
  /// Normalizes v; throws ValidationError for (near) zero v.
  static UnitDirection normalized(const Eigen::Ref<const Eigen::VectorXd>& v);
  static UnitDirection from_angle(double theta);

  const Eigen::VectorXd& vector() const { return v_; }
  int dimension() const { return static_cast<int>(v_.size()); }
  double operator()(Eigen::Index i) const { return v_(i); }
  UnitDirection operator-() const { return UnitDirection(-v_); }
  /// Polar angle in [0, 2pi); 2D only.
  double angle() const;

 private:
  Eigen::VectorXd v_;
};

/// One facet of a 3D polytope: plane <normal, x> = offset, vertex indices
/// ordered counterclockwise when seen from outside.
struct PolytopeFacet {
  Eigen::Vector3d normal;
  double offset = 0.0;
  std::vector<int> vertices;
  double area = 0.0;
};

/// The Wulff shape W: a convex body with the origin in its interior.
///
/// Polytopes store vertices as columns (counterclockwise in 2D). Analytic
/// kinds store their parameters: radius for a ball, semi-axes for an ellipse.
/// Bodies produced by halfspace_cut may have the origin on their boundary.
class ConvexBody {
 public:
  static ConvexBody polygon(const Eigen::Matrix2Xd& vertices);
  static ConvexBody polytope(const Eigen::MatrixXd& vertices);
  static ConvexBody ball(int dimension, double radius = 1.0);
  static ConvexBody ellipse(double semi_axis_x, double semi_axis_y);

  static ConvexBody square(double half_side = 1.0);
  static ConvexBody regular_polygon(int sides, double circumradius = 1.0, double phase = 0.0);
  static ConvexBody cube(double half_side = 1.0);

  int dimension() const { return dimension_; }
  BodyKind kind() const { return kind_; }
  bool is_polytope() const { return kind_ == BodyKind::polytope; }
  /// True for bodies produced by halfspace_cut.
  bool is_cut() const { return cut_; }

  /// n x m vertex matrix (polytopes only; empty otherwise).
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  Eigen::Matrix2Xd polygon_vertices() const;
  /// Radius (ball) or semi-axes (ellipse).
  const Eigen::VectorXd& parameters() const { return parameters_; }
  /// Outward unit edge normals and offsets <n_i, v_i> (2D polytopes).
  const Eigen::Matrix2Xd& edge_normals() const { return edge_normals_; }
  const Eigen::VectorXd& edge_offsets() const { return edge_offsets_; }
  /// Hull facets (3D polytopes).
  const std::vector<PolytopeFacet>& facets() const { return facets_; }
  /// Normal of the cutting plane through 0 for cut analytic bodies.
  const std::optional<Eigen::VectorXd>& cut_normal() const { return cut_normal_; }

  double volume() const { return volume_; }

 private:
  friend ConvexBody halfspace_cut(const ConvexBody&, const UnitDirection&);
  ConvexBody() = default;
  static ConvexBody make_polygon(const Eigen::Matrix2Xd& vertices, bool cut);
  static ConvexBody make_polytope3(const Eigen::Matrix3Xd& vertices, bool cut);
  void prepare_gauge();

  int dimension_ = 2;
  BodyKind kind_ = BodyKind::polytope;
  bool cut_ = false;
  Eigen::MatrixXd vertices_;
  Eigen::VectorXd parameters_;
  Eigen::Matrix2Xd edge_normals_;
  Eigen::VectorXd edge_offsets_;
  std::vector<PolytopeFacet> facets_;
  std::optional<Eigen::VectorXd> cut_normal_;
  double volume_ = 0.0;

  // Facet normals scaled by 1/offset: gauge(x) = max_i <g_i, x>.
  Eigen::MatrixXd gauge_rows_;
  // Facet normals through the origin (offset ~ 0, cut bodies only).
  Eigen::MatrixXd tangent_rows_;

  friend double gauge(const ConvexBody&, const Eigen::Ref<const Eigen::VectorXd>&);
};

/// Support function Phi(x) = sup_{w in W} <x, w>.
double support(const ConvexBody& body, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Minkowski gauge Phi*(x) = inf{t > 0 : x in tW}; +inf outside the cone of a
/// cut body.
double gauge(const ConvexBody& body, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Lebesgue measure |W|.
inline double volume(const ConvexBody& body) { return body.volume(); }

/// W intersected with the closed half-space {<x, v> >= 0}.
ConvexBody halfspace_cut(const ConvexBody& body, const UnitDirection& v);

/// |W cap {<x, v> >= 0}| without materializing the cut body.
double cut_volume(const ConvexBody& body, const UnitDirection& v);

/// max |x - y| over x, y in W.
double diameter(const ConvexBody& body);

/// hull(V u -V): a centrally symmetric polygon containing W.
ConvexBody central_symmetrization(const ConvexBody& body);

/// Random convex polygon with exactly `vertex_count` vertices and 0 inside,
/// deterministic in `seed`.
ConvexBody random_convex_polygon(std::uint64_t seed, int vertex_count);

/// Body file: first line `dim kind [params]`, then one vertex per line.
ConvexBody read_body(std::istream& in);
ConvexBody load_body(const std::string& path);
void write_body(std::ostream& out, const ConvexBody& body);

}  // namespace wulff
