#include "wulff/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wulff/errors.hpp"
#include "wulff/hull3.hpp"
#include "wulff/polygon.hpp"
#include "wulff/random.hpp"
#include "wulff/report.hpp"

namespace wulff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_coordinates(const Eigen::MatrixXd& points) {
  if (!points.allFinite()) throw ValidationError("non-finite coordinate");
  if (points.size() > 0 && points.cwiseAbs().maxCoeff() > kMaxCoordinate)
    throw ValidationError("coordinate magnitude exceeds 1e6");
}

bool is_cyclic_rotation(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  const Eigen::Index m = a.cols();
  if (b.cols() != m) return false;
  for (Eigen::Index shift = 0; shift < m; ++shift) {
    bool same = true;
    for (Eigen::Index i = 0; i < m && same; ++i) same = (a.col(i) == b.col((i + shift) % m));
    if (same) return true;
  }
  return false;
}

// Max of <x, w> over the ellipse {(w1/a)^2 + (w2/b)^2 <= 1} cut by {<w, v> >= 0}.
double cut_ellipse_support(double a, double b, const Eigen::Vector2d& v, const Eigen::Vector2d& x) {
  const double full = std::hypot(a * x(0), b * x(1));
  if (full == 0.0) return 0.0;
  const Eigen::Vector2d argmax(a * a * x(0) / full, b * b * x(1) / full);
  if (argmax.dot(v) >= 0.0) return full;
  const Eigen::Vector2d t(-v(1), v(0));
  const Eigen::Vector2d end = t / std::hypot(t(0) / a, t(1) / b);
  return std::abs(x.dot(end));
}

}  // namespace

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::polytope: return "polytope";
    case BodyKind::ball: return "ball";
    case BodyKind::ellipse: return "ellipse";
  }
  return "unknown";
}

UnitDirection::UnitDirection(Eigen::VectorXd v) : v_(std::move(v)) {
  if (!v_.allFinite() || std::abs(v_.norm() - 1.0) > 1e-12)
    throw ValidationError("direction is not a unit vector");
}

UnitDirection UnitDirection::normalized(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double n = v.norm();
  if (!(n > kGeomEps)) throw ValidationError("cannot normalize a zero vector");
  return UnitDirection(v / n);
}

UnitDirection UnitDirection::from_angle(double theta) {
  return UnitDirection(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
}

double UnitDirection::angle() const {
  double a = std::atan2(v_(1), v_(0));
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a;
}

ConvexBody ConvexBody::make_polygon(const Eigen::Matrix2Xd& vertices, bool cut) {
  check_coordinates(vertices);
  if (vertices.cols() < 3) throw ValidationError("polygon needs at least 3 vertices");
  const double scale = std::max(1.0, vertices.cwiseAbs().maxCoeff());
  const Eigen::Matrix2Xd hull = convex_hull(vertices, kGeomEps * scale * scale);
  if (hull.cols() < 3) throw ValidationError("degenerate polygon: zero area");

  ConvexBody body;
  body.dimension_ = 2;
  body.kind_ = BodyKind::polytope;
  body.cut_ = cut;
  if (cut) {
    body.vertices_ = hull;
  } else {
    if (!is_cyclic_rotation(vertices, hull))
      throw ValidationError("polygon vertices are not in counterclockwise convex position");
    body.vertices_ = vertices;
  }
  const Eigen::Index m = body.vertices_.cols();
  body.edge_normals_.resize(2, m);
  body.edge_offsets_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Vector2d p = body.vertices_.col(i);
    const Eigen::Vector2d q = body.vertices_.col((i + 1) % m);
    const Eigen::Vector2d n = right_normal(q - p).normalized();
    body.edge_normals_.col(i) = n;
    body.edge_offsets_(i) = n.dot(p);
  }
  body.volume_ = signed_area(body.vertices_);
  if (!(body.volume_ > kGeomEps * scale * scale)) throw ValidationError("degenerate polygon: zero area");
  if (!cut && !(body.edge_offsets_.minCoeff() > kGeomEps * scale))
    throw ValidationError("origin is not strictly inside the body");
  body.prepare_gauge();
  return body;
}

ConvexBody ConvexBody::make_polytope3(const Eigen::Matrix3Xd& vertices, bool cut) {
  check_coordinates(vertices);
  Hull3 hull = convex_hull_3d(vertices);
  ConvexBody body;
  body.dimension_ = 3;
  body.kind_ = BodyKind::polytope;
  body.cut_ = cut;
  if (static_cast<Eigen::Index>(hull.extreme_points.size()) != vertices.cols()) {
    if (!cut) throw ValidationError("polytope vertices are not in convex position");
    // Clipping produces redundant points; keep the extreme ones.
    Eigen::Matrix3Xd extreme(3, static_cast<Eigen::Index>(hull.extreme_points.size()));
    for (std::size_t i = 0; i < hull.extreme_points.size(); ++i)
      extreme.col(static_cast<Eigen::Index>(i)) = vertices.col(hull.extreme_points[i]);
    return make_polytope3(extreme, true);
  }
  body.vertices_ = vertices;
  body.facets_ = std::move(hull.facets);
  body.volume_ = hull.volume;
  const double scale = std::max(1.0, vertices.cwiseAbs().maxCoeff());
  if (!(body.volume_ > kGeomEps * scale)) throw ValidationError("degenerate polytope: zero volume");
  if (!cut)
    for (const auto& f : body.facets_)
      if (!(f.offset > kGeomEps * scale)) throw ValidationError("origin is not strictly inside the body");
  body.prepare_gauge();
  return body;
}

void ConvexBody::prepare_gauge() {
  std::vector<Eigen::VectorXd> scaled, tangent;
  const double scale = std::max(1.0, vertices_.size() ? vertices_.cwiseAbs().maxCoeff() : 1.0);
  auto classify = [&](const Eigen::VectorXd& n, double d) {
    if (d > kGeomEps * scale)
      scaled.push_back(n / d);
    else
      tangent.push_back(n);
  };
  if (dimension_ == 2) {
    for (Eigen::Index i = 0; i < edge_normals_.cols(); ++i) classify(edge_normals_.col(i), edge_offsets_(i));
  } else {
    for (const auto& f : facets_) classify(f.normal, f.offset);
  }
  gauge_rows_.resize(static_cast<Eigen::Index>(scaled.size()), dimension_);
  for (std::size_t i = 0; i < scaled.size(); ++i) gauge_rows_.row(static_cast<Eigen::Index>(i)) = scaled[i];
  tangent_rows_.resize(static_cast<Eigen::Index>(tangent.size()), dimension_);
  for (std::size_t i = 0; i < tangent.size(); ++i) tangent_rows_.row(static_cast<Eigen::Index>(i)) = tangent[i];
}

ConvexBody ConvexBody::polygon(const Eigen::Matrix2Xd& vertices) { return make_polygon(vertices, false); }

ConvexBody ConvexBody::polytope(const Eigen::MatrixXd& vertices) {
  if (vertices.rows() == 2) return make_polygon(vertices, false);
  if (vertices.rows() == 3) return make_polytope3(vertices, false);
  throw ValidationError("only dimensions 2 and 3 are supported");
}

ConvexBody ConvexBody::ball(int dimension, double radius) {
  if (dimension != 2 && dimension != 3) throw ValidationError("only dimensions 2 and 3 are supported");
  if (!(radius > 0.0) || radius > kMaxCoordinate) throw ValidationError("ball radius must be in (0, 1e6]");
  ConvexBody body;
  body.dimension_ = dimension;
  body.kind_ = BodyKind::ball;
  body.parameters_ = Eigen::VectorXd::Constant(1, radius);
  body.volume_ = dimension == 2 ? std::numbers::pi * radius * radius
                                : 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  return body;
}

ConvexBody ConvexBody::ellipse(double semi_axis_x, double semi_axis_y) {
  for (double s : {semi_axis_x, semi_axis_y})
    if (!(s > 0.0) || s > kMaxCoordinate) throw ValidationError("ellipse semi-axes must be in (0, 1e6]");
  ConvexBody body;
  body.dimension_ = 2;
  body.kind_ = BodyKind::ellipse;
  body.parameters_ = Eigen::Vector2d(semi_axis_x, semi_axis_y);
  body.volume_ = std::numbers::pi * semi_axis_x * semi_axis_y;
  return body;
}

ConvexBody ConvexBody::square(double half_side) {
  Eigen::Matrix2Xd v(2, 4);
  v << -1, 1, 1, -1,  //
      -1, -1, 1, 1;
  return polygon(half_side * v);
}

ConvexBody ConvexBody::regular_polygon(int sides, double circumradius, double phase) {
  if (sides < 3) throw ValidationError("regular polygon needs at least 3 sides");
  Eigen::Matrix2Xd v(2, sides);
  for (int i = 0; i < sides; ++i) {
    const double t = phase + 2.0 * std::numbers::pi * i / sides;
    v.col(i) << circumradius * std::cos(t), circumradius * std::sin(t);
  }
  return polygon(v);
}

ConvexBody ConvexBody::cube(double half_side) {
  Eigen::Matrix3Xd v(3, 8);
  for (int i = 0; i < 8; ++i)
    v.col(i) << ((i & 1) ? 1 : -1), ((i & 2) ? 1 : -1), ((i & 4) ? 1 : -1);
  return polytope(half_side * v);
}

Eigen::Matrix2Xd ConvexBody::polygon_vertices() const {
  if (!is_polytope() || dimension_ != 2) throw ValidationError("not a 2D polytope");
  return vertices_;
}

double support(const ConvexBody& body, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != body.dimension()) throw ValidationError("dimension mismatch in support");
  if (body.is_polytope()) return (body.vertices().transpose() * x).maxCoeff();
  const auto& p = body.parameters();
  if (body.kind() == BodyKind::ball) {
    const double r = p(0);
    if (!body.cut_normal()) return r * x.norm();
    const Eigen::VectorXd& v = *body.cut_normal();
    if (x.dot(v) >= 0.0) return r * x.norm();
    return r * (x - x.dot(v) * v).norm();
  }
  const Eigen::Vector2d x2 = x;
  if (!body.cut_normal()) return std::hypot(p(0) * x2(0), p(1) * x2(1));
  return cut_ellipse_support(p(0), p(1), *body.cut_normal(), x2);
}

double gauge(const ConvexBody& body, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != body.dimension()) throw ValidationError("dimension mismatch in gauge");
  const double xn = x.norm();
  if (xn == 0.0) return 0.0;
  if (body.is_polytope()) {
    if (body.tangent_rows_.rows() > 0 && (body.tangent_rows_ * x).maxCoeff() > kGeomEps * xn) return kInf;
    if (body.gauge_rows_.rows() == 0) return 0.0;
    return std::max(0.0, (body.gauge_rows_ * x).maxCoeff());
  }
  if (body.cut_normal() && x.dot(*body.cut_normal()) < -kGeomEps * xn) return kInf;
  const auto& p = body.parameters();
  if (body.kind() == BodyKind::ball) return xn / p(0);
  return std::hypot(x(0) / p(0), x(1) / p(1));
}

ConvexBody halfspace_cut(const ConvexBody& body, const UnitDirection& v) {
  if (v.dimension() != body.dimension()) throw ValidationError("dimension mismatch in halfspace_cut");
  if (body.is_cut()) throw ValidationError("body has already been cut");
  if (body.is_polytope() && body.dimension() == 2) {
    const Eigen::Matrix2Xd clipped = clip_halfplane(body.polygon_vertices(), Eigen::Vector2d(v.vector()), 0.0);
    if (clipped.cols() < 3) throw NumericError("empty half-space cut");
    return ConvexBody::make_polygon(clipped, true);
  }
  if (body.is_polytope()) {
    const Eigen::MatrixXd& V = body.vertices();
    std::vector<Eigen::Vector3d> pts;
    const Eigen::VectorXd s = V.transpose() * v.vector();
    for (Eigen::Index i = 0; i < V.cols(); ++i)
      if (s(i) >= 0.0) pts.push_back(V.col(i));
    for (Eigen::Index i = 0; i < V.cols(); ++i)
      for (Eigen::Index j = 0; j < V.cols(); ++j)
        if (s(i) > 0.0 && s(j) < 0.0) {
          const double t = s(i) / (s(i) - s(j));
          pts.push_back(V.col(i) + t * (V.col(j) - V.col(i)));
        }
    Eigen::Matrix3Xd P(3, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = pts[i];
    return ConvexBody::make_polytope3(P, true);
  }
  ConvexBody cut = body;
  cut.cut_ = true;
  cut.cut_normal_ = v.vector();
  cut.volume_ = body.volume() / 2.0;  // every hyperplane through the center halves
  return cut;
}

double cut_volume(const ConvexBody& body, const UnitDirection& v) {
  if (v.dimension() != body.dimension()) throw ValidationError("dimension mismatch in cut_volume");
  if (body.is_polytope() && body.dimension() == 2 && !body.is_cut()) {
    // Green's theorem: the chord closing the cut passes through the origin
    // and contributes nothing to the integral of x dy - y dx.
    const Eigen::MatrixXd& V = body.vertices();
    const Eigen::Index m = V.cols();
    const double v0 = v(0), v1 = v(1);
    double twice = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index j = (i + 1) % m;
      double ax = V(0, i), ay = V(1, i), bx = V(0, j), by = V(1, j);
      const double sa = v0 * ax + v1 * ay;
      const double sb = v0 * bx + v1 * by;
      if (sa < 0.0 && sb < 0.0) continue;
      if (sa < 0.0) {
        const double t = sa / (sa - sb);
        ax += t * (bx - ax);
        ay += t * (by - ay);
      } else if (sb < 0.0) {
        const double t = sa / (sa - sb);
        bx = ax + t * (bx - ax);
        by = ay + t * (by - ay);
      }
      twice += ax * by - bx * ay;
    }
    return twice / 2.0;
  }
  return halfspace_cut(body, v).volume();
}

double diameter(const ConvexBody& body) {
  if (!body.is_polytope()) return 2.0 * body.parameters().maxCoeff();
  const Eigen::MatrixXd& V = body.vertices();
  double best = 0.0;
  for (Eigen::Index i = 0; i < V.cols(); ++i)
    for (Eigen::Index j = i + 1; j < V.cols(); ++j) best = std::max(best, (V.col(i) - V.col(j)).norm());
  return best;
}

ConvexBody central_symmetrization(const ConvexBody& body) {
  if (!body.is_polytope()) return body;
  const Eigen::MatrixXd& V = body.vertices();
  Eigen::MatrixXd both(V.rows(), 2 * V.cols());
  both << V, -V;
  if (body.dimension() == 2) {
    const Eigen::Matrix2Xd pts = both;
    const double scale = std::max(1.0, pts.cwiseAbs().maxCoeff());
    return ConvexBody::polygon(convex_hull(pts, kGeomEps * scale * scale));
  }
  const Hull3 hull = convex_hull_3d(both);
  Eigen::Matrix3Xd extreme(3, static_cast<Eigen::Index>(hull.extreme_points.size()));
  for (std::size_t i = 0; i < hull.extreme_points.size(); ++i)
    extreme.col(static_cast<Eigen::Index>(i)) = both.col(hull.extreme_points[i]);
  return ConvexBody::polytope(extreme);
}

ConvexBody random_convex_polygon(std::uint64_t seed, int vertex_count) {
  if (vertex_count < 3) throw ValidationError("random polygon needs at least 3 vertices");
  Rng rng(seed, static_cast<std::uint64_t>(vertex_count));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Points on an ellipse are in strictly convex position; translating the
    // ellipse off the origin breaks central symmetry.
    const double a = rng.uniform(0.5, 1.5), b = rng.uniform(0.5, 1.5);
    const double rot = rng.uniform(0.0, std::numbers::pi);
    std::vector<double> angles(static_cast<std::size_t>(vertex_count));
    for (double& t : angles) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    double min_gap = 2.0 * std::numbers::pi - angles.back() + angles.front(), max_gap = min_gap;
    for (std::size_t i = 1; i < angles.size(); ++i) {
      min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    }
    if (min_gap < 2e-3 || max_gap > 0.8 * std::numbers::pi) continue;
    const double shift_r = rng.uniform(0.0, 0.35) * std::min(a, b);
    const double shift_t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Eigen::Vector2d shift(shift_r * std::cos(shift_t), shift_r * std::sin(shift_t));
    Eigen::Matrix2d R;
    R << std::cos(rot), -std::sin(rot), std::sin(rot), std::cos(rot);
    Eigen::Matrix2Xd v(2, vertex_count);
    for (int i = 0; i < vertex_count; ++i) {
      const double t = angles[static_cast<std::size_t>(i)];
      v.col(i) = R * Eigen::Vector2d(a * std::cos(t), b * std::sin(t)) + shift;
    }
    try {
      return ConvexBody::polygon(v);
    } catch (const ValidationError&) {
      continue;
    }
  }
  throw NumericError("random_convex_polygon: no valid sample");
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ConvexBody read_body(std::istream& in) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = tokenize(line);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  if (rows.empty() || rows[0].size() < 2) throw ValidationError("body file: missing `dim kind` header");
  const auto& head = rows[0];
  const double dim_value = parse_number(head[0]);
  if (dim_value != 2.0 && dim_value != 3.0) throw ValidationError("body file: dimension must be 2 or 3");
  const int dim = static_cast<int>(dim_value);
  const std::string& kind = head[1];
  if (kind == "ball") {
    if (head.size() != 3 || rows.size() != 1) throw ValidationError("body file: expected `dim ball radius`");
    return ConvexBody::ball(dim, parse_number(head[2]));
  }
  if (kind == "ellipse") {
    if (dim != 2 || head.size() != 4 || rows.size() != 1)
      throw ValidationError("body file: expected `2 ellipse a b`");
    return ConvexBody::ellipse(parse_number(head[2]), parse_number(head[3]));
  }
  if (kind != "polytope") throw ValidationError("body file: unknown kind '" + kind + "'");
  if (head.size() != 2) throw ValidationError("body file: unexpected tokens after `polytope`");
  Eigen::MatrixXd V(dim, static_cast<Eigen::Index>(rows.size() - 1));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != dim)
      throw ValidationError("body file: vertex line " + std::to_string(r + 1) + " has wrong arity");
    for (int c = 0; c < dim; ++c)
      V(c, static_cast<Eigen::Index>(r - 1)) = parse_number(rows[r][static_cast<std::size_t>(c)]);
  }
  return ConvexBody::polytope(V);
}

ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open body file: " + path);
  return read_body(in);
}

void write_body(std::ostream& out, const ConvexBody& body) {
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  out << body.dimension() << ' ' << to_string(body.kind());
  if (body.kind() == BodyKind::ball) out << ' ' << num(body.parameters()(0));
  if (body.kind() == BodyKind::ellipse) out << ' ' << num(body.parameters()(0)) << ' ' << num(body.parameters()(1));
  out << '\n';
  if (body.is_polytope())
    for (Eigen::Index i = 0; i < body.vertices().cols(); ++i) {
      for (Eigen::Index c = 0; c < body.dimension(); ++c) out << (c ? " " : "") << num(body.vertices()(c, i));
      out << '\n';
    }
}

}  // namespace wulff
