#include "wulff/obstacle_domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wulff/errors.hpp"
#include "wulff/polygon.hpp"
#include "wulff/random.hpp"
#include "wulff/report.hpp"

namespace wulff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const ArcFacet* as_arc(const Facet& f) { return std::get_if<ArcFacet>(&f); }
const SegmentFacet* as_segment(const Facet& f) { return std::get_if<SegmentFacet>(&f); }

void require_planar_curve(const Facet& f) {
  if (std::holds_alternative<PolygonFacet>(f)) throw ValidationError("domain boundary must be planar");
}

// theta - sin(theta), accurate for small theta.
double theta_minus_sin(double t) {
  if (std::abs(t) < 1e-2) {
    const double t2 = t * t;
    return t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0));
  }
  return t - std::sin(t);
}

// Roots of |a + t d - o|^2 = rho^2, via the cancellation-free quadratic form.
std::vector<double> line_circle_params(const Eigen::Vector2d& a, const Eigen::Vector2d& d, const Eigen::Vector2d& o,
                                       double rho) {
  const Eigen::Vector2d w = a - o;
  const double A = d.squaredNorm();
  const double B = 2.0 * d.dot(w);
  const double wn = w.norm();
  const double C = (wn - rho) * (wn + rho);
  const double disc = B * B - 4.0 * A * C;
  if (A == 0.0 || disc <= 0.0) return {};
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  std::vector<double> roots;
  if (q != 0.0) roots = {q / A, C / q};
  else roots = {0.0};
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Angle phi mapped into [lo, lo + 2pi).
double wrap_from(double phi, double lo) { return lo + std::fmod(std::fmod(phi - lo, kTwoPi) + kTwoPi, kTwoPi); }

bool angle_in_arc(double phi, const ArcFacet& arc, double ang_tol) {
  const double lo = std::min(arc.theta_begin, arc.theta_end);
  const double hi = std::max(arc.theta_begin, arc.theta_end);
  double w = wrap_from(phi, lo - ang_tol);
  return w <= hi + ang_tol;
}

std::vector<Eigen::Vector2d> intersect_curves(const Facet& fa, const Facet& fb, double tol) {
  std::vector<Eigen::Vector2d> out;
  const auto* sa = as_segment(fa);
  const auto* sb = as_segment(fb);
  const auto* aa = as_arc(fa);
  const auto* ab = as_arc(fb);
  if (sa && sb) {
    const Eigen::Vector2d d1 = sa->end - sa->start, d2 = sb->end - sb->start;
    const double denom = cross2(d1, d2);
    const Eigen::Vector2d w = sb->start - sa->start;
    if (std::abs(denom) <= 1e-14 * d1.norm() * d2.norm()) {
      if (std::abs(cross2(d1, w)) > tol * d1.norm()) return out;
      const double len2 = d1.squaredNorm();
      double t0 = w.dot(d1) / len2, t1 = (sb->end - sa->start).dot(d1) / len2;
      if (t0 > t1) std::swap(t0, t1);
      const double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
      if (hi < lo - tol / d1.norm()) return out;
      if ((hi - lo) * d1.norm() <= tol) out.push_back(sa->start + lo * d1);
      else out.push_back(sa->start + 0.5 * (lo + hi) * d1);
      return out;
    }
    const double t = cross2(w, d2) / denom, u = cross2(w, d1) / denom;
    const double et = tol / d1.norm(), eu = tol / d2.norm();
    if (t >= -et && t <= 1 + et && u >= -eu && u <= 1 + eu) out.push_back(sa->start + t * d1);
    return out;
  }
  if ((sa && ab) || (aa && sb)) {
    const SegmentFacet& s = sa ? *sa : *sb;
    const ArcFacet& arc = aa ? *aa : *ab;
    const Eigen::Vector2d d = s.end - s.start;
    const double et = tol / d.norm();
    for (double t : line_circle_params(s.start, d, arc.center, arc.radius)) {
      if (t < -et || t > 1 + et) continue;
      const Eigen::Vector2d p = s.start + t * d;
      const double phi = std::atan2(p(1) - arc.center(1), p(0) - arc.center(0));
      if (angle_in_arc(phi, arc, tol / arc.radius)) out.push_back(p);
    }
    return out;
  }
  // arc - arc
  const double dist = (ab->center - aa->center).norm();
  if (dist <= tol && std::abs(aa->radius - ab->radius) <= tol) {
    // Same circle: report any angular overlap.
    const double ang_tol = tol / aa->radius;
    for (double phi : {ab->theta_begin, ab->theta_end, 0.5 * (ab->theta_begin + ab->theta_end)})
      if (angle_in_arc(phi, *aa, ang_tol)) out.push_back(ab->point(phi));
    for (double phi : {aa->theta_begin, aa->theta_end, 0.5 * (aa->theta_begin + aa->theta_end)})
      if (angle_in_arc(phi, *ab, ang_tol)) out.push_back(aa->point(phi));
    return out;
  }
  if (dist == 0.0 || dist > aa->radius + ab->radius + tol || dist < std::abs(aa->radius - ab->radius) - tol)
    return out;
  const double phi = std::atan2(ab->center(1) - aa->center(1), ab->center(0) - aa->center(0));
  const double c = std::clamp(
      (aa->radius * aa->radius + dist * dist - ab->radius * ab->radius) / (2.0 * aa->radius * dist), -1.0, 1.0);
  const double alpha = std::acos(c);
  for (double t : {phi - alpha, phi + alpha}) {
    const Eigen::Vector2d p = aa->point(t);
    const double phib = std::atan2(p(1) - ab->center(1), p(0) - ab->center(0));
    if (angle_in_arc(t, *aa, tol / aa->radius) && angle_in_arc(phib, *ab, tol / ab->radius)) out.push_back(p);
  }
  return out;
}

// Minimum distance from q to a curve.
double curve_distance(const Facet& f, const Eigen::Vector2d& q) {
  if (const auto* s = as_segment(f)) return segment_distance(q, s->start, s->end);
  const ArcFacet& a = *as_arc(f);
  const Eigen::Vector2d w = q - a.center;
  double best = std::min((q - a.start()).norm(), (q - a.end()).norm());
  if (w.norm() == 0.0) return a.radius;
  if (angle_in_arc(std::atan2(w(1), w(0)), a, 0.0)) best = std::min(best, std::abs(w.norm() - a.radius));
  return best;
}

// Angle swept by the curve as seen from p (exact for arcs).
double swept_angle(const Facet& f, const Eigen::Vector2d& p) {
  const Eigen::Vector2d A = curve_start(f) - p, B = curve_end(f) - p;
  double chord = std::atan2(cross2(A, B), A.dot(B));
  const auto* arc = as_arc(f);
  if (!arc) return chord;
  const bool inside_circle = (p - arc->center).norm() < arc->radius;
  if (!inside_circle) return chord;
  const double sweep = arc->theta_end - arc->theta_begin;
  bool in_segment;
  if (std::abs(std::abs(sweep) - kTwoPi) < 1e-12) {
    in_segment = true;
    chord = 0.0;
  } else {
    const Eigen::Vector2d M = arc->point(0.5 * (arc->theta_begin + arc->theta_end)) - p;
    const Eigen::Vector2d AB = B - A;
    in_segment = (cross2(AB, -A) > 0) == (cross2(AB, M - A) > 0);
  }
  if (!in_segment) return chord;
  return chord + (sweep > 0 ? kTwoPi : -kTwoPi);
}

}  // namespace

std::string to_string(BoundaryTag tag) { return tag == BoundaryTag::sigma ? "SIGMA" : "GAMMA"; }

Eigen::Vector2d curve_start(const Facet& curve) {
  require_planar_curve(curve);
  if (const auto* s = as_segment(curve)) return s->start;
  return as_arc(curve)->start();
}

Eigen::Vector2d curve_end(const Facet& curve) {
  require_planar_curve(curve);
  if (const auto* s = as_segment(curve)) return s->end;
  return as_arc(curve)->end();
}

Eigen::Vector2d curve_point(const Facet& curve, double s) {
  require_planar_curve(curve);
  if (const auto* seg = as_segment(curve)) return seg->start + s * (seg->end - seg->start);
  const ArcFacet& a = *as_arc(curve);
  if (s == 1.0) return a.end();
  return a.point(a.theta_begin + s * (a.theta_end - a.theta_begin));
}

Eigen::Vector2d curve_tangent(const Facet& curve, double s) {
  require_planar_curve(curve);
  if (const auto* seg = as_segment(curve)) return (seg->end - seg->start).normalized();
  const ArcFacet& a = *as_arc(curve);
  const double t = a.theta_begin + s * (a.theta_end - a.theta_begin);
  const Eigen::Vector2d ccw(-std::sin(t), std::cos(t));
  return a.counterclockwise() ? ccw : Eigen::Vector2d(-ccw);
}

double curve_length(const Facet& curve) {
  require_planar_curve(curve);
  return facet_measure(curve);
}

double curve_green_area(const Facet& curve) {
  require_planar_curve(curve);
  const Eigen::Vector2d a = curve_start(curve), b = curve_end(curve);
  double area = 0.5 * cross2(a, b);
  if (const auto* arc = as_arc(curve))
    area += 0.5 * arc->radius * arc->radius * theta_minus_sin(arc->theta_end - arc->theta_begin);
  return area;
}

ObstacleDomain::ObstacleDomain(const Eigen::Vector2d& center, double radius, Surface sigma,
                               std::vector<GammaArc> gamma)
    : center_(center), radius_(radius), sigma_(std::move(sigma)), gamma_(std::move(gamma)) {
  validate_and_link();
}

ObstacleDomain ObstacleDomain::annulus(const Eigen::Vector2d& center, double inner, double outer) {
  if (!(outer > inner)) throw ValidationError("annulus needs outer > inner radius");
  Surface sigma;
  sigma.add(ArcFacet{center, outer, 0.0, kTwoPi});
  return ObstacleDomain(center, inner, std::move(sigma), {GammaArc{kTwoPi, 0.0}});
}

ArcFacet ObstacleDomain::gamma_facet(std::size_t i) const {
  return ArcFacet{center_, radius_, gamma_.at(i).theta_start, gamma_.at(i).theta_end};
}

int ObstacleDomain::tangential_junctions() const {
  return static_cast<int>(std::count_if(junctions_.begin(), junctions_.end(), [](const Junction& j) { return j.tangential; }));
}

bool ObstacleDomain::contains(const Eigen::Vector2d& p) const {
  double total = 0.0;
  for (const auto& loop : loops_)
    for (const auto& c : loop) total += swept_angle(c.geometry, p);
  return std::lround(total / kTwoPi) != 0;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> ObstacleDomain::bounding_box() const {
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& loop : loops_)
    for (const auto& c : loop) {
      const int samples = as_arc(c.geometry) ? 64 : 1;
      for (int k = 0; k <= samples; ++k) {
        const Eigen::Vector2d p = curve_point(c.geometry, static_cast<double>(k) / samples);
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
  return {lo, hi};
}

void ObstacleDomain::validate_and_link() {
  if (!center_.allFinite() || center_.cwiseAbs().maxCoeff() > kMaxCoordinate)
    throw ValidationError("obstacle center out of range");
  if (!(radius_ > 0.0) || radius_ > kMaxCoordinate) throw ValidationError("obstacle radius must be in (0, 1e6]");
  if (sigma_.empty()) throw ValidationError("domain has empty Sigma");

  std::vector<BoundaryCurve> curves;
  for (const auto& f : sigma_.facets()) {
    require_planar_curve(f);
    curves.push_back({f, BoundaryTag::sigma});
  }
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    const double sweep = std::abs(gamma_[i].theta_end - gamma_[i].theta_start);
    if (!std::isfinite(sweep) || !(sweep > 0.0) || sweep > kTwoPi + 1e-12)
      throw ValidationError("Gamma arc sweep must be in (0, 2pi]");
    curves.push_back({gamma_facet(i), BoundaryTag::gamma});
  }

  double scale = 1.0;
  for (const auto& c : curves) {
    const Eigen::Vector2d a = curve_start(c.geometry), b = curve_end(c.geometry);
    if (!a.allFinite() || !b.allFinite()) throw ValidationError("non-finite boundary coordinate");
    scale = std::max({scale, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  }
  if (scale > kMaxCoordinate) throw ValidationError("coordinate magnitude exceeds 1e6");
  const double tol = 1e-9 * scale;

  // Link head to tail into closed loops.
  std::vector<bool> used(curves.size(), false);
  for (std::size_t first = 0; first < curves.size(); ++first) {
    if (used[first]) continue;
    BoundaryLoop loop{curves[first]};
    used[first] = true;
    const Eigen::Vector2d origin = curve_start(curves[first].geometry);
    for (;;) {
      const Eigen::Vector2d tail = curve_end(loop.back().geometry);
      std::size_t best = curves.size();
      double best_d = tol;
      for (std::size_t j = 0; j < curves.size(); ++j) {
        if (used[j]) continue;
        const double d = (curve_start(curves[j].geometry) - tail).norm();
        if (d <= best_d) {
          best = j;
          best_d = d;
        }
      }
      if (best == curves.size()) {
        if ((tail - origin).norm() <= tol) break;
        throw ValidationError("open boundary loop");
      }
      used[best] = true;
      loop.push_back(curves[best]);
    }
    loops_.push_back(std::move(loop));
  }

  // Junctions between Sigma and Gamma.
  for (const auto& loop : loops_)
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto& a = loop[i];
      const auto& b = loop[(i + 1) % loop.size()];
      if (a.tag == b.tag) continue;
      const double turn = cross2(curve_tangent(a.geometry, 1.0), curve_tangent(b.geometry, 0.0));
      junctions_.push_back({curve_end(a.geometry), std::abs(turn) < 1e-6});
    }

  // Simple boundary: curves meet only at shared endpoints.
  std::vector<const BoundaryCurve*> flat;
  for (const auto& loop : loops_)
    for (const auto& c : loop) flat.push_back(&c);
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = i + 1; j < flat.size(); ++j) {
      const Facet& fi = flat[i]->geometry;
      const Facet& fj = flat[j]->geometry;
      for (const auto& p : intersect_curves(fi, fj, tol)) {
        const bool link_ij = (p - curve_end(fi)).norm() <= 10 * tol && (p - curve_start(fj)).norm() <= 10 * tol;
        const bool link_ji = (p - curve_end(fj)).norm() <= 10 * tol && (p - curve_start(fi)).norm() <= 10 * tol;
        if (!link_ij && !link_ji) throw ValidationError("boundary is self-intersecting");
      }
    }

  // Sigma stays outside the open ball and the ball is not enclosed.
  const double disjoint_tol = 1e-9 * std::max(scale, radius_);
  for (const auto& f : sigma_.facets())
    if (curve_distance(f, center_) < radius_ - disjoint_tol)
      throw ValidationError("Sigma enters the obstacle ball");
  if (contains(center_)) throw ValidationError("domain encloses the obstacle ball");

  area_ = 0.0;
  for (const auto& loop : loops_)
    for (const auto& c : loop) area_ += curve_green_area(c.geometry);
  if (!(area_ > 0.0)) throw ValidationError("domain has non-positive area");
}

DomainMeasures measures(const ObstacleDomain& domain, const ConvexBody& body) {
  if (body.dimension() != 2) throw ValidationError("obstacle domains are planar");
  DomainMeasures m;
  m.area = domain.area();
  m.perim_sigma = anisotropic_perimeter(body, domain.sigma());
  for (std::size_t i = 0; i < domain.gamma().size(); ++i) m.length_gamma += facet_measure(domain.gamma_facet(i));
  return m;
}

namespace {

std::vector<Facet> body_boundary_curves(const ConvexBody& body) {
  if (body.dimension() != 2) throw ValidationError("carving needs a planar body");
  if (body.kind() == BodyKind::ball && !body.cut_normal())
    return {ArcFacet{Eigen::Vector2d::Zero(), body.parameters()(0), 0.0, kTwoPi}};
  if (!body.is_polytope()) throw ValidationError("carving supports polygons and disks only");
  std::vector<Facet> out;
  const Eigen::MatrixXd& V = body.vertices();
  for (Eigen::Index i = 0; i < V.cols(); ++i) out.push_back(make_segment(V.col(i), V.col((i + 1) % V.cols())));
  return out;
}

}  // namespace

ObstacleDomain carve_domain(const ConvexBody& body, const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("obstacle radius must be positive");
  const auto boundary = body_boundary_curves(body);
  Surface sigma;
  std::vector<double> crossing_angles;
  bool any_inside = false;
  auto outside = [&](const Eigen::Vector2d& p) { return (p - center).norm() > radius; };

  for (const auto& curve : boundary) {
    std::vector<double> params = {0.0, 1.0};
    if (const auto* s = as_segment(curve)) {
      for (double t : line_circle_params(s->start, s->end - s->start, center, radius))
        if (t > 0.0 && t < 1.0) params.push_back(t);
    } else {
      const ArcFacet& a = *as_arc(curve);
      const Eigen::Vector2d w = center - a.center;
      const double dist = w.norm();
      if (dist > 0.0 && dist < a.radius + radius && dist > std::abs(a.radius - radius)) {
        const double phi = std::atan2(w(1), w(0));
        const double alpha = std::acos(std::clamp(
            (a.radius * a.radius + dist * dist - radius * radius) / (2.0 * a.radius * dist), -1.0, 1.0));
        for (double t : {phi - alpha, phi + alpha}) {
          const double u = (wrap_from(t, a.theta_begin) - a.theta_begin) / (a.theta_end - a.theta_begin);
          if (u > 0.0 && u < 1.0) params.push_back(u);
        }
      }
    }
    std::sort(params.begin(), params.end());
    for (std::size_t k = 1; k + 1 < params.size(); ++k) {
      const Eigen::Vector2d p = curve_point(curve, params[k]) - center;
      crossing_angles.push_back(std::atan2(p(1), p(0)));
    }
    for (std::size_t k = 0; k + 1 < params.size(); ++k) {
      const double lo = params[k], hi = params[k + 1];
      const Eigen::Vector2d mid = curve_point(curve, 0.5 * (lo + hi));
      if (!outside(mid)) {
        any_inside = true;
        continue;
      }
      if (const auto* s = as_segment(curve)) {
        const Eigen::Vector2d a = curve_point(curve, lo), b = curve_point(curve, hi);
        if ((b - a).norm() > kGeomEps) sigma.add(make_segment(a, b));
        (void)s;
      } else {
        const ArcFacet& arc = *as_arc(curve);
        const double t0 = arc.theta_begin + lo * (arc.theta_end - arc.theta_begin);
        const double t1 = arc.theta_begin + hi * (arc.theta_end - arc.theta_begin);
        if (arc.radius * (t1 - t0) > kGeomEps) sigma.add(ArcFacet{arc.center, arc.radius, t0, t1});
      }
    }
  }
  if (sigma.empty()) throw ValidationError("the obstacle ball covers the whole body");

  std::vector<GammaArc> gamma;
  if (crossing_angles.empty()) {
    // Circle either strictly inside W (a hole) or disjoint from it.
    if (any_inside) throw ValidationError("obstacle ball and body boundary are inconsistent");
    if (gauge(body, Eigen::Vector2d(center + Eigen::Vector2d(radius, 0.0))) < 1.0)
      gamma.push_back({kTwoPi, 0.0});
  } else {
    std::sort(crossing_angles.begin(), crossing_angles.end());
    const std::size_t m = crossing_angles.size();
    for (std::size_t k = 0; k < m; ++k) {
      const double a = crossing_angles[k];
      double b = crossing_angles[(k + 1) % m];
      if (k + 1 == m) b += kTwoPi;
      if (b - a <= 1e-15) continue;
      const double mid = 0.5 * (a + b);
      const Eigen::Vector2d p = center + radius * Eigen::Vector2d(std::cos(mid), std::sin(mid));
      if (gauge(body, p) < 1.0) gamma.push_back({b, a});
    }
  }
  return ObstacleDomain(center, radius, std::move(sigma), std::move(gamma));
}

ObstacleDomain build_sharpness_domain(const ConvexBody& body, const UnitDirection& v, double radius) {
  if (v.dimension() != 2) throw ValidationError("sharpness domains are planar");
  if (!(radius > 0.0)) throw ValidationError("sharpness radius must be positive");
  return carve_domain(body, Eigen::Vector2d(-radius * v.vector()), radius);
}

ObstacleDomain random_domain(std::uint64_t seed, double radius, int complexity) {
  if (complexity < 3) throw ValidationError("random_domain needs complexity >= 3");
  if (!(radius > 0.0)) throw ValidationError("random_domain needs a positive radius");
  Rng rng(seed, 0x0b5ac1e);
  const bool detached = rng.uniform() < 0.2;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double phi = rng.uniform(0.0, kTwoPi);
    try {
      Surface sigma;
      std::vector<GammaArc> gamma;
      std::vector<Eigen::Vector2d> pts;
      if (!detached) {
        // Star-shaped about the obstacle center: radial first and last sides,
        // vertices at increasing polar angle.
        const double span = rng.uniform(0.4, 2.0);
        const double ta = phi - span / 2.0, tb = phi + span / 2.0;
        std::vector<double> angles = {ta, tb};
        for (int i = 0; i < complexity - 2; ++i) angles.push_back(rng.uniform(ta, tb));
        std::sort(angles.begin(), angles.end());
        pts.push_back(radius * Eigen::Vector2d(std::cos(ta), std::sin(ta)));
        for (double t : angles) {
          const double rho = radius * rng.uniform(1.2, 2.5);
          pts.push_back(rho * Eigen::Vector2d(std::cos(t), std::sin(t)));
        }
        pts.push_back(radius * Eigen::Vector2d(std::cos(tb), std::sin(tb)));
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) sigma.add(make_segment(pts[i], pts[i + 1]));
        gamma.push_back({tb, ta});
      } else {
        const double R = radius * rng.uniform(0.5, 1.5);
        const double gap = radius * rng.uniform(0.05, 0.5);
        const Eigen::Vector2d q = (radius + gap + R) * Eigen::Vector2d(std::cos(phi), std::sin(phi));
        std::vector<double> angles;
        for (int i = 0; i < complexity; ++i) angles.push_back(rng.uniform(0.0, kTwoPi));
        std::sort(angles.begin(), angles.end());
        for (double t : angles) pts.push_back(q + R * rng.uniform(0.4, 1.0) * Eigen::Vector2d(std::cos(t), std::sin(t)));
        for (std::size_t i = 0; i < pts.size(); ++i) sigma.add(make_segment(pts[i], pts[(i + 1) % pts.size()]));
      }
      return ObstacleDomain(Eigen::Vector2d::Zero(), radius, std::move(sigma), std::move(gamma));
    } catch (const ValidationError&) {
      continue;
    }
  }
  throw NumericError("random_domain: no valid sample after bounded retries");
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string num17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

ObstacleDomain read_domain(std::istream& in) {
  enum class Section { none, sigma, gamma } section = Section::none;
  bool have_obstacle = false;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  Surface sigma;
  std::vector<GammaArc> gamma;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = split_tokens(line);
    if (t.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw ValidationError("domain file line " + std::to_string(lineno) + ": " + what);
    };
    try {
      if (t[0] == "obstacle") {
        if (t.size() != 4 || have_obstacle) fail("expected a single `obstacle cx cy r`");
        center << parse_number(t[1]), parse_number(t[2]);
        radius = parse_number(t[3]);
        have_obstacle = true;
      } else if (t[0] == "sigma" && t.size() == 1) {
        section = Section::sigma;
      } else if (t[0] == "gamma" && t.size() == 1) {
        section = Section::gamma;
      } else if (section == Section::sigma && t[0] == "arc") {
        if (t.size() != 6) fail("expected `arc cx cy R t0 t1`");
        sigma.add(ArcFacet{Eigen::Vector2d(parse_number(t[1]), parse_number(t[2])), parse_number(t[3]),
                           parse_number(t[4]), parse_number(t[5])});
      } else if (section == Section::sigma) {
        if (t.size() != 4) fail("expected `x1 y1 x2 y2`");
        sigma.add(make_segment(Eigen::Vector2d(parse_number(t[0]), parse_number(t[1])),
                               Eigen::Vector2d(parse_number(t[2]), parse_number(t[3]))));
      } else if (section == Section::gamma) {
        if (t.size() != 2) fail("expected `theta_start theta_end`");
        gamma.push_back({parse_number(t[0]), parse_number(t[1])});
      } else {
        fail("unexpected content");
      }
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.rfind("domain file", 0) == 0) throw;
      fail(what);
    }
  }
  if (!have_obstacle) throw ValidationError("domain file: missing `obstacle` header");
  return ObstacleDomain(center, radius, std::move(sigma), std::move(gamma));
}

ObstacleDomain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open domain file: " + path);
  return read_domain(in);
}

void write_domain(std::ostream& out, const ObstacleDomain& domain) {
  out << "obstacle " << num17(domain.center()(0)) << ' ' << num17(domain.center()(1)) << ' '
      << num17(domain.radius()) << '\n';
  out << "sigma\n";
  for (const auto& f : domain.sigma().facets()) {
    if (const auto* s = as_segment(f)) {
      out << num17(s->start(0)) << ' ' << num17(s->start(1)) << ' ' << num17(s->end(0)) << ' ' << num17(s->end(1))
          << '\n';
    } else if (const auto* a = as_arc(f)) {
      out << "arc " << num17(a->center(0)) << ' ' << num17(a->center(1)) << ' ' << num17(a->radius) << ' '
          << num17(a->theta_begin) << ' ' << num17(a->theta_end) << '\n';
    }
  }
  out << "gamma\n";
  for (const auto& g : domain.gamma()) out << num17(g.theta_start) << ' ' << num17(g.theta_end) << '\n';
}

}  // namespace wulff
