#include "wulff/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "wulff/errors.hpp"
#include "wulff/polygon.hpp"
#include "wulff/random.hpp"
#include "wulff/report.hpp"

namespace wulff {

namespace {

using Vec2 = Eigen::Vector2d;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(Vec2(b - a), Vec2(c - a)); }

// Incremental Bowyer-Watson triangulation with a super triangle.
class Delaunay {
 public:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // neighbor across the edge opposite v[k]
    bool alive = true;
  };

  explicit Delaunay(std::vector<Vec2> points) : P_(std::move(points)), real_(static_cast<int>(P_.size())) {
    Vec2 lo = P_.front(), hi = P_.front();
    for (const auto& p : P_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 m = 0.5 * (lo + hi);
    const double D = std::max((hi - lo).maxCoeff(), 1e-9);
    P_.push_back(m + D * Vec2(-40, -30));
    P_.push_back(m + D * Vec2(40, -30));
    P_.push_back(m + D * Vec2(0, 40));
    T_.push_back({{real_, real_ + 1, real_ + 2}, {-1, -1, -1}, true});
    for (int i = 0; i < real_; ++i) insert(i);
  }

  const std::vector<Tri>& triangles() const { return T_; }
  const std::vector<Vec2>& points() const { return P_; }
  int real_count() const { return real_; }

 private:
  bool in_circle(const Tri& t, const Vec2& p) const {
    const Vec2 a = P_[static_cast<std::size_t>(t.v[0])] - p;
    const Vec2 b = P_[static_cast<std::size_t>(t.v[1])] - p;
    const Vec2 c = P_[static_cast<std::size_t>(t.v[2])] - p;
    const double det = a.squaredNorm() * (b(0) * c(1) - c(0) * b(1)) - b.squaredNorm() * (a(0) * c(1) - c(0) * a(1)) +
                       c.squaredNorm() * (a(0) * b(1) - b(0) * a(1));
    return det > 0.0;
  }

  const Vec2& pt(int i) const { return P_[static_cast<std::size_t>(i)]; }
  Tri& tri(int i) { return T_[static_cast<std::size_t>(i)]; }

  int locate(const Vec2& p) {
    int t = last_;
    const std::size_t limit = T_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& tr = tri(t);
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        if (orient(pt(tr.v[(k + 1) % 3]), pt(tr.v[(k + 2) % 3]), p) < 0.0) {
          next = tr.n[k];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Walk cycled; p is on an edge up to roundoff. Take the least violated triangle.
    int best = -1;
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < T_.size(); ++i) {
      const Tri& tr = T_[i];
      if (!tr.alive) continue;
      double m = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) m = std::min(m, orient(pt(tr.v[(k + 1) % 3]), pt(tr.v[(k + 2) % 3]), p));
      if (m > best_margin) {
        best_margin = m;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) throw NumericError("triangulation: point location failed");
    return best;
  }

  // Drop cavity triangles no longer reachable from t0 through the cavity.
  void prune_to_connected(std::vector<int>& cavity, int t0) {
    const int old = stamp_;
    ++stamp_;
    std::vector<int> kept = {t0};
    mark_[static_cast<std::size_t>(t0)] = stamp_;
    for (std::size_t k = 0; k < kept.size(); ++k)
      for (int nb : tri(kept[k]).n)
        if (nb >= 0 && mark_[static_cast<std::size_t>(nb)] == old) {
          mark_[static_cast<std::size_t>(nb)] = stamp_;
          kept.push_back(nb);
        }
    for (int c : cavity)
      if (mark_[static_cast<std::size_t>(c)] == old) mark_[static_cast<std::size_t>(c)] = 0;
    cavity = std::move(kept);
  }

  void insert(int pi) {
    const Vec2& p = pt(pi);
    const int t0 = locate(p);
    if (mark_.size() < T_.size()) mark_.resize(T_.size(), 0);
    ++stamp_;
    std::vector<int> cavity = {t0};
    mark_[static_cast<std::size_t>(t0)] = stamp_;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& c = tri(cavity[k]);
      for (int nb : c.n) {
        if (nb < 0 || mark_[static_cast<std::size_t>(nb)] == stamp_) continue;
        if (in_circle(tri(nb), p)) {
          mark_[static_cast<std::size_t>(nb)] = stamp_;
          cavity.push_back(nb);
        }
      }
    }

    struct Rim {
      int a, b, outer, owner;
    };
    std::vector<Rim> rim;
    // Keep the cavity star-shaped from p.
    for (int round = 0;; ++round) {
      if (round > 64) throw NumericError("triangulation: cavity repair failed");
      rim.clear();
      int bad_owner = -1, bad_outer = -1;
      for (int c : cavity) {
        const Tri& tr = tri(c);
        for (int k = 0; k < 3; ++k) {
          const int nb = tr.n[k];
          if (nb >= 0 && mark_[static_cast<std::size_t>(nb)] == stamp_) continue;
          const int a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
          if (orient(pt(a), pt(b), p) <= 0.0 && bad_owner < 0) {
            bad_owner = c;
            bad_outer = nb;
          }
          rim.push_back({a, b, nb, c});
        }
      }
      if (bad_owner < 0) break;
      if (bad_owner != t0) {
        mark_[static_cast<std::size_t>(bad_owner)] = stamp_ - 1;
        cavity.erase(std::find(cavity.begin(), cavity.end(), bad_owner));
        prune_to_connected(cavity, t0);
      } else if (bad_outer >= 0) {
        mark_[static_cast<std::size_t>(bad_outer)] = stamp_;
        cavity.push_back(bad_outer);
      } else {
        throw NumericError("triangulation: point on the hull");
      }
    }

    for (int c : cavity) {
      tri(c).alive = false;
      free_.push_back(c);
    }
    std::vector<int> fresh;
    for (const auto& r : rim) {
      int id;
      if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        tri(id) = Tri{{r.a, r.b, pi}, {-1, -1, r.outer}, true};
      } else {
        id = static_cast<int>(T_.size());
        T_.push_back(Tri{{r.a, r.b, pi}, {-1, -1, r.outer}, true});
        mark_.push_back(0);
      }
      mark_[static_cast<std::size_t>(id)] = 0;
      fresh.push_back(id);
      if (r.outer >= 0) {
        Tri& o = tri(r.outer);
        for (int k = 0; k < 3; ++k)
          if (o.v[(k + 1) % 3] == r.b && o.v[(k + 2) % 3] == r.a) o.n[k] = id;
      }
    }
    std::unordered_map<int, int> by_start, by_end;
    for (int id : fresh) {
      by_start[tri(id).v[0]] = id;
      by_end[tri(id).v[1]] = id;
    }
    for (int id : fresh) {
      Tri& t = tri(id);
      auto s = by_start.find(t.v[1]);
      auto e = by_end.find(t.v[0]);
      if (s == by_start.end() || e == by_end.end()) throw NumericError("triangulation: broken cavity");
      t.n[0] = s->second;
      t.n[1] = e->second;
    }
    last_ = fresh.front();
  }

  std::vector<Vec2> P_;
  int real_;
  std::vector<Tri> T_;
  std::vector<int> free_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
};

// Boundary node: start of the chord to the next node of its loop.
struct Node {
  Vec2 p;
  int curve;
  double s;
};

struct BoundaryModel {
  std::vector<BoundaryCurve> curves;
  std::vector<std::vector<Node>> loops;
  // (first curve, curve count) per loop
  std::vector<std::pair<int, int>> loop_ranges;
};

// Parameter where the chord starting at node k of `loop` ends.
double chord_end_param(const std::vector<Node>& loop, std::size_t k) {
  const Node& a = loop[k];
  const Node& b = loop[(k + 1) % loop.size()];
  return (b.curve == a.curve && b.s > a.s) ? b.s : 1.0;
}

BoundaryModel sample_boundary(const ObstacleDomain& domain, double h) {
  BoundaryModel model;
  for (const auto& loop : domain.loops()) {
    std::vector<Node> nodes;
    model.loop_ranges.emplace_back(static_cast<int>(model.curves.size()), static_cast<int>(loop.size()));
    for (const auto& c : loop) {
      const int ci = static_cast<int>(model.curves.size());
      model.curves.push_back(c);
      const double len = curve_length(c.geometry);
      double sweep = 0.0;
      if (const auto* arc = std::get_if<ArcFacet>(&c.geometry)) sweep = std::abs(arc->theta_end - arc->theta_begin);
      int n = 1;
      while (len / n > h || sweep / n > std::numbers::pi / 4.0) n *= 2;
      for (int k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) / n;
        nodes.push_back({curve_point(c.geometry, s), ci, s});
      }
    }
    model.loops.push_back(std::move(nodes));
  }
  return model;
}

// Uniform bucket grid over boundary chords.
class ChordIndex {
 public:
  ChordIndex(const std::vector<std::pair<Vec2, Vec2>>& chords, const Vec2& lo, const Vec2& hi, double cell)
      : chords_(chords), lo_(lo), cell_(cell) {
    nx_ = std::max(1, static_cast<int>(std::ceil((hi(0) - lo(0)) / cell)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil((hi(1) - lo(1)) / cell)) + 1);
    buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    for (std::size_t i = 0; i < chords.size(); ++i) {
      const Vec2 a = chords[i].first.cwiseMin(chords[i].second) - Vec2::Constant(cell);
      const Vec2 b = chords[i].first.cwiseMax(chords[i].second) + Vec2::Constant(cell);
      const auto [x0, y0] = cell_of(a);
      const auto [x1, y1] = cell_of(b);
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) buckets_[index(x, y)].push_back(static_cast<int>(i));
    }
  }

  /// Chords within one cell size of p (superset).
  const std::vector<int>& near(const Vec2& p) const {
    const auto [x, y] = cell_of(p);
    return buckets_[index(x, y)];
  }

 private:
  std::pair<int, int> cell_of(const Vec2& p) const {
    const int x = std::clamp(static_cast<int>(std::floor((p(0) - lo_(0)) / cell_)), 0, nx_ - 1);
    const int y = std::clamp(static_cast<int>(std::floor((p(1) - lo_(1)) / cell_)), 0, ny_ - 1);
    return {x, y};
  }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(x); }

  const std::vector<std::pair<Vec2, Vec2>>& chords_;
  Vec2 lo_;
  double cell_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

bool encroaches(const Vec2& p, const Vec2& a, const Vec2& b) { return (a - p).dot(b - p) < 0.0; }

std::vector<std::pair<Vec2, Vec2>> chords_of(const BoundaryModel& model) {
  std::vector<std::pair<Vec2, Vec2>> out;
  for (const auto& loop : model.loops)
    for (std::size_t k = 0; k < loop.size(); ++k) out.emplace_back(loop[k].p, loop[(k + 1) % loop.size()].p);
  return out;
}

// Curves meeting at a shared corner. Encroachment between them is not
// split: near acute corners it never stops, and those chords are recovered
// by circles on their far side.
bool adjacent_curves(const BoundaryModel& model, int a, int b) {
  if (a == b) return true;
  for (const auto& [first, count] : model.loop_ranges) {
    if (a < first || a >= first + count || b < first || b >= first + count) continue;
    const int d = std::abs(a - b);
    return d == 1 || d == count - 1;
  }
  return false;
}

// Split chords encroached by boundary nodes of non-adjacent curves until none are.
void protect_boundary(BoundaryModel& model, double h) {
  for (int round = 0; round < 32; ++round) {
    std::vector<Vec2> nodes;
    std::vector<int> node_curve;
    std::vector<int> chord_curve;
    for (const auto& loop : model.loops)
      for (const auto& n : loop) {
        nodes.push_back(n.p);
        node_curve.push_back(n.curve);
        chord_curve.push_back(n.curve);
      }
    const auto chords = chords_of(model);
    Vec2 lo = nodes.front(), hi = nodes.front();
    for (const auto& p : nodes) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    ChordIndex index(chords, lo, hi, h);
    std::vector<bool> split(chords.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (int ci : index.near(nodes[i])) {
        const auto& [a, b] = chords[static_cast<std::size_t>(ci)];
        if (nodes[i] == a || nodes[i] == b) continue;
        if (adjacent_curves(model, node_curve[i], chord_curve[static_cast<std::size_t>(ci)])) continue;
        if (encroaches(nodes[i], a, b)) {
          split[static_cast<std::size_t>(ci)] = true;
          any = true;
        }
      }
    if (!any) return;
    std::size_t offset = 0;
    for (auto& loop : model.loops) {
      std::vector<Node> out;
      for (std::size_t k = 0; k < loop.size(); ++k) {
        out.push_back(loop[k]);
        if (split[offset + k]) {
          const double s = 0.5 * (loop[k].s + chord_end_param(loop, k));
          const auto& curve = model.curves[static_cast<std::size_t>(loop[k].curve)];
          out.push_back({curve_point(curve.geometry, s), loop[k].curve, s});
        }
      }
      offset += loop.size();
      loop = std::move(out);
    }
  }
  throw NumericError("mesh: boundary protection did not converge");
}

double boundary_diameter(const ObstacleDomain& domain) {
  std::vector<Vec2> pts;
  for (const auto& loop : domain.loops())
    for (const auto& c : loop) {
      const int samples = std::holds_alternative<ArcFacet>(c.geometry) ? 64 : 1;
      for (int k = 0; k < samples; ++k) pts.push_back(curve_point(c.geometry, static_cast<double>(k) / samples));
    }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace

double TriMesh::triangle_area(int t) const {
  const Vec2 a = vertices.col(triangles(0, t)), b = vertices.col(triangles(1, t)), c = vertices.col(triangles(2, t));
  return 0.5 * orient(a, b, c);
}

double TriMesh::max_edge_length() const {
  double best = 0.0;
  for (int t = 0; t < triangle_count(); ++t)
    for (int k = 0; k < 3; ++k)
      best = std::max(best, (vertices.col(triangles(k, t)) - vertices.col(triangles((k + 1) % 3, t))).norm());
  return best;
}

double TriMesh::area() const {
  double total = 0.0;
  for (int t = 0; t < triangle_count(); ++t) total += triangle_area(t);
  return total;
}

Eigen::VectorXd TriMesh::lumped_mass() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(vertex_count());
  for (int t = 0; t < triangle_count(); ++t) {
    const double a = triangle_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) m(triangles(k, t)) += a;
  }
  return m;
}

TriMesh mesh_domain(const ObstacleDomain& domain, double h) {
  const double diam = boundary_diameter(domain);
  if (!(h > 0.0) || !(h < diam / 4.0)) throw ValidationError("mesh size h must satisfy 0 < h < diam/4");
  const double spacing = 0.85 * h;
  double perimeter = 0.0;
  for (const auto& loop : domain.loops())
    for (const auto& c : loop) perimeter += curve_length(c.geometry);
  const double projected = domain.area() / (0.5 * std::sqrt(3.0) * spacing * spacing) + 2.0 * perimeter / h;
  if (projected > 1e6) throw ResourceError("mesh would exceed 1e6 vertices; increase h");

  BoundaryModel model = sample_boundary(domain, h);
  protect_boundary(model, h);

  const auto [lo, hi] = domain.bounding_box();
  std::vector<Vec2> extra;  // refinement points
  for (int round = 0; round < 8; ++round) {
    // Boundary nodes first, in loop order.
    std::vector<Vec2> pts;
    std::vector<BoundaryEdge> bedges;
    for (const auto& loop : model.loops) {
      const int base = static_cast<int>(pts.size());
      const int m = static_cast<int>(loop.size());
      for (const auto& n : loop) pts.push_back(n.p);
      for (int k = 0; k < m; ++k) {
        const int a = base + k, b = base + (k + 1) % m;
        const Vec2 d = pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)];
        bedges.push_back({a, b, model.curves[static_cast<std::size_t>(loop[static_cast<std::size_t>(k)].curve)].tag,
                          right_normal(d).normalized()});
      }
    }
    const int boundary_count = static_cast<int>(pts.size());
    const auto chords = chords_of(model);
    ChordIndex index(chords, lo - Vec2::Constant(h), hi + Vec2::Constant(h), h);

    auto admissible = [&](const Vec2& p, double clearance) {
      for (int ci : index.near(p)) {
        const auto& [a, b] = chords[static_cast<std::size_t>(ci)];
        if (segment_distance(p, a, b) < clearance || encroaches(p, a, b)) return false;
      }
      return true;
    };

    // Equilateral lattice, clipped by scanline parity against the chords.
    Rng rng(0x5eed);
    const double dy = spacing * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = lo(1) + 0.5 * dy; y < hi(1); y += dy, ++row) {
      std::vector<double> xs;
      for (const auto& [a, b] : chords)
        if ((a(1) > y) != (b(1) > y)) xs.push_back(a(0) + (y - a(1)) / (b(1) - a(1)) * (b(0) - a(0)));
      std::sort(xs.begin(), xs.end());
      const double shift = (row % 2) ? 0.5 * spacing : 0.0;
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const double x0 = lo(0) + shift + spacing * std::ceil((xs[k] - lo(0) - shift) / spacing);
        for (double x = x0; x < xs[k + 1]; x += spacing) {
          Vec2 p(x + 1e-4 * spacing * (rng.uniform() - 0.5), y + 1e-4 * spacing * (rng.uniform() - 0.5));
          if (admissible(p, 0.4 * spacing)) pts.push_back(p);
        }
      }
    }
    for (const auto& p : extra)
      if (admissible(p, 0.2 * spacing)) pts.push_back(p);

    Delaunay dt(pts);
    const auto& tris = dt.triangles();

    std::unordered_set<std::uint64_t> boundary_keys;
    for (const auto& e : bedges) boundary_keys.insert(edge_key(e.a, e.b));
    std::unordered_set<std::uint64_t> present;
    for (const auto& t : tris)
      if (t.alive)
        for (int k = 0; k < 3; ++k) present.insert(edge_key(t.v[static_cast<std::size_t>(k)], t.v[static_cast<std::size_t>((k + 1) % 3)]));
    bool missing = false;
    {
      std::size_t offset = 0;
      for (auto& loop : model.loops) {
        std::vector<Node> out;
        for (std::size_t k = 0; k < loop.size(); ++k) {
          out.push_back(loop[k]);
          const auto& e = bedges[offset + k];
          if (!present.count(edge_key(e.a, e.b))) {
            missing = true;
            const double s = 0.5 * (loop[k].s + chord_end_param(loop, k));
            out.push_back({curve_point(model.curves[static_cast<std::size_t>(loop[k].curve)].geometry, s), loop[k].curve, s});
          }
        }
        offset += loop.size();
        loop = std::move(out);
      }
    }
    if (missing) continue;

    // Flood fill from the super triangle, flipping across boundary edges.
    const int real = dt.real_count();
    std::vector<int> state(tris.size(), -1);
    std::vector<int> queue;
    for (std::size_t i = 0; i < tris.size(); ++i)
      if (tris[i].alive && *std::max_element(tris[i].v.begin(), tris[i].v.end()) >= real) {
        state[i] = 0;
        queue.push_back(static_cast<int>(i));
        break;
      }
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto& t = tris[static_cast<std::size_t>(queue[q])];
      const int s = state[static_cast<std::size_t>(queue[q])];
      for (int k = 0; k < 3; ++k) {
        const int nb = t.n[static_cast<std::size_t>(k)];
        if (nb < 0) continue;
        const int a = t.v[static_cast<std::size_t>((k + 1) % 3)], b = t.v[static_cast<std::size_t>((k + 2) % 3)];
        const int ns = boundary_keys.count(edge_key(a, b)) ? 1 - s : s;
        if (state[static_cast<std::size_t>(nb)] < 0) {
          state[static_cast<std::size_t>(nb)] = ns;
          queue.push_back(nb);
        } else if (state[static_cast<std::size_t>(nb)] != ns) {
          throw NumericError("mesh: inconsistent inside/outside classification");
        }
      }
    }

    std::vector<std::array<int, 3>> inside;
    for (std::size_t i = 0; i < tris.size(); ++i) {
      if (!tris[i].alive || state[i] != 1) continue;
      if (*std::max_element(tris[i].v.begin(), tris[i].v.end()) >= real)
        throw NumericError("mesh: boundary does not enclose the interior");
      inside.push_back(tris[i].v);
    }

    // Refine triangles with long edges by their centroids.
    std::vector<Vec2> add;
    for (const auto& t : inside)
      for (int k = 0; k < 3; ++k)
        if ((pts[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])] - pts[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])]).norm() > 1.4 * h) {
          add.push_back((pts[static_cast<std::size_t>(t[0])] + pts[static_cast<std::size_t>(t[1])] + pts[static_cast<std::size_t>(t[2])]) / 3.0);
          break;
        }
    if (!add.empty() && round < 7) {
      extra.insert(extra.end(), add.begin(), add.end());
      continue;
    }

    // Compact: keep vertices used by interior triangles, boundary first.
    std::vector<int> remap(pts.size(), -1);
    int next = 0;
    for (int i = 0; i < boundary_count; ++i) remap[static_cast<std::size_t>(i)] = next++;
    for (const auto& t : inside)
      for (int v : t)
        if (remap[static_cast<std::size_t>(v)] < 0) remap[static_cast<std::size_t>(v)] = -2;
    for (std::size_t i = static_cast<std::size_t>(boundary_count); i < pts.size(); ++i)
      if (remap[i] == -2) remap[i] = next++;

    TriMesh mesh;
    mesh.h = h;
    mesh.vertices.resize(2, next);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (remap[i] >= 0) mesh.vertices.col(remap[i]) = pts[i];
    mesh.triangles.resize(3, static_cast<Eigen::Index>(inside.size()));
    for (std::size_t t = 0; t < inside.size(); ++t)
      for (int k = 0; k < 3; ++k)
        mesh.triangles(k, static_cast<Eigen::Index>(t)) = remap[static_cast<std::size_t>(inside[t][static_cast<std::size_t>(k)])];
    mesh.boundary_edges = bedges;
    mesh.on_sigma.assign(static_cast<std::size_t>(next), false);
    mesh.on_gamma.assign(static_cast<std::size_t>(next), false);
    mesh.junction.assign(static_cast<std::size_t>(next), false);
    for (const auto& e : bedges) {
      auto& flag = e.tag == BoundaryTag::sigma ? mesh.on_sigma : mesh.on_gamma;
      flag[static_cast<std::size_t>(e.a)] = flag[static_cast<std::size_t>(e.b)] = true;
    }
    for (int i = 0; i < next; ++i)
      mesh.junction[static_cast<std::size_t>(i)] = mesh.on_sigma[static_cast<std::size_t>(i)] && mesh.on_gamma[static_cast<std::size_t>(i)];
    mesh.domain = domain;

    const std::string problem = check_mesh(mesh);
    if (!problem.empty()) throw NumericError("mesh: " + problem);
    return mesh;
  }
  throw NumericError("mesh: boundary recovery did not converge");
}

std::string check_mesh(const TriMesh& mesh, double edge_factor) {
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (!(mesh.triangle_area(t) > 0.0)) return "non-positive triangle area";
  if (mesh.max_edge_length() > edge_factor * mesh.h) return "edge longer than the size bound";

  // Interior edges are shared by exactly two triangles, boundary edges by one.
  std::unordered_map<std::uint64_t, int> uses;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) ++uses[edge_key(mesh.triangles(k, t), mesh.triangles((k + 1) % 3, t))];
  std::unordered_set<std::uint64_t> boundary;
  std::vector<int> out_degree(static_cast<std::size_t>(mesh.vertex_count()), 0);
  std::vector<int> in_degree(static_cast<std::size_t>(mesh.vertex_count()), 0);
  for (const auto& e : mesh.boundary_edges) {
    if (!boundary.insert(edge_key(e.a, e.b)).second) return "duplicate boundary edge";
    ++out_degree[static_cast<std::size_t>(e.a)];
    ++in_degree[static_cast<std::size_t>(e.b)];
  }
  for (const auto& [key, count] : uses) {
    const bool is_boundary = boundary.count(key) > 0;
    if (is_boundary && count != 1) return "boundary edge not on exactly one triangle";
    if (!is_boundary && count != 2) return "non-conforming interior edge";
  }
  for (std::size_t i = 0; i < out_degree.size(); ++i)
    if (out_degree[i] != in_degree[i] || out_degree[i] > 1) return "boundary edges do not form closed loops";
  return {};
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  for (int i = 0; i < mesh.vertex_count(); ++i)
    out << "v " << format_number(mesh.vertices(0, i)) << ' ' << format_number(mesh.vertices(1, i)) << '\n';
  for (int t = 0; t < mesh.triangle_count(); ++t)
    out << "t " << mesh.triangles(0, t) << ' ' << mesh.triangles(1, t) << ' ' << mesh.triangles(2, t) << '\n';
  for (const auto& e : mesh.boundary_edges) out << "b " << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
}

}  // namespace wulff
