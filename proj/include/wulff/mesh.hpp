#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wulff/obstacle_domain.hpp"

namespace wulff {

/// Boundary edge a -> b with the domain on its left.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::sigma;
  Eigen::Vector2d normal;
};

/// Conforming triangulation of an obstacle domain with tagged boundary.
struct TriMesh {
  Eigen::Matrix2Xd vertices;
  /// Counterclockwise index triples, one per column.
  Eigen::Matrix3Xi triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;

  std::vector<bool> on_sigma;
  std::vector<bool> on_gamma;
  /// Vertices where a Sigma edge meets a Gamma edge.
  std::vector<bool> junction;

  /// Source geometry, when the mesh came from mesh_domain.
  std::optional<ObstacleDomain> domain;

  int vertex_count() const { return static_cast<int>(vertices.cols()); }
  int triangle_count() const { return static_cast<int>(triangles.cols()); }
  Eigen::Vector2d vertex(int i) const { return vertices.col(i); }
  double triangle_area(int t) const;
  double max_edge_length() const;
  /// Total area of the polygonal mesh region.
  double area() const;
  /// One third of the adjacent triangle areas per vertex.
  Eigen::VectorXd lumped_mass() const;
  bool on_boundary(int i) const { return on_sigma[static_cast<std::size_t>(i)] || on_gamma[static_cast<std::size_t>(i)]; }
};

/// Triangulates `domain` with boundary chords and interior edges near h.
/// Throws ValidationError unless 0 < h < diam/4 and ResourceError when the
/// projected vertex count exceeds 1e6.
TriMesh mesh_domain(const ObstacleDomain& domain, double h);

/// Checks the structural invariants; returns an empty string when valid.
std::string check_mesh(const TriMesh& mesh, double edge_factor = 1.5);

/// `v x y`, `t i j k` and `b i j TAG` lines.
void write_mesh(std::ostream& out, const TriMesh& mesh);

}  // namespace wulff
