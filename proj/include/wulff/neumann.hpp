#pragma once

#include <Eigen/Core>
#include <functional>

#include "wulff/convex_body.hpp"
#include "wulff/mesh.hpp"

namespace wulff {

/// Piecewise-linear field on a TriMesh.
struct ScalarField {
  Eigen::VectorXd values;
  /// Constant gradient per triangle.
  Eigen::Matrix2Xd triangle_gradients;
  /// Area-weighted average of adjacent triangle gradients.
  Eigen::Matrix2Xd vertex_gradients;

  /// Builds gradients; subtracts the area-weighted mean when `normalize`.
  static ScalarField from_values(const TriMesh& mesh, Eigen::VectorXd values, bool normalize = true);

  /// Area-weighted mean over the mesh.
  double mean(const TriMesh& mesh) const;
  double max_gradient_norm() const;
};

struct SolveStats {
  int iterations = 0;
  /// |b - K u| / |b| after the solve.
  double relative_residual = 0.0;
  /// |c |Omega| - int_Sigma Phi(nu)| / (c |Omega|).
  double compatibility_residual = 0.0;
  /// Discrete load imbalance removed before solving (polygonized boundary).
  double discrete_defect = 0.0;
};

/// Delta u = c in Omega, du/dnu = Phi(nu) on Sigma, zero flux on Gamma, with
/// first-order elements; the constant nullspace is projected out in every CG
/// iteration and u has zero mean.
///
/// Throws ValidationError when c |Omega| and P_Phi(Sigma) disagree beyond
/// 1e-10 relative, NumericError when CG does not reach 1e-10.
ScalarField solve_neumann(const TriMesh& mesh, const ConvexBody& body, double c, SolveStats* stats = nullptr);

/// Same problem with arbitrary flux data g(edge) on Sigma edges (Gamma stays
/// insulated); compatibility is checked on the discrete data.
ScalarField solve_neumann(const TriMesh& mesh, double c, const std::function<double(const BoundaryEdge&)>& flux,
                          SolveStats* stats = nullptr);

}  // namespace wulff
