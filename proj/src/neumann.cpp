#include "wulff/neumann.hpp"

#include <Eigen/Sparse>
#include <cmath>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Gradients of the three hat functions on triangle t, one per column.
Eigen::Matrix<double, 2, 3> hat_gradients(const TriMesh& mesh, int t) {
  Eigen::Matrix<double, 2, 3> g;
  const double twice = 2.0 * mesh.triangle_area(t);
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d pj = mesh.vertices.col(mesh.triangles((k + 1) % 3, t));
    const Eigen::Vector2d pk = mesh.vertices.col(mesh.triangles((k + 2) % 3, t));
    g.col(k) << (pj(1) - pk(1)) / twice, (pk(0) - pj(0)) / twice;
  }
  return g;
}

SparseRow stiffness(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto g = hat_gradients(mesh, t);
    const double area = mesh.triangle_area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(mesh.triangles(i, t), mesh.triangles(j, t), area * g.col(i).dot(g.col(j)));
  }
  SparseRow K(mesh.vertex_count(), mesh.vertex_count());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

void project_mean(Eigen::VectorXd& x) { x.array() -= x.mean(); }

// Jacobi-preconditioned CG on the range of K (orthogonal to constants).
Eigen::VectorXd projected_cg(const SparseRow& K, Eigen::VectorXd b, SolveStats& stats) {
  const Eigen::Index n = K.rows();
  project_mean(b);
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) return x;
  const Eigen::VectorXd inv_diag = K.diagonal().cwiseInverse();
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  project_mean(z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const int max_iter = static_cast<int>(std::max<Eigen::Index>(1000, 20 * n));
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd Kp = K * p;
    const double pKp = p.dot(Kp);
    if (!(pKp > 0.0)) break;
    const double alpha = rz / pKp;
    x += alpha * p;
    r -= alpha * Kp;
    project_mean(r);
    if (r.norm() <= 1e-13 * bnorm) {
      ++it;
      break;
    }
    z = inv_diag.cwiseProduct(r);
    project_mean(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  stats.iterations = it;
  Eigen::VectorXd true_r = b - K * x;
  project_mean(true_r);
  stats.relative_residual = true_r.norm() / bnorm;
  if (!(stats.relative_residual < 1e-10))
    throw NumericError("Neumann solve did not converge: relative residual " + std::to_string(stats.relative_residual));
  return x;
}

ScalarField solve_with_load(const TriMesh& mesh, double c, const std::function<double(const BoundaryEdge&)>& flux,
                            SolveStats& stats) {
  if (mesh.vertex_count() == 0) throw ValidationError("empty mesh");
  const Eigen::VectorXd mass = mesh.lumped_mass();
  Eigen::VectorXd b = -c * mass;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::sigma) continue;
    const double len = (mesh.vertices.col(e.b) - mesh.vertices.col(e.a)).norm();
    const double g = flux(e) * len / 2.0;
    b(e.a) += g;
    b(e.b) += g;
  }
  // The polygonized boundary leaves an O(h^2) imbalance; spread it by mass.
  const double defect = b.sum();
  stats.discrete_defect = defect;
  b -= defect * mass / mass.sum();
  Eigen::VectorXd u = projected_cg(stiffness(mesh), b, stats);
  return ScalarField::from_values(mesh, std::move(u), true);
}

}  // namespace

ScalarField ScalarField::from_values(const TriMesh& mesh, Eigen::VectorXd values, bool normalize) {
  if (values.size() != mesh.vertex_count()) throw ValidationError("field size does not match the mesh");
  ScalarField f;
  f.values = std::move(values);
  if (normalize) f.values.array() -= f.mean(mesh);
  f.triangle_gradients.resize(2, mesh.triangle_count());
  f.vertex_gradients = Eigen::Matrix2Xd::Zero(2, mesh.vertex_count());
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto g = hat_gradients(mesh, t);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) grad += f.values(mesh.triangles(k, t)) * g.col(k);
    f.triangle_gradients.col(t) = grad;
    const double area = mesh.triangle_area(t);
    for (int k = 0; k < 3; ++k) {
      f.vertex_gradients.col(mesh.triangles(k, t)) += area * grad;
      weight(mesh.triangles(k, t)) += area;
    }
  }
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (weight(i) > 0.0) f.vertex_gradients.col(i) /= weight(i);
  return f;
}

double ScalarField::mean(const TriMesh& mesh) const {
  const Eigen::VectorXd m = mesh.lumped_mass();
  return m.dot(values) / m.sum();
}

double ScalarField::max_gradient_norm() const {
  return vertex_gradients.cols() ? vertex_gradients.colwise().norm().maxCoeff() : 0.0;
}

ScalarField solve_neumann(const TriMesh& mesh, const ConvexBody& body, double c, SolveStats* stats) {
  if (body.dimension() != 2) throw ValidationError("the Neumann problem is planar");
  if (!std::isfinite(c)) throw ValidationError("source constant must be finite");
  SolveStats local;
  SolveStats& s = stats ? *stats : local;
  double area = mesh.area();
  double flux_total = 0.0;
  if (mesh.domain) {
    const DomainMeasures m = measures(*mesh.domain, body);
    area = m.area;
    flux_total = m.perim_sigma;
  } else {
    for (const auto& e : mesh.boundary_edges)
      if (e.tag == BoundaryTag::sigma)
        flux_total += support(body, e.normal) * (mesh.vertices.col(e.b) - mesh.vertices.col(e.a)).norm();
  }
  const double scale = std::max(std::abs(c * area), flux_total);
  s.compatibility_residual = scale > 0.0 ? std::abs(c * area - flux_total) / scale : 0.0;
  if (!(s.compatibility_residual < 1e-10))
    throw ValidationError("incompatible Neumann data: c |Omega| differs from the boundary flux");
  return solve_with_load(mesh, c, [&body](const BoundaryEdge& e) { return support(body, e.normal); }, s);
}

ScalarField solve_neumann(const TriMesh& mesh, double c, const std::function<double(const BoundaryEdge&)>& flux,
                          SolveStats* stats) {
  if (!std::isfinite(c)) throw ValidationError("source constant must be finite");
  SolveStats local;
  SolveStats& s = stats ? *stats : local;
  double flux_total = 0.0, flux_abs = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::sigma) continue;
    const double g = flux(e) * (mesh.vertices.col(e.b) - mesh.vertices.col(e.a)).norm();
    flux_total += g;
    flux_abs += std::abs(g);
  }
  const double area = mesh.area();
  const double scale = std::max(std::abs(c * area), flux_abs);
  s.compatibility_residual = scale > 0.0 ? std::abs(c * area - flux_total) / scale : 0.0;
  if (!(s.compatibility_residual < 1e-10))
    throw ValidationError("incompatible Neumann data: source and boundary flux disagree");
  return solve_with_load(mesh, c, flux, s);
}

}  // namespace wulff
