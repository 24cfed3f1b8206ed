#include "wulff/abp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wulff/errors.hpp"
#include "wulff/isoperimetry.hpp"

namespace wulff {

double default_contact_epsilon(const TriMesh& mesh, const ScalarField& u) {
  return 5.0 * mesh.h * mesh.h * (1.0 + u.max_gradient_norm());
}

std::vector<int> ContactSet::triangles(const TriMesh& mesh) const {
  std::vector<int> out;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (is_member[static_cast<std::size_t>(mesh.triangles(0, t))] &&
        is_member[static_cast<std::size_t>(mesh.triangles(1, t))] &&
        is_member[static_cast<std::size_t>(mesh.triangles(2, t))])
      out.push_back(t);
  return out;
}

std::string ContactSet::to_csv() const {
  CsvTable t({"vertex", "slack", "member"});
  for (Eigen::Index i = 0; i < slack.size(); ++i)
    t.add_row(std::vector<std::string>{std::to_string(i), format_number(slack(i)),
                                       is_member[static_cast<std::size_t>(i)] ? "1" : "0"});
  return t.to_text();
}

ContactSet lower_contact_set(const TriMesh& mesh, const ScalarField& u, std::optional<double> epsilon) {
  ContactSet cs;
  cs.epsilon = epsilon ? *epsilon : default_contact_epsilon(mesh, u);
  if (!(cs.epsilon >= 0.0)) throw ValidationError("contact epsilon must be non-negative");
  const Eigen::Index n = mesh.vertex_count();
  const Eigen::ArrayXd X = mesh.vertices.row(0).transpose();
  const Eigen::ArrayXd Y = mesh.vertices.row(1).transpose();
  const Eigen::ArrayXd U = u.values.array();
  cs.slack.resize(n);
  cs.is_member.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double gx = u.vertex_gradients(0, p), gy = u.vertex_gradients(1, p);
    // min_x [u(x) - <g, x>] - (u(p) - <g, p>)
    const double lowest = (U - gx * X - gy * Y).minCoeff();
    cs.slack(p) = lowest - (U(p) - gx * X(p) - gy * Y(p));
    if (cs.slack(p) >= -cs.epsilon && !mesh.junction[static_cast<std::size_t>(p)]) {
      cs.is_member[static_cast<std::size_t>(p)] = true;
      cs.members.push_back(static_cast<int>(p));
    }
  }
  return cs;
}

std::string to_string(Region region) {
  switch (region) {
    case Region::interior: return "INTERIOR";
    case Region::sigma: return "SIGMA";
    case Region::gamma: return "GAMMA";
  }
  return "UNKNOWN";
}

MinimizerLocation minimizer_location(const TriMesh& mesh, const ScalarField& u, const Eigen::Vector2d& v,
                                     const ConvexBody& body, double delta) {
  if (!(delta > 0.0) || delta >= 1.0) throw ValidationError("delta must lie in (0, 1)");
  if (gauge(body, v) > 1.0 - delta) throw ValidationError("minimizer_location needs Phi*(v) <= 1 - delta");
  MinimizerLocation best;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const double val = u.values(i) - v.dot(mesh.vertices.col(i));
    if (best.vertex < 0 || val < best.value) {
      best.vertex = i;
      best.value = val;
    }
  }
  const auto k = static_cast<std::size_t>(best.vertex);
  best.point = mesh.vertices.col(best.vertex);
  best.junction = mesh.junction[k];
  if (mesh.on_sigma[k]) best.region = Region::sigma;
  else if (mesh.on_gamma[k]) best.region = Region::gamma;
  else best.region = Region::interior;
  return best;
}

int gamma_minimizer(const TriMesh& mesh, const ScalarField& u, const Eigen::Vector2d& v) {
  int best = -1;
  double best_val = 0.0;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (!mesh.on_gamma[static_cast<std::size_t>(i)]) continue;
    const double val = u.values(i) - v.dot(mesh.vertices.col(i));
    if (best < 0 || val < best_val) {
      best = i;
      best_val = val;
    }
  }
  if (best < 0) throw ValidationError("mesh has no Gamma vertices");
  return best;
}

NormalConeResult normal_cone_test(const TriMesh& mesh, const ScalarField& u, const NormalConeQuery& q,
                                  std::optional<double> epsilon) {
  if (!mesh.domain) throw ValidationError("normal cone test needs the source domain");
  if (q.sign != 1 && q.sign != -1) throw ValidationError("sign must be +1 or -1");
  // Locate p on a Gamma chord and interpolate u there.
  double up = 0.0;
  bool found = false;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::gamma) continue;
    const Eigen::Vector2d a = mesh.vertices.col(e.a), b = mesh.vertices.col(e.b);
    const Eigen::Vector2d d = b - a;
    const double t = std::clamp((q.p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    if ((a + t * d - q.p).norm() <= 1e-9) {
      up = (1.0 - t) * u.values(e.a) + t * u.values(e.b);
      found = true;
      break;
    }
  }
  if (!found) throw ValidationError("normal cone base point is not on Gamma");
  const double eps = epsilon ? *epsilon : default_contact_epsilon(mesh, u);

  NormalConeResult r;
  r.sigma_dot = q.v.dot(mesh.domain->sphere_normal(q.p));
  r.sign_ok = q.sign * r.sigma_dot >= 0.0;
  r.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (!mesh.on_gamma[static_cast<std::size_t>(i)]) continue;
    const Eigen::Vector2d x = mesh.vertices.col(i);
    r.worst_slack = std::min(r.worst_slack, u.values(i) - up - (x - q.p).dot(q.v));
  }
  r.member = r.sign_ok && r.worst_slack >= -eps;
  return r;
}

bool normal_cone_membership(const TriMesh& mesh, const ScalarField& u, const NormalConeQuery& q,
                            std::optional<double> epsilon) {
  return normal_cone_test(mesh, u, q, epsilon).member;
}

Coverage gradient_image_coverage(const TriMesh& mesh, const ScalarField& u, const ContactSet& contact,
                                 const ConvexBody& body, const UnitDirection& v, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (body.dimension() != 2 || v.dimension() != 2) throw ValidationError("coverage is planar");
  const std::vector<int> tris = contact.triangles(mesh);
  if (tris.empty()) throw NumericError("empty contact set: discretization too coarse");

  // Bucket the gradient cloud with cell size delta.
  std::unordered_map<std::int64_t, std::vector<int>> buckets;
  auto key = [delta](double x, double y) {
    const auto ix = static_cast<std::int64_t>(std::floor(x / delta));
    const auto iy = static_cast<std::int64_t>(std::floor(y / delta));
    return ix * 1'000'003LL + iy;
  };
  for (int t : tris) buckets[key(u.triangle_gradients(0, t), u.triangle_gradients(1, t))].push_back(t);

  double extent;
  if (body.is_polytope()) extent = body.vertices().cwiseAbs().maxCoeff();
  else extent = body.parameters().maxCoeff();
  const double step = delta / 2.0;
  const int n = static_cast<int>(std::ceil(extent / step));
  Coverage cov;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const Eigen::Vector2d y(i * step, j * step);
      if (y.dot(v.vector()) < delta || gauge(body, y) > 1.0 - delta) continue;
      ++cov.samples;
      bool hit = false;
      const auto ix = static_cast<std::int64_t>(std::floor(y(0) / delta));
      const auto iy = static_cast<std::int64_t>(std::floor(y(1) / delta));
      for (std::int64_t dx = -1; dx <= 1 && !hit; ++dx)
        for (std::int64_t dy = -1; dy <= 1 && !hit; ++dy) {
          auto it = buckets.find((ix + dx) * 1'000'003LL + (iy + dy));
          if (it == buckets.end()) continue;
          for (int t : it->second)
            if ((u.triangle_gradients.col(t) - y).norm() <= delta) {
              hit = true;
              break;
            }
        }
      if (hit) ++cov.covered;
    }
  if (cov.samples == 0) throw ValidationError("delta too large: no coverage samples");
  cov.fraction = static_cast<double>(cov.covered) / cov.samples;
  return cov;
}

std::vector<Eigen::Matrix2d> hessian_fit(const TriMesh& mesh, const ScalarField& u) {
  std::vector<std::vector<int>> ring(static_cast<std::size_t>(mesh.vertex_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        if (k != l) ring[static_cast<std::size_t>(mesh.triangles(k, t))].push_back(mesh.triangles(l, t));
  std::vector<Eigen::Matrix2d> out(ring.size(), Eigen::Matrix2d::Zero());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    auto& nb = ring[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
    const auto ii = static_cast<Eigen::Index>(i);
    for (int j : nb) {
      const Eigen::Vector2d dx = mesh.vertices.col(j) - mesh.vertices.col(ii);
      const Eigen::Vector2d dg = u.vertex_gradients.col(j) - u.vertex_gradients.col(ii);
      A += dx * dx.transpose();
      B += dx * dg.transpose();
    }
    if (std::abs(A.determinant()) < 1e-14 * A.squaredNorm()) continue;
    const Eigen::Matrix2d H = A.inverse() * B;
    out[i] = 0.5 * (H + H.transpose());
  }
  return out;
}

KeyValueReport AbpReport::to_report() const {
  KeyValueReport r;
  r.add("h", mesh.h);
  r.add("vertices", mesh.vertex_count());
  r.add("triangles", mesh.triangle_count());
  r.add("c", c);
  r.add("area", area);
  r.add("perim_sigma", perim_sigma);
  r.add("cg_iterations", solve.iterations);
  r.add("solve_residual", solve.relative_residual);
  r.add("compatibility_residual", solve.compatibility_residual);
  r.add("epsilon", contact.epsilon);
  r.add("contact_vertices", static_cast<long long>(contact.members.size()));
  r.add("p0_x", p0(0));
  r.add("p0_y", p0(1));
  r.add("v_x", direction(0));
  r.add("v_y", direction(1));
  r.add("delta", delta);
  r.add("cut_area", cut_area);
  r.add("gradient_image", gradient_image);
  r.add("source_bound", source_bound);
  r.add("perimeter_bound", perimeter_bound);
  r.add("contact_area", contact_area);
  r.add("margin_image", margins[0]);
  r.add("margin_source", margins[1]);
  r.add("margin_perimeter", margins[2]);
  r.add("coverage", coverage);
  r.add("hessian_nonneg_fraction", hessian_nonneg_fraction);
  r.add("chain_pass", chain_pass);
  r.add("coverage_pass", coverage_pass);
  r.add("pass", pass);
  return r;
}

std::string AbpReport::gradient_csv() const {
  CsvTable t({"gx", "gy"});
  for (int tri : contact.triangles(mesh))
    t.add_row(std::vector<double>{u.triangle_gradients(0, tri), u.triangle_gradients(1, tri)});
  return t.to_text();
}

AbpReport abp_chain_report(const ConvexBody& body, const ObstacleDomain& domain, double h, const AbpOptions& options) {
  if (body.dimension() != 2) throw ValidationError("the ABP chain is planar");
  if (domain.gamma().empty()) throw ValidationError("the ABP chain needs a nonempty Gamma");
  AbpReport rep;
  const DomainMeasures m = measures(domain, body);
  rep.area = m.area;
  rep.perim_sigma = m.perim_sigma;
  rep.c = m.perim_sigma / m.area;
  rep.mesh = mesh_domain(domain, h);
  rep.u = solve_neumann(rep.mesh, body, rep.c, &rep.solve);
  rep.contact = lower_contact_set(rep.mesh, rep.u, options.epsilon);

  rep.p0_vertex = gamma_minimizer(rep.mesh, rep.u);
  rep.p0 = rep.mesh.vertices.col(rep.p0_vertex);
  const UnitDirection v = UnitDirection::normalized(domain.sphere_normal(rep.p0));
  rep.direction = v.vector();
  rep.delta = options.delta ? *options.delta : 5.0 * h;

  const Coverage cov = gradient_image_coverage(rep.mesh, rep.u, rep.contact, body, v, rep.delta);
  rep.coverage = cov.fraction;

  const std::vector<int> tris = rep.contact.triangles(rep.mesh);
  const auto hess = hessian_fit(rep.mesh, rep.u);
  const double hess_tol = 0.05 * std::abs(rep.c);
  int nonneg = 0;
  for (int t : tris) {
    rep.contact_area += rep.mesh.triangle_area(t);
    const Eigen::Vector2d ga = rep.u.vertex_gradients.col(rep.mesh.triangles(0, t));
    const Eigen::Vector2d gb = rep.u.vertex_gradients.col(rep.mesh.triangles(1, t));
    const Eigen::Vector2d gc = rep.u.vertex_gradients.col(rep.mesh.triangles(2, t));
    rep.gradient_image += 0.5 * std::abs((gb(0) - ga(0)) * (gc(1) - ga(1)) - (gb(1) - ga(1)) * (gc(0) - ga(0)));
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 3; ++k) H += hess[static_cast<std::size_t>(rep.mesh.triangles(k, t))] / 3.0;
    if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(H).eigenvalues().minCoeff() >= -hess_tol) ++nonneg;
  }
  rep.hessian_nonneg_fraction = tris.empty() ? 0.0 : static_cast<double>(nonneg) / static_cast<double>(tris.size());

  rep.cut_area = cut_volume(body, v);
  rep.source_bound = 0.25 * rep.c * rep.c * rep.contact_area;
  rep.perimeter_bound = m.perim_sigma * m.perim_sigma / (4.0 * m.area);
  const std::array<double, 4> chain = {rep.cut_area, rep.gradient_image, rep.source_bound, rep.perimeter_bound};
  rep.chain_pass = true;
  for (std::size_t k = 0; k < 3; ++k) {
    rep.margins[k] = (chain[k + 1] - chain[k]) / chain[k];
    if (!(rep.margins[k] >= -options.chain_tolerance)) rep.chain_pass = false;
  }
  rep.coverage_pass = rep.coverage >= options.coverage_threshold;
  rep.pass = rep.chain_pass && rep.coverage_pass;
  return rep;
}

}  // namespace wulff
