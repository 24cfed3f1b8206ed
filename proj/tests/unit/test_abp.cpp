#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "wulff/abp.hpp"
#include "wulff/errors.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/mesh.hpp"
#include "wulff/neumann.hpp"
#include "wulff/obstacle_domain.hpp"

using namespace wulff;

namespace {

// Square [2,4] x [-1,1]: convex, far from a small obstacle, Gamma empty.
ObstacleDomain convex_box() {
  Surface s;
  const std::vector<Eigen::Vector2d> p = {{2, -1}, {4, -1}, {4, 1}, {2, 1}};
  for (int i = 0; i < 4; ++i) s.add(make_segment(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>((i + 1) % 4)]));
  return ObstacleDomain(Eigen::Vector2d::Zero(), 0.5, s, {});
}

ObstacleDomain square_minus_ball() { return carve_domain(ConvexBody::square(), Eigen::Vector2d(0, -2.5), 2.0); }

// n x n structured grid on [0,1]^2, all boundary edges tagged Sigma.
TriMesh grid_mesh(int n) {
  TriMesh m;
  m.h = std::sqrt(2.0) / (n - 1);
  m.vertices.resize(2, n * n);
  auto id = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m.vertices.col(id(i, j)) << i / double(n - 1), j / double(n - 1);
  m.triangles.resize(3, 2 * (n - 1) * (n - 1));
  int t = 0;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      m.triangles.col(t++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
      m.triangles.col(t++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
    }
  auto edge = [&](int a, int b, Eigen::Vector2d nu) { m.boundary_edges.push_back({a, b, BoundaryTag::sigma, nu}); };
  for (int i = 0; i + 1 < n; ++i) {
    edge(id(i, 0), id(i + 1, 0), {0, -1});
    edge(id(n - 1, i), id(n - 1, i + 1), {1, 0});
    edge(id(n - 1 - i, n - 1), id(n - 2 - i, n - 1), {0, 1});
    edge(id(0, n - 1 - i), id(0, n - 2 - i), {-1, 0});
  }
  m.on_sigma.assign(static_cast<std::size_t>(n * n), false);
  m.on_gamma.assign(static_cast<std::size_t>(n * n), false);
  m.junction.assign(static_cast<std::size_t>(n * n), false);
  for (const auto& e : m.boundary_edges) m.on_sigma[static_cast<std::size_t>(e.a)] = true;
  return m;
}

Eigen::VectorXd sample(const TriMesh& m, const std::function<double(double, double)>& f) {
  Eigen::VectorXd v(m.vertex_count());
  for (int i = 0; i < m.vertex_count(); ++i) v(i) = f(m.vertices(0, i), m.vertices(1, i));
  return v;
}

std::vector<double> row(const Eigen::Matrix2Xd& a, int r) {
  std::vector<double> out(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i) out[static_cast<std::size_t>(i)] = a(r, i);
  return out;
}

struct Radial {
  TriMesh mesh;
  ScalarField u;
  SolveStats stats;
};

Radial radial_case(double h) {
  Radial r;
  const auto disk = ConvexBody::ball(2);
  r.mesh = mesh_domain(ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0), h);
  r.u = solve_neumann(r.mesh, disk, 4.0 / 3.0, &r.stats);
  return r;
}

double radial_error(const Radial& r) {
  const Eigen::VectorXd mass = r.mesh.lumped_mass();
  Eigen::VectorXd exact(r.mesh.vertex_count());
  for (int i = 0; i < r.mesh.vertex_count(); ++i) exact(i) = oracle::radial_u(r.mesh.vertex(i).norm(), 1.0, 2.0);
  exact.array() -= mass.dot(exact) / mass.sum();
  return (r.u.values - exact).lpNorm<Eigen::Infinity>() / exact.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_SUITE("abp_lab") {

TEST_CASE("annulus mesh size and structure") {
  const auto a = ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0);
  const auto m = mesh_domain(a, 0.1);
  CHECK(check_mesh(m).empty());
  CHECK(m.vertex_count() > 942 / 3);
  CHECK(m.vertex_count() < 942 * 3);
  CHECK(m.max_edge_length() <= 1.5 * 0.1);
  for (const auto& e : m.boundary_edges) {
    const double ra = m.vertex(e.a).norm(), rb = m.vertex(e.b).norm();
    const double want = e.tag == BoundaryTag::gamma ? 1.0 : 2.0;
    CHECK(ra == doctest::Approx(want).epsilon(1e-14));
    CHECK(rb == doctest::Approx(want).epsilon(1e-14));
    CHECK((m.vertex(e.b) - m.vertex(e.a)).norm() <= 0.1 + 1e-12);
  }
  CHECK(m.area() < a.area());
  CHECK(m.area() == doctest::Approx(a.area()).epsilon(1e-2));

  auto count = [](const TriMesh& mm, const std::vector<bool>& flag) { return std::count(flag.begin(), flag.end(), true); };
  const auto fine = mesh_domain(a, 0.05);
  CHECK(count(fine, fine.on_sigma) >= 2 * count(m, m.on_sigma));
  CHECK(count(fine, fine.on_gamma) >= 2 * count(m, m.on_gamma));
}

TEST_CASE("meshes of carved and random domains") {
  const auto sm = mesh_domain(square_minus_ball(), 0.05);
  CHECK(check_mesh(sm).empty());
  CHECK(std::count(sm.junction.begin(), sm.junction.end(), true) == 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto d = random_domain(s, 1.0, 8);
    const auto [lo, hi] = d.bounding_box();
    const auto m = mesh_domain(d, (hi - lo).maxCoeff() / 20.0);
    CHECK(check_mesh(m).empty());
    CHECK(m.area() == doctest::Approx(d.area()).epsilon(2e-2));
  }
}

TEST_CASE("mesh size limits") {
  const auto a = ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0);
  CHECK_THROWS_AS(mesh_domain(a, 0.0), ValidationError);
  CHECK_THROWS_AS(mesh_domain(a, -0.1), ValidationError);
  CHECK_THROWS_AS(mesh_domain(a, 1.0), ValidationError);
  CHECK_THROWS_AS(mesh_domain(a, 1e-5), ResourceError);
}

TEST_CASE("mesh dump") {
  const auto m = mesh_domain(ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0), 0.3);
  std::ostringstream out;
  write_mesh(out, m);
  std::istringstream in(out.str());
  std::string line;
  int v = 0, t = 0, b = 0, gamma = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") ++v;
    if (tag == "t") ++t;
    if (tag == "b") {
      ++b;
      int i, j;
      std::string kind;
      ls >> i >> j >> kind;
      CHECK((kind == "SIGMA" || kind == "GAMMA"));
      gamma += kind == "GAMMA";
    }
  }
  CHECK(v == m.vertex_count());
  CHECK(t == m.triangle_count());
  CHECK(b == static_cast<int>(m.boundary_edges.size()));
  CHECK(gamma == std::count(m.on_gamma.begin(), m.on_gamma.end(), true));
}

TEST_CASE("radial Neumann problem") {
  // u'(s) = cs/2 - c r^2/(2s) vanishes at s = r and equals 1 at s = R.
  const double c = 4.0 / 3.0, h = 1e-6;
  auto du = [](double s) { return (oracle::radial_u(s + 1e-6, 1, 2) - oracle::radial_u(s - 1e-6, 1, 2)) / 2e-6; };
  CHECK(std::abs(du(1.0)) < 1e-8);
  CHECK(du(2.0) == doctest::Approx(1.0).epsilon(1e-8));
  const double lap = (oracle::radial_u(1.5 + h, 1, 2) - 2 * oracle::radial_u(1.5, 1, 2) + oracle::radial_u(1.5 - h, 1, 2)) / (h * h) +
                     du(1.5) / 1.5;
  CHECK(lap == doctest::Approx(c).epsilon(1e-3));

  const auto r = radial_case(0.04);
  CHECK(r.stats.compatibility_residual < 1e-10);
  CHECK(r.stats.relative_residual < 1e-10);
  CHECK(std::abs(r.u.mean(r.mesh)) < 1e-10);
  CHECK(radial_error(r) < 1e-2);
}

TEST_CASE("zero data gives zero") {
  const auto m = mesh_domain(convex_box(), 0.2);
  SolveStats st;
  const auto u = solve_neumann(m, 0.0, [](const BoundaryEdge&) { return 0.0; }, &st);
  CHECK(u.values.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(st.compatibility_residual == 0.0);
}

TEST_CASE("arbitrary compatible flux") {
  // u = x^2 - y^2 is harmonic; its normal derivative on the box is 2 x nx - 2 y ny.
  const auto m = mesh_domain(convex_box(), 0.05);
  const auto flux = [&m](const BoundaryEdge& e) {
    const Eigen::Vector2d mid = 0.5 * (m.vertex(e.a) + m.vertex(e.b));
    return 2 * mid(0) * e.normal(0) - 2 * mid(1) * e.normal(1);
  };
  const auto u = solve_neumann(m, 0.0, flux);
  const auto exact = ScalarField::from_values(m, sample(m, [](double x, double y) { return x * x - y * y; }));
  CHECK((u.values - exact.values).lpNorm<Eigen::Infinity>() < 5e-3);
  CHECK(std::abs(u.mean(m)) < 1e-10);
}

TEST_CASE("incompatible data is rejected") {
  const auto m = mesh_domain(ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0), 0.2);
  CHECK_THROWS_AS(solve_neumann(m, ConvexBody::ball(2), 1.0), ValidationError);
  CHECK_THROWS_AS(solve_neumann(m, 1.0, [](const BoundaryEdge&) { return 0.0; }), ValidationError);
  CHECK_THROWS_AS(solve_neumann(m, ConvexBody::ball(2), NAN), ValidationError);
}

TEST_CASE("contact set of convex and affine functions") {
  const auto m = mesh_domain(convex_box(), 0.1);
  const auto q = ScalarField::from_values(m, sample(m, [](double x, double y) { return 0.5 * (x * x + y * y); }), false);
  const auto cq = lower_contact_set(m, q);
  CHECK(cq.members.size() == static_cast<std::size_t>(m.vertex_count()));
  CHECK(cq.epsilon == doctest::Approx(default_contact_epsilon(m, q)));

  const auto a = ScalarField::from_values(m, sample(m, [](double x, double y) { return 0.3 * x - 2.0 * y + 1.0; }), false);
  const auto ca = lower_contact_set(m, a, 1e-12);
  CHECK(ca.members.size() == static_cast<std::size_t>(m.vertex_count()));
  CHECK(ca.slack.cwiseAbs().maxCoeff() < 1e-12);
  const std::string csv = ca.to_csv();
  CHECK(csv.rfind("vertex,slack,member\n", 0) == 0);
}

TEST_CASE("concave function against the raw-array oracle") {
  const auto m = grid_mesh(10);
  const auto u = ScalarField::from_values(m, sample(m, [](double x, double y) { return -(x * x + y * y); }), false);
  const auto cs = lower_contact_set(m, u);
  const std::vector<double> uu(u.values.data(), u.values.data() + u.values.size());
  const auto slack = oracle::contact_slack(row(m.vertices, 0), row(m.vertices, 1), uu, row(u.vertex_gradients, 0),
                                          row(u.vertex_gradients, 1));
  for (int i = 0; i < m.vertex_count(); ++i) {
    CHECK(cs.slack(i) == doctest::Approx(slack[static_cast<std::size_t>(i)]).epsilon(1e-12));
    CHECK(cs.is_member[static_cast<std::size_t>(i)] == (slack[static_cast<std::size_t>(i)] >= -cs.epsilon));
    if (!m.on_sigma[static_cast<std::size_t>(i)]) CHECK(!cs.is_member[static_cast<std::size_t>(i)]);
  }
  CHECK(cs.members.size() <= 4);
}

TEST_CASE("contact members re-evaluated on the radial solution") {
  const auto r = radial_case(0.1);
  const auto cs = lower_contact_set(r.mesh, r.u);
  const std::vector<double> uu(r.u.values.data(), r.u.values.data() + r.u.values.size());
  const auto slack = oracle::contact_slack(row(r.mesh.vertices, 0), row(r.mesh.vertices, 1), uu,
                                          row(r.u.vertex_gradients, 0), row(r.u.vertex_gradients, 1));
  for (int p : cs.members) CHECK(slack[static_cast<std::size_t>(p)] >= -cs.epsilon);
  // u is convex in the radial case, so the contact set is everything.
  CHECK(cs.members.size() == static_cast<std::size_t>(r.mesh.vertex_count()));
}

TEST_CASE("minimizer location") {
  const auto r = radial_case(0.1);
  const auto disk = ConvexBody::ball(2);
  const auto at0 = minimizer_location(r.mesh, r.u, Eigen::Vector2d::Zero(), disk);
  CHECK(at0.region == Region::gamma);
  CHECK(at0.point.norm() == doctest::Approx(1.0));
  CHECK(to_string(at0.region) == "GAMMA");
  CHECK_THROWS_AS(minimizer_location(r.mesh, r.u, Eigen::Vector2d(1.0, 0.0), disk), ValidationError);
  CHECK_THROWS_AS(minimizer_location(r.mesh, r.u, Eigen::Vector2d(0.0, 0.97), disk), ValidationError);

  // Interior minimizer: u - <v, x> with |v| = 0.5 peaks at radius where u' = 0.5.
  const auto mid = minimizer_location(r.mesh, r.u, Eigen::Vector2d(0.5, 0.0), disk);
  CHECK(mid.region == Region::interior);
  CHECK(mid.point(0) > 1.0);
}

TEST_CASE("normal cones on Gamma") {
  const auto d = square_minus_ball();
  const auto sq = ConvexBody::square();
  const auto m = mesh_domain(d, 0.05);
  const auto u = solve_neumann(m, sq, measures(d, sq).perim_sigma / d.area());
  const int p0 = gamma_minimizer(m, u);
  CHECK(normal_cone_membership(m, u, {m.vertex(p0), Eigen::Vector2d::Zero(), 1}));

  // Another Gamma vertex with a strictly larger value fails for v = 0.
  int other = -1;
  for (int i = 0; i < m.vertex_count(); ++i)
    if (m.on_gamma[static_cast<std::size_t>(i)] && !m.junction[static_cast<std::size_t>(i)] &&
        u.values(i) > u.values(p0) + 1e-3)
      other = i;
  REQUIRE(other >= 0);
  CHECK(!normal_cone_membership(m, u, {m.vertex(other), Eigen::Vector2d::Zero(), 1}));
  CHECK(!normal_cone_membership(m, u, {m.vertex(other), Eigen::Vector2d::Zero(), -1}));

  // A multiple of sigma(p) at a generic point has no tangential part, so a
  // Gamma neighbor downhill in u violates the exact inequality.
  const Eigen::Vector2d p = m.vertex(other);
  const Eigen::Vector2d sig = d.sphere_normal(p);
  const auto res = normal_cone_test(m, u, {p, 2.0 * sig, 1}, 0.0);
  double direct = INFINITY;
  for (int i = 0; i < m.vertex_count(); ++i)
    if (m.on_gamma[static_cast<std::size_t>(i)])
      direct = std::min(direct, u.values(i) - u.values(other) - 2.0 * (m.vertex(i) - p).dot(sig));
  CHECK(res.sign_ok);
  CHECK(res.worst_slack == doctest::Approx(direct).epsilon(1e-12));
  CHECK(!res.member);
  CHECK(res.worst_slack < 0.0);
  CHECK(!normal_cone_test(m, u, {m.vertex(p0), -sig, 1}).sign_ok);

  // Midpoint of a Gamma chord is a valid base point; off-Gamma points are not.
  for (const auto& e : m.boundary_edges)
    if (e.tag == BoundaryTag::gamma) {
      CHECK_NOTHROW(normal_cone_test(m, u, {0.5 * (m.vertex(e.a) + m.vertex(e.b)), Eigen::Vector2d::Zero(), 1}));
      break;
    }
  CHECK_THROWS_AS(normal_cone_test(m, u, {Eigen::Vector2d(0.0, 0.9), Eigen::Vector2d::Zero(), 1}), ValidationError);
  CHECK_THROWS_AS(normal_cone_test(m, u, {m.vertex(p0), Eigen::Vector2d::Zero(), 0}), ValidationError);
}

TEST_CASE("gradient image coverage") {
  const auto r = radial_case(0.04);
  const auto disk = ConvexBody::ball(2);
  const auto cs = lower_contact_set(r.mesh, r.u);
  double prev = 0.0;
  for (double delta : {0.1, 0.2, 0.3}) {
    const auto cov = gradient_image_coverage(r.mesh, r.u, cs, disk, UnitDirection::from_angle(1.0), delta);
    CHECK(cov.samples > 0);
    CHECK(cov.fraction >= prev);
    prev = cov.fraction;
    if (delta == 0.2) CHECK(cov.fraction >= 0.95);
  }
  ContactSet none = cs;
  none.members.clear();
  none.is_member.assign(none.is_member.size(), false);
  CHECK_THROWS_AS(gradient_image_coverage(r.mesh, r.u, none, disk, UnitDirection::from_angle(1.0), 0.2), NumericError);
  CHECK_THROWS_AS(gradient_image_coverage(r.mesh, r.u, cs, disk, UnitDirection::from_angle(1.0), 0.0), ValidationError);
}

TEST_CASE("Hessian fit") {
  const auto m = mesh_domain(convex_box(), 0.05);
  const auto a = ScalarField::from_values(m, sample(m, [](double x, double y) { return 2 * x - y; }), false);
  for (const auto& H : hessian_fit(m, a)) CHECK(H.norm() < 1e-9);

  Eigen::Matrix2d A;
  A << 2.0, 0.5,
       0.5, 1.0;
  const auto q = ScalarField::from_values(
      m, sample(m, [&A](double x, double y) { return 0.5 * Eigen::Vector2d(x, y).dot(A * Eigen::Vector2d(x, y)); }), false);
  const auto hs = hessian_fit(m, q);
  Eigen::Matrix2d mean = Eigen::Matrix2d::Zero();
  int n = 0;
  for (int i = 0; i < m.vertex_count(); ++i) {
    if (m.on_boundary(i)) continue;
    mean += hs[static_cast<std::size_t>(i)];
    ++n;
  }
  mean /= n;
  CHECK((mean - A).norm() < 0.05 * A.norm());
}

TEST_CASE("chain on the radial annulus") {
  const auto disk = ConvexBody::ball(2);
  const auto a = ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0);
  const auto rep = abp_chain_report(disk, a, 0.05);
  CHECK(rep.c == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(rep.margins[2] >= 0.0);
  CHECK(rep.contact_area <= rep.area);
  CHECK(rep.cut_area == doctest::Approx(M_PI / 2));
  CHECK(rep.coverage >= 0.95);
  CHECK(rep.hessian_nonneg_fraction > 0.9);
  CHECK(rep.pass);
  // P^2 / (4 |Omega|) is a quarter of the inequality's left side.
  const auto iq = inequality_report(disk, a);
  CHECK(rep.perimeter_bound == doctest::Approx(iq.lhs / 4.0).epsilon(1e-15));
  const auto kv = rep.to_report();
  CHECK(kv.get("pass") == "true");
  CHECK(rep.gradient_csv().rfind("gx,gy\n", 0) == 0);

  CHECK_THROWS_AS(abp_chain_report(disk, convex_box(), 0.1), ValidationError);
}

}  // TEST_SUITE
