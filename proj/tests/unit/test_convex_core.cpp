#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "wulff/convex_body.hpp"
#include "wulff/errors.hpp"
#include "wulff/polygon.hpp"
#include "wulff/random.hpp"

using namespace wulff;

namespace {

ConvexBody triangle() {
  Eigen::Matrix2Xd v(2, 3);
  v << -1, 3, -1,
       -1, -1, 3;
  return ConvexBody::polygon(v);
}

Eigen::Vector2d random_vector(Rng& rng, double scale) {
  return {rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

// Sup formula over the vertex set.
double support_oracle(const Eigen::MatrixXd& V, const Eigen::VectorXd& x) { return (V.transpose() * x).maxCoeff(); }

}  // namespace

TEST_SUITE("convex_core") {

TEST_CASE("support of named bodies") {
  const auto sq = ConvexBody::square();
  CHECK(support(sq, Eigen::Vector2d(1, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(support(sq, Eigen::Vector2d(1, 1)) == doctest::Approx(2.0).epsilon(1e-15));
  const auto disk = ConvexBody::ball(2);
  for (double t : {0.0, 0.3, 2.0, 4.5}) CHECK(support(disk, Eigen::Vector2d(std::cos(t), std::sin(t))) == doctest::Approx(1.0));
  const auto ball3 = ConvexBody::ball(3, 2.0);
  CHECK(support(ball3, Eigen::Vector3d(0, 0.6, 0.8)) == doctest::Approx(2.0));
}

TEST_CASE("gauge examples") {
  const auto sq = ConvexBody::square();
  CHECK(gauge(sq, Eigen::Vector2d(2, 1)) == doctest::Approx(2.0));
  CHECK(gauge(sq, Eigen::Vector2d(0, 0)) == 0.0);
  CHECK(gauge(triangle(), Eigen::Vector2d(3, -1)) == doctest::Approx(1.0).epsilon(1e-14));
  const auto tri = triangle();
  for (Eigen::Index i = 0; i < tri.vertices().cols(); ++i)
    CHECK(gauge(tri, tri.vertices().col(i)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gauge(ConvexBody::ellipse(2.0, 1.0), Eigen::Vector2d(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("volumes") {
  CHECK(ConvexBody::square().volume() == doctest::Approx(4.0));
  CHECK(triangle().volume() == doctest::Approx(8.0));
  CHECK(ConvexBody::ball(2).volume() == doctest::Approx(M_PI));
  CHECK(ConvexBody::ball(3).volume() == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(ConvexBody::cube().volume() == doctest::Approx(8.0));
  CHECK(ConvexBody::ellipse(2.0, 0.5).volume() == doctest::Approx(M_PI));
}

TEST_CASE("half-space cuts") {
  const auto rect = halfspace_cut(ConvexBody::square(), UnitDirection::from_angle(0.0));
  CHECK(rect.volume() == doctest::Approx(2.0));
  CHECK(rect.is_cut());
  CHECK(halfspace_cut(ConvexBody::ball(2), UnitDirection::from_angle(1.1)).volume() == doctest::Approx(M_PI / 2));

  const auto cut = halfspace_cut(triangle(), UnitDirection::from_angle(M_PI / 2));
  CHECK(cut.volume() == doctest::Approx(4.5).epsilon(1e-14));
  const Eigen::Matrix2Xd cv = cut.polygon_vertices();
  std::vector<oracle::Pt> pts;
  for (Eigen::Index i = 0; i < cv.cols(); ++i) pts.push_back({cv(0, i), cv(1, i)});
  CHECK(oracle::shoelace(pts) == doctest::Approx(4.5).epsilon(1e-14));

  // Monte Carlo over the bounding box of the triangle.
  const auto mc = oracle::mc_area(
      [](double x, double y) { return y >= 0.0 && x >= -1.0 && y >= -1.0 && x + y <= 2.0; }, -1, 3, -1, 3, 10'000'000, 7);
  CHECK(std::abs(mc.area - 4.5) < 5.0 * mc.stderr_);
  CHECK(std::abs(mc.area - cut.volume()) < 5.0 * mc.stderr_);

  CHECK_THROWS_AS(halfspace_cut(cut, UnitDirection::from_angle(0.0)), ValidationError);
}

TEST_CASE("3D cuts and gauges") {
  const auto cube = ConvexBody::cube();
  CHECK(halfspace_cut(cube, UnitDirection(Eigen::Vector3d(0, 0, 1))).volume() == doctest::Approx(4.0));
  const auto diag = UnitDirection::normalized(Eigen::Vector3d(1, 1, 1));
  CHECK(cut_volume(cube, diag) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(gauge(cube, Eigen::Vector3d(0.5, -2, 1)) == doctest::Approx(2.0));
  CHECK(support(cube, Eigen::Vector3d(1, -1, 1)) == doctest::Approx(3.0));

  // Tetrahedron with vertex at e_z: the cut {z >= 0} keeps the upper part.
  Eigen::Matrix3Xd V(3, 4);
  V << 1, -1, 0, 0,
       0, 0, 1, 0,
       -0.5, -0.5, -0.5, 1.5;
  V.row(1).array() -= 0.25;
  const auto tet = ConvexBody::polytope(V);
  const auto up = UnitDirection(Eigen::Vector3d(0, 0, 1));
  // Height 2 above the base plane z = -0.5; the part above z = 0 is similar with ratio 3/4.
  CHECK(cut_volume(tet, up) == doctest::Approx(tet.volume() * 27.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("duality and homogeneity on random polygons") {
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const auto W = random_convex_polygon(100 + k, 8 + 3 * k);
    for (int s = 0; s < 200; ++s) {
      const Eigen::Vector2d x = random_vector(rng, 3.0), y = random_vector(rng, 3.0);
      CHECK(x.dot(y) <= support(W, x) * gauge(W, y) + 1e-12);
      CHECK(support(W, x) == doctest::Approx(support_oracle(W.vertices(), x)).epsilon(1e-14));
      const double t = rng.uniform(0.1, 10.0);
      CHECK(support(W, t * x) == doctest::Approx(t * support(W, x)).epsilon(1e-14));
      CHECK(gauge(W, t * y) == doctest::Approx(t * gauge(W, y)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauge agrees with membership") {
  Rng rng(12);
  for (int k = 0; k < 5; ++k) {
    const auto W = random_convex_polygon(300 + k, 10);
    const Eigen::Matrix2Xd V = W.polygon_vertices();
    for (int s = 0; s < 1000; ++s) {
      const Eigen::Vector2d x = random_vector(rng, 2.0);
      // Strict inside: left of every counterclockwise edge.
      bool inside = true;
      for (Eigen::Index i = 0; i < V.cols(); ++i) {
        const Eigen::Vector2d a = V.col(i), b = V.col((i + 1) % V.cols());
        if (cross2(b - a, x - a) <= 0.0) inside = false;
      }
      CHECK((gauge(W, x) < 1.0) == inside);
    }
  }
  const auto disk = ConvexBody::ball(2, 2.0);
  for (int s = 0; s < 1000; ++s) {
    const Eigen::Vector2d x = random_vector(rng, 3.0);
    CHECK((gauge(disk, x) < 1.0) == (x.norm() < 2.0));
  }
}

TEST_CASE("cut additivity and convex position") {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    const auto W = random_convex_polygon(500 + k, 8 + k);
    const auto v = UnitDirection::from_angle(rng.uniform(0.0, 2 * M_PI));
    CHECK(std::abs(cut_volume(W, v) + cut_volume(W, -v) - W.volume()) < 1e-9 * W.volume());
    CHECK(halfspace_cut(W, v).volume() == doctest::Approx(cut_volume(W, v)).epsilon(1e-12));
    const Eigen::Matrix2Xd V = W.polygon_vertices();
    const Eigen::Matrix2Xd hull = convex_hull(V);
    CHECK(hull.cols() == V.cols());
    CHECK(signed_area(hull) == doctest::Approx(W.volume()).epsilon(1e-14));
  }
}

TEST_CASE("central symmetrization") {
  const auto S = central_symmetrization(triangle());
  for (double t : {0.1, 1.0, 2.5}) {
    const auto v = UnitDirection::from_angle(t);
    CHECK(cut_volume(S, v) == doctest::Approx(S.volume() / 2).epsilon(1e-12));
  }
  CHECK(S.volume() >= triangle().volume());
}

TEST_CASE("invalid bodies") {
  Eigen::Matrix2Xd line(2, 3);
  line << 0, 1, 2,
          0, 1, 2;
  CHECK_THROWS_AS(ConvexBody::polygon(line), ValidationError);
  Eigen::Matrix2Xd off(2, 3);
  off << 1, 3, 1,
         1, 1, 3;
  CHECK_THROWS_AS(ConvexBody::polygon(off), ValidationError);
  Eigen::Matrix2Xd cw(2, 3);
  cw << -1, -1, 3,
        -1, 3, -1;
  CHECK_THROWS_AS(ConvexBody::polygon(cw), ValidationError);
  Eigen::Matrix2Xd huge(2, 3);
  huge << -1, 2e6, -1,
          -1, -1, 3;
  CHECK_THROWS_AS(ConvexBody::polygon(huge), ValidationError);
  CHECK_THROWS_AS(ConvexBody::ball(2, 0.0), ValidationError);
  CHECK_THROWS_AS(ConvexBody::ball(4), ValidationError);
  CHECK_THROWS_AS(UnitDirection(Eigen::Vector2d(1, 1)), ValidationError);
  CHECK_THROWS_AS(UnitDirection::normalized(Eigen::Vector2d(0, 0)), ValidationError);
}

TEST_CASE("body files round trip") {
  for (const auto& W : {triangle(), ConvexBody::ball(2, 1.5), ConvexBody::ellipse(2, 1), ConvexBody::cube()}) {
    std::stringstream ss;
    write_body(ss, W);
    const auto back = read_body(ss);
    CHECK(back.kind() == W.kind());
    CHECK(back.dimension() == W.dimension());
    CHECK(back.volume() == doctest::Approx(W.volume()).epsilon(1e-15));
  }
  std::istringstream named("2 ball 1.0\n");
  CHECK(read_body(named).volume() == doctest::Approx(M_PI));
  std::istringstream bad_kind("2 blob\n0 0\n");
  CHECK_THROWS_AS(read_body(bad_kind), ValidationError);
  std::istringstream bad_arity("2 polytope\n-1 -1\n1 -1 3\n0 1\n");
  CHECK_THROWS_AS(read_body(bad_arity), ValidationError);
  std::istringstream comma("2 polytope\n-1,0 -1\n1 -1\n0 1\n");
  CHECK_THROWS_AS(read_body(comma), ValidationError);
  CHECK_THROWS_AS(load_body("/nonexistent/body.txt"), ValidationError);
}

TEST_CASE("random polygons are deterministic and valid") {
  for (int n : {3, 8, 40}) {
    const auto a = random_convex_polygon(9, n);
    const auto b = random_convex_polygon(9, n);
    CHECK(a.vertices().cols() == n);
    CHECK(a.vertices() == b.vertices());
    CHECK(gauge(a, Eigen::Vector2d::Zero()) == 0.0);
  }
}

}  // TEST_SUITE
