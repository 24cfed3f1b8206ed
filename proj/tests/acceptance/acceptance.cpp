// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wulff/abp.hpp"
#include "wulff/convex_body.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/mesh.hpp"
#include "wulff/neumann.hpp"
#include "wulff/obstacle_domain.hpp"
#include "wulff/random.hpp"
#include "wulff/surface.hpp"

using namespace wulff;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs, double budget) {
  const bool pass = o.ok && secs < budget;
  if (!pass) ++failures;
  std::printf("%s [%d] %s: %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
              budget);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<oracle::Pt> points(const ConvexBody& W) {
  const Eigen::Matrix2Xd V = W.polygon_vertices();
  std::vector<oracle::Pt> p;
  for (Eigen::Index i = 0; i < V.cols(); ++i) p.push_back({V(0, i), V(1, i)});
  return p;
}

ConvexBody random_polygon(Rng& rng, std::uint64_t seed) { return random_convex_polygon(seed, rng.uniform_int(8, 40)); }

Outcome identity() {
  Rng rng(1);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto W = random_polygon(rng, 1000 + k);
    const double nV = 2.0 * W.volume();
    worst = std::max(worst, std::abs(anisotropic_perimeter(W, boundary_surface(W)) - nV) / nV);
  }
  return {worst < 1e-9, fmt("max |P(dW) - 2|W|| / 2|W| = %.3g over 20 polygons", worst)};
}

Outcome beta_properties() {
  Outcome o;
  double sym_err = 0.0;
  std::vector<ConvexBody> symmetric = {ConvexBody::square(), ConvexBody::regular_polygon(6), ConvexBody::ball(2)};
  Rng rng(2);
  for (int k = 0; k < 5; ++k) symmetric.push_back(central_symmetrization(random_polygon(rng, 2000 + k)));
  for (const auto& W : symmetric) sym_err = std::max(sym_err, std::abs(beta(W).value - 0.5));
  o.ok = sym_err < 1e-6;

  double lo = 1.0, hi = 0.0, scan_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto W = random_polygon(rng, 3000 + k);
    const double b = beta(W).value;
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    if (!(b > 0.0 && b <= 0.5)) o.ok = false;
    scan_err = std::max(scan_err, std::abs(b - oracle::scan_beta(points(W), 1'000'000)));
  }
  Eigen::Matrix2Xd tri(2, 3);
  tri << -1, 3, -1,
         -1, -1, 3;
  const auto T = ConvexBody::polygon(tri);
  scan_err = std::max(scan_err, std::abs(beta(T).value - oracle::scan_beta(points(T), 1'000'000)));
  if (!(scan_err < 1e-6)) o.ok = false;
  o.detail = fmt("symmetric |beta - 0.5| <= %.2g (8 bodies); random beta in [%.4f, %.4f]; |beta - scan| <= %.2g", sym_err,
                 lo, hi, scan_err);
  return o;
}

Outcome random_domains() {
  Rng rng(3);
  const std::vector<ConvexBody> bodies = {ConvexBody::square(), ConvexBody::regular_polygon(6), random_polygon(rng, 4000)};
  std::vector<BetaResult> betas;
  for (const auto& W : bodies) betas.push_back(beta(W));
  int passed = 0, total = 0, tangential = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = random_domain(seed, 1.0, 8);
    tangential += d.tangential_junctions() > 0;
    for (std::size_t k = 0; k < bodies.size(); ++k) {
      const auto rep = inequality_report(bodies[k], d, betas[k]);
      ++total;
      passed += rep.pass;
      min_margin = std::min(min_margin, rep.margin);
    }
  }
  return {passed == total && min_margin > 0.0,
          fmt("%d/%d reports pass, min margin %.6g, %d domains with tangential junctions", passed, total, min_margin, tangential)};
}

Outcome sharpness() {
  const auto rows = sharpness_sweep(ConvexBody::square(), UnitDirection::from_angle(M_PI / 2), {10, 100, 1000});
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].ratio < rows[i - 1].ratio;
  const double e10 = rows.front().ratio - 1.0, e1000 = rows.back().ratio - 1.0;
  return {decreasing && e1000 < 0.01 && e1000 < 0.1 * e10,
          fmt("ratio-1 = %.4g, %.4g, %.4g at r = 10, 100, 1000", e10, rows[1].ratio - 1.0, e1000)};
}

Outcome pde() {
  const auto disk = ConvexBody::ball(2);
  const auto annulus = ObstacleDomain::annulus(Eigen::Vector2d::Zero(), 1.0, 2.0);
  const double c = measures(annulus, disk).perim_sigma / annulus.area();
  double err[2], compat = 0.0;
  int k = 0;
  for (double h : {0.04, 0.02}) {
    const auto mesh = mesh_domain(annulus, h);
    SolveStats st;
    const auto u = solve_neumann(mesh, disk, c, &st);
    compat = std::max(compat, st.compatibility_residual);
    const Eigen::VectorXd mass = mesh.lumped_mass();
    Eigen::VectorXd exact(mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) exact(i) = oracle::radial_u(mesh.vertex(i).norm(), 1.0, 2.0);
    exact.array() -= mass.dot(exact) / mass.sum();
    err[k++] = (u.values - exact).lpNorm<Eigen::Infinity>() / exact.lpNorm<Eigen::Infinity>();
  }
  return {err[0] < 1e-2 && err[0] / err[1] >= 3.0 && compat < 1e-10,
          fmt("rel Linf error %.3g (h=0.04), %.3g (h=0.02), factor %.2f, compatibility %.2g", err[0], err[1], err[0] / err[1],
              compat)};
}

Outcome coverage(const AbpReport& coarse, const AbpReport& fine) {
  return {coarse.coverage >= 0.95 && fine.coverage >= coarse.coverage - 0.02,
          fmt("coverage %.4f (h=0.02), %.4f (h=0.01)", coarse.coverage, fine.coverage)};
}

Outcome minimizers(const AbpReport& rep, const ConvexBody& W) {
  const Eigen::Vector2d sigma0 = rep.direction;
  Rng rng(7);
  int interior = 0, member = 0, at_junction = 0, n = 0;
  double worst = std::numeric_limits<double>::infinity();
  while (n < 100) {
    const Eigen::Vector2d v(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (gauge(W, v) > 0.95 || v.dot(sigma0) <= 0.0) continue;
    ++n;
    interior += minimizer_location(rep.mesh, rep.u, v, W).region == Region::interior;
    const int p = gamma_minimizer(rep.mesh, rep.u, v);
    at_junction += rep.mesh.junction[static_cast<std::size_t>(p)];
    const auto res = normal_cone_test(rep.mesh, rep.u, {rep.mesh.vertex(p), v, 1}, rep.contact.epsilon);
    member += res.member;
    worst = std::min(worst, res.worst_slack);
  }
  return {interior == n && member == n,
          fmt("%d/%d interior minimizers, %d/%d cone members (worst slack %.3g, eps %.3g), %d at junctions", interior, n,
              member, n, worst, rep.contact.epsilon, at_junction)};
}

Outcome chain(const AbpReport& rep) {
  const bool ok = rep.margins[0] >= -0.05 && rep.margins[1] >= -0.05 && rep.margins[2] >= -0.05;
  return {ok, fmt("|W^H| %.5f <= img %.5f <= src %.5f <= per %.5f; margins %+.4f %+.4f %+.4f; hessian>=0 %.3f",
                  rep.cut_area, rep.gradient_image, rep.source_bound, rep.perimeter_bound, rep.margins[0], rep.margins[1],
                  rep.margins[2], rep.hessian_nonneg_fraction)};
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  auto timed = [](int id, const std::string& name, double budget, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    const Outcome o = guarded(f);
    report(id, name, o, seconds_since(t0), budget);
  };
  timed(1, "perimeter identity", 1, identity);
  timed(2, "beta properties", 30, beta_properties);
  timed(3, "random-domain inequality", 120, random_domains);
  timed(4, "sharpness", 10, sharpness);
  timed(5, "radial Neumann solve", 60, pde);

  // The square minus a radius-2 ball that cuts into the bottom edge.
  const auto W = ConvexBody::square();
  const auto domain = carve_domain(W, Eigen::Vector2d(0.0, -2.5), 2.0);
  AbpReport coarse, fine;
  double t_coarse = 0.0, t_fine = 0.0;
  std::string pipeline_error;
  try {
    auto t0 = Clock::now();
    coarse = abp_chain_report(W, domain, 0.02);
    t_coarse = seconds_since(t0);
    t0 = Clock::now();
    fine = abp_chain_report(W, domain, 0.01);
    t_fine = seconds_since(t0);
  } catch (const std::exception& e) {
    pipeline_error = e.what();
  }
  auto downstream = [&](int id, const std::string& name, double budget, double base, const std::function<Outcome()>& f) {
    if (!pipeline_error.empty()) {
      report(id, name, {false, "pipeline failed: " + pipeline_error}, 0.0, budget);
      return;
    }
    const auto t0 = Clock::now();
    const Outcome o = guarded(f);
    report(id, name, o, base + seconds_since(t0), budget);
  };
  downstream(6, "gradient-image coverage", 180, t_coarse + t_fine, [&] { return coverage(coarse, fine); });
  downstream(7, "minimizer location and normal cones", 120, t_coarse, [&] { return minimizers(coarse, W); });
  downstream(8, "chain monotonicity", 60, t_coarse, [&] { return chain(coarse); });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
