#include "wulff/isoperimetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

struct AngleValue {
  double theta;
  double value;
};

bool better(const AngleValue& a, const AngleValue& b) {
  if (a.value < b.value - 1e-15) return true;
  if (b.value < a.value - 1e-15) return false;
  return a.theta < b.theta;
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

AngleValue golden_section(const auto& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > tol * std::max(1.0, std::abs(a)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? AngleValue{x1, f1} : AngleValue{x2, f2};
}

BetaResult beta_2d(const ConvexBody& body, double resolution) {
  if (!body.is_polytope()) {
    // Every line through the center of a disk or ellipse halves it.
    return {0.5, UnitDirection::from_angle(0.0), false};
  }
  const double W = body.volume();
  auto f = [&](double t) { return cut_volume(body, UnitDirection::from_angle(wrap_angle(t))) / W; };

  const auto n = static_cast<long>(std::ceil(kTwoPi / resolution));
  if (n > 50'000'000) throw ResourceError("angular resolution too fine");
  const double step = kTwoPi / static_cast<double>(n);
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = f(step * static_cast<double>(k));

  // |d/dt |W cap H_t|| <= R^2 / 2 bounds how far a cell can dip below
  // its grid endpoints.
  const double R = body.vertices().colwise().norm().maxCoeff();
  const double dip = R * R * step / (2.0 * W);
  const double gmin = *std::min_element(grid.begin(), grid.end());

  std::vector<AngleValue> candidates;
  for (long k = 0; k < n; ++k) {
    const double fk = grid[static_cast<std::size_t>(k)];
    const double prev = grid[static_cast<std::size_t>((k + n - 1) % n)];
    const double next = grid[static_cast<std::size_t>((k + 1) % n)];
    if (fk <= prev && fk <= next && fk <= gmin + dip) candidates.push_back({step * static_cast<double>(k), fk});
  }
  std::sort(candidates.begin(), candidates.end(), better);
  if (candidates.size() > 64) candidates.resize(64);

  AngleValue best = candidates.front();
  for (const auto& c : candidates) {
    AngleValue refined = golden_section(f, c.theta - step, c.theta + step, 4e-15);
    refined.theta = wrap_angle(refined.theta);
    if (better(c, best)) best = c;
    if (better(refined, best)) best = refined;
  }
  return {best.value, UnitDirection::from_angle(best.theta), false};
}

Eigen::Vector3d spherical(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BetaResult beta_3d(const ConvexBody& body, double resolution) {
  if (!body.is_polytope()) return {0.5, UnitDirection(Eigen::Vector3d::UnitX()), true};
  const double W = body.volume();
  auto f = [&](const Eigen::Vector3d& v) { return cut_volume(body, UnitDirection::normalized(v)) / W; };

  const double want = std::ceil(4.0 * std::numbers::pi / (resolution * resolution));
  const int samples = static_cast<int>(std::clamp(want, 16.0, 4096.0));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<std::pair<double, Eigen::Vector3d>> scored;
  for (int i = 0; i < samples; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / samples;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d v(rho * std::cos(golden_angle * i), rho * std::sin(golden_angle * i), z);
    scored.emplace_back(f(v), v);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  auto best_value = scored.front().first;
  Eigen::Vector3d best_dir = scored.front().second;
  const int starts = std::min<int>(5, static_cast<int>(scored.size()));
  for (int s = 0; s < starts; ++s) {
    const Eigen::Vector3d v0 = scored[static_cast<std::size_t>(s)].second;
    // Nelder-Mead in spherical coordinates around the sample.
    auto g = [&](const Eigen::Vector2d& p) { return f(spherical(p(0), p(1))); };
    const double th0 = std::acos(std::clamp(v0(2), -1.0, 1.0));
    const double ph0 = std::atan2(v0(1), v0(0));
    std::array<Eigen::Vector2d, 3> simplex = {Eigen::Vector2d(th0, ph0), Eigen::Vector2d(th0 + resolution, ph0),
                                              Eigen::Vector2d(th0, ph0 + resolution)};
    std::array<double, 3> val = {g(simplex[0]), g(simplex[1]), g(simplex[2])};
    for (int it = 0; it < 200; ++it) {
      std::array<int, 3> idx = {0, 1, 2};
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[static_cast<std::size_t>(a)] < val[static_cast<std::size_t>(b)]; });
      auto& lo = simplex[static_cast<std::size_t>(idx[0])];
      auto& mid = simplex[static_cast<std::size_t>(idx[1])];
      auto& hi = simplex[static_cast<std::size_t>(idx[2])];
      double& flo = val[static_cast<std::size_t>(idx[0])];
      double& fmid = val[static_cast<std::size_t>(idx[1])];
      double& fhi = val[static_cast<std::size_t>(idx[2])];
      if ((hi - lo).norm() < 1e-9 && (mid - lo).norm() < 1e-9) break;
      const Eigen::Vector2d centroid = 0.5 * (lo + mid);
      const Eigen::Vector2d xr = centroid + (centroid - hi);
      const double fr = g(xr);
      if (fr < flo) {
        const Eigen::Vector2d xe = centroid + 2.0 * (centroid - hi);
        const double fe = g(xe);
        if (fe < fr) { hi = xe; fhi = fe; } else { hi = xr; fhi = fr; }
      } else if (fr < fmid) {
        hi = xr;
        fhi = fr;
      } else {
        const Eigen::Vector2d xc = centroid + 0.5 * (hi - centroid);
        const double fc = g(xc);
        if (fc < fhi) {
          hi = xc;
          fhi = fc;
        } else {
          mid = lo + 0.5 * (mid - lo);
          fmid = g(mid);
          hi = lo + 0.5 * (hi - lo);
          fhi = g(hi);
        }
      }
    }
    for (std::size_t k = 0; k < 3; ++k)
      if (val[k] < best_value) {
        best_value = val[k];
        best_dir = spherical(simplex[k](0), simplex[k](1));
      }
  }
  return {best_value, UnitDirection::normalized(best_dir), true};
}

}  // namespace

double cut_fraction(const ConvexBody& body, const UnitDirection& v) { return cut_volume(body, v) / body.volume(); }

BetaResult beta(const ConvexBody& body, double angular_resolution) {
  if (!(angular_resolution > 0.0) || !std::isfinite(angular_resolution))
    throw ValidationError("angular resolution must be positive");
  if (body.is_cut()) throw ValidationError("beta needs an uncut body");
  return body.dimension() == 2 ? beta_2d(body, angular_resolution) : beta_3d(body, angular_resolution);
}

KeyValueReport InequalityReport::to_report() const {
  KeyValueReport r;
  r.add("lhs", lhs);
  r.add("rhs", rhs);
  r.add("margin", margin);
  r.add("beta", beta_value);
  r.add("beta_direction_x", beta_direction(0));
  r.add("beta_direction_y", beta_direction(1));
  if (beta_approximate) r.add("beta_approximate", true);
  r.add("area", area);
  r.add("perim_sigma", perim_sigma);
  r.add("length_gamma", length_gamma);
  r.add("perim_wulff", perim_wulff);
  r.add("wulff_volume", wulff_volume);
  r.add("tangential_junctions", tangential_junctions);
  r.add("pass", pass);
  return r;
}

InequalityReport inequality_report(const ConvexBody& body, const ObstacleDomain& domain, const BetaResult& b) {
  if (body.dimension() != 2) throw ValidationError("the inequality check is planar");
  const DomainMeasures m = measures(domain, body);
  if (!(m.area > 0.0)) throw ValidationError("degenerate domain: zero area");
  InequalityReport rep;
  rep.area = m.area;
  rep.perim_sigma = m.perim_sigma;
  rep.length_gamma = m.length_gamma;
  rep.wulff_volume = body.volume();
  rep.perim_wulff = wulff_perimeter(body);
  rep.beta_value = b.value;
  rep.beta_direction = b.direction;
  rep.beta_approximate = b.approximate;
  rep.lhs = m.perim_sigma * m.perim_sigma / m.area;
  rep.rhs = b.value * rep.perim_wulff * rep.perim_wulff / rep.wulff_volume;
  rep.margin = rep.lhs - rep.rhs;
  rep.pass = rep.margin > 0.0;
  rep.tangential_junctions = domain.tangential_junctions();
  return rep;
}

InequalityReport inequality_report(const ConvexBody& body, const ObstacleDomain& domain, double angular_resolution) {
  return inequality_report(body, domain, beta(body, angular_resolution));
}

std::vector<SharpnessRow> sharpness_sweep(const ConvexBody& body, const UnitDirection& v,
                                          const std::vector<double>& radii, double angular_resolution) {
  if (radii.empty()) throw ValidationError("sharpness sweep needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw ValidationError("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError("radii must be increasing");
  }
  const BetaResult b = beta(body, angular_resolution);
  std::vector<SharpnessRow> rows;
  for (double r : radii) {
    const InequalityReport rep = inequality_report(body, build_sharpness_domain(body, v, r), b);
    rows.push_back({r, rep.lhs, rep.rhs, rep.lhs / rep.rhs});
  }
  return rows;
}

std::string sharpness_csv(const std::vector<SharpnessRow>& rows) {
  CsvTable t({"r", "lhs", "rhs", "ratio"});
  for (const auto& row : rows) t.add_row(std::vector<double>{row.r, row.lhs, row.rhs, row.ratio});
  return t.to_text();
}

}  // namespace wulff
