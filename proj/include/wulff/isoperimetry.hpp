#pragma once

#include <string>
#include <vector>

#include "wulff/convex_body.hpp"
#include "wulff/obstacle_domain.hpp"
#include "wulff/report.hpp"
#include "wulff/surface.hpp"

namespace wulff {

/// |W cap H_v| / |W| with H_v = {<x, v> >= 0}.
double cut_fraction(const ConvexBody& body, const UnitDirection& v);

struct BetaResult {
  double value;
  UnitDirection direction;
  /// Set for sampled (3D) searches.
  bool approximate = false;
};

/// beta = inf_v |W cap H_v| / |W|.
///
/// 2D: grid of spacing `angular_resolution` (radians) followed by
/// golden-section refinement of every competitive grid minimum; ties go to
/// the smallest angle. 3D: Fibonacci-sphere sample plus Nelder-Mead.
BetaResult beta(const ConvexBody& body, double angular_resolution = 2e-3);

/// Inequality check for n = 2: P(Sigma)^2/|Omega| against beta P(dW)^2/|W|.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double beta_value = 0.0;
  UnitDirection beta_direction = UnitDirection::from_angle(0.0);
  bool beta_approximate = false;
  bool pass = false;

  double area = 0.0;
  double perim_sigma = 0.0;
  double length_gamma = 0.0;
  double perim_wulff = 0.0;
  double wulff_volume = 0.0;
  int tangential_junctions = 0;

  KeyValueReport to_report() const;
};

InequalityReport inequality_report(const ConvexBody& body, const ObstacleDomain& domain,
                                   double angular_resolution = 2e-3);
InequalityReport inequality_report(const ConvexBody& body, const ObstacleDomain& domain, const BetaResult& beta);

struct SharpnessRow {
  double r;
  double lhs;
  double rhs;
  double ratio;
};

/// Reports for Omega_r = W - B_r(-r v) over increasing radii.
std::vector<SharpnessRow> sharpness_sweep(const ConvexBody& body, const UnitDirection& v,
                                          const std::vector<double>& radii, double angular_resolution = 2e-3);

/// CSV with header `r,lhs,rhs,ratio`.
std::string sharpness_csv(const std::vector<SharpnessRow>& rows);

}  // namespace wulff
