#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wulff/convex_body.hpp"
#include "wulff/mesh.hpp"
#include "wulff/neumann.hpp"
#include "wulff/obstacle_domain.hpp"
#include "wulff/report.hpp"

namespace wulff {

/// 5 h^2 (1 + max |grad u|).
double default_contact_epsilon(const TriMesh& mesh, const ScalarField& u);

/// Discrete lower contact set: p is a member when
/// min_x [u(x) - u(p) - <g(p), x - p>] >= -epsilon over all vertices x,
/// g the recovered vertex gradient. Junction vertices never qualify.
struct ContactSet {
  std::vector<int> members;
  std::vector<bool> is_member;
  Eigen::VectorXd slack;
  double epsilon = 0.0;

  /// Triangles whose three vertices are members.
  std::vector<int> triangles(const TriMesh& mesh) const;
  /// CSV `vertex,slack,member`.
  std::string to_csv() const;
};

ContactSet lower_contact_set(const TriMesh& mesh, const ScalarField& u, std::optional<double> epsilon = std::nullopt);

enum class Region { interior, sigma, gamma };
std::string to_string(Region region);

struct MinimizerLocation {
  int vertex = -1;
  Eigen::Vector2d point;
  Region region = Region::interior;
  bool junction = false;
  double value = 0.0;
};

/// Argmin over all vertices of u(x) - <v, x>, smallest index on ties.
/// Junction vertices report Region::sigma with `junction` set.
/// Requires Phi*(v) <= 1 - delta.
MinimizerLocation minimizer_location(const TriMesh& mesh, const ScalarField& u, const Eigen::Vector2d& v,
                                     const ConvexBody& body, double delta = 0.05);

/// Argmin over Gamma vertices of u(x) - <v, x>; ValidationError without Gamma.
int gamma_minimizer(const TriMesh& mesh, const ScalarField& u, const Eigen::Vector2d& v = Eigen::Vector2d::Zero());

struct NormalConeQuery {
  Eigen::Vector2d p;
  Eigen::Vector2d v;
  /// +1 for N^u Gamma^+ (<v, sigma(p)> >= 0), -1 for N^u Gamma^-.
  int sign = 1;
};

struct NormalConeResult {
  bool member = false;
  bool sign_ok = false;
  /// min over Gamma vertices x of u(x) - u(p) - <x - p, v>.
  double worst_slack = 0.0;
  double sigma_dot = 0.0;
};

/// Restricted normal cone test over all Gamma vertices. p must lie on a
/// Gamma edge within 1e-9; epsilon defaults to the contact tolerance.
NormalConeResult normal_cone_test(const TriMesh& mesh, const ScalarField& u, const NormalConeQuery& q,
                                  std::optional<double> epsilon = std::nullopt);
bool normal_cone_membership(const TriMesh& mesh, const ScalarField& u, const NormalConeQuery& q,
                            std::optional<double> epsilon = std::nullopt);

struct Coverage {
  double fraction = 0.0;
  int samples = 0;
  int covered = 0;
};

/// Fraction of grid samples (spacing delta/2) of W cap H_v with
/// Phi* <= 1 - delta and <y, v> >= delta lying within delta of a contact
/// triangle gradient.
Coverage gradient_image_coverage(const TriMesh& mesh, const ScalarField& u, const ContactSet& contact,
                                 const ConvexBody& body, const UnitDirection& v, double delta);

/// Least-squares Hessian per vertex from recovered gradients on its 1-ring.
std::vector<Eigen::Matrix2d> hessian_fit(const TriMesh& mesh, const ScalarField& u);

struct AbpOptions {
  std::optional<double> epsilon;
  std::optional<double> delta;
  double angular_resolution = 2e-3;
  double coverage_threshold = 0.95;
  double chain_tolerance = 0.05;
};

struct AbpReport {
  TriMesh mesh;
  ScalarField u;
  SolveStats solve;
  ContactSet contact;

  double c = 0.0;
  double area = 0.0;
  double perim_sigma = 0.0;
  int p0_vertex = -1;
  Eigen::Vector2d p0;
  Eigen::Vector2d direction;
  double delta = 0.0;

  double cut_area = 0.0;          // |W cap H_v|
  double gradient_image = 0.0;    // est |grad u(Omega+)|
  double source_bound = 0.0;      // (c/2)^2 |Omega+|
  double perimeter_bound = 0.0;   // P^2 / (4 |Omega|)
  double contact_area = 0.0;
  std::array<double, 3> margins{};
  double coverage = 0.0;
  double hessian_nonneg_fraction = 0.0;
  bool chain_pass = false;
  bool coverage_pass = false;
  bool pass = false;

  KeyValueReport to_report() const;
  /// CSV `gx,gy` of contact triangle gradients.
  std::string gradient_csv() const;
};

AbpReport abp_chain_report(const ConvexBody& body, const ObstacleDomain& domain, double h,
                           const AbpOptions& options = {});

}  // namespace wulff
