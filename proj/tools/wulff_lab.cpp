// Command-line front end: body, beta, check, sharpness, abp, random-suite.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "wulff/abp.hpp"
#include "wulff/convex_body.hpp"
#include "wulff/errors.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/obstacle_domain.hpp"
#include "wulff/report.hpp"
#include "wulff/surface.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInvalid = 2, kNumeric = 3 };

struct RunConfig {
  std::string body_path;
  std::string domain_path;
  std::string out_dir;
  double h = 0.02;
  double epsilon = -1.0;
  double delta = -1.0;
  double angres = 2e-3;
  std::vector<double> radii = {10, 100, 1000};
  std::vector<double> direction;
  int seeds = 100;
  double radius = 1.0;
  int complexity = 8;
};

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  std::ofstream out(p / name, std::ios::binary);
  if (!out) throw wulff::ValidationError("cannot write " + (p / name).string());
  out << text;
  if (!out) throw wulff::ValidationError("write failed: " + (p / name).string());
}

int run_body(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  const double P = wulff::wulff_perimeter(body);
  const double nV = body.dimension() * body.volume();
  const double residual = std::abs(P - nV) / nV;
  std::cout << "dimension=" << body.dimension() << '\n'
            << "kind=" << wulff::to_string(body.kind()) << '\n'
            << "volume=" << wulff::format_number(body.volume()) << '\n'
            << "P=" << wulff::format_number(P) << " nV=" << wulff::format_number(nV)
            << " residual=" << wulff::format_number(residual) << '\n';
  return residual < 1e-9 ? kOk : kCheckFailed;
}

int run_beta(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  const auto b = wulff::beta(body, cfg.angres);
  wulff::KeyValueReport r;
  r.add("beta", b.value);
  for (int i = 0; i < b.direction.dimension(); ++i) r.add("direction_" + std::to_string(i), b.direction(i));
  r.add("approximate", b.approximate);
  std::cout << r.to_text();
  return (b.value > 0.0 && b.value <= 0.5 + 1e-12) ? kOk : kCheckFailed;
}

int run_check(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  const auto domain = wulff::load_domain(cfg.domain_path);
  const auto rep = wulff::inequality_report(body, domain, cfg.angres);
  const std::string text = rep.to_report().to_text();
  std::cout << text;
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "check.txt", text);
  return rep.pass ? kOk : kCheckFailed;
}

int run_sharpness(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  wulff::UnitDirection v = wulff::beta(body, cfg.angres).direction;
  if (!cfg.direction.empty()) {
    if (cfg.direction.size() != 2) throw wulff::ValidationError("--direction needs two components");
    v = wulff::UnitDirection::normalized(Eigen::Vector2d(cfg.direction[0], cfg.direction[1]));
  }
  const auto rows = wulff::sharpness_sweep(body, v, cfg.radii, cfg.angres);
  const std::string csv = wulff::sharpness_csv(rows);
  std::cout << csv;
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "sharpness.csv", csv);
  for (const auto& r : rows)
    if (!(r.ratio > 1.0)) return kCheckFailed;
  return kOk;
}

int run_abp(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  const auto domain = wulff::load_domain(cfg.domain_path);
  wulff::AbpOptions opt;
  if (cfg.epsilon >= 0.0) opt.epsilon = cfg.epsilon;
  if (cfg.delta > 0.0) opt.delta = cfg.delta;
  opt.angular_resolution = cfg.angres;
  std::cerr << "abp: meshing and solving at h=" << cfg.h << '\n';
  const auto rep = wulff::abp_chain_report(body, domain, cfg.h, opt);
  const std::string text = rep.to_report().to_text();
  std::cout << text;
  if (!cfg.out_dir.empty()) {
    write_file(cfg.out_dir, "abp.txt", text);
    write_file(cfg.out_dir, "contact.csv", rep.contact.to_csv());
    write_file(cfg.out_dir, "gradients.csv", rep.gradient_csv());
  }
  return rep.pass ? kOk : kCheckFailed;
}

int run_random_suite(const RunConfig& cfg) {
  const auto body = wulff::load_body(cfg.body_path);
  const auto b = wulff::beta(body, cfg.angres);
  int passed = 0, tangential = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_relative = std::numeric_limits<double>::infinity();
  for (int seed = 0; seed < cfg.seeds; ++seed) {
    const auto domain = wulff::random_domain(static_cast<std::uint64_t>(seed), cfg.radius, cfg.complexity);
    const auto rep = wulff::inequality_report(body, domain, b);
    passed += rep.pass ? 1 : 0;
    tangential += rep.tangential_junctions > 0 ? 1 : 0;
    min_margin = std::min(min_margin, rep.margin);
    min_relative = std::min(min_relative, rep.margin / rep.rhs);
    if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "seed_" + std::to_string(seed) + ".txt", rep.to_report().to_text());
    if ((seed + 1) % 10 == 0) std::cerr << "random-suite: " << seed + 1 << '/' << cfg.seeds << '\n';
  }
  wulff::KeyValueReport r;
  r.add("seeds", cfg.seeds);
  r.add("passed", passed);
  r.add("beta", b.value);
  r.add("min_margin", min_margin);
  r.add("min_relative_margin", min_relative);
  r.add("tangential_cases", tangential);
  r.add("pass", passed == cfg.seeds);
  std::cout << r.to_text();
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "summary.txt", r.to_text());
  return passed == cfg.seeds ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic isoperimetry outside a ball: geometry, inequality checks and the ABP pipeline"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto body_opt = [&](CLI::App* sub) { sub->add_option("--body", cfg.body_path, "Wulff shape file")->required()->check(CLI::ExistingFile); };
  auto angres_opt = [&](CLI::App* sub) {
    sub->add_option("--angres", cfg.angres, "angular grid spacing for beta (radians)")->check(CLI::PositiveNumber);
  };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_dir, "output directory"); };

  auto* body = app.add_subcommand("body", "volume, P(dW), n|W| and the identity residual");
  body_opt(body);

  auto* beta = app.add_subcommand("beta", "beta and a minimizing direction");
  body_opt(beta);
  angres_opt(beta);

  auto* check = app.add_subcommand("check", "isoperimetric inequality on a domain file");
  body_opt(check);
  check->add_option("--domain", cfg.domain_path, "domain file")->required()->check(CLI::ExistingFile);
  angres_opt(check);
  out_opt(check);

  auto* sharp = app.add_subcommand("sharpness", "ratio lhs/rhs over the family W - B_r(-r v)");
  body_opt(sharp);
  sharp->add_option("--radii", cfg.radii, "comma-separated radii")->delimiter(',')->check(CLI::PositiveNumber);
  sharp->add_option("--direction", cfg.direction, "v as x,y (default: beta direction)")->delimiter(',');
  angres_opt(sharp);
  out_opt(sharp);

  auto* abp = app.add_subcommand("abp", "Neumann solve, contact set, coverage and the chain");
  abp->set_help_flag("--help", "Print this help message and exit");
  body_opt(abp);
  abp->add_option("--domain", cfg.domain_path, "domain file")->required()->check(CLI::ExistingFile);
  abp->add_option("--h", cfg.h, "mesh size")->check(CLI::PositiveNumber);
  abp->add_option("--epsilon", cfg.epsilon, "contact tolerance (default 5h^2(1+max|grad u|))")->check(CLI::PositiveNumber);
  abp->add_option("--delta", cfg.delta, "coverage tolerance (default 5h)")->check(CLI::PositiveNumber);
  angres_opt(abp);
  out_opt(abp);

  auto* suite = app.add_subcommand("random-suite", "seeded inequality checks on random domains");
  body_opt(suite);
  suite->add_option("--seeds", cfg.seeds, "number of seeds")->check(CLI::PositiveNumber);
  suite->add_option("--radius", cfg.radius, "obstacle radius")->check(CLI::PositiveNumber);
  suite->add_option("--complexity", cfg.complexity, "polygon vertex count")->check(CLI::Range(3, 1000));
  angres_opt(suite);
  out_opt(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*body) return run_body(cfg);
    if (*beta) return run_beta(cfg);
    if (*check) return run_check(cfg);
    if (*sharp) return run_sharpness(cfg);
    if (*abp) return run_abp(cfg);
    if (*suite) return run_random_suite(cfg);
  } catch (const wulff::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const wulff::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const wulff::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kNumeric;
  }
  return kInvalid;
}
