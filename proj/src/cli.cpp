#include "fraclap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "fraclap/constants.hpp"
#include "fraclap/halfline.hpp"
#include "fraclap/lattice.hpp"
#include "fraclap/localization.hpp"

namespace fraclap::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadratureSpec quad_of(const RunConfig& cfg) {
  QuadratureSpec q;
  q.rel_tol = cfg.rel_tol;
  q.abs_tol = cfg.abs_tol;
  q.max_subdivisions = static_cast<std::size_t>(cfg.max_subdivisions);
  return q;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

double rel_dev(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::string layer_script(const std::string& csv) {
  std::ostringstream os;
  os << "import csv\nimport math\nimport matplotlib.pyplot as plt\n\n"
     << "rows = [r for r in csv.DictReader(open(\"" << csv << "\")) if math.isfinite(float(r[\"t\"]))]\n"
     << "t = [float(r[\"t\"]) for r in rows]\n"
     << "fig, ax = plt.subplots(1, 2, figsize=(10, 4))\n"
     << "ax[0].semilogx(t, [float(r[\"K\"]) for r in rows])\n"
     << "ax[0].set_xlabel(\"t\")\nax[0].set_ylabel(\"K(t)\")\n"
     << "ax[1].semilogx(t, [float(r[\"cumulative\"]) for r in rows])\n"
     << "ax[1].set_xlabel(\"t\")\nax[1].set_ylabel(\"int_0^t K\")\n"
     << "fig.tight_layout()\nplt.savefig(\"" << csv << ".png\", dpi=120)\n";
  return os.str();
}

DomainGeometry geometry_of(const std::string& shape) {
  if (shape == "interval") return DomainGeometry::interval(0.0, 1.0);
  if (shape == "disk") return DomainGeometry::disk(0.0, 0.0, 1.0);
  if (shape == "square") return DomainGeometry::rectangle(0.0, 1.0, 0.0, 1.0);
  throw DomainError("unknown shape '" + shape + "'");
}

Point random_interior(const DomainGeometry& g, std::mt19937& rng) {
  const auto box = g.bounds();
  std::uniform_real_distribution<double> ux(box[0], box[1]), uy(box[2], box[3]);
  for (;;) {
    const Point p{ux(rng), g.dim == 2 ? uy(rng) : 0.0};
    if (g.distance(p) > 0.0) return p;
  }
}

}  // namespace

std::vector<double> default_h_list(int lattice_points, std::size_t count, double h_max) {
  const double h_min = 4.0 / lattice_points;
  require(count >= 2 && h_max > h_min, "h-list: need h_max > 4 spacings and at least two values");
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = 1.0 / h_max + (1.0 / h_min - 1.0 / h_max) * k / (count - 1.0);
    out.push_back(1.0 / x);
  }
  return out;
}

void validate(const RunConfig& c) {
  require(c.rel_tol > 0.0 && c.abs_tol >= 0.0 && c.max_subdivisions >= 1, "invalid quadrature overrides");
  const std::string& cmd = c.command;
  if (cmd == "constants" || cmd == "layer" || cmd == "kernels") {
    require(c.s > 0.0 && c.s < 1.0, "s must lie in (0, 1)");
    require(c.d >= 2, "d must be at least 2");
    require(c.cutoff > 0.0, "cutoff must be positive");
    if (c.volume) require(*c.volume > 0.0, "volume must be positive");
    if (c.surface) require(*c.surface >= 0.0, "surface must be nonnegative");
    require(c.volume.has_value() == c.surface.has_value(), "volume and surface go together");
    require(c.points >= 2, "points must be at least 2");
    require(c.t_min > 0.0 && c.t_max > c.t_min, "need 0 < t-min < t-max");
    require(c.lambda > 0.0 && c.mu > 0.0, "lambda and mu must be positive");
  } else if (cmd == "verify-square") {
    require(c.s > 0.0 && c.s < 1.0, "s must lie in (0, 1)");
    require(c.lattice_points >= 8 && static_cast<std::size_t>(c.lattice_points) * c.lattice_points <= kDenseLimit,
            "lattice points per side must be in [8, 64]");
    for (double h : c.h_list) require(h > 0.0, "h values must be positive");
    require(c.c0_tol > 0.0 && c.c1_tol > 0.0, "tolerances must be positive");
  } else if (cmd == "verify-halfspace") {
    require(c.s > 0.0 && c.s < 1.0, "s must lie in (0, 1)");
    require(c.h > 0.0 && c.points_per_h >= 4 && c.depth_points >= 8 * c.points_per_h && c.tangential_points >= 16,
            "invalid strip configuration");
    require(c.gap_tol > 0.0, "gap tolerance must be positive");
  } else if (cmd == "order-check") {
    require(c.s > 0.0 && c.s <= 1.0, "s must lie in (0, 1]");
    require(c.lattice_points >= 2, "lattice points must be at least 2");
    require(c.shape == "interval" || c.shape == "square", "order-check shape must be interval or square");
    if (c.shape == "square")
      require(static_cast<std::size_t>(c.lattice_points) * c.lattice_points <= kDenseLimit, "square too large");
  } else if (cmd == "localization-check") {
    require(c.shape == "interval" || c.shape == "disk", "localization shape must be interval or disk");
    require(c.l0 > 0.0 && c.ims_l0 > 0.0, "l0 must be positive");
    require(!c.steps.empty(), "need at least one step");
    for (double st : c.steps) require(st > 0.0 && st <= 1.0, "steps must lie in (0, 1]");
    require(c.samples >= 1, "samples must be positive");
    require(c.s > 0.0 && c.s < 1.0, "s must lie in (0, 1)");
    require(c.lattice_points >= 8 && c.lattice_points <= 1024, "lattice points must be in [8, 1024]");
  } else if (cmd == "convert") {
    require(c.A > 0.0, "A must be positive");
    require(c.a > 0.0 && c.b < c.a, "exponents must satisfy 0 < a and b < a");
    if (c.B != 0.0) require(c.a - 1.0 < c.b, "exponents must satisfy -1 < a - 1 < b < a");
  } else {
    throw DomainError("unknown command '" + cmd + "'");
  }
}

CommandResult cmd_constants(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "constants";
  const FractionalOrder order(cfg.s, cfg.d);
  const QuadratureSpec quad = quad_of(cfg);
  r.add("s", cfg.s, 0.0, "input");
  r.add("d", cfg.d, 0.0, "input");

  WeylCoefficients w;
  w.order = order;
  w.L1 = L1(order);
  r.add("L1", w.L1, 0.0, "L1:closed_form");

  auto guarded = [&](const std::string& name, const std::string& route, auto&& fn) -> std::optional<RouteValue> {
    try {
      const RouteValue v = fn();
      r.add(name, v.value, v.err_estimate, route);
      return v;
    } catch (const NumericalError& e) {
      res.numerical_failure = true;
      r.failures.push_back(name + ": " + e.what());
      return std::nullopt;
    }
  };
  guarded("L1_quadrature", "L1:quadrature", [&] { return L1_quadrature(order, quad); });
  const auto k = guarded("L2", "L2:K_integral", [&] { return L2_via_K(order, quad, cfg.cutoff); });
  const auto e = guarded("L2_eigenfunction", "L2:eigenfunction_form", [&] { return L2_via_eigenfunctions(order, quad); });
  if (cfg.all_routes) guarded("L2_zeta", "L2:zeta_integral", [&] { return L2_via_zeta(order, quad); });
  const auto t = guarded("L2_tilde", "L2_tilde:dirichlet_power", [&] { return L2_dirichlet_power(order, quad); });

  if (k && e) r.add("L2_route_gap", rel_dev(e->value, k->value), 0.0, "L2:K_integral vs L2:eigenfunction_form");
  if (k) {
    r.check("L2_positive", k->value > k->err_estimate, "L2:K_integral");
    w.L2 = k->value;
    w.L2_err = k->err_estimate;
  }
  if (k && t) {
    r.check("L2_below_tilde", t->value - k->value > k->err_estimate + t->err_estimate,
            "L2:K_integral vs L2_tilde:dirichlet_power");
    w.L2_tilde = t->value;
  }
  if (cfg.volume && k) {
    const double vol = *cfg.volume, surf = *cfg.surface;
    const auto ec = eigenvalue_sum_coefficients(w, vol, surf);
    const double a = cesaro_exponent_a(order), b = cesaro_exponent_b(order);
    const auto rc = riesz_cesaro_convert(w.L1 * vol, w.L2 * surf, a, b);
    r.add("cesaro_A", rc.A, 0.0, "cesaro:from_riesz");
    r.add("cesaro_B", rc.B, 0.0, "cesaro:from_riesz");
    r.add("C1", ec.C1, 0.0, "cesaro:from_riesz");
    r.add("C2", ec.C2, 0.0, "cesaro:from_riesz");
    r.add("leading_eigenvalue_factor", ec.leading_eigenvalue_factor, 0.0, "cesaro:from_riesz");
  }
  return res;
}

CommandResult cmd_kernels(const RunConfig& cfg) {
  CommandResult res;
  res.record.command = "kernels";
  const HalfLineModel& m = model_for(cfg.s);
  const Mode md = m.mode(cfg.lambda);
  res.record.add("theta", md.theta, 0.0, "theta:table");
  res.record.add("theta_limit", std::numbers::pi * (1.0 - cfg.s) / 4.0, 0.0, "theta:closed_form");
  ReportTable tab;
  tab.route = "kernels:eigenfunction_model";
  tab.columns = {"x", "F", "G", "e_plus_diag", "a_plus", "K"};
  const double r = std::log(cfg.t_max / cfg.t_min);
  for (int i = 0; i < cfg.points; ++i) {
    const double x = cfg.t_min * std::exp(r * i / (cfg.points - 1.0));
    tab.rows.push_back({x, m.F(md, x), m.G(md, x), m.e_plus(x, x, cfg.mu), m.a_plus(x, cfg.mu), m.K(x, cfg.d)});
  }
  res.table = std::move(tab);
  return res;
}

CommandResult cmd_layer(const RunConfig& cfg) {
  CommandResult res;
  res.record.command = "layer";
  const FractionalOrder order(cfg.s, cfg.d);
  const QuadratureSpec quad = quad_of(cfg);
  const HalfLineModel& m = model_for(cfg.s);
  const double T = std::min(cfg.t_max, cfg.cutoff);
  const KRouteParts parts = L2_via_K_parts(order, quad, cfg.cutoff);
  ReportTable tab;
  tab.route = "L2:K_integral";
  tab.columns = {"t", "K", "cumulative"};
  const double r = std::log(T / cfg.t_min);
  double cum = 0.0;
  double prev = 0.0;
  for (int i = 0; i < cfg.points; ++i) {
    const double t = cfg.t_min * std::exp(r * i / (cfg.points - 1.0));
    cum += integrate([&](double x) { return m.K(x, cfg.d); }, prev, t, quad).value;
    prev = t;
    tab.rows.push_back({t, m.K(t, cfg.d), cum});
  }
  tab.rows.push_back({kInf, 0.0, parts.total.value});
  res.record.add("L2", parts.total.value, parts.total.err_estimate, "L2:K_integral");
  res.table = std::move(tab);
  return res;
}

CommandResult cmd_verify_square(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "verify-square";
  const int m = cfg.lattice_points;
  const LatticeDomain dom = LatticeDomain::unit_square(m);
  const std::vector<double> hs = cfg.h_list.empty() ? default_h_list(m) : cfg.h_list;
  const SpectrumResult spec = eigenvalues_sym(build_restricted_fractional(dom, cfg.s));
  r.add("residual_norm", spec.residual_norm, 0.0, "lattice:eigensolve");
  std::vector<std::pair<double, double>> samples;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    samples.emplace_back(hs[k], riesz_mean(spec, hs[k], cfg.s));
    r.add("h[" + std::to_string(k) + "]", hs[k], 0.0, "input");
    r.add("trace[" + std::to_string(k) + "]", samples.back().second, 0.0, "lattice:riesz_mean");
  }
  const AsymptoticFit fit = two_term_fit(samples, 2);
  const FractionalOrder order(cfg.s, 2);
  const RouteValue l2 = L2_via_K(order, quad_of(cfg));
  const double c0_ref = L1(order) * dom.volume();
  const double c1_ref = -l2.value * dom.surface();
  r.add("c0", fit.c0, fit.rms_residual, "lattice:two_term_fit");
  r.add("c1", fit.c1, fit.rms_residual, "lattice:two_term_fit");
  r.add("c0_reference", c0_ref, 0.0, "L1:closed_form");
  r.add("c1_reference", c1_ref, l2.err_estimate * dom.surface(), "L2:K_integral");
  r.add("c0_deviation", rel_dev(fit.c0, c0_ref), 0.0, "lattice:two_term_fit vs L1:closed_form");
  r.add("c1_deviation", rel_dev(fit.c1, c1_ref), 0.0, "lattice:two_term_fit vs L2:K_integral");

  // diagnostic: add an h^0 term to the model
  Eigen::MatrixXd M(samples.size(), 3);
  Eigen::VectorXd y(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double h = samples[k].first;
    M.row(k) << 1.0 / h, 1.0, h;
    y[k] = samples[k].second * h;
  }
  const Eigen::VectorXd c3 = M.colPivHouseholderQr().solve(y);
  r.add("c0_three_term", c3[0], 0.0, "lattice:three_term_fit");
  r.add("c1_three_term", c3[1], 0.0, "lattice:three_term_fit");
  r.add("c2_three_term", c3[2], 0.0, "lattice:three_term_fit");

  r.check("c0_within_tolerance", rel_dev(fit.c0, c0_ref) <= cfg.c0_tol, "lattice:two_term_fit");
  r.check("c1_within_tolerance", rel_dev(fit.c1, c1_ref) <= cfg.c1_tol, "lattice:two_term_fit");
  return res;
}

CommandResult cmd_verify_halfspace(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "verify-halfspace";
  HalfspaceConfig hc;
  hc.h = cfg.h;
  hc.points_per_h = cfg.points_per_h;
  hc.depth_points = cfg.depth_points;
  hc.tangential_points = cfg.tangential_points;
  hc.wall_offset = cfg.wall_offset;
  const HalfspaceReport rep = halfspace_kernel_check(cfg.s, hc);
  r.add("interior_lattice", rep.interior_lattice, 0.0, "lattice:halfplane_strip");
  r.add("interior_model", rep.interior_model, 0.0, "L1:closed_form");
  double worst = 0.0;
  for (std::size_t k = 0; k < rep.samples.size(); ++k) {
    const auto& smp = rep.samples[k];
    const std::string tag = "[" + std::to_string(k) + "]";
    r.add("depth" + tag, smp.depth, 0.0, "input");
    r.add("diag_lattice" + tag, smp.lattice, 0.0, "lattice:halfplane_strip");
    r.add("diag_model" + tag, smp.model, 0.0, "K:eigenfunction_model");
    worst = std::max(worst, smp.relative_gap);
  }
  r.add("max_relative_gap", worst, 0.0, "lattice:halfplane_strip vs K:eigenfunction_model");
  r.check("interior_within_5pct", rel_dev(rep.interior_lattice, rep.interior_model) <= 0.05, "lattice:halfplane_strip");
  r.check("profile_within_tolerance", !rep.samples.empty() && worst <= cfg.gap_tol, "lattice:halfplane_strip");
  if (!rep.samples.empty())
    r.check("wall_depletion", rep.samples.front().lattice < rep.interior_lattice, "lattice:halfplane_strip");
  return res;
}

CommandResult cmd_order_check(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "order-check";
  const int m = cfg.lattice_points;
  const LatticeDomain dom =
      cfg.shape == "square" ? LatticeDomain::unit_square(m) : LatticeDomain::interval(m, 1.0 / m);
  const OrderReport o = operator_order_check(dom, cfg.s);
  r.add("min_eigenvalue", o.min_eigenvalue, 0.0, "lattice:power_minus_restricted");
  r.add("max_eigenvalue", o.max_eigenvalue, 0.0, "lattice:power_minus_restricted");
  r.add("norm", o.norm, 0.0, "lattice:power_minus_restricted");
  r.check("ordering_holds", o.holds, "lattice:power_minus_restricted");
  return res;
}

CommandResult cmd_localization_check(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "localization-check";
  const DomainGeometry g = geometry_of(cfg.shape);
  const LocalizationFamily fam(g, cfg.l0);
  std::mt19937 rng(cfg.seed);
  std::vector<Point> pts;
  for (int k = 0; k < cfg.samples; ++k) pts.push_back(random_interior(g, rng));
  std::vector<double> errs;
  for (std::size_t k = 0; k < cfg.steps.size(); ++k) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(partition_check(p, fam, cfg.steps[k]) - 1.0));
    errs.push_back(worst);
    r.add("step[" + std::to_string(k) + "]", cfg.steps[k], 0.0, "input");
    r.add("partition_error[" + std::to_string(k) + "]", worst, 0.0, "localization:u_quadrature");
  }
  bool halving = true;
  for (std::size_t k = 1; k < errs.size(); ++k)
    if (cfg.steps[k] < cfg.steps[k - 1]) halving = halving && errs[k] <= 0.5 * errs[k - 1];
  r.check("partition_within_1e-3", errs.back() <= 1e-3, "localization:u_quadrature");
  r.check("partition_error_halves", halving, "localization:u_quadrature");

  const GradientReport gr = gradient_check(fam, 200, cfg.seed);
  r.add("max_phi", gr.max_phi, 0.0, "localization:sampled");
  r.add("max_scaled_gradient", gr.max_scaled_gradient, 0.0, "localization:sampled");
  r.add("max_grad_l", gr.max_grad_l, 0.0, "localization:sampled");
  r.add("min_jacobian_factor", gr.min_jacobian_factor, 0.0, "localization:sampled");
  r.check("grad_l_below_half", gr.max_grad_l < 0.5, "localization:sampled");

  const NeighborhoodReport nb = neighborhood_integrals(g, 0.0, {0.1, 0.05, 0.025}, quad_of(cfg));
  r.add("bulk_exponent", nb.bulk.exponent, 0.0, "localization:neighborhood_quadrature");
  r.add("layer_exponent", nb.layer.exponent, 0.0, "localization:neighborhood_quadrature");
  r.check("bulk_exponent_near_-1", std::abs(nb.bulk.exponent + 1.0) <= 0.1, "localization:neighborhood_quadrature");
  r.check("layer_exponent_near_1", std::abs(nb.layer.exponent - 1.0) <= 0.1, "localization:neighborhood_quadrature");

  if (g.dim == 1) {
    const int m = cfg.lattice_points;
    const LatticeDomain dom = LatticeDomain::interval(m, 1.0 / m);
    const LocalizationFamily ims_fam(g, cfg.ims_l0);
    const ImsReport ims = ims_defect_check(dom, cfg.s, ims_fam, cfg.steps.back());
    r.add("ims_lhs", ims.lhs, 0.0, "lattice:rank3_trace");
    r.add("ims_localized", ims.localized, 0.0, "lattice:localized_forms");
    r.add("ims_defect", ims.defect, 0.0, "lattice:continuum_defect_kernel");
    r.add("ims_relative_gap", ims.relative_gap, 0.0, "lattice:ims_identity");
    r.add("ims_quadrature_gap", ims.quadrature_gap, 0.0, "lattice:ims_identity_lattice_kernel");
    r.check("ims_gap_below_5pct", ims.relative_gap < 0.05, "lattice:ims_identity");
  }
  return res;
}

CommandResult cmd_convert(const RunConfig& cfg) {
  CommandResult res;
  auto& r = res.record;
  r.command = "convert";
  const RieszCoefficients f = cesaro_riesz_convert(cfg.A, cfg.B, cfg.a, cfg.b);
  const RieszCoefficients back = riesz_cesaro_convert(f.C, f.D, cfg.a, cfg.b);
  r.add("C", f.C, 0.0, "riesz:from_cesaro");
  r.add("D", f.D, 0.0, "riesz:from_cesaro");
  r.add("A_roundtrip", back.A, 0.0, "cesaro:from_riesz");
  r.add("B_roundtrip", back.B, 0.0, "cesaro:from_riesz");
  const double err = std::max(rel_dev(back.A, cfg.A), std::abs(back.B - cfg.B) / std::max(1.0, std::abs(cfg.B)));
  r.add("roundtrip_error", err, 0.0, "riesz:from_cesaro then cesaro:from_riesz");
  r.check("roundtrip_1e-10", err <= 1e-10, "riesz:from_cesaro then cesaro:from_riesz");
  return res;
}

CommandResult dispatch(const RunConfig& cfg) {
  validate(cfg);
  const std::string& c = cfg.command;
  if (c == "constants") return cmd_constants(cfg);
  if (c == "kernels") return cmd_kernels(cfg);
  if (c == "layer") return cmd_layer(cfg);
  if (c == "verify-square") return cmd_verify_square(cfg);
  if (c == "verify-halfspace") return cmd_verify_halfspace(cfg);
  if (c == "order-check") return cmd_order_check(cfg);
  if (c == "localization-check") return cmd_localization_check(cfg);
  return cmd_convert(cfg);
}

namespace {

void add_quad(CLI::App* sub, RunConfig& c) {
  sub->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance");
  sub->add_option("--abs-tol", c.abs_tol, "quadrature absolute tolerance");
  sub->add_option("--max-subdivisions", c.max_subdivisions, "quadrature subdivision budget");
}

void add_order(CLI::App* sub, RunConfig& c) {
  sub->add_option("--s", c.s, "fractional order in (0, 1)");
  sub->add_option("--d", c.d, "dimension, at least 2");
}

void write(const CommandResult& res, const RunConfig& cfg, std::ostream& os) {
  if (res.table) {
    cfg.format == Format::json ? write_json(*res.table, os) : write_csv(*res.table, os);
  } else {
    cfg.format == Format::json ? write_json(res.record, os) : write_csv(res.record, os);
  }
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Semiclassical constants of the fractional Laplacian and lattice checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", cfg.output, "output file (default stdout)");

  auto* constants = app.add_subcommand("constants", "L1, L2 by several routes, tilde-L2 and Cesaro coefficients");
  add_order(constants, cfg);
  add_quad(constants, cfg);
  constants->add_option("--cutoff", cfg.cutoff, "split point of the K integral");
  constants->add_flag("--all-routes", cfg.all_routes, "also evaluate the spectral-shift route");
  constants->add_option("--volume", cfg.volume, "|Omega| for the Cesaro coefficients");
  constants->add_option("--surface", cfg.surface, "|dOmega| for the Cesaro coefficients");

  auto* kernels = app.add_subcommand("kernels", "tabulate F, G, e+, a+ and K on a log grid");
  add_order(kernels, cfg);
  kernels->add_option("--lambda", cfg.lambda, "spectral parameter of F and G");
  kernels->add_option("--mu", cfg.mu, "spectral cut of e+ and a+");
  kernels->add_option("--t-min", cfg.t_min);
  kernels->add_option("--t-max", cfg.t_max);
  kernels->add_option("--points", cfg.points);

  auto* layer = app.add_subcommand("layer", "K(t) and its running integral; the last row is L2");
  add_order(layer, cfg);
  add_quad(layer, cfg);
  layer->add_option("--cutoff", cfg.cutoff, "split point of the K integral");
  layer->add_option("--t-min", cfg.t_min);
  layer->add_option("--t-max", cfg.t_max);
  layer->add_option("--points", cfg.points);
  layer->add_option("--plot-script", cfg.plot_script, "write a matplotlib script for the CSV output");

  auto* square = app.add_subcommand("verify-square", "two-term fit of the Riesz mean on the unit square");
  square->add_option("--s", cfg.s);
  square->add_option("--points", cfg.lattice_points, "interior points per side");
  square->add_option("--h-list", cfg.h_list, "semiclassical parameters (default: 6 values equispaced in 1/h)")->delimiter(',');
  square->add_option("--c0-tol", cfg.c0_tol);
  square->add_option("--c1-tol", cfg.c1_tol);
  add_quad(square, cfg);

  auto* half = app.add_subcommand("verify-halfspace", "diagonal of the negative part near a straight wall");
  half->add_option("--s", cfg.s);
  half->add_option("--h-value", cfg.h, "semiclassical parameter");
  half->add_option("--points-per-h", cfg.points_per_h);
  half->add_option("--depth-points", cfg.depth_points);
  half->add_option("--tangential-points", cfg.tangential_points);
  half->add_option("--wall-offset", cfg.wall_offset);
  half->add_option("--gap-tol", cfg.gap_tol);

  auto* order = app.add_subcommand("order-check", "power of the Dirichlet Laplacian dominates the restricted operator");
  order->add_option("--s", cfg.s);
  order->add_option("--shape", cfg.shape, "interval or square");
  auto* order_points = order->add_option("--points", cfg.lattice_points, "points per side (default 64 interval, 20 square)");

  auto* loc = app.add_subcommand("localization-check", "partition of unity, gradients, neighborhoods, IMS gap");
  loc->add_option("--shape", cfg.shape, "interval or disk");
  loc->add_option("--l0", cfg.l0);
  loc->add_option("--steps", cfg.steps, "u-grid step factors, coarse to fine")->delimiter(',');
  loc->add_option("--samples", cfg.samples);
  loc->add_option("--seed", cfg.seed);
  loc->add_option("--s", cfg.s);
  loc->add_option("--points", cfg.lattice_points, "lattice points for the IMS check");
  loc->add_option("--ims-l0", cfg.ims_l0);
  add_quad(loc, cfg);

  auto* conv = app.add_subcommand("convert", "eigenvalue-sum coefficients to Riesz-mean coefficients");
  conv->add_option("--A", cfg.A);
  conv->add_option("--B", cfg.B);
  conv->add_option("--a", cfg.a);
  conv->add_option("--b", cfg.b);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "order-check" && cfg.shape == "square" && order_points->count() == 0) cfg.lattice_points = 20;
  cfg.format = format == "json" ? Format::json : Format::csv;

  CommandResult res;
  try {
    res = dispatch(cfg);
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }

  if (cfg.output.empty()) {
    write(res, cfg, out);
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      err << "cannot open " << cfg.output << '\n';
      return kUsage;
    }
    write(res, cfg, f);
  }
  if (!cfg.plot_script.empty()) {
    std::ofstream f(cfg.plot_script);
    f << layer_script(cfg.output.empty() ? "layer.csv" : cfg.output);
  }
  for (const auto& name : res.record.failures) err << "failed: " << name << '\n';
  if (res.numerical_failure) return kNumerical;
  return res.record.passed() ? kOk : kAssertion;
}

}  // namespace fraclap::cli
