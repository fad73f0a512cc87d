#include "fraclap/constants.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// |S^{d-2}| / (2 pi)^{d-1}
double boundary_density(int d) { return sphere_area(d - 2) / std::pow(2.0 * kPi, d - 1); }

void check_order(const FractionalOrder& order) { order.validate(); }

QuadratureSpec inner_spec(const QuadratureSpec& quad) {
  QuadratureSpec q = quad.tightened(0.1);
  q.abs_tol = std::max(quad.abs_tol * 0.1, 1e-15);
  return q;
}

// Tail of int K dt beyond T that the cosine part of 1 - 2F^2 produces,
// after the substitution kappa = r lambda:
//   (c_d/pi) int_0^1 r^{d-2} int_0^{sqrt(1-r^2)} (1 - (kappa^2 + r^2)^s) (-sin(2 kappa T + 2 theta_{kappa/r})) / (2 kappa)
RouteValue cosine_tail(const HalfLineModel& m, int d, double T, const QuadratureSpec& quad) {
  const double s = m.s();
  const QuadratureSpec qi = inner_spec(quad);
  double inner_err = 0.0;
  auto outer = [&](double r) {
    const double top = std::sqrt((1.0 - r) * (1.0 + r));
    auto f = [&](double k) {
      const double w = 1.0 - std::pow(k * k + r * r, s);
      return -w * std::sin(2.0 * k * T + 2.0 * m.theta(k / r)) / (2.0 * k);
    };
    double v = 0.0;
    const double split = std::min(r, 0.5 * top);
    for (auto [lo, hi] : {std::pair{0.0, split}, std::pair{split, top}}) {
      const auto res = integrate(f, lo, hi, qi, hi == top ? Endpoints::singular_right : Endpoints::regular);
      v += res.value;
      inner_err = std::max(inner_err, res.err_estimate);
    }
    return std::pow(r, d - 2) * v;
  };
  const auto res = integrate(outer, 0.0, 1.0, quad, Endpoints::singular_both);
  const double cd = boundary_density(d);
  return {cd / kPi * res.value, cd / kPi * (res.err_estimate + inner_err)};
}

// The G-carried part of the tail, lambda outermost so that every mode is built once:
//   (c_d/pi) int_0^inf (1 + l^2)^{-(d-1)/2} int_0^1 rho^{d-2} (1 - rho^{2s}) J_G(l, T rho / sqrt(1 + l^2)) drho
RouteValue laplace_tail(const HalfLineModel& m, int d, double T, const QuadratureSpec& quad) {
  if (m.is_dirichlet()) return {};
  const double s = m.s();
  const QuadratureSpec qi = inner_spec(quad);
  double inner_err = 0.0;
  auto outer = [&](double l) {
    const Mode md = m.mode(l);
    const double q = std::sqrt(1.0 + l * l);
    auto f = [&](double rho) {
      return std::pow(rho, d - 2) * (1.0 - std::pow(rho, 2.0 * s)) * m.J_tail_G(md, T * rho / q);
    };
    const auto res = integrate(f, 0.0, 1.0, qi, Endpoints::singular_right);
    const double w = std::pow(q, -(d - 1));
    inner_err = std::max(inner_err, w * res.err_estimate);
    return w * res.value;
  };
  const double cd = boundary_density(d);
  const auto a = integrate(outer, 0.0, 1.0, quad);
  const auto b = integrate(outer, 1.0, kInf, quad);
  return {cd / kPi * (a.value + b.value), cd / kPi * (a.err_estimate + b.err_estimate + inner_err)};
}

KRouteParts k_route(const HalfLineModel& m, int d, const QuadratureSpec& quad, double cutoff) {
  if (!(cutoff > 0.0)) throw DomainError("L2_via_K: cutoff must be positive");
  quad.validate();
  const double s = m.s();
  const auto body = integrate([&](double t) { return m.K(t, d); }, 0.0, cutoff, quad);
  KRouteParts p;
  p.cutoff = cutoff;
  p.body = body.value;
  // point mass of the Abel-regularized cosine integral at lambda = 0
  p.point_mass = 0.25 * boundary_density(d) * 2.0 * s / ((d - 1.0) * (d - 1.0 + 2.0 * s));
  const RouteValue osc = cosine_tail(m, d, cutoff, quad);
  const RouteValue lap = laplace_tail(m, d, cutoff, quad);
  p.tail = osc.value + lap.value;
  p.total = {p.body + p.point_mass + p.tail, body.err_estimate + osc.err_estimate + lap.err_estimate};
  return p;
}

const HalfLineModel& laplacian_model() {
  thread_local const HalfLineModel m = HalfLineModel::dirichlet();
  return m;
}

// With a vanishing second coefficient only 0 < a and b < a are needed.
void check_exponents(double a, double b, bool second_term) {
  if (!(a > 0.0 && b < a)) throw DomainError("exponents must satisfy 0 < a and b < a");
  if (second_term && !(a - 1.0 < b)) throw DomainError("exponents must satisfy -1 < a - 1 < b < a");
}

}  // namespace

const char* to_string(L2Route r) {
  switch (r) {
    case L2Route::K_integral: return "K_integral";
    case L2Route::eigenfunction_form: return "eigenfunction_form";
    case L2Route::zeta_integral: return "zeta_integral";
  }
  return "?";
}

double weyl_L1(double s, int d) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("weyl_L1: s must lie in (0, 1]");
  if (d < 1) throw DomainError("weyl_L1: dimension must be positive");
  return sphere_area(d - 1) / std::pow(2.0 * kPi, d) * 2.0 * s / (d * (d + 2.0 * s));
}

double L1(const FractionalOrder& order) {
  check_order(order);
  return weyl_L1(order.s, order.d);
}

RouteValue L1_quadrature(const FractionalOrder& order, const QuadratureSpec& quad) {
  check_order(order);
  quad.validate();
  const double s = order.s;
  const int d = order.d;
  // level k integrates over one coordinate given the squared norm q of the
  // coordinates already fixed; the innermost level evaluates (1 - |p|^{2s}).
  std::function<double(int, double, const QuadratureSpec&)> level = [&](int k, double q,
                                                                       const QuadratureSpec& qs) -> double {
    const double rem = 1.0 - q;
    if (rem <= 0.0) return 0.0;
    const QuadratureSpec qn = inner_spec(qs);
    auto f = [&](double p) {
      const double qq = q + p * p;
      if (k == 1) return qq >= 1.0 ? 0.0 : 1.0 - std::pow(qq, s);
      return level(k - 1, qq, qn);
    };
    return 2.0 * integrate(f, 0.0, std::sqrt(rem), qs, Endpoints::singular_both).value;
  };
  QuadratureSpec top = quad;
  const QuadratureSpec qn = inner_spec(quad);
  auto f = [&](double p) {
    const double qq = p * p;
    if (d == 1) return 1.0 - std::pow(qq, s);
    return level(d - 1, qq, qn);
  };
  const auto res = integrate(f, 0.0, 1.0, top, Endpoints::singular_both);
  const double norm = 2.0 / std::pow(2.0 * kPi, d);
  return {norm * res.value, norm * res.err_estimate};
}

RouteValue L2_via_K(const FractionalOrder& order, const QuadratureSpec& quad, double cutoff) {
  check_order(order);
  return k_route(model_for(order.s), order.d, quad, cutoff).total;
}

KRouteParts L2_via_K_parts(const FractionalOrder& order, const QuadratureSpec& quad, double cutoff) {
  check_order(order);
  return k_route(model_for(order.s), order.d, quad, cutoff);
}

RouteValue L2_via_eigenfunctions(const FractionalOrder& order, const QuadratureSpec& quad) {
  check_order(order);
  quad.validate();
  const HalfLineModel& m = model_for(order.s);
  const int d = order.d;
  const double s = order.s;
  auto f = [&](double l) { return std::pow(l * l + 1.0, -0.5 * (d - 1)) * m.J_reg(l); };
  const auto a = integrate(f, 0.0, 1.0, quad);
  const auto b = integrate(f, 1.0, kInf, quad);
  const double pref = 4.0 * s / ((d - 1.0 + 2.0 * s) * (d - 1.0)) * sphere_area(d - 2) / std::pow(2.0 * kPi, d);
  return {pref * (0.25 * kPi + a.value + b.value), pref * (a.err_estimate + b.err_estimate)};
}

RouteValue L2_via_zeta(const FractionalOrder& order, const QuadratureSpec& quad) {
  check_order(order);
  quad.validate();
  const HalfLineModel& m = model_for(order.s);
  const int d = order.d;
  const double s = order.s;
  QuadratureSpec q = quad;
  q.rel_tol = std::max(q.rel_tol, 1e-6);
  auto f = [&](double r) { return std::pow(r, d - 2) * m.zeta(std::pow(r, -2.0 * s)); };
  const auto res = integrate(f, 0.0, 1.0, q, Endpoints::singular_right);
  const double cd = boundary_density(d);
  return {cd * res.value, cd * res.err_estimate};
}

RouteValue L2_laplacian(int d, const QuadratureSpec& quad, double cutoff) {
  if (d < 2) throw DomainError("dimension d must be at least 2");
  return k_route(laplacian_model(), d, quad, cutoff).total;
}

RouteValue L2_dirichlet_power(const FractionalOrder& order, const QuadratureSpec& quad) {
  check_order(order);
  const RouteValue lap = L2_laplacian(order.d, quad);
  const double ratio = order.s * (order.d + 1.0) / (order.d - 1.0 + 2.0 * order.s);
  return {ratio * lap.value, ratio * lap.err_estimate};
}

WeylCoefficients weyl_coefficients(const FractionalOrder& order, const QuadratureSpec& quad, L2Route route) {
  check_order(order);
  WeylCoefficients w;
  w.order = order;
  w.L1 = L1(order);
  w.L2_route = route;
  RouteValue l2;
  switch (route) {
    case L2Route::K_integral: l2 = L2_via_K(order, quad); break;
    case L2Route::eigenfunction_form: l2 = L2_via_eigenfunctions(order, quad); break;
    case L2Route::zeta_integral: l2 = L2_via_zeta(order, quad); break;
  }
  w.L2 = l2.value;
  w.L2_err = l2.err_estimate;
  const RouteValue tilde = L2_dirichlet_power(order, quad);
  w.L2_tilde = tilde.value;
  w.L2_tilde_err = tilde.err_estimate;
  return w;
}

RieszCoefficients cesaro_riesz_convert(double A, double B, double a, double b) {
  if (!(A > 0.0)) throw DomainError("cesaro_riesz_convert: A must be positive");
  check_exponents(a, b, B != 0.0);
  RieszCoefficients r{A, B, a, b, 0.0, 0.0};
  r.C = std::pow(A, -1.0 / a) * a * std::pow(a + 1.0, -(1.0 + a) / a);
  r.D = B * std::pow(A * (a + 1.0), -(1.0 + b) / a);
  return r;
}

RieszCoefficients riesz_cesaro_convert(double C, double D, double a, double b) {
  if (!(C > 0.0)) throw DomainError("riesz_cesaro_convert: C must be positive");
  check_exponents(a, b, D != 0.0);
  RieszCoefficients r{0.0, 0.0, a, b, C, D};
  r.A = std::pow(a, a) * std::pow(a + 1.0, -(1.0 + a)) * std::pow(C, -a);
  r.B = D * std::pow(r.A * (a + 1.0), (1.0 + b) / a);
  return r;
}

double cesaro_exponent_a(const FractionalOrder& order) { return 2.0 * order.s / order.d; }
double cesaro_exponent_b(const FractionalOrder& order) { return (2.0 * order.s - 1.0) / order.d; }

EigenvalueSumCoefficients eigenvalue_sum_coefficients(const WeylCoefficients& w, double volume, double surface) {
  if (!(volume > 0.0)) throw DomainError("eigenvalue_sum_coefficients: volume must be positive");
  if (!(surface > 0.0)) throw DomainError("eigenvalue_sum_coefficients: surface must be positive");
  const FractionalOrder& o = w.order;
  const double a = cesaro_exponent_a(o), b = cesaro_exponent_b(o);
  const RieszCoefficients r = riesz_cesaro_convert(w.L1 * volume, w.L2 * surface, a, b);
  EigenvalueSumCoefficients out;
  // sum_{n<=N} = N * mean, so the Cesaro mean carries the same A and B
  out.C1 = r.A * std::pow(volume, a);
  out.C2 = r.B / surface * std::pow(volume, (o.d - 1.0 + 2.0 * o.s) / o.d);
  out.leading_eigenvalue_factor = (o.d + 2.0 * o.s) / o.d * out.C1;
  return out;
}

EigenvalueSumCoefficients eigenvalue_sum_coefficients(const FractionalOrder& order, double volume, double surface,
                                                      const QuadratureSpec& quad) {
  return eigenvalue_sum_coefficients(weyl_coefficients(order, quad), volume, surface);
}

}  // namespace fraclap
