#include "fraclap/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const Point& p, int dim) { return dim == 2 ? std::hypot(p[0], p[1]) : std::abs(p[0]); }

// l as a function of the distance d
double scale_of(double d, double l0) { return 0.5 / (1.0 + 1.0 / std::hypot(d, l0)); }

// dl/dd
double scale_slope(double d, double l0) {
  const double q = 1.0 / std::hypot(d, l0);
  return d * q * q * q / (2.0 * (1.0 + q) * (1.0 + q));
}

// tau(d) = int_0^d dd'/l(d') = 2 d + 2 asinh(d / l0)
double tau_of(double d, double l0) { return 2.0 * d + 2.0 * std::asinh(d / l0); }

double d_from_tau(double tau, double l0) {
  double lo = 0.0, hi = 0.5 * tau;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (tau_of(mid, l0) < tau ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Nodes along a distance coordinate t in [0, top] uniform in tau, with
// weights dt = l dtau; trapezoid ends.
std::vector<std::pair<double, double>> tau_nodes(double top, double l0, double step) {
  const double T = tau_of(top, l0);
  const int n = std::max(2, static_cast<int>(std::ceil(T / step)));
  const double dtau = T / n;
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k <= n; ++k) {
    const double t = k == n ? top : d_from_tau(k * dtau, l0);
    const double w = (k == 0 || k == n ? 0.5 : 1.0) * dtau * scale_of(t, l0);
    out.push_back({t, w});
  }
  return out;
}

double profile_mass(int dim) {
  auto f = [dim](double r) {
    if (r >= 1.0) return 0.0;
    return std::pow(r, dim - 1) * std::exp(-2.0 / ((1.0 - r) * (1.0 + r)));
  };
  QuadratureSpec q;
  q.rel_tol = 1e-13;
  q.abs_tol = 0.0;
  return sphere_area(dim - 1) * integrate(f, 0.0, 1.0, q).value;
}

}  // namespace

const char* to_string(Shape s) {
  switch (s) {
    case Shape::interval: return "interval";
    case Shape::rectangle: return "rectangle";
    case Shape::disk: return "disk";
  }
  return "?";
}

DomainGeometry DomainGeometry::interval(double a, double b) {
  if (!(b > a)) throw DomainError("interval: need a < b");
  return {Shape::interval, 1, {a, b, 0.0, 0.0}};
}

DomainGeometry DomainGeometry::rectangle(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0 && y1 > y0)) throw DomainError("rectangle: empty");
  return {Shape::rectangle, 2, {x0, x1, y0, y1}};
}

DomainGeometry DomainGeometry::disk(double cx, double cy, double r) {
  if (!(r > 0.0)) throw DomainError("disk: radius must be positive");
  return {Shape::disk, 2, {cx, cy, r, 0.0}};
}

bool DomainGeometry::contains(const Point& u) const { return distance(u) > 0.0; }

double DomainGeometry::distance(const Point& u) const {
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return std::max(0.0, std::min(u[0] - p[0], p[1] - u[0]));
    case Shape::rectangle:
      return std::max(0.0, std::min({u[0] - p[0], p[1] - u[0], u[1] - p[2], p[3] - u[1]}));
    case Shape::disk: return std::max(0.0, p[2] - std::hypot(u[0] - p[0], u[1] - p[1]));
  }
  return 0.0;
}

Point DomainGeometry::distance_gradient(const Point& u) const {
  if (!contains(u) || on_ridge(u)) return {0.0, 0.0};
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return {u[0] - p[0] < p[1] - u[0] ? 1.0 : -1.0, 0.0};
    case Shape::rectangle: {
      const double c[4] = {u[0] - p[0], p[1] - u[0], u[1] - p[2], p[3] - u[1]};
      const int k = static_cast<int>(std::min_element(c, c + 4) - c);
      static const Point g[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
      return g[k];
    }
    case Shape::disk: {
      const double dx = u[0] - p[0], dy = u[1] - p[1];
      const double r = std::hypot(dx, dy);
      return {-dx / r, -dy / r};
    }
  }
  return {0.0, 0.0};
}

bool DomainGeometry::on_ridge(const Point& u, double tol) const {
  if (!contains(u)) return false;
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return std::abs((u[0] - p[0]) - (p[1] - u[0])) <= tol;
    case Shape::rectangle: {
      double c[4] = {u[0] - p[0], p[1] - u[0], u[1] - p[2], p[3] - u[1]};
      std::sort(c, c + 4);
      return c[1] - c[0] <= tol;
    }
    case Shape::disk: return std::hypot(u[0] - p[0], u[1] - p[1]) <= tol;
  }
  return false;
}

double DomainGeometry::boundary_distance(const Point& u) const {
  if (contains(u)) return distance(u);
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return std::min(std::abs(u[0] - p[0]), std::abs(u[0] - p[1]));
    case Shape::rectangle: {
      const double dx = std::max({p[0] - u[0], 0.0, u[0] - p[1]});
      const double dy = std::max({p[2] - u[1], 0.0, u[1] - p[3]});
      if (dx == 0.0 && dy == 0.0)  // on the boundary
        return 0.0;
      return std::hypot(dx, dy);
    }
    case Shape::disk: return std::hypot(u[0] - p[0], u[1] - p[1]) - p[2];
  }
  return 0.0;
}

std::array<double, 4> DomainGeometry::bounds() const {
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return {p[0], p[1], 0.0, 0.0};
    case Shape::rectangle: return p;
    case Shape::disk: return {p[0] - p[2], p[0] + p[2], p[1] - p[2], p[1] + p[2]};
  }
  return p;
}

double DomainGeometry::volume() const {
  const auto& p = params;
  switch (shape) {
    case Shape::interval: return p[1] - p[0];
    case Shape::rectangle: return (p[1] - p[0]) * (p[3] - p[2]);
    case Shape::disk: return kPi * p[2] * p[2];
  }
  return 0.0;
}

LocalizationFamily::LocalizationFamily(const DomainGeometry& geometry, double l0) : geom_(geometry), l0_(l0) {
  if (!(l0 > 0.0 && l0 <= 0.5)) throw DomainError("LocalizationFamily: l0 must lie in (0, 1/2]");
  if (geom_.dim != 1 && geom_.dim != 2) throw DomainError("LocalizationFamily: dimension must be 1 or 2");
  norm_ = 1.0 / std::sqrt(profile_mass(geom_.dim));
}

double LocalizationFamily::base_profile(const Point& y) const {
  const double r2 = y[0] * y[0] + (dim() == 2 ? y[1] * y[1] : 0.0);
  if (r2 >= 1.0) return 0.0;
  return norm_ * std::exp(-1.0 / (1.0 - r2));
}

double LocalizationFamily::scale_l(const Point& u) const { return scale_of(geom_.distance(u), l0_); }

Point LocalizationFamily::grad_l(const Point& u) const {
  const double d = geom_.distance(u);
  const Point g = geom_.distance_gradient(u);
  const double k = scale_slope(d, l0_);
  return {k * g[0], k * g[1]};
}

double LocalizationFamily::jacobian_factor(const Point& x, const Point& u) const {
  const double l = scale_l(u);
  const Point g = grad_l(u);
  double dot = g[0] * (x[0] - u[0]);
  if (dim() == 2) dot += g[1] * (x[1] - u[1]);
  return 1.0 + dot / l;
}

double LocalizationFamily::phi_u(const Point& x, const Point& u) const {
  const double l = scale_l(u);
  const Point y{(x[0] - u[0]) / l, dim() == 2 ? (x[1] - u[1]) / l : 0.0};
  const double b = base_profile(y);
  if (b == 0.0) return 0.0;
  return b * std::sqrt(std::max(jacobian_factor(x, u), 0.0));
}

std::vector<UNode> LocalizationFamily::u_quadrature(double step_factor) const {
  if (!(step_factor > 0.0)) throw DomainError("u_quadrature: step factor must be positive");
  std::vector<UNode> out;
  const double l_out = scale_of(0.0, l0_);
  const auto& p = geom_.params;
  switch (geom_.shape) {
    case Shape::interval: {
      // distance coordinate from each end, mirrored at the midpoint; outside
      // the interval l is constant
      const double half = 0.5 * (p[1] - p[0]);
      const auto inner = tau_nodes(half, l0_, step_factor);
      const int n_out = std::max(2, static_cast<int>(std::ceil(1.0 / step_factor)));
      const double h_out = l_out / n_out;
      for (int side = 0; side < 2; ++side) {
        const double sign = side == 0 ? 1.0 : -1.0;
        const double edge = side == 0 ? p[0] : p[1];
        for (const auto& [t, w] : inner) out.push_back({{edge + sign * t, 0.0}, w});
        for (int k = 0; k <= n_out; ++k) {
          const double w = (k == 0 || k == n_out ? 0.5 : 1.0) * h_out;
          out.push_back({{edge - sign * k * h_out, 0.0}, w});
        }
      }
      break;
    }
    case Shape::disk: {
      const double R = p[2];
      const auto inner = tau_nodes(R, l0_, step_factor);
      const int n_out = std::max(2, static_cast<int>(std::ceil(1.0 / step_factor)));
      const double h_out = l_out / n_out;
      std::vector<std::pair<double, double>> rings;  // (rho, radial weight)
      for (const auto& [t, w] : inner) rings.push_back({R - t, w});
      for (int k = 0; k <= n_out; ++k) rings.push_back({R + k * h_out, (k == 0 || k == n_out ? 0.5 : 1.0) * h_out});
      for (const auto& [rho, w] : rings) {
        if (rho <= 0.0) continue;
        const double l = scale_of(std::max(R - rho, 0.0), l0_);
        const int na = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * rho / (step_factor * l))));
        const double wa = 2.0 * kPi / na;
        for (int a = 0; a < na; ++a) {
          const double ang = (a + 0.5) * wa;
          out.push_back({{p[0] + rho * std::cos(ang), p[1] + rho * std::sin(ang)}, w * rho * wa});
        }
      }
      break;
    }
    case Shape::rectangle: {
      const double h = step_factor * l_out;
      const double x0 = p[0] - l_out, x1 = p[1] + l_out, y0 = p[2] - l_out, y1 = p[3] + l_out;
      const int nx = static_cast<int>(std::ceil((x1 - x0) / h)), ny = static_cast<int>(std::ceil((y1 - y0) / h));
      const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
          const double w = (i == 0 || i == nx ? 0.5 : 1.0) * (j == 0 || j == ny ? 0.5 : 1.0) * hx * hy;
          out.push_back({{x0 + i * hx, y0 + j * hy}, w});
        }
      break;
    }
  }
  return out;
}

double scale_l(const Point& u, const LocalizationFamily& family) { return family.scale_l(u); }

double phi_u(const Point& x, const Point& u, const LocalizationFamily& family) { return family.phi_u(x, u); }

double partition_check(const Point& x, const LocalizationFamily& family, double step_factor) {
  const int d = family.dim();
  double total = 0.0;
  for (const auto& node : family.u_quadrature(step_factor)) {
    const double v = family.phi_u(x, node.u);
    if (v == 0.0) continue;
    total += node.weight * v * v * std::pow(family.scale_l(node.u), -d);
  }
  return total;
}

NeighborhoodReport neighborhood_integrals(const DomainGeometry& geometry, double a,
                                          const std::vector<double>& l0_values, const QuadratureSpec& quad) {
  if (l0_values.size() < 2) throw DomainError("neighborhood_integrals: need at least two l0 values");
  const auto& p = geometry.params;
  // measure of the level sets {d = t} inside and {dist = t} outside
  auto level_in = [&](double t) {
    switch (geometry.shape) {
      case Shape::interval: return 2.0;
      case Shape::rectangle: return std::max(0.0, 2.0 * ((p[1] - p[0] - 2.0 * t) + (p[3] - p[2] - 2.0 * t)));
      case Shape::disk: return 2.0 * kPi * std::max(0.0, p[2] - t);
    }
    return 0.0;
  };
  auto level_out = [&](double t) {
    switch (geometry.shape) {
      case Shape::interval: return 2.0;
      case Shape::rectangle: return 2.0 * ((p[1] - p[0]) + (p[3] - p[2])) + 2.0 * kPi * t;
      case Shape::disk: return 2.0 * kPi * (p[2] + t);
    }
    return 0.0;
  };
  double depth = 0.0;
  switch (geometry.shape) {
    case Shape::interval: depth = 0.5 * (p[1] - p[0]); break;
    case Shape::rectangle: depth = 0.5 * std::min(p[1] - p[0], p[3] - p[2]); break;
    case Shape::disk: depth = p[2]; break;
  }
  NeighborhoodReport rep;
  rep.a = a;
  for (double l0 : l0_values) {
    if (!(l0 > 0.0 && l0 <= 0.5)) throw DomainError("neighborhood_integrals: l0 must lie in (0, 1/2]");
    // inside, u belongs to U exactly when d(u) < l(u)
    double lo = 0.0, hi = depth;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mid < scale_of(mid, l0) ? lo : hi) = mid;
    }
    const double dstar = 0.5 * (lo + hi);
    const double l_out = scale_of(0.0, l0);
    auto bulk_f = [&](double t) { return std::pow(scale_of(t, l0), -2.0) * level_in(t); };
    auto in_f = [&](double t) { return std::pow(scale_of(t, l0), a) * level_in(t); };
    auto out_f = [&](double t) { return std::pow(l_out, a) * level_out(t); };
    const double bulk = dstar < depth ? integrate(bulk_f, dstar, depth, quad).value : 0.0;
    const double layer = integrate(in_f, 0.0, dstar, quad).value + integrate(out_f, 0.0, l_out, quad).value;
    rep.bulk.l0.push_back(l0);
    rep.bulk.values.push_back(bulk);
    rep.layer.l0.push_back(l0);
    rep.layer.values.push_back(layer);
  }
  auto slope = [](ScalingFit& f) {
    const std::size_t n = f.l0.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      mx += std::log(f.l0[k]) / n;
      my += std::log(f.values[k]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double dx = std::log(f.l0[k]) - mx;
      sxy += dx * (std::log(f.values[k]) - my);
      sxx += dx * dx;
    }
    f.exponent = sxy / sxx;
  };
  slope(rep.bulk);
  slope(rep.layer);
  return rep;
}

GradientReport gradient_check(const LocalizationFamily& family, std::size_t samples, unsigned seed) {
  const DomainGeometry& g = family.geometry();
  const int d = family.dim();
  const auto b = g.bounds();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GradientReport rep;
  rep.min_jacobian_factor = 1e300;
  for (std::size_t k = 0; k < samples; ++k) {
    Point u{b[0] - 0.5 + (b[1] - b[0] + 1.0) * U(rng), d == 2 ? b[2] - 0.5 + (b[3] - b[2] + 1.0) * U(rng) : 0.0};
    if (g.on_ridge(u, 1e-9)) continue;
    const double l = family.scale_l(u);
    const Point gl = family.grad_l(u);
    rep.max_grad_l = std::max(rep.max_grad_l, norm2(gl, d));
    // a point inside the ball
    const double r = 0.95 * U(rng), ang = 2.0 * kPi * U(rng);
    const Point x{u[0] + l * r * (d == 2 ? std::cos(ang) : (ang < kPi ? 1.0 : -1.0)), d == 2 ? u[1] + l * r * std::sin(ang) : 0.0};
    rep.min_jacobian_factor = std::min(rep.min_jacobian_factor, family.jacobian_factor(x, u));
    rep.max_phi = std::max(rep.max_phi, std::abs(family.phi_u(x, u)));
    const double eps = 1e-6 * l;
    double g2 = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      Point xp = x, xm = x;
      xp[ax] += eps;
      xm[ax] -= eps;
      const double dv = (family.phi_u(xp, u) - family.phi_u(xm, u)) / (2.0 * eps);
      g2 += dv * dv;
    }
    rep.max_scaled_gradient = std::max(rep.max_scaled_gradient, std::sqrt(g2) * l);
  }
  return rep;
}

}  // namespace fraclap
