#pragma once

// Multiscale localization: the scale l(u) = (1/2) (1 + (d(u)^2 + l0^2)^{-1/2})^{-1},
// weights phi_u(x) = phi((x - u)/l(u)) sqrt(J(x, u)) l(u)^{d/2} built from a
// normalized bump, and numerical checks of the partition of unity
// int phi_u(x)^2 l(u)^{-d} du = 1.

#include <array>
#include <cstddef>
#include <vector>

#include "fraclap/quadcore.hpp"

namespace fraclap {

using Point = std::array<double, 2>;

enum class Shape { interval, rectangle, disk };

const char* to_string(Shape s);

struct DomainGeometry {
  Shape shape = Shape::interval;
  int dim = 1;
  /// interval: [p0, p1]; rectangle: [p0, p1] x [p2, p3]; disk: centre (p0, p1), radius p2.
  std::array<double, 4> params{0.0, 1.0, 0.0, 0.0};

  static DomainGeometry interval(double a, double b);
  static DomainGeometry rectangle(double x0, double x1, double y0, double y1);
  static DomainGeometry disk(double cx, double cy, double r);

  bool contains(const Point& u) const;
  /// d(u) = dist(u, complement); zero outside.
  double distance(const Point& u) const;
  /// Gradient of d where it is smooth; zero outside and on ridges of d.
  Point distance_gradient(const Point& u) const;
  /// True where d is not differentiable inside the domain (medial axis).
  bool on_ridge(const Point& u, double tol = 1e-12) const;
  /// Unsigned distance to the boundary.
  double boundary_distance(const Point& u) const;
  /// Bounding box [lo, hi] per axis.
  std::array<double, 4> bounds() const;
  double volume() const;
};

struct UNode {
  Point u{0.0, 0.0};
  double weight = 0.0;
};

class LocalizationFamily {
public:
  LocalizationFamily(const DomainGeometry& geometry, double l0);

  const DomainGeometry& geometry() const { return geom_; }
  int dim() const { return geom_.dim; }
  double l0() const { return l0_; }

  /// The normalized bump exp(-1/(1-|y|^2)) on the unit ball.
  double base_profile(const Point& y) const;

  double scale_l(const Point& u) const;
  Point grad_l(const Point& u) const;
  /// 1 + grad l(u) . (x - u) / l(u), the Jacobian factor divided by l(u)^{-d}.
  double jacobian_factor(const Point& x, const Point& u) const;
  double phi_u(const Point& x, const Point& u) const;

  /// Quadrature nodes covering every u whose ball meets the domain, with
  /// spacing step_factor * l(u).
  std::vector<UNode> u_quadrature(double step_factor = 0.125) const;

private:
  DomainGeometry geom_;
  double l0_;
  double norm_ = 1.0;
};

double scale_l(const Point& u, const LocalizationFamily& family);
double phi_u(const Point& x, const Point& u, const LocalizationFamily& family);

/// int phi_u(x)^2 l(u)^{-d} du on the adaptive u-grid with spacing step_factor * l(u).
double partition_check(const Point& x, const LocalizationFamily& family, double step_factor = 0.125);

struct ScalingFit {
  std::vector<double> l0;
  std::vector<double> values;
  double exponent = 0.0;
};

struct NeighborhoodReport {
  double a = 0.0;
  /// int over Omega \ U of l(u)^{-2} du, expected to scale like l0^{-1}.
  ScalingFit bulk;
  /// int over U of l(u)^a du, expected to scale like l0^{a+1}.
  ScalingFit layer;
};

NeighborhoodReport neighborhood_integrals(const DomainGeometry& geometry, double a = 0.0,
                                          const std::vector<double>& l0_values = {0.1, 0.05, 0.025},
                                          const QuadratureSpec& quad = {});

struct GradientReport {
  double max_phi = 0.0;
  /// max over samples of |grad phi_u| l(u).
  double max_scaled_gradient = 0.0;
  double max_grad_l = 0.0;
  double min_jacobian_factor = 0.0;
};

/// Sampled bounds |phi_u| <= C and |grad phi_u| <= C / l(u) via central differences.
GradientReport gradient_check(const LocalizationFamily& family, std::size_t samples = 200, unsigned seed = 7);

}  // namespace fraclap
