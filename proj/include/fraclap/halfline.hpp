#pragma once

// Model operators A = (-d^2/dt^2 + 1)^s on the line and A+ on the half-line,
// expressed through the generalized eigenfunctions
//   F_l(x) = sin(l x + theta_l) - G_l(x),   G_l(x) = int_1^inf e^{-x xi} gamma_l(xi) dxi.

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <vector>

#include "fraclap/quadcore.hpp"

namespace fraclap {

struct FractionalOrder {
  double s = 0.5;
  int d = 2;
  FractionalOrder() = default;
  FractionalOrder(double s_, int d_);
  void validate() const;
};

struct KernelValue {
  double t = 0.0;
  double u = 0.0;
  double mu = 0.0;
  double value = 0.0;
};

/// Raised by xi_shift when doubling the truncation moves the value by more than the tolerance.
class TruncationUnstable : public NumericalError {
public:
  TruncationUnstable(const std::string& what, double value, double delta)
      : NumericalError(what), value_(value), delta_(delta) {}
  double value() const noexcept { return value_; }
  double delta() const noexcept { return delta_; }

private:
  double value_;
  double delta_;
};

/// Candidate readings of the denominator of gamma_l(xi). With P = psi(l^2),
/// b = (xi^2 - 1)^s and c = cos(pi s):
///   shifted: (P+1)^2 + b^2 - 2 (P+1) b c   (|psi(l^2) - psi(-xi^2)|^2)
///   plain:   P^2 + b^2 - 2 P b c
///   literal: P^2 + b - 2 P (xi^2 - 1) c
enum class GammaReading { shifted, plain, literal };

const char* to_string(GammaReading r);

double psi(double E, double s);
double psi_prime(double E, double s);

/// ln of the divided difference (psi(a) - psi(b)) / (a - b), stable for
/// nearby and widely separated arguments alike (a, b > -1).
double log_divided_difference(double a, double b, double s);

/// ln(psi'(l^2) (l^2 - z^2) / (psi(l^2) - psi(z^2))).
double log_ratio_L(double lambda, double zeta, double s);

/// ln(l^2 psi'(l^2) / psi(l^2)); ln psi_l(z^2) = log_ratio_L - c_l.
double c_lambda(double lambda, double s);

/// Phase shift via the substituted z-form on (0, 1).
double theta(double lambda, double s, const QuadratureSpec& quad = {});

/// Limit of d theta / d lambda at lambda = 0.
double dtheta_at_zero(double s, const QuadratureSpec& quad = {});

/// Eigenfunction density by direct quadrature of its exponent integral.
double gamma_density(double lambda, double xi, double s, const QuadratureSpec& quad = {},
                     GammaReading reading = GammaReading::shifted);

/// Algebraic factor of gamma_l(xi) in front of the exponential, given ln(xi^2 - 1).
double gamma_prefactor(double lambda, double log_xi2m1, double s, GammaReading reading);

double phi_fn(double lambda, double t, double s, const QuadratureSpec& quad = {});

/// phi_l'(0) = (1/pi) int_0^inf ln psi_l(z^2) / z^2 dz.
double phi_prime_at_zero(double lambda, double s, const QuadratureSpec& quad = {});

/// Closed form of the double Laplace transform of gamma_l.
double g_closed(double lambda, double t, double s, const QuadratureSpec& quad = {});

/// (1/pi) int_0^inf (mu - (l^2 + 1)^s)_+ dl; exactly 0 for mu <= 1.
double a_line(double mu, double s, const QuadratureSpec& quad = {});

/// Lambda(mu) = sqrt(mu^{1/s} - 1), the top of the spectral window.
double spectral_edge(double mu, double s);

/// Per-lambda data: phase shift and the quadrature weights c_i of G_l on the
/// model's xi nodes, so that G_l(x) = sum_i c_i exp(-x xi_i).
struct Mode {
  double lambda = 0.0;
  double theta = 0.0;
  Eigen::VectorXd c;
};

struct XiShiftResult {
  double value = 0.0;
  double truncation = 0.0;
  double doubling_delta = 0.0;
};

class HalfLineModel {
public:
  explicit HalfLineModel(double s, const QuadratureSpec& quad = {}, GammaReading reading = GammaReading::shifted);

  /// The Dirichlet Laplacian on the half-line: F_l = sin(l x), s = 1.
  static HalfLineModel dirichlet(const QuadratureSpec& quad = {});

  double s() const { return s_; }
  bool is_dirichlet() const { return dirichlet_; }
  GammaReading reading() const { return reading_; }
  const QuadratureSpec& quad() const { return quad_; }
  const Eigen::VectorXd& xi_nodes() const { return xi_; }

  double theta(double lambda) const;

  /// gamma_l(xi) through the cached log-trapezoid exponent integral.
  double gamma(double lambda, double xi) const;
  /// gamma_l as a function of xi with the per-lambda tables built once.
  RealFn gamma_at(double lambda) const;

  Mode mode(double lambda) const;
  double G(const Mode& m, double x) const;
  double F(const Mode& m, double x) const;
  double F(double lambda, double x) const;

  /// Abel-regularized int_0^inf (1 - 2 F_l(t)^2) dt, excluding the point mass
  /// at l = 0 which callers add as (pi/4) times their weight at l = 0.
  double J_reg(const Mode& m) const;
  double J_reg(double lambda) const;

  /// Abel-regularized int_tau0^inf (1 - 2 F_l(t)^2) dt with the same convention.
  double J_tail(const Mode& m, double tau0) const;
  /// The part of J_tail carried by G (everything except the cosine term).
  double J_tail_G(const Mode& m, double tau0) const;

  double e_plus(double t, double u, double mu) const;
  double a_plus(double t, double mu) const;

  /// Boundary-layer function K(t) for dimension d.
  double K(double t, int d) const;

  double zeta(double mu) const;
  XiShiftResult xi_shift(double mu, double truncation = 40.0, double tol = 1e-3) const;

  /// Plancherel norm squared of f(x) = x^n exp(-beta x) under the eigenfunction transform.
  double transform_norm_sq(int n, double beta) const;

private:
  HalfLineModel() = default;
  void build_grids();
  void build_theta_table();
  Eigen::VectorXd log_ratio_on_zeta(double lambda) const;

  double s_ = 0.5;
  bool dirichlet_ = false;
  GammaReading reading_ = GammaReading::shifted;
  QuadratureSpec quad_;

  // xi nodes xi_i = 1 + exp(y_i) with trapezoid weights.
  Eigen::VectorXd xi_, xi_w_, xi_logm1_;
  // zeta nodes on a log grid with trapezoid weights.
  Eigen::VectorXd zeta_, zeta_logv_;
  double zeta_h_ = 0.25;
  // kernel (1/pi) xi z/(xi^2 + z^2) h, rows = xi nodes.
  Eigen::MatrixXd expo_kernel_;
  // 1/(xi_i + xi_j)
  Eigen::MatrixXd hilbert_;

  std::vector<double> tab_x_, tab_y_, tab_m_;

  // (rho, theta) product grid for K(t).
  std::vector<double> kt_theta_, kt_wtheta_, kt_rho_, kt_wrho_;
  std::vector<Mode> kt_modes_;
};

/// Per-thread cached model for the given order and reading.
const HalfLineModel& model_for(double s, GammaReading reading = GammaReading::shifted);

double eigenfunction_F(double lambda, double x, double s);
double kernel_e_plus(double t, double u, double mu, double s);
double kernel_a_plus(double t, double mu, double s);
double K_layer(double t, const FractionalOrder& order);
double zeta_shift(double mu, double s);
XiShiftResult xi_shift(double mu, double s, double truncation = 40.0, double tol = 1e-3);

}  // namespace fraclap
