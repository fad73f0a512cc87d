#pragma once

// Deterministic numerical kernels shared by every other module: special
// functions, adaptive Gauss-Kronrod quadrature on finite and half-infinite
// intervals, oscillatory tails and numeric Laplace transforms.

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace fraclap {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Base class for numerical failures (exit code 3 in the CLI).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergence : public NumericalError {
public:
  NonConvergence(const std::string& what, double value, double err)
      : NumericalError(what), value_(value), err_(err) {}
  double value() const noexcept { return value_; }
  double err_estimate() const noexcept { return err_; }

private:
  double value_;
  double err_;
};

enum class OscillatoryPolicy { none, closed_form_tail, averaged_tail };

/// Behaviour of the integrand at the ends of a finite interval. Singular ends
/// are removed with a polynomial change of variables before bisection.
enum class Endpoints { regular, singular_left, singular_right, singular_both };

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  std::size_t max_subdivisions = 2000;
  OscillatoryPolicy oscillatory_policy = OscillatoryPolicy::closed_form_tail;

  /// Throws DomainError unless rel_tol > 0, abs_tol >= 0 and max_subdivisions >= 1.
  void validate() const;
  QuadratureSpec tightened(double factor) const;
};

struct IntegralResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
};

using RealFn = std::function<double(double)>;

double gamma_fn(double x);

/// Surface measure |S^n| of the unit sphere in R^{n+1}.
double sphere_area(int n);

/// Volume of the unit ball in R^n.
double ball_volume(int n);

/// Constant of the Gagliardo form of (-Delta)^s in R^d.
double c_sd(double s, int d);

/// Adaptive 21-point Gauss-Kronrod quadrature of f over [a, b]. `b` may be
/// +infinity, in which case the tail beyond max(a, 0) + 1 is mapped to (0, 1]
/// by x = c/u. Throws NonConvergence when the subdivision budget is exhausted.
IntegralResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {},
                         Endpoints ends = Endpoints::regular);

/// Integral of envelope(t) * cos(omega t + phase) over [a, infinity). The
/// envelope must be slowly varying and decay at infinity. The integral is
/// taken exactly up to a cut-off and the remaining tail follows the
/// oscillatory policy: closed_form_tail integrates cos against the envelope by
/// parts (three terms); averaged_tail Cesaro-averages the running integral over
/// one period.
IntegralResult integrate_oscillatory(const RealFn& envelope, double omega, double phase, double a,
                                     const QuadratureSpec& spec = {});

/// Laplace transform of f at t > 0.
IntegralResult laplace(const RealFn& f, double t, const QuadratureSpec& spec = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace fraclap
