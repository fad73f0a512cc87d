#include "fraclap/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void check_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0, 1)");
}

// Sum of integrals over consecutive pieces [p_k, p_{k+1}], the last one may be infinite.
double piecewise(const RealFn& f, std::vector<double> points, const QuadratureSpec& quad) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) total += integrate(f, points[k], points[k + 1], quad).value;
  return total;
}

}  // namespace

FractionalOrder::FractionalOrder(double s_, int d_) : s(s_), d(d_) { validate(); }

void FractionalOrder::validate() const {
  check_s(s);
  if (d < 2) throw DomainError("dimension d must be at least 2");
}

const char* to_string(GammaReading r) {
  switch (r) {
    case GammaReading::shifted: return "shifted";
    case GammaReading::plain: return "plain";
    case GammaReading::literal: return "literal";
  }
  return "?";
}

double psi(double E, double s) {
  if (E < 0.0) throw DomainError("psi: E must be non-negative");
  return std::expm1(s * std::log1p(E));
}

double psi_prime(double E, double s) { return s * std::exp((s - 1.0) * std::log1p(E)); }

double log_divided_difference(double a, double b, double s) {
  const double hi_arg = std::max(a, b), lo_arg = std::min(a, b);
  const double hi = 1.0 + hi_arg, lo = 1.0 + lo_arg;
  const double r = lo / hi;
  if (r > 0.5) {
    const double x = (lo_arg - hi_arg) / hi;
    double dd;
    if (std::abs(x) < 1e-5)
      dd = s * (1.0 + (s - 1.0) * x / 2.0 + (s - 1.0) * (s - 2.0) * x * x / 6.0);
    else
      dd = std::expm1(s * std::log1p(x)) / x;
    return (s - 1.0) * std::log(hi) + std::log(dd);
  }
  return (s - 1.0) * std::log(hi) + std::log(-std::expm1(s * std::log(r))) - std::log1p(-r);
}

double log_ratio_L(double lambda, double zeta, double s) {
  const double l2 = lambda * lambda;
  return std::log(psi_prime(l2, s)) - log_divided_difference(l2, zeta * zeta, s);
}

double c_lambda(double lambda, double s) {
  const double l2 = lambda * lambda;
  return std::log(psi_prime(l2, s)) - log_divided_difference(l2, 0.0, s);
}

double theta(double lambda, double s, const QuadratureSpec& quad) {
  check_s(s);
  if (!(lambda > 0.0)) throw DomainError("theta: lambda must be positive");
  const double l2 = lambda * lambda;
  auto f = [l2, s](double z) {
    z = std::max(z, 1e-150);
    const double z2 = z * z;
    const double num = log_divided_difference(l2, l2 * z2, s) - log_divided_difference(l2 / z2, l2, s);
    return num / ((1.0 - z) * (1.0 + z));
  };
  return integrate(f, 0.0, 1.0, quad, Endpoints::singular_left).value / kPi;
}

double dtheta_at_zero(double s, const QuadratureSpec& quad) {
  check_s(s);
  const double ls = std::log(s);
  auto f = [ls, s](double z) {
    const double z2 = z * z;
    if (z < 1e-3) return 0.5 * (1.0 - s) - (s - 1.0) * (s - 5.0) * z2 / 24.0;
    return (ls - log_divided_difference(z2, 0.0, s)) / z2;
  };
  return (integrate(f, 0.0, 1.0, quad).value + integrate(f, 1.0, kInf, quad).value) / kPi;
}

double gamma_density(double lambda, double xi, double s, const QuadratureSpec& quad, GammaReading reading) {
  check_s(s);
  if (!(lambda > 0.0)) throw DomainError("gamma_density: lambda must be positive");
  if (!(xi > 0.0)) throw DomainError("gamma_density: xi must be positive");
  if (xi < 1.0) return 0.0;
  const double pref = gamma_prefactor(lambda, std::log((xi - 1.0) * (xi + 1.0)), s, reading);
  if (pref == 0.0) return 0.0;
  auto f = [=](double z) { return xi / (xi * xi + z * z) * log_ratio_L(lambda, z, s); };
  const double expo = -piecewise(f, {0.0, std::min(lambda, xi), std::max(lambda, xi), kInf}, quad) / kPi;
  return pref * std::exp(expo);
}

double gamma_prefactor(double lambda, double log_xi2m1, double s, GammaReading reading) {
  const double l2 = lambda * lambda;
  const double P = psi(l2, s);
  const double b = std::exp(s * log_xi2m1);
  if (b == 0.0) return 0.0;
  const double sh = std::sin(0.5 * kPi * s);
  double den = 0.0;
  switch (reading) {
    case GammaReading::shifted: {
      const double Q = P + 1.0;
      den = (Q - b) * (Q - b) + 4.0 * Q * b * sh * sh;
      break;
    }
    case GammaReading::plain:
      den = (P - b) * (P - b) + 4.0 * P * b * sh * sh;
      break;
    case GammaReading::literal:
      den = P * P + b - 2.0 * P * std::exp(log_xi2m1) * std::cos(kPi * s);
      break;
  }
  return lambda * psi_prime(l2, s) * std::sin(kPi * s) * b / (kPi * den);
}

double phi_fn(double lambda, double t, double s, const QuadratureSpec& quad) {
  check_s(s);
  if (!(lambda > 0.0)) throw DomainError("phi_fn: lambda must be positive");
  if (t < 0.0) throw DomainError("phi_fn: t must be non-negative");
  if (t == 0.0) return 1.0;
  const double cl = c_lambda(lambda, s);
  auto f = [=](double z) { return t / (t * t + z * z) * (log_ratio_L(lambda, z, s) - cl); };
  return std::exp(piecewise(f, {0.0, std::min(lambda, t), std::max(lambda, t), kInf}, quad) / kPi);
}

double phi_prime_at_zero(double lambda, double s, const QuadratureSpec& quad) {
  check_s(s);
  const double cl = c_lambda(lambda, s);
  const double l2 = lambda * lambda;
  const double slope = s / psi(l2, s) - 1.0 / l2;
  auto f = [=](double z) {
    if (z < 1e-4 * std::min(lambda, 1.0)) return slope;
    return (log_ratio_L(lambda, z, s) - cl) / (z * z);
  };
  return piecewise(f, {0.0, std::min(lambda, 1.0), std::max(lambda, 1.0), kInf}, quad) / kPi;
}

double g_closed(double lambda, double t, double s, const QuadratureSpec& quad) {
  check_s(s);
  if (!(lambda > 0.0)) throw DomainError("g_closed: lambda must be positive");
  if (t < 0.0) throw DomainError("g_closed: t must be non-negative");
  const double l2 = lambda * lambda;
  const double th = theta(lambda, s, quad);
  const double root = std::exp(0.5 * (std::log(psi_prime(l2, s)) - std::log(psi(l2, s))));
  const double phi = phi_fn(lambda, t, s, quad);
  return (lambda * std::cos(th) + t * std::sin(th)) / (l2 + t * t) - l2 * root * phi / (l2 + t * t);
}

double spectral_edge(double mu, double s) {
  if (mu <= 1.0) return 0.0;
  return std::sqrt(std::expm1(std::log(mu) / s));
}

double a_line(double mu, double s, const QuadratureSpec& quad) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("a_line: s must lie in (0, 1]");
  if (mu <= 1.0) return 0.0;
  const double L = spectral_edge(mu, s);
  // l = L sin(phi) resolves the edge of the spectral window.
  auto f = [=](double ph) {
    const double l = L * std::sin(ph);
    return (mu - std::pow(l * l + 1.0, s)) * L * std::cos(ph);
  };
  return integrate(f, 0.0, 0.5 * kPi, quad).value / kPi;
}

}  // namespace fraclap
