#pragma once

// Semiclassical coefficients of (-h^2 Delta)^s on a domain:
//   sum_n (1 - h^{2s} lambda_n)_+ = L1 |Omega| h^{-d} - L2 |dOmega| h^{1-d} + ...
// and the conversion to Cesaro means of the eigenvalues.

#include "fraclap/halfline.hpp"
#include "fraclap/quadcore.hpp"

namespace fraclap {

enum class L2Route { K_integral, eigenfunction_form, zeta_integral };

const char* to_string(L2Route r);

struct RouteValue {
  double value = 0.0;
  double err_estimate = 0.0;
};

struct WeylCoefficients {
  FractionalOrder order;
  double L1 = 0.0;
  double L2 = 0.0;
  L2Route L2_route = L2Route::K_integral;
  double L2_tilde = 0.0;
  double L1_err = 0.0;
  double L2_err = 0.0;
  double L2_tilde_err = 0.0;
};

/// Sum-side (A, B, a, b) and Riesz-side (C, D) of
///   sum_{k<=N} l_k = A N^{a+1} + B N^{b+1},  sum_k (L - l_k)_+ = C L^{(1+a)/a} - D L^{(1+b)/a}.
struct RieszCoefficients {
  double A = 0.0, B = 0.0, a = 0.0, b = 0.0;
  double C = 0.0, D = 0.0;
};

double L1(const FractionalOrder& order);
/// Same closed form for any dimension d >= 1 (the lattice checks use d = 1).
double weyl_L1(double s, int d);

/// (2 pi)^{-d} int (1 - |p|^{2s})_+ dp by nested quadrature over the coordinates.
RouteValue L1_quadrature(const FractionalOrder& order, const QuadratureSpec& quad = {});

/// int_0^T K(t) dt plus the tail beyond T in closed and semi-closed form.
RouteValue L2_via_K(const FractionalOrder& order, const QuadratureSpec& quad = {}, double cutoff = 8.0);

struct KRouteParts {
  double cutoff = 0.0;
  double body = 0.0;        // int_0^T K(t) dt
  double point_mass = 0.0;  // contribution of lambda = 0
  double tail = 0.0;        // everything beyond T
  RouteValue total;
};

/// The pieces summed by L2_via_K.
KRouteParts L2_via_K_parts(const FractionalOrder& order, const QuadratureSpec& quad = {}, double cutoff = 8.0);

/// Spectral form with the cosine part of the t-integral done analytically.
RouteValue L2_via_eigenfunctions(const FractionalOrder& order, const QuadratureSpec& quad = {});

/// c_d int_0^1 r^{d-2} zeta(r^{-2s}) dr with zeta the half-line spectral shift.
RouteValue L2_via_zeta(const FractionalOrder& order, const QuadratureSpec& quad = {});

/// L2 of the half-line Dirichlet Laplacian (s = 1) through the K machinery.
RouteValue L2_laplacian(int d, const QuadratureSpec& quad = {}, double cutoff = 8.0);

/// Boundary constant of the s-th power of the Dirichlet Laplacian.
RouteValue L2_dirichlet_power(const FractionalOrder& order, const QuadratureSpec& quad = {});

WeylCoefficients weyl_coefficients(const FractionalOrder& order, const QuadratureSpec& quad = {},
                                   L2Route route = L2Route::K_integral);

/// Throws DomainError unless A > 0, 0 < a, b < a and, when B != 0, a - 1 < b.
RieszCoefficients cesaro_riesz_convert(double A, double B, double a, double b);

/// Inverse of cesaro_riesz_convert with the same exponent conditions.
RieszCoefficients riesz_cesaro_convert(double C, double D, double a, double b);

/// Exponents of the eigenvalue sums: a = 2s/d, b = (2s-1)/d.
double cesaro_exponent_a(const FractionalOrder& order);
double cesaro_exponent_b(const FractionalOrder& order);

struct EigenvalueSumCoefficients {
  double C1 = 0.0;
  double C2 = 0.0;
  /// lambda_N ~ (d + 2s)/d * C1 |Omega|^{-2s/d} N^{2s/d}.
  double leading_eigenvalue_factor = 0.0;
};

/// Coefficients of N^{-1} sum_{n<=N} lambda_n = C1 |Omega|^{-2s/d} N^{2s/d}
///   + C2 |dOmega| |Omega|^{-(d-1+2s)/d} N^{(2s-1)/d}.
EigenvalueSumCoefficients eigenvalue_sum_coefficients(const WeylCoefficients& w, double volume, double surface);
EigenvalueSumCoefficients eigenvalue_sum_coefficients(const FractionalOrder& order, double volume, double surface,
                                                      const QuadratureSpec& quad = {});

}  // namespace fraclap
