#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclap/constants.hpp"

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

// (2 pi)^{-d} |S^{d-1}| int_0^1 r^{d-1} (1 - r^{2s}) dr
double L1_radial(double s, int d) {
  return std::pow(2.0 * kPi, -d) * sphere_area(d - 1) * (1.0 / d - 1.0 / (d + 2.0 * s));
}

// Boundary constant of the Dirichlet Laplacian: one quarter of the
// first-moment semiclassical constant in one dimension less.
double laplacian_boundary(int d) {
  const double n = d - 1.0;
  return 0.25 / (std::pow(4.0 * kPi, n / 2.0) * std::tgamma(2.0 + n / 2.0));
}

// Riesz mean of a brute-force sequence with sum_{k<=N} l_k = A N^{a+1}, fitted by C L^{(1+a)/a}.
double brute_force_C(double A, double a) {
  std::vector<double> lam;
  for (int k = 1; k <= 2000000; ++k) lam.push_back(A * (std::pow(k, a + 1.0) - std::pow(k - 1.0, a + 1.0)));
  const double p = (1.0 + a) / a;
  double num = 0.0, den = 0.0;
  for (double L : {0.25 * lam.back(), 0.5 * lam.back(), 0.9 * lam.back()}) {
    double r = 0.0;
    for (double l : lam) {
      if (l >= L) break;
      r += L - l;
    }
    const double x = std::pow(L, p);
    num += r * x;
    den += x * x;
  }
  return num / den;
}

}  // namespace

TEST_CASE("L1 closed form against the radial integral") {
  for (double s : {0.25, 0.5, 0.75})
    for (int d : {2, 3, 4}) CHECK(L1(FractionalOrder(s, d)) == doctest::Approx(L1_radial(s, d)).epsilon(1e-13));
  CHECK(L1(FractionalOrder(0.5, 2)) == doctest::Approx(1.0 / (12.0 * kPi)).epsilon(1e-13));
  CHECK(weyl_L1(0.5, 1) == doctest::Approx(L1_radial(0.5, 1)).epsilon(1e-13));
}

TEST_CASE("L1 by nested quadrature") {
  for (auto o : {FractionalOrder(0.5, 2), FractionalOrder(0.25, 3)}) {
    const RouteValue r = L1_quadrature(o);
    CHECK(r.value == doctest::Approx(L1(o)).epsilon(1e-8));
    CHECK(r.err_estimate < 1e-8);
  }
}

TEST_CASE("Laplacian boundary constant through the K machinery") {
  for (int d : {2, 3}) {
    const RouteValue r = L2_laplacian(d);
    CHECK(r.value == doctest::Approx(laplacian_boundary(d)).epsilon(1e-8));
  }
}

TEST_CASE("boundary constant routes agree") {
  const FractionalOrder o(0.5, 3);
  const RouteValue k = L2_via_K(o);
  const RouteValue e = L2_via_eigenfunctions(o);
  CHECK(k.value == doctest::Approx(e.value).epsilon(1e-7));
  CHECK(k.value > 0.0);
  const RouteValue z = L2_via_zeta(o);
  CHECK(z.value == doctest::Approx(e.value).epsilon(1e-4));
  // the K route split into its pieces adds up
  const KRouteParts p = L2_via_K_parts(o);
  CHECK(p.body + p.point_mass + p.tail == doctest::Approx(k.value).epsilon(1e-14));
}

TEST_CASE("boundary constant is independent of the split point") {
  const FractionalOrder o(0.5, 3);
  CHECK(L2_via_K(o, {}, 6.0).value == doctest::Approx(L2_via_K(o, {}, 10.0).value).epsilon(1e-7));
}

TEST_CASE("comparison with the Dirichlet power") {
  for (auto o : {FractionalOrder(0.5, 2), FractionalOrder(0.75, 2), FractionalOrder(0.25, 3)}) {
    const RouteValue t = L2_dirichlet_power(o);
    const RouteValue e = L2_via_eigenfunctions(o);
    CHECK(e.value > 0.0);
    CHECK(t.value - e.value > t.err_estimate + e.err_estimate);
    // tilde-L2 = s (d+1)/(d-1+2s) L2 of the Laplacian
    const int d = o.d;
    CHECK(t.value == doctest::Approx(o.s * (d + 1.0) / (d - 1.0 + 2.0 * o.s) * laplacian_boundary(d)).epsilon(1e-7));
  }
}

TEST_CASE("weyl_coefficients bundles the routes") {
  const FractionalOrder o(0.5, 3);
  const auto w = weyl_coefficients(o, {}, L2Route::eigenfunction_form);
  CHECK(w.L2_route == L2Route::eigenfunction_form);
  CHECK(w.L1 == doctest::Approx(L1(o)));
  CHECK(w.L2 == doctest::Approx(L2_via_eigenfunctions(o).value));
  CHECK(w.L2 < w.L2_tilde);
  CHECK(std::string(to_string(L2Route::zeta_integral)) == "zeta_integral");
}

TEST_CASE("Cesaro and Riesz coefficients") {
  auto r = cesaro_riesz_convert(1.0, 0.0, 1.0, 0.0);
  CHECK(r.C == doctest::Approx(0.25));
  CHECK(r.D == 0.0);
  for (double a : {0.4, 1.0, 1.5}) {
    const double b = a - 0.5;
    const auto f = cesaro_riesz_convert(2.0, -0.7, a, b);
    const auto g = riesz_cesaro_convert(f.C, f.D, a, b);
    CHECK(g.A == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.B == doctest::Approx(-0.7).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cesaro_riesz_convert(1.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(cesaro_riesz_convert(1.0, 1.0, 1.0, -0.5), DomainError);
  CHECK_THROWS_AS(cesaro_riesz_convert(-1.0, 0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(riesz_cesaro_convert(0.0, 0.0, 1.0, 0.5), DomainError);
}

TEST_CASE("conversion against a brute-force sequence") {
  for (auto [A, a] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.8}}) {
    const auto r = cesaro_riesz_convert(A, 0.0, a, a - 0.5);
    CHECK(brute_force_C(A, a) == doctest::Approx(r.C).epsilon(5e-3));
  }
}

TEST_CASE("eigenvalue sum coefficients") {
  const FractionalOrder o(0.5, 2);
  WeylCoefficients w;
  w.order = o;
  w.L1 = L1(o);
  w.L2 = 1.0 / (4.0 * kPi * kPi);
  const double vol = 2.0, surf = 6.0;
  const auto ec = eigenvalue_sum_coefficients(w, vol, surf);
  const double a = cesaro_exponent_a(o), b = cesaro_exponent_b(o);
  CHECK(a == doctest::Approx(0.5));
  CHECK(b == doctest::Approx(0.0));
  const auto rc = riesz_cesaro_convert(w.L1 * vol, w.L2 * surf, a, b);
  CHECK(ec.C1 * std::pow(vol, -a) == doctest::Approx(rc.A).epsilon(1e-13));
  CHECK(ec.C2 * surf * std::pow(vol, -(o.d - 1.0 + 2.0 * o.s) / o.d) == doctest::Approx(rc.B).epsilon(1e-13));
  CHECK(ec.leading_eigenvalue_factor == doctest::Approx((o.d + 2.0 * o.s) / o.d * ec.C1));
  CHECK_THROWS_AS(eigenvalue_sum_coefficients(w, -1.0, 1.0), DomainError);
}
