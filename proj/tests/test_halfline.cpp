#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fraclap/halfline.hpp"

using namespace fraclap;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("psi and its derivative") {
  for (double s : {0.25, 0.5, 0.75})
    for (double E : {0.3, 2.0, 50.0}) {
      CHECK(psi(E, s) == doctest::Approx(std::pow(E + 1.0, s) - 1.0).epsilon(1e-14));
      const double h = 1e-5;
      CHECK(psi_prime(E, s) == doctest::Approx((psi(E + h, s) - psi(E - h, s)) / (2 * h)).epsilon(1e-8));
    }
  CHECK(psi(0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(psi(-2.0, 0.5), DomainError);
}

TEST_CASE("phase shift limits and monotonicity") {
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(std::abs(theta(1e-6, s)) < 1e-4);
    CHECK(std::abs(theta(1e6, s) - kPi * (1.0 - s) / 4.0) < 1e-3);
    double prev = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double th = theta(std::pow(10.0, -3.0 + 6.0 * k / 39.0), s);
      CHECK(th >= prev);
      prev = th;
    }
  }
}

TEST_CASE("phase shift slope at zero") {
  const double s = 0.5, l = 1e-4;
  CHECK(theta(l, s) / l == doctest::Approx(dtheta_at_zero(s)).epsilon(1e-3));
}

TEST_CASE("model phase table reproduces direct evaluation") {
  for (double s : {0.3, 0.5, 0.75}) {
    const auto& m = model_for(s);
    for (double l : {0.01, 0.3, 1.0, 4.0, 70.0}) CHECK(m.theta(l) == doctest::Approx(theta(l, s)).epsilon(1e-8));
  }
}

TEST_CASE("eigenfunctions approach the shifted sine") {
  const auto& m = model_for(0.5);
  for (double l : {0.5, 2.0}) {
    const Mode md = m.mode(l);
    for (double x : {30.0, 41.0}) CHECK(m.F(md, x) == doctest::Approx(std::sin(l * x + md.theta)).epsilon(1e-8));
    CHECK(m.F(md, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(2e-3));
    CHECK(m.G(md, 0.0) > 0.0);
  }
}

TEST_CASE("Dirichlet model is the plain sine") {
  const auto m = HalfLineModel::dirichlet();
  CHECK(m.is_dirichlet());
  CHECK(m.F(1.3, 0.7) == doctest::Approx(std::sin(1.3 * 0.7)));
}

TEST_CASE("double Laplace transform of gamma matches the closed form") {
  // g(t) = int_1^inf gamma(xi) / (t + xi) dxi by direct quadrature of the density
  for (double s : {0.3, 0.7}) {
    const auto& m = model_for(s);
    for (double l : {0.5, 2.0}) {
      auto gam = m.gamma_at(l);
      for (double t : {0.3, 3.0}) {
        QuadratureSpec q;
        q.rel_tol = 1e-9;
        const double a = integrate([&](double xi) { return gam(xi) / (t + xi); }, 1.0, 2.0, q, Endpoints::singular_left).value;
        const double b = integrate([&](double xi) { return gam(xi) / (t + xi); }, 2.0, kInf, q).value;
        CHECK(a + b == doctest::Approx(g_closed(l, t, s)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("gamma readings differ and the density is nonnegative") {
  const double s = 0.5, l = 1.0;
  for (double xi : {1.1, 3.0, 30.0}) {
    const double a = gamma_density(l, xi, s, {}, GammaReading::shifted);
    CHECK(a >= 0.0);
    CHECK(a != doctest::Approx(gamma_density(l, xi, s, {}, GammaReading::plain)).scale(0.0));
    CHECK(model_for(s).gamma(l, xi) == doctest::Approx(a).epsilon(1e-7));
  }
  CHECK(gamma_density(l, 0.5, s) == 0.0);
}

TEST_CASE("line window a_line") {
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(a_line(0.9, s) == 0.0);
    const double mu = 3.0, L = std::sqrt(std::pow(mu, 1.0 / s) - 1.0);
    const double ref = integrate([&](double l) { return mu - std::pow(l * l + 1.0, s); }, 0.0, L).value / kPi;
    CHECK(a_line(mu, s) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(spectral_edge(mu, s) == doctest::Approx(L));
  }
}

TEST_CASE("transform is an isometry on test functions") {
  const auto& m = model_for(0.5);
  for (int n : {0, 1, 2})
    for (double beta : {0.5, 2.0}) {
      const double exact = std::tgamma(2.0 * n + 1.0) / std::pow(2.0 * beta, 2 * n + 1);
      CHECK(m.transform_norm_sq(n, beta) == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("projection kernel symmetry, density and limits") {
  const auto& m = model_for(0.5);
  const double mu = 2.0;
  CHECK(m.e_plus(0.4, 1.7, mu) == doctest::Approx(m.e_plus(1.7, 0.4, mu)).epsilon(1e-12));
  CHECK(m.e_plus(1.0, 1.0, 0.5) == 0.0);
  // deep inside, e+(t, t) tends to the line density Lambda/pi
  CHECK(m.e_plus(40.0, 40.0, mu) == doctest::Approx(spectral_edge(mu, 0.5) / kPi).epsilon(2e-2));
  // and a+ to the line value a_line
  CHECK(m.a_plus(40.0, mu) == doctest::Approx(a_line(mu, 0.5)).epsilon(2e-2));
  CHECK(m.e_plus(0.0, 0.0, mu) == doctest::Approx(0.0).scale(1.0).epsilon(1e-3));
}

TEST_CASE("boundary layer function decays and is finite") {
  const FractionalOrder o(0.5, 2);
  const double k0 = K_layer(1e-3, o);
  CHECK(std::isfinite(k0));
  CHECK(k0 > 0.0);
  CHECK(std::abs(K_layer(8.0, o)) < 1e-2 * k0);
  CHECK_THROWS_AS(K_layer(-1.0, o), DomainError);
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(FractionalOrder(0.0, 2), DomainError);
  CHECK_THROWS_AS(FractionalOrder(1.0, 2), DomainError);
  CHECK_THROWS_AS(FractionalOrder(0.5, 1), DomainError);
  CHECK_NOTHROW(FractionalOrder(0.5, 3));
}
