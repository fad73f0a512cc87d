#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fraclap/quadcore.hpp"

using namespace fraclap;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("gamma function") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.25, 20.0}) CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(-0.5), DomainError);
}

TEST_CASE("sphere area and ball volume") {
  CHECK(sphere_area(0) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2.0 * kPi));
  CHECK(sphere_area(2) == doctest::Approx(4.0 * kPi));
  CHECK(ball_volume(1) == doctest::Approx(2.0));
  CHECK(ball_volume(2) == doctest::Approx(kPi));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
  // |S^{n-1}| = n |B^n|
  for (int n = 1; n < 8; ++n) CHECK(sphere_area(n - 1) == doctest::Approx(n * ball_volume(n)).epsilon(1e-13));
}

TEST_CASE("integrate on finite and infinite ranges") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInf).value ==
        doctest::Approx(kPi / 2.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi).value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("integrate with endpoint singularities") {
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {}, Endpoints::singular_left);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  r = integrate([](double x) { return std::log(1.0 - x); }, 0.0, 1.0, {}, Endpoints::singular_right);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
  r = integrate([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, {}, Endpoints::singular_both);
  CHECK(r.value == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("integrate reports its error and fails loudly") {
  const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.err_estimate < 1e-10);
  CHECK(r.evaluations > 0);
  QuadratureSpec tiny;
  tiny.max_subdivisions = 1;
  tiny.rel_tol = 1e-14;
  tiny.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(200.0 * x) * std::sqrt(x); }, 0.0, 10.0, tiny),
                  NonConvergence);
  QuadratureSpec bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), NumericalError);
}

TEST_CASE("oscillatory tails") {
  // int_1^inf cos(x)/x dx = -Ci(1)
  const double ci1 = 0.3374039229009681;
  for (auto policy : {OscillatoryPolicy::closed_form_tail, OscillatoryPolicy::averaged_tail}) {
    QuadratureSpec q;
    q.oscillatory_policy = policy;
    const auto r = integrate_oscillatory([](double x) { return 1.0 / x; }, 1.0, 0.0, 1.0, q);
    CHECK(std::abs(r.value + ci1) <= r.err_estimate + 1e-9);
    if (policy == OscillatoryPolicy::closed_form_tail) CHECK(r.value == doctest::Approx(-ci1).epsilon(1e-8));
  }
  // int_0^inf e^{-x} cos(2x) dx = 1/5
  const auto r = integrate_oscillatory([](double x) { return std::exp(-x); }, 2.0, 0.0, 0.0);
  CHECK(r.value == doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("laplace transform") {
  CHECK(laplace([](double x) { return x; }, 2.0).value == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(laplace([](double x) { return std::sin(x); }, 1.0).value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(laplace([](double) { return 1.0; }, 0.0), DomainError);
}

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 12, 40}) {
    std::vector<double> x(n), w(n);
    gauss_legendre(n, x.data(), w.data());
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += w[i] * std::pow(x[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1.0);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("c_sd matches the Gaussian quadratic form") {
  // u = exp(-x^2/2) in one dimension: the Fourier side gives Gamma(s + 1/2),
  // the difference quotient side c int int (u(x) - u(y))^2 |x - y|^{-1-2s}.
  for (double s : {0.25, 0.5, 0.75}) {
    auto f = [s](double z) { return std::pow(z, -1.0 - 2.0 * s) * (-std::expm1(-z * z / 4.0)); };
    const double inner = integrate(f, 0.0, 1.0, {}, Endpoints::singular_left).value + integrate(f, 1.0, kInf).value;
    const double form = c_sd(s, 1) * 2.0 * 2.0 * std::sqrt(kPi) * inner;
    CHECK(form == doctest::Approx(std::tgamma(s + 0.5)).epsilon(1e-8));
  }
  // value in two dimensions at s = 1/2 is 1/(4 pi)
  CHECK(c_sd(0.5, 2) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-13));
}
