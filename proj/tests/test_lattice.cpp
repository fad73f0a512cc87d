#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclap/constants.hpp"
#include "fraclap/lattice.hpp"
#include "fraclap/localization.hpp"

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

std::vector<double> bump_on_box(int dim, int N, double spacing, double width) {
  std::vector<double> phi(dim == 2 ? N * N : N);
  const double c = 0.5 * N * spacing;
  for (int j = 0; j < (dim == 2 ? N : 1); ++j)
    for (int i = 0; i < N; ++i) {
      const double x = i * spacing - c, y = dim == 2 ? j * spacing - c : 0.0;
      phi[i + N * j] = std::exp(-(x * x + y * y) / (2.0 * width * width));
    }
  return phi;
}

}  // namespace

TEST_CASE("domain factories") {
  const auto sq = LatticeDomain::unit_square(12);
  CHECK(sq.size() == 144);
  CHECK(sq.box_points == 36);
  CHECK(sq.volume() == doctest::Approx(1.0));
  CHECK(sq.surface() == doctest::Approx(4.0));
  const auto p0 = sq.position(0);
  CHECK(p0[0] == doctest::Approx(0.5 / 12.0));
  CHECK_NOTHROW(sq.validate());
  const auto iv = LatticeDomain::interval(10, 0.1);
  CHECK(iv.size() == 10);
  CHECK(iv.volume() == doctest::Approx(1.0));
  const auto dk = LatticeDomain::disk(8.0, 1.0 / 8.0);
  CHECK(dk.volume() == doctest::Approx(kPi).epsilon(0.05));
  CHECK_THROWS_AS(LatticeDomain::interval(10, 0.1, 2), DomainError);
}

TEST_CASE("lattice symbol") {
  CHECK(lattice_symbol({0, 0}, 2, 16, 0.1) == 0.0);
  CHECK(lattice_symbol({8, 0}, 1, 16, 0.1) == doctest::Approx(400.0));
  CHECK(lattice_symbol({3, 5}, 2, 16, 1.0) == doctest::Approx(lattice_symbol({3, 0}, 1, 16, 1.0) +
                                                              lattice_symbol({5, 0}, 1, 16, 1.0)));
}

TEST_CASE("1D Dirichlet Laplacian has the sine spectrum") {
  const int m = 20;
  const double dx = 1.0 / m;
  const auto dom = LatticeDomain::interval(m, dx);
  const auto spec = eigenvalues_sym(build_dirichlet_laplacian(dom));
  for (int j = 1; j <= m; ++j)
    CHECK(spec.eigenvalues[j - 1] == doctest::Approx((2.0 - 2.0 * std::cos(j * kPi / (m + 1))) / (dx * dx)).epsilon(1e-12));
}

TEST_CASE("first power and s = 1 restriction reproduce the stencil") {
  const auto dom = LatticeDomain::unit_square(6);
  const auto lap = build_dirichlet_laplacian(dom);
  CHECK((build_dirichlet_power(dom, 1.0).entries - lap.entries).cwiseAbs().maxCoeff() < 1e-9 * lap.norm());
  CHECK((build_restricted_fractional(dom, 1.0).entries - lap.entries).cwiseAbs().maxCoeff() < 1e-9 * lap.norm());
}

TEST_CASE("operators are symmetric and positive") {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto dom = LatticeDomain::disk(5.0, 0.2);
    for (const auto& op : {build_restricted_fractional(dom, s), build_dirichlet_power(dom, s)}) {
      CHECK(op.asymmetry() <= 1e-12 * op.norm());
      CHECK(min_eig(op.entries) >= -1e-10 * op.norm());
    }
  }
}

TEST_CASE("eigensolver agrees with an independent solver") {
  const auto dom = LatticeDomain::unit_square(10);
  const auto op = build_restricted_fractional(dom, 0.5);
  const auto spec = eigenvalues_sym(op);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.entries, Eigen::EigenvaluesOnly).eigenvalues();
  for (Eigen::Index k = 0; k < ref.size(); ++k) CHECK(spec.eigenvalues[k] == doctest::Approx(ref[k]).epsilon(1e-10));
  CHECK(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
  CHECK(spec.residual_norm <= 1e-8 * op.norm());
  CHECK_THROWS_AS(eigenvalues_sym(op, 50), SolverError);
  const auto ed = eigen_decompose(op);
  CHECK((op.entries * ed.vectors.col(3) - ed.values[3] * ed.vectors.col(3)).norm() < 1e-8 * op.norm());
}

TEST_CASE("eigenvalues decrease when the mask grows") {
  auto small = LatticeDomain::interval(24, 1.0 / 24, 4);
  auto big = small;
  big.mask.push_back({big.mask.back()[0] + 1, 0});
  big.recount_boundary();
  const auto a = eigenvalues_sym(build_restricted_fractional(small, 0.5)).eigenvalues;
  const auto b = eigenvalues_sym(build_restricted_fractional(big, 0.5)).eigenvalues;
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] <= a[k] * (1.0 + 1e-12));
}

TEST_CASE("riesz mean") {
  SpectrumResult sp;
  sp.eigenvalues = {1.0, 4.0, 9.0};
  CHECK(riesz_mean(sp, 0.25, 1.0) == doctest::Approx((1 - 1.0 / 16) + (1 - 4.0 / 16) + (1 - 9.0 / 16)));
  CHECK(riesz_mean(sp, 1.0, 1.0) == 0.0);
  const auto spec = eigenvalues_sym(build_restricted_fractional(LatticeDomain::interval(40, 1.0 / 40), 0.5));
  double prev = 1e300;
  for (double h = 0.01; h < 0.5; h *= 1.1) {
    const double r = riesz_mean(spec, h, 0.5);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("two-term fit recovers exact data") {
  std::vector<std::pair<double, double>> samples;
  for (double h : {0.05, 0.08, 0.1, 0.15, 0.2}) samples.emplace_back(h, 3.0 / (h * h) - 0.7 / h);
  const auto fit = two_term_fit(samples, 2);
  CHECK(fit.c0 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.c1 == doctest::Approx(-0.7).epsilon(1e-10));
  CHECK(fit.rms_residual < 1e-9);
  samples.resize(3);
  CHECK_THROWS_AS(two_term_fit(samples, 2), DomainError);
  std::vector<std::pair<double, double>> narrow{{0.1, 1}, {0.12, 1}, {0.15, 1}, {0.2, 1}};
  CHECK_THROWS_AS(two_term_fit(narrow, 2), DomainError);
}

TEST_CASE("Berezin bound") {
  const auto dom = LatticeDomain::interval(48, 1.0 / 48);
  const std::vector<double> one(dom.size(), 1.0), zero(dom.size(), 0.0);
  for (double s : {0.25, 0.5, 0.75}) {
    double prev = 2.0;
    for (double h : {0.2, 0.1, 0.05}) {
      const auto a = berezin_bound_check(dom, s, one, h);
      CHECK(a.holds);
      CHECK(a.lhs > 0.0);
      CHECK(a.slack == doctest::Approx(a.rhs - a.lhs));
      // relative slack shrinks as h decreases
      CHECK(a.slack / a.rhs < prev);
      prev = a.slack / a.rhs;
    }
    const auto z = berezin_bound_check(dom, s, zero, 0.1);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.holds);
  }
  const auto sq = LatticeDomain::unit_square(14);
  CHECK(berezin_bound_check(sq, 0.5, std::vector<double>(sq.size(), 1.0), 0.1).holds);
}

TEST_CASE("coherent state identity") {
  const double dx = 1.0 / 32, h = 0.05;
  for (int dim : {1, 2}) {
    const int N = dim == 1 ? 256 : 64;
    const auto phi = bump_on_box(dim, N, dx, 0.2);
    double norm2 = 0.0;
    for (double v : phi) norm2 += v * v * std::pow(dx, dim);
    for (double s : {0.25, 0.5, 0.75}) {
      const auto a = coherent_state_identity_check(s, h, {1.0, dim == 2 ? 0.5 : 0.0}, phi, dim, N, dx);
      CHECK(a.relative_gap < 1e-6);
      CHECK(a.p_effective[0] == doctest::Approx(1.0).epsilon(0.2));
      // leading term from the lattice dispersion at the snapped wavevector
      double sym = 0.0;
      for (int ax = 0; ax < dim; ++ax) sym += std::pow(2.0 * h / dx * std::sin(a.p_effective[ax] * dx / (2.0 * h)), 2);
      CHECK(a.leading == doctest::Approx(std::pow(sym, s) * norm2).epsilon(1e-10));
      // p = 0: the leading term vanishes and the correction is everything
      const auto z = coherent_state_identity_check(s, h, {0.0, 0.0}, phi, dim, N, dx);
      CHECK(z.leading == 0.0);
      CHECK(z.lhs == doctest::Approx(z.correction).epsilon(1e-9));
      // doubling p scales the leading term by about 2^{2s}
      const auto b = coherent_state_identity_check(s, 0.5 * h, {0.5, dim == 2 ? 0.25 : 0.0}, phi, dim, N, dx);
      const auto c = coherent_state_identity_check(s, 0.5 * h, {1.0, dim == 2 ? 0.5 : 0.0}, phi, dim, N, dx);
      CHECK(c.leading / b.leading == doctest::Approx(std::pow(2.0, 2.0 * s)).epsilon(0.05));
    }
  }
}

TEST_CASE("operator ordering") {
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(operator_order_check(LatticeDomain::interval(64, 1.0 / 64), s).holds);
    CHECK(operator_order_check(LatticeDomain::unit_square(12), s).holds);
  }
  const auto r = operator_order_check(LatticeDomain::interval(16, 1.0 / 16), 1.0);
  CHECK(r.norm < 1e-8);
}

TEST_CASE("half-plane diagonal near the wall") {
  HalfspaceConfig c;
  c.points_per_h = 4;
  c.depth_points = 64;
  c.tangential_points = 64;
  const auto r = halfspace_kernel_check(0.5, c);
  REQUIRE(!r.samples.empty());
  CHECK(r.samples.front().lattice < r.interior_lattice);
  CHECK(r.interior_lattice == doctest::Approx(r.interior_model).epsilon(0.1));
  c.depth_points = 8;
  CHECK_THROWS_AS(halfspace_kernel_check(0.5, c), DomainError);
}

TEST_CASE("localization identity on an interval") {
  const auto geom = DomainGeometry::interval(0.0, 1.0);
  const LocalizationFamily fam(geom, 0.25);
  const auto coarse = ims_defect_check(LatticeDomain::interval(64, 1.0 / 64), 0.5, fam, 0.25);
  const auto fine = ims_defect_check(LatticeDomain::interval(64, 1.0 / 64), 0.5, fam, 0.125);
  CHECK(fine.relative_gap < 0.05);
  CHECK(fine.defect > 0.0);
  CHECK(fine.rhs == doctest::Approx(fine.localized - fine.defect));
  // u-quadrature error alone halves under refinement of the u-grid
  CHECK(fine.quadrature_gap <= 0.5 * coarse.quadrature_gap);
  // the continuum-kernel gap shrinks under lattice refinement
  const auto finer_lattice = ims_defect_check(LatticeDomain::interval(128, 1.0 / 128), 0.5, fam, 0.125);
  CHECK(finer_lattice.relative_gap < fine.relative_gap);
  CHECK_THROWS_AS(ims_defect_check(LatticeDomain::unit_square(8), 0.5, fam), DomainError);
}
