#include "fraclap/lattice.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

int wrap(int i, int n) { return ((i % n) + n) % n; }

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("lattice dimension must be 1 or 2");
}

LatticeDomain block(int mx, int my, int dim, double spacing, int box_factor) {
  if (mx < 1 || (dim == 2 && my < 1)) throw DomainError("lattice: mask must contain at least one point");
  if (!(spacing > 0.0)) throw DomainError("lattice: spacing must be positive");
  if (box_factor < 3) throw DomainError("lattice: box must be at least three times the mask");
  LatticeDomain d;
  d.dim = dim;
  const int m = std::max(mx, dim == 2 ? my : 1);
  d.box_points = box_factor * m;
  d.spacing = spacing;
  const int off = (d.box_points - m) / 2;
  // cell-centred: the first mask point sits half a spacing inside the edge
  d.origin = (0.5 - off) * spacing;
  const int ny = dim == 2 ? my : 1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < mx; ++i) d.mask.push_back({off + i, dim == 2 ? off + j : 0});
  d.recount_boundary();
  return d;
}

}  // namespace

LatticeDomain LatticeDomain::interval(int points, double spacing, int box_factor) {
  LatticeDomain d = block(points, 1, 1, spacing, box_factor);
  d.ideal_volume = points * spacing;
  d.ideal_surface = 2.0;
  return d;
}

LatticeDomain LatticeDomain::unit_square(int m, int box_factor) {
  LatticeDomain d = block(m, m, 2, 1.0 / m, box_factor);
  d.ideal_volume = 1.0;
  d.ideal_surface = 4.0;
  return d;
}

LatticeDomain LatticeDomain::rectangle(int mx, int my, double spacing, int box_factor) {
  LatticeDomain d = block(mx, my, 2, spacing, box_factor);
  d.ideal_volume = mx * spacing * my * spacing;
  d.ideal_surface = 2.0 * (mx + my) * spacing;
  return d;
}

LatticeDomain LatticeDomain::disk(double radius_points, double spacing, int box_factor) {
  if (!(radius_points >= 1.0)) throw DomainError("lattice: disk radius must be at least one spacing");
  const int m = static_cast<int>(std::ceil(2.0 * radius_points));
  LatticeDomain d = block(m, m, 2, spacing, box_factor);
  // centre of the bounding block
  const int off = (d.box_points - m) / 2;
  const double c = off + 0.5 * (m - 1);
  std::vector<std::array<int, 2>> keep;
  for (const auto& p : d.mask) {
    const double dx = p[0] - c, dy = p[1] - c;
    if (dx * dx + dy * dy < radius_points * radius_points) keep.push_back(p);
  }
  d.mask = std::move(keep);
  // shift so the disk is centred at the physical origin
  d.origin = -c * spacing;
  d.ideal_volume = kPi * radius_points * radius_points * spacing * spacing;
  d.ideal_surface = 2.0 * kPi * radius_points * spacing;
  d.recount_boundary();
  return d;
}

double LatticeDomain::volume() const {
  if (ideal_volume > 0.0) return ideal_volume;
  return static_cast<double>(mask.size()) * std::pow(spacing, dim);
}

double LatticeDomain::surface() const {
  if (ideal_surface > 0.0) return ideal_surface;
  return boundary_count * std::pow(spacing, dim - 1);
}

std::array<double, 2> LatticeDomain::position(std::size_t k) const {
  return {origin + mask[k][0] * spacing, dim == 2 ? origin + mask[k][1] * spacing : 0.0};
}

void LatticeDomain::validate() const {
  check_dim(dim);
  if (mask.empty()) throw DomainError("lattice: empty mask");
  if (!(spacing > 0.0)) throw DomainError("lattice: spacing must be positive");
  for (int ax = 0; ax < dim; ++ax) {
    int lo = box_points, hi = -1;
    for (const auto& p : mask) {
      lo = std::min(lo, p[ax]);
      hi = std::max(hi, p[ax]);
    }
    if (lo < 0 || hi >= box_points) throw DomainError("lattice: mask leaves the box");
    if (3 * lo < box_points || 3 * (box_points - 1 - hi) < box_points)
      throw DomainError("lattice: margin between mask and box edge is below box/3");
  }
}

void LatticeDomain::recount_boundary() {
  const int N = box_points;
  std::vector<char> in(static_cast<std::size_t>(N) * (dim == 2 ? N : 1), 0);
  for (const auto& p : mask) in[p[0] + static_cast<std::size_t>(N) * p[1]] = 1;
  auto inside = [&](int i, int j) {
    if (i < 0 || i >= N || j < 0 || j >= (dim == 2 ? N : 1)) return false;
    return in[i + static_cast<std::size_t>(N) * j] != 0;
  };
  int faces = 0;
  for (const auto& p : mask) {
    faces += !inside(p[0] - 1, p[1]) + !inside(p[0] + 1, p[1]);
    if (dim == 2) faces += !inside(p[0], p[1] - 1) + !inside(p[0], p[1] + 1);
  }
  boundary_count = faces;
}

double SymmetricOperator::asymmetry() const { return (entries - entries.transpose()).cwiseAbs().maxCoeff(); }

double SymmetricOperator::norm() const {
  if (entries.size() == 0) return 0.0;
  Eigen::MatrixXd a = entries;
  Eigen::VectorXd w(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()) != 0)
    throw SolverError("norm: dsyevd failed to converge");
  return w.cwiseAbs().maxCoeff();
}

double lattice_symbol(const std::array<int, 2>& k, int dim, int box_points, double spacing) {
  double sig = 0.0;
  for (int ax = 0; ax < dim; ++ax) sig += 2.0 - 2.0 * std::cos(2.0 * kPi * k[ax] / box_points);
  return sig / (spacing * spacing);
}

std::vector<double> multiplier_kernel(int dim, int box_points, double spacing, double s) {
  check_dim(dim);
  if (box_points < 2) throw DomainError("multiplier_kernel: box too small");
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("multiplier_kernel: s must lie in (0, 1]");
  const int N = box_points;
  const std::size_t total = dim == 2 ? static_cast<std::size_t>(N) * N : N;
  fftw_complex* buf = fftw_alloc_complex(total);
  for (int j = 0; j < (dim == 2 ? N : 1); ++j)
    for (int i = 0; i < N; ++i) {
      const std::size_t idx = i + static_cast<std::size_t>(N) * j;
      buf[idx][0] = std::pow(lattice_symbol({i, j}, dim, N, spacing), s);
      buf[idx][1] = 0.0;
    }
  fftw_plan plan = dim == 2 ? fftw_plan_dft_2d(N, N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE)
                            : fftw_plan_dft_1d(N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> ker(total);
  for (std::size_t k = 0; k < total; ++k) ker[k] = buf[k][0] / static_cast<double>(total);
  fftw_free(buf);
  return ker;
}

SymmetricOperator build_restricted_fractional(const LatticeDomain& domain, double s) {
  domain.validate();
  const int N = domain.box_points;
  const auto ker = multiplier_kernel(domain.dim, N, domain.spacing, s);
  const std::size_t n = domain.size();
  SymmetricOperator op;
  op.entries.resize(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = b; a < n; ++a) {
      const int di = wrap(domain.mask[a][0] - domain.mask[b][0], N);
      const int dj = domain.dim == 2 ? wrap(domain.mask[a][1] - domain.mask[b][1], N) : 0;
      const double v = ker[di + static_cast<std::size_t>(N) * dj];
      op.entries(a, b) = v;
      op.entries(b, a) = v;
    }
  return op;
}

SymmetricOperator build_dirichlet_laplacian(const LatticeDomain& domain) {
  domain.validate();
  const int N = domain.box_points;
  const std::size_t n = domain.size();
  std::vector<long> where(static_cast<std::size_t>(N) * (domain.dim == 2 ? N : 1), -1);
  for (std::size_t k = 0; k < n; ++k) where[domain.mask[k][0] + static_cast<std::size_t>(N) * domain.mask[k][1]] = k;
  const double inv = 1.0 / (domain.spacing * domain.spacing);
  SymmetricOperator op;
  op.entries = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    op.entries(k, k) = 2.0 * domain.dim * inv;
    const auto p = domain.mask[k];
    std::vector<std::array<int, 2>> nb = {{p[0] - 1, p[1]}, {p[0] + 1, p[1]}};
    if (domain.dim == 2) {
      nb.push_back({p[0], p[1] - 1});
      nb.push_back({p[0], p[1] + 1});
    }
    for (const auto& q : nb) {
      const long w = where[q[0] + static_cast<std::size_t>(N) * q[1]];
      if (w >= 0) op.entries(k, w) = -inv;
    }
  }
  return op;
}

EigenDecomposition eigen_decompose(const SymmetricOperator& op, std::size_t dense_limit) {
  const std::size_t n = op.n();
  if (n == 0) throw DomainError("eigen_decompose: empty operator");
  if (n > dense_limit) throw SolverError("eigen_decompose: size exceeds the dense limit");
  EigenDecomposition out;
  out.vectors = op.entries;
  out.values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                         out.vectors.data(), static_cast<lapack_int>(n), out.values.data());
  if (info != 0) throw SolverError("eigen_decompose: dsyevd failed to converge");
  return out;
}

SymmetricOperator build_dirichlet_power(const LatticeDomain& domain, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("build_dirichlet_power: s must lie in (0, 1]");
  const EigenDecomposition e = eigen_decompose(build_dirichlet_laplacian(domain));
  Eigen::VectorXd p(e.values.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = std::pow(std::max(e.values[k], 0.0), s);
  SymmetricOperator op;
  op.entries = e.vectors * p.asDiagonal() * e.vectors.transpose();
  op.entries = 0.5 * (op.entries + op.entries.transpose()).eval();
  return op;
}

SpectrumResult eigenvalues_sym(const SymmetricOperator& op, std::size_t dense_limit) {
  const std::size_t n = op.n();
  if (n == 0) throw DomainError("eigenvalues_sym: empty operator");
  if (n > dense_limit) throw SolverError("eigenvalues_sym: size exceeds the dense limit");
  const lapack_int ln = static_cast<lapack_int>(n);
  Eigen::MatrixXd a = op.entries;
  std::vector<double> d(n), e(std::max<std::size_t>(n, 2) - 1), tau(std::max<std::size_t>(n, 2) - 1);
  if (LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'U', ln, a.data(), ln, d.data(), e.data(), tau.data()) != 0)
    throw SolverError("eigenvalues_sym: tridiagonal reduction failed");

  SpectrumResult out;
  out.eigenvalues = d;
  std::vector<double> work_e(e);
  if (LAPACKE_dsterf(ln, out.eigenvalues.data(), work_e.data()) != 0)
    throw SolverError("eigenvalues_sym: implicit QL/QR iteration did not converge");
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  const double scale = std::max(std::abs(out.eigenvalues.front()), std::abs(out.eigenvalues.back()));

  // residual check on a few pairs by inverse iteration on the tridiagonal form
  std::vector<std::size_t> picks;
  if (n <= 5) {
    for (std::size_t k = 0; k < n; ++k) picks.push_back(k);
  } else {
    std::mt19937 rng(20240611u);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (picks.size() < 5) {
      const std::size_t k = pick(rng);
      if (std::find(picks.begin(), picks.end(), k) == picks.end()) picks.push_back(k);
    }
  }
  Eigen::MatrixXd z(n, picks.size());
  // dstebz writes up to n values into w regardless of the requested range
  std::vector<double> w(n);
  std::vector<lapack_int> isplit(n), iblock(n), ifail(1);
  for (std::size_t c = 0; c < picks.size(); ++c) {
    lapack_int m = 0, nsplit = 0;
    const lapack_int k = static_cast<lapack_int>(picks[c]) + 1;
    if (LAPACKE_dstebz('I', 'B', ln, 0.0, 0.0, k, k, 0.0, d.data(), e.data(), &m, &nsplit, w.data(), iblock.data(),
                       isplit.data()) != 0 ||
        m != 1)
      throw SolverError("eigenvalues_sym: bisection failed");
    if (LAPACKE_dstein(LAPACK_COL_MAJOR, ln, d.data(), e.data(), 1, w.data(), iblock.data(), isplit.data(),
                       z.col(c).data(), ln, ifail.data()) != 0)
      throw SolverError("eigenvalues_sym: inverse iteration failed");
  }
  if (n > 1 && LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'U', 'N', ln, static_cast<lapack_int>(picks.size()), a.data(),
                              ln, tau.data(), z.data(), ln) != 0)
    throw SolverError("eigenvalues_sym: back-transformation failed");
  double res = 0.0;
  for (std::size_t c = 0; c < picks.size(); ++c) {
    const Eigen::VectorXd v = z.col(c).normalized();
    res = std::max(res, (op.entries * v - out.eigenvalues[picks[c]] * v).norm());
  }
  out.residual_norm = res;
  if (res > 1e-8 * std::max(scale, 1e-300)) throw SolverError("eigenvalues_sym: residual check failed");
  return out;
}

double riesz_mean(const SpectrumResult& spectrum, double h, double s) {
  if (!(h > 0.0)) throw DomainError("riesz_mean: h must be positive");
  const double f = std::pow(h, 2.0 * s);
  double total = 0.0;
  for (double l : spectrum.eigenvalues) total += std::max(1.0 - f * l, 0.0);
  return total;
}

AsymptoticFit two_term_fit(const std::vector<std::pair<double, double>>& samples, int d) {
  if (samples.size() < 4) throw DomainError("two_term_fit: at least four samples are required");
  if (d < 1) throw DomainError("two_term_fit: dimension must be positive");
  double hmin = samples.front().first, hmax = hmin;
  for (const auto& [h, tr] : samples) {
    if (!(h > 0.0)) throw DomainError("two_term_fit: h must be positive");
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  if (hmax < 4.0 * hmin * (1.0 - 1e-12)) throw DomainError("two_term_fit: samples must span a factor of at least 4 in h");
  // trace h^{d-1} = c0 / h + c1
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [h, tr] = samples[k];
    X(k, 0) = 1.0 / h;
    X(k, 1) = 1.0;
    y[k] = tr * std::pow(h, d - 1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  if (sv[1] <= 1e-12 * sv[0]) throw NumericalError("two_term_fit: design matrix is ill-conditioned");
  const Eigen::Vector2d c = svd.solve(y);
  AsymptoticFit fit;
  fit.c0 = c[0];
  fit.c1 = c[1];
  fit.h_samples = samples;
  fit.rms_residual = std::sqrt((X * c - y).squaredNorm() / n);
  return fit;
}

}  // namespace fraclap
