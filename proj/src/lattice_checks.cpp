#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fraclap/constants.hpp"
#include "fraclap/halfline.hpp"
#include "fraclap/lattice.hpp"
#include "fraclap/localization.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd eigenvalues_only(Eigen::MatrixXd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()) != 0)
    throw SolverError("dsyevd failed to converge");
  return w;
}

// Unnormalized forward DFT of a real field on the box.
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in, int dim, int N) {
  const std::size_t total = in.size();
  fftw_complex* buf = fftw_alloc_complex(total);
  for (std::size_t k = 0; k < total; ++k) {
    buf[k][0] = in[k].real();
    buf[k][1] = in[k].imag();
  }
  fftw_plan plan = dim == 2 ? fftw_plan_dft_2d(N, N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE)
                            : fftw_plan_dft_1d(N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<std::complex<double>> out(total);
  for (std::size_t k = 0; k < total; ++k) out[k] = {buf[k][0], buf[k][1]};
  fftw_free(buf);
  return out;
}

// Mean of |z|^{-(d+2s)} over the unit cell centred at offset (in spacings).
double cell_average_singular(const std::array<int, 2>& offset, int d, double s) {
  constexpr int n = 24;
  double x[n], w[n];
  gauss_legendre(n, x, w);
  const double p = -(d + 2.0 * s) / 2.0;
  double sum = 0.0;
  if (d == 1) {
    for (int i = 0; i < n; ++i) sum += 0.5 * w[i] * std::pow(std::pow(offset[0] + 0.5 * x[i], 2), p);
    return sum;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = offset[0] + 0.5 * x[i], b = offset[1] + 0.5 * x[j];
      sum += 0.25 * w[i] * w[j] * std::pow(a * a + b * b, p);
    }
  return sum;
}

}  // namespace

BerezinReport berezin_bound_check(const LatticeDomain& domain, double s, const std::vector<double>& phi, double h) {
  if (phi.size() != domain.size()) throw DomainError("berezin_bound_check: phi must have one value per mask point");
  if (!(h > 0.0)) throw DomainError("berezin_bound_check: h must be positive");
  const SymmetricOperator A = build_restricted_fractional(domain, s);
  const std::size_t n = domain.size();
  const double f = std::pow(h, 2.0 * s);
  Eigen::MatrixXd M(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) M(a, b) = phi[a] * (f * A.entries(a, b) - (a == b ? 1.0 : 0.0)) * phi[b];
  const Eigen::VectorXd w = eigenvalues_only(M);
  BerezinReport rep;
  for (Eigen::Index k = 0; k < w.size(); ++k) rep.lhs += std::max(-w[k], 0.0);
  double mass = 0.0;
  for (double v : phi) mass += v * v;
  rep.rhs = weyl_L1(s, domain.dim) * mass * std::pow(domain.spacing, domain.dim) * std::pow(h, -domain.dim);
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-14;
  return rep;
}

CoherentStateReport coherent_state_identity_check(double s, double h, const std::array<double, 2>& p,
                                                  const std::vector<double>& phi, int dim, int box_points,
                                                  double spacing) {
  if (dim != 1 && dim != 2) throw DomainError("coherent_state_identity_check: dimension must be 1 or 2");
  if (!(h > 0.0)) throw DomainError("coherent_state_identity_check: h must be positive");
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("coherent_state_identity_check: s must lie in (0, 1]");
  const int N = box_points;
  const std::size_t total = dim == 2 ? static_cast<std::size_t>(N) * N : N;
  if (phi.size() != total) throw DomainError("coherent_state_identity_check: phi must cover the box");
  const double L = N * spacing;
  // p/h snapped to a box frequency
  std::array<int, 2> nq{0, 0};
  CoherentStateReport rep;
  for (int ax = 0; ax < dim; ++ax) {
    nq[ax] = static_cast<int>(std::lround(p[ax] / h * L / (2.0 * kPi)));
    rep.p_effective[ax] = h * 2.0 * kPi * nq[ax] / L;
  }
  auto omega = [&](int i, int j) {
    return std::pow(h * h * lattice_symbol({((i % N) + N) % N, ((j % N) + N) % N}, dim, N, spacing), s);
  };
  const double cell = std::pow(spacing, dim);
  const double parseval = cell / static_cast<double>(total);

  // left side: modulate in space, transform, weight by the symbol
  std::vector<std::complex<double>> mod(total);
  double norm2 = 0.0;
  for (int j = 0; j < (dim == 2 ? N : 1); ++j)
    for (int i = 0; i < N; ++i) {
      const std::size_t idx = i + static_cast<std::size_t>(N) * j;
      const double ph = 2.0 * kPi * (static_cast<double>(nq[0]) * i + static_cast<double>(nq[1]) * j) / N;
      mod[idx] = phi[idx] * std::complex<double>(std::cos(ph), std::sin(ph));
      norm2 += phi[idx] * phi[idx] * cell;
    }
  const auto mh = forward(mod, dim, N);
  for (int j = 0; j < (dim == 2 ? N : 1); ++j)
    for (int i = 0; i < N; ++i) rep.lhs += parseval * omega(i, j) * std::norm(mh[i + static_cast<std::size_t>(N) * j]);

  // right side: transform phi itself and symmetrize the shifted symbol
  std::vector<std::complex<double>> plain(phi.begin(), phi.end());
  const auto ph = forward(plain, dim, N);
  const double w0 = omega(nq[0], nq[1]);
  rep.leading = w0 * norm2;
  for (int j = 0; j < (dim == 2 ? N : 1); ++j)
    for (int i = 0; i < N; ++i) {
      const double sym = 0.5 * (omega(nq[0] + i, nq[1] + j) + omega(nq[0] - i, nq[1] - j)) - w0;
      rep.correction += parseval * sym * std::norm(ph[i + static_cast<std::size_t>(N) * j]);
    }
  rep.rhs = rep.leading + rep.correction;
  rep.relative_gap = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.lhs), 1e-300);
  return rep;
}

OrderReport operator_order_check(const LatticeDomain& domain, double s) {
  const SymmetricOperator P = build_dirichlet_power(domain, s);
  const SymmetricOperator R = build_restricted_fractional(domain, s);
  const Eigen::VectorXd w = eigenvalues_only(P.entries - R.entries);
  OrderReport rep;
  rep.min_eigenvalue = w.minCoeff();
  rep.max_eigenvalue = w.maxCoeff();
  rep.norm = w.cwiseAbs().maxCoeff();
  rep.holds = rep.min_eigenvalue >= -1e-8 * std::max(rep.norm, 1e-300);
  return rep;
}

HalfspaceReport halfspace_kernel_check(double s, const HalfspaceConfig& cfg) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("halfspace_kernel_check: s must lie in (0, 1)");
  if (!(cfg.h > 0.0)) throw DomainError("halfspace_kernel_check: h must be positive");
  if (cfg.points_per_h < 4) throw DomainError("halfspace_kernel_check: need h >= 4 spacings");
  if (cfg.depth_points < 8 * cfg.points_per_h)
    throw DomainError("halfspace_kernel_check: strip must be at least 8 h deep");
  if (cfg.tangential_points < 16) throw DomainError("halfspace_kernel_check: too few tangential points");
  const double dx = cfg.h / cfg.points_per_h;
  const int M = cfg.depth_points;
  const int Nn = 3 * M;
  const int Nt = cfg.tangential_points;
  const double f = std::pow(cfg.h, 2.0 * s);

  // The strip is periodic in the tangential direction, so the restricted
  // operator splits into one Toeplitz block per tangential frequency.
  std::vector<double> diag(M, 0.0);
  fftw_complex* buf = fftw_alloc_complex(Nn);
  fftw_plan plan = fftw_plan_dft_1d(Nn, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  Eigen::MatrixXd block(M, M);
  Eigen::VectorXd w(M);
  for (int kt = 0; kt <= Nt / 2; ++kt) {
    const double sig_t = (2.0 - 2.0 * std::cos(2.0 * kPi * kt / Nt)) / (dx * dx);
    const double mult = (kt == 0 || 2 * kt == Nt) ? 1.0 : 2.0;
    for (int k = 0; k < Nn; ++k) {
      buf[k][0] = std::pow((2.0 - 2.0 * std::cos(2.0 * kPi * k / Nn)) / (dx * dx) + sig_t, s);
      buf[k][1] = 0.0;
    }
    fftw_execute(plan);
    for (int b = 0; b < M; ++b)
      for (int a = 0; a < M; ++a) block(a, b) = buf[std::abs(a - b)][0] / Nn;
    if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', M, block.data(), M, w.data()) != 0) {
      fftw_destroy_plan(plan);
      fftw_free(buf);
      throw SolverError("halfspace_kernel_check: dsyevd failed to converge");
    }
    for (int k = 0; k < M; ++k) {
      const double occ = 1.0 - f * w[k];
      if (occ <= 0.0) break;
      for (int a = 0; a < M; ++a) diag[a] += mult * occ * block(a, k) * block(a, k);
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  for (double& v : diag) v /= Nt * dx * dx;

  HalfspaceReport rep;
  rep.h = cfg.h;
  rep.spacing = dx;
  const FractionalOrder order(s, 2);
  const double l1 = L1(order);
  const double h2 = cfg.h * cfg.h;
  rep.interior_lattice = diag[M / 2];
  rep.interior_model = l1 / h2;
  for (int a = 0; a < M / 2; ++a) {
    const double depth = (a + cfg.wall_offset) * dx / cfg.h;
    if (depth < 0.5 - 1e-12 || depth > 4.0 + 1e-12) continue;
    HalfspaceSample smp;
    smp.depth = depth;
    smp.lattice = diag[a];
    smp.model = (l1 - K_layer(depth, order)) / h2;
    smp.relative_gap = std::abs(smp.lattice - smp.model) / std::abs(smp.model);
    rep.samples.push_back(smp);
  }
  return rep;
}

ImsReport ims_defect_check(const LatticeDomain& domain, double s, const LocalizationFamily& family,
                           double u_step_factor) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("ims_defect_check: s must lie in (0, 1)");
  if (family.dim() != domain.dim) throw DomainError("ims_defect_check: family and domain dimensions differ");
  const std::size_t n = domain.size();
  if (n < 3) throw DomainError("ims_defect_check: mask needs at least three points");
  const SymmetricOperator A = build_restricted_fractional(domain, s);
  const EigenDecomposition e = eigen_decompose(A);
  const Eigen::MatrixXd V = e.vectors.leftCols(3);
  const int d = domain.dim;

  ImsReport rep;
  rep.lhs = e.values.head(3).sum();

  std::vector<Point> pos(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto q = domain.position(k);
    pos[k] = {q[0], q[1]};
  }
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd phi(n);
  for (const auto& node : family.u_quadrature(u_step_factor)) {
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      phi[k] = family.phi_u(pos[k], node.u);
      any = any || phi[k] != 0.0;
    }
    if (!any) continue;
    ++rep.u_samples;
    const double wf = node.weight * std::pow(family.scale_l(node.u), -d);
    const Eigen::MatrixXd PV = phi.asDiagonal() * V;
    rep.localized += wf * (PV.transpose() * A.entries * PV).trace();
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t a = 0; a < n; ++a) {
        const double diff = phi[a] - phi[b];
        W(a, b) += wf * diff * diff;
      }
  }
  const double C = c_sd(s, d);
  const double cell = std::pow(domain.spacing, d);
  // nearest neighbours take the cell mean of the singular factor
  const double near = cell_average_singular({1, 0}, d, s) * std::pow(domain.spacing, -(d + 2.0 * s));
  Eigen::MatrixXd Lk = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Lx = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == b) continue;
      const double r = std::hypot(pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
      const double sing = r < 1.5 * domain.spacing ? near : std::pow(r, -(d + 2.0 * s));
      Lk(a, b) = C * W(a, b) * sing * cell;
      Lx(a, b) = -0.5 * A.entries(a, b) * W(a, b);
    }
  rep.defect = (V.transpose() * Lk * V).trace();
  rep.rhs = rep.localized - rep.defect;
  rep.relative_gap = std::abs(rep.lhs - rep.rhs) / std::abs(rep.lhs);
  rep.lattice_defect = (V.transpose() * Lx * V).trace();
  rep.quadrature_gap = std::abs(rep.lhs - (rep.localized - rep.lattice_defect)) / std::abs(rep.lhs);
  return rep;
}

}  // namespace fraclap
