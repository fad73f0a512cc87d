#pragma once

// Lattice discretizations on masked grids inside a periodic box: the restricted
// fractional Laplacian P (-Delta_lattice)^s P, powers of the discrete Dirichlet
// Laplacian, dense spectra, Riesz means and the operator-level checks.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fraclap/quadcore.hpp"

namespace fraclap {

class LocalizationFamily;

/// Dense eigensolver failure or size above the dense cap.
class SolverError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

struct LatticeDomain {
  int dim = 1;
  int box_points = 0;
  double spacing = 1.0;
  /// Grid indices (i, j) of the mask points; j = 0 when dim == 1.
  std::vector<std::array<int, 2>> mask;
  int boundary_count = 0;
  /// Continuum measures when the mask stands for an ideal shape (0 = use the staircase).
  double ideal_volume = 0.0;
  double ideal_surface = 0.0;
  /// Physical coordinate of grid index 0 along each axis.
  double origin = 0.0;

  static LatticeDomain interval(int points, double spacing, int box_factor = 3);
  /// Unit square sampled cell-centred by m x m points, spacing 1/m.
  static LatticeDomain unit_square(int m, int box_factor = 3);
  static LatticeDomain rectangle(int mx, int my, double spacing, int box_factor = 3);
  /// Cell centres inside a disk of the given radius (in grid spacings).
  static LatticeDomain disk(double radius_points, double spacing, int box_factor = 3);

  std::size_t size() const { return mask.size(); }
  double volume() const;
  double surface() const;
  /// Physical coordinates of mask point k.
  std::array<double, 2> position(std::size_t k) const;
  /// Throws DomainError if the mask leaves less than box/3 on any side.
  void validate() const;
  void recount_boundary();
};

struct SymmetricOperator {
  Eigen::MatrixXd entries;
  std::size_t n() const { return static_cast<std::size_t>(entries.rows()); }
  double asymmetry() const;
  double norm() const;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;
  double residual_norm = 0.0;
};

struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

struct AsymptoticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  std::vector<std::pair<double, double>> h_samples;
  double rms_residual = 0.0;
};

inline constexpr std::size_t kDenseLimit = 4096;

/// Lattice Laplacian symbol sum_j (2 - 2 cos(2 pi k_j / N)) / spacing^2 at integer frequency k.
double lattice_symbol(const std::array<int, 2>& k, int dim, int box_points, double spacing);

/// Periodic convolution kernel of sigma^s on the box, indexed [i + N j].
std::vector<double> multiplier_kernel(int dim, int box_points, double spacing, double s);

SymmetricOperator build_restricted_fractional(const LatticeDomain& domain, double s);
/// Discrete Dirichlet Laplacian on the mask (five-point stencil, zero outside).
SymmetricOperator build_dirichlet_laplacian(const LatticeDomain& domain);
SymmetricOperator build_dirichlet_power(const LatticeDomain& domain, double s);

/// Ascending spectrum with a residual check on five seeded random eigenpairs.
SpectrumResult eigenvalues_sym(const SymmetricOperator& op, std::size_t dense_limit = kDenseLimit);
EigenDecomposition eigen_decompose(const SymmetricOperator& op, std::size_t dense_limit = kDenseLimit);

/// sum_n (1 - h^{2s} lambda_n)_+
double riesz_mean(const SpectrumResult& spectrum, double h, double s);

/// Least squares trace ~ c0 h^{-d} + c1 h^{1-d}.
AsymptoticFit two_term_fit(const std::vector<std::pair<double, double>>& samples, int d);

struct BerezinReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

/// Tr(phi H phi)_- against L1 sum(phi^2) spacing^d h^{-d}, with H = h^{2s} A_Omega - 1.
BerezinReport berezin_bound_check(const LatticeDomain& domain, double s, const std::vector<double>& phi, double h);

struct CoherentStateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double leading = 0.0;
  double correction = 0.0;
  double relative_gap = 0.0;
  /// The wavevector actually used, snapped so that p/h is a box frequency.
  std::array<double, 2> p_effective{0.0, 0.0};
};

/// Both sides of ||(-h^2 Delta)^{s/2} phi e^{i p x/h}||^2 = |p|^{2s} ||phi||^2 + correction
/// on the box of the domain, with phi given on all box points (indexed [i + N j]).
CoherentStateReport coherent_state_identity_check(double s, double h, const std::array<double, 2>& p,
                                                  const std::vector<double>& phi, int dim, int box_points,
                                                  double spacing);

struct OrderReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double norm = 0.0;
  bool holds = false;
};

OrderReport operator_order_check(const LatticeDomain& domain, double s);

struct HalfspaceSample {
  double depth = 0.0;  // x_d / h
  double lattice = 0.0;
  double model = 0.0;
  double relative_gap = 0.0;
};

struct HalfspaceReport {
  double h = 0.0;
  double spacing = 0.0;
  double interior_lattice = 0.0;
  double interior_model = 0.0;
  std::vector<HalfspaceSample> samples;
};

struct HalfspaceConfig {
  double h = 1.0;
  int points_per_h = 8;
  int depth_points = 256;
  int tangential_points = 512;
  /// Wall position relative to the first row of the mask, in spacings.
  double wall_offset = 0.5;
};

/// Diagonal of (H+)_- on a half-plane strip, periodic in the tangential
/// direction, against h^{-2} (L1 - K(x_d/h)).
HalfspaceReport halfspace_kernel_check(double s, const HalfspaceConfig& config);

struct ImsReport {
  double lhs = 0.0;
  double localized = 0.0;
  double defect = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
  /// Defect built from the lattice couplings -A(x, y)/2 instead of the continuum kernel;
  /// the remaining gap is the u-quadrature error alone.
  double lattice_defect = 0.0;
  double quadrature_gap = 0.0;
  std::size_t u_samples = 0;
};

/// Tr gamma A versus int Tr(gamma phi_u A phi_u) l(u)^{-d} du - Tr gamma L for a
/// rank-3 projector gamma onto the lowest modes.
ImsReport ims_defect_check(const LatticeDomain& domain, double s, const LocalizationFamily& family,
                           double u_step_factor = 0.125);

}  // namespace fraclap
