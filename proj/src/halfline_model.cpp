#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fraclap/halfline.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// F = sin(l x + theta) + kTailSign * G.
constexpr double kTailSign = -1.0;

constexpr double kXiStep = 0.25;
constexpr double kXiLogMin = -28.0;
constexpr double kZetaLogMin = -36.0;
constexpr double kKernelReach = 40.0;

constexpr int kThetaNodes = 400;
constexpr double kThetaLogMin = -4.0 * std::numbers::ln10;
constexpr double kThetaLogMax = 4.0 * std::numbers::ln10;

constexpr int kGridTheta = 96;
constexpr int kGridRho = 64;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double log_xi2m1_from(double y) {
  // xi - 1 = e^y, xi + 1 = 2 + e^y
  return y > 0.0 ? 2.0 * y + std::log1p(2.0 * std::exp(-y)) : y + std::log(2.0 + std::exp(y));
}

}  // namespace

HalfLineModel::HalfLineModel(double s, const QuadratureSpec& quad, GammaReading reading)
    : s_(s), reading_(reading), quad_(quad) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("HalfLineModel: s must lie in (0, 1)");
  quad_.validate();
  build_grids();
  build_theta_table();

  kt_theta_.resize(kGridTheta);
  kt_wtheta_.resize(kGridTheta);
  kt_rho_.resize(kGridRho);
  kt_wrho_.resize(kGridRho);
  std::vector<double> x(std::max(kGridTheta, kGridRho)), w(x.size());
  gauss_legendre(kGridTheta, x.data(), w.data());
  for (int a = 0; a < kGridTheta; ++a) {
    kt_theta_[a] = 0.25 * kPi * (x[a] + 1.0);
    kt_wtheta_[a] = 0.25 * kPi * w[a];
  }
  gauss_legendre(kGridRho, x.data(), w.data());
  for (int b = 0; b < kGridRho; ++b) {
    kt_rho_[b] = 0.5 * (x[b] + 1.0);
    kt_wrho_[b] = 0.5 * w[b];
  }
  kt_modes_.reserve(kGridTheta);
  for (double th : kt_theta_) kt_modes_.push_back(mode(std::tan(th)));
}

HalfLineModel HalfLineModel::dirichlet(const QuadratureSpec& quad) {
  HalfLineModel m;
  m.s_ = 1.0;
  m.dirichlet_ = true;
  m.quad_ = quad;
  m.kt_theta_.resize(kGridTheta);
  m.kt_wtheta_.resize(kGridTheta);
  m.kt_rho_.resize(kGridRho);
  m.kt_wrho_.resize(kGridRho);
  std::vector<double> x(std::max(kGridTheta, kGridRho)), w(x.size());
  gauss_legendre(kGridTheta, x.data(), w.data());
  for (int a = 0; a < kGridTheta; ++a) {
    m.kt_theta_[a] = 0.25 * kPi * (x[a] + 1.0);
    m.kt_wtheta_[a] = 0.25 * kPi * w[a];
  }
  gauss_legendre(kGridRho, x.data(), w.data());
  for (int b = 0; b < kGridRho; ++b) {
    m.kt_rho_[b] = 0.5 * (x[b] + 1.0);
    m.kt_wrho_[b] = 0.5 * w[b];
  }
  for (double th : m.kt_theta_) m.kt_modes_.push_back(m.mode(std::tan(th)));
  return m;
}

void HalfLineModel::build_grids() {
  // The density decays like xi^{-1-s}; the grid reaches far enough that the
  // neglected mass of G(0) stays near 1e-10.
  const double y_max = std::clamp(24.0 / s_, 25.0, 250.0);
  const int nx = static_cast<int>(std::floor((y_max - kXiLogMin) / kXiStep)) + 1;
  xi_.resize(nx);
  xi_w_.resize(nx);
  xi_logm1_.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double y = kXiLogMin + i * kXiStep;
    xi_[i] = 1.0 + std::exp(y);
    xi_w_[i] = kXiStep * std::exp(y);
    xi_logm1_[i] = y;
  }
  const double v_max = y_max + kKernelReach;
  const int nz = static_cast<int>(std::floor((v_max - kZetaLogMin) / zeta_h_)) + 1;
  zeta_.resize(nz);
  zeta_logv_.resize(nz);
  for (int j = 0; j < nz; ++j) {
    zeta_logv_[j] = kZetaLogMin + j * zeta_h_;
    zeta_[j] = std::exp(zeta_logv_[j]);
  }
  expo_kernel_.resize(nx, nz);
  for (int i = 0; i < nx; ++i) {
    const double lx = std::log(xi_[i]);
    for (int j = 0; j < nz; ++j) {
      const double dv = lx - zeta_logv_[j];
      expo_kernel_(i, j) = std::abs(dv) > 700.0 ? 0.0 : zeta_h_ / (2.0 * kPi * std::cosh(dv));
    }
  }
  hilbert_.resize(nx, nx);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) hilbert_(i, j) = 1.0 / (xi_[i] + xi_[j]);
}

void HalfLineModel::build_theta_table() {
  tab_x_.resize(kThetaNodes);
  tab_y_.resize(kThetaNodes);
  tab_m_.resize(kThetaNodes);
  // Node values and slopes d theta / d ln(lambda) from a fourth-order central
  // difference of tightly converged direct evaluations.
  QuadratureSpec tight = quad_;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  tight.max_subdivisions = std::max<std::size_t>(tight.max_subdivisions, 4000);
  auto th = [&](double x) {
    try {
      return fraclap::theta(std::exp(x), s_, tight);
    } catch (const NonConvergence& e) {
      // the tight request can stall at the roundoff floor
      if (e.err_estimate() <= 1e-12) return e.value() / kPi;
      throw;
    }
  };
  const double dx = 1e-2;
  for (int k = 0; k < kThetaNodes; ++k) {
    const double x = kThetaLogMin + (kThetaLogMax - kThetaLogMin) * k / (kThetaNodes - 1);
    tab_x_[k] = x;
    tab_y_[k] = th(x);
    tab_m_[k] = (8.0 * (th(x + dx) - th(x - dx)) - (th(x + 2.0 * dx) - th(x - 2.0 * dx))) / (12.0 * dx);
  }
  // Fritsch-Carlson limiter keeps the interpolant monotone.
  std::vector<double> delta(kThetaNodes - 1);
  for (int k = 0; k + 1 < kThetaNodes; ++k)
    delta[k] = (tab_y_[k + 1] - tab_y_[k]) / (tab_x_[k + 1] - tab_x_[k]);
  for (int k = 0; k + 1 < kThetaNodes; ++k) {
    if (delta[k] == 0.0) {
      tab_m_[k] = tab_m_[k + 1] = 0.0;
      continue;
    }
    const double a = tab_m_[k] / delta[k], b = tab_m_[k + 1] / delta[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      tab_m_[k] = tau * a * delta[k];
      tab_m_[k + 1] = tau * b * delta[k];
    }
  }
}

double HalfLineModel::theta(double lambda) const {
  if (dirichlet_) return 0.0;
  if (!(lambda > 0.0)) throw DomainError("theta: lambda must be positive");
  const double x = std::log(lambda);
  if (x < kThetaLogMin || x > kThetaLogMax) return fraclap::theta(lambda, s_, quad_);
  const double step = (kThetaLogMax - kThetaLogMin) / (kThetaNodes - 1);
  int k = std::min(static_cast<int>((x - kThetaLogMin) / step), kThetaNodes - 2);
  const double h = tab_x_[k + 1] - tab_x_[k];
  const double u = (x - tab_x_[k]) / h;
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const double h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  return h00 * tab_y_[k] + h10 * h * tab_m_[k] + h01 * tab_y_[k + 1] + h11 * h * tab_m_[k + 1];
}

Eigen::VectorXd HalfLineModel::log_ratio_on_zeta(double lambda) const {
  Eigen::VectorXd L(zeta_.size());
  for (Eigen::Index j = 0; j < zeta_.size(); ++j) L[j] = log_ratio_L(lambda, zeta_[j], s_);
  return L;
}

RealFn HalfLineModel::gamma_at(double lambda) const {
  if (dirichlet_) return [](double) { return 0.0; };
  if (!(lambda > 0.0)) throw DomainError("gamma: lambda must be positive");
  Eigen::VectorXd L = log_ratio_on_zeta(lambda);
  const double v_max = zeta_logv_[zeta_logv_.size() - 1];
  return [this, lambda, L = std::move(L), v_max](double xi) {
    if (xi < 1.0) return 0.0;
    const double lx = std::log(xi);
    if (lx + kKernelReach > v_max) return gamma_density(lambda, xi, s_, quad_, reading_);
    const double pref = gamma_prefactor(lambda, std::log((xi - 1.0) * (xi + 1.0)), s_, reading_);
    if (pref == 0.0) return 0.0;
    const Eigen::Index n = zeta_logv_.size();
    Eigen::Index j0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>((lx - kKernelReach - kZetaLogMin) / zeta_h_));
    Eigen::Index j1 = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>((lx + kKernelReach - kZetaLogMin) / zeta_h_) + 1);
    double e = 0.0;
    for (Eigen::Index j = j0; j <= j1; ++j) e += L[j] / std::cosh(lx - zeta_logv_[j]);
    return pref * std::exp(-e * zeta_h_ / (2.0 * kPi));
  };
}

double HalfLineModel::gamma(double lambda, double xi) const { return gamma_at(lambda)(xi); }

Mode HalfLineModel::mode(double lambda) const {
  Mode m;
  m.lambda = lambda;
  if (dirichlet_) return m;
  if (!(lambda > 0.0)) throw DomainError("mode: lambda must be positive");
  m.theta = theta(lambda);
  const Eigen::VectorXd L = log_ratio_on_zeta(lambda);
  const Eigen::VectorXd expo = -(expo_kernel_ * L);
  m.c.resize(xi_.size());
  for (Eigen::Index i = 0; i < xi_.size(); ++i) {
    const double pref = gamma_prefactor(lambda, log_xi2m1_from(xi_logm1_[i]), s_, reading_);
    m.c[i] = pref == 0.0 ? 0.0 : xi_w_[i] * pref * std::exp(expo[i]);
  }
  return m;
}

double HalfLineModel::G(const Mode& m, double x) const {
  if (m.c.size() == 0) return 0.0;
  double g = 0.0;
  for (Eigen::Index i = 0; i < m.c.size(); ++i) {
    const double a = x * xi_[i];
    if (a > 745.0) break;
    g += m.c[i] * std::exp(-a);
  }
  return g;
}

double HalfLineModel::F(const Mode& m, double x) const {
  return std::sin(m.lambda * x + m.theta) + kTailSign * G(m, x);
}

double HalfLineModel::F(double lambda, double x) const { return F(mode(lambda), x); }

double HalfLineModel::J_reg(const Mode& m) const {
  const double l = m.lambda, th = m.theta;
  double j = -std::sin(2.0 * th) / (2.0 * l);
  if (m.c.size() == 0) return j;
  const double ct = std::cos(th), st = std::sin(th);
  double cross = 0.0;
  for (Eigen::Index i = 0; i < m.c.size(); ++i)
    cross += m.c[i] * (l * ct + xi_[i] * st) / (l * l + xi_[i] * xi_[i]);
  const double sq = m.c.dot(hilbert_ * m.c);
  return j - 4.0 * kTailSign * cross - 2.0 * sq;
}

double HalfLineModel::J_reg(double lambda) const { return J_reg(mode(lambda)); }

double HalfLineModel::J_tail_G(const Mode& m, double tau0) const {
  if (m.c.size() == 0) return 0.0;
  const double l = m.lambda;
  const double ph = l * tau0 + m.theta;
  const double sp = std::sin(ph), cp = std::cos(ph);
  Eigen::VectorXd v(m.c.size());
  double cross = 0.0;
  for (Eigen::Index i = 0; i < m.c.size(); ++i) {
    const double a = tau0 * xi_[i];
    v[i] = a > 745.0 ? 0.0 : m.c[i] * std::exp(-a);
    cross += v[i] * (xi_[i] * sp + l * cp) / (xi_[i] * xi_[i] + l * l);
  }
  return -4.0 * kTailSign * cross - 2.0 * v.dot(hilbert_ * v);
}

double HalfLineModel::J_tail(const Mode& m, double tau0) const {
  return -std::sin(2.0 * m.lambda * tau0 + 2.0 * m.theta) / (2.0 * m.lambda) + J_tail_G(m, tau0);
}

double HalfLineModel::e_plus(double t, double u, double mu) const {
  if (t < 0.0 || u < 0.0) throw DomainError("e_plus: t and u must be non-negative");
  if (mu <= 1.0) return 0.0;
  const double L = spectral_edge(mu, s_);
  auto f = [&](double ph) {
    const Mode m = mode(L * std::sin(ph));
    return F(m, t) * F(m, u) * L * std::cos(ph);
  };
  return 2.0 / kPi * integrate(f, 0.0, 0.5 * kPi, quad_).value;
}

double HalfLineModel::a_plus(double t, double mu) const {
  if (t < 0.0) throw DomainError("a_plus: t must be non-negative");
  if (mu <= 1.0) return 0.0;
  const double L = spectral_edge(mu, s_);
  auto f = [&](double ph) {
    const double l = L * std::sin(ph);
    const Mode m = mode(l);
    const double Fv = F(m, t);
    return (mu - std::pow(l * l + 1.0, s_)) * Fv * Fv * L * std::cos(ph);
  };
  return 2.0 / kPi * integrate(f, 0.0, 0.5 * kPi, quad_).value;
}

double HalfLineModel::K(double t, int d) const {
  if (!(t > 0.0)) throw DomainError("K: t must be positive");
  if (d < 2) throw DomainError("K: dimension must be at least 2");
  // lambda = tan(theta), r = rho cos(theta) maps the spectral window onto the unit square.
  const double cd = sphere_area(d - 2) / std::pow(2.0 * kPi, d - 1);
  double total = 0.0;
  for (std::size_t a = 0; a < kt_theta_.size(); ++a) {
    const double th = kt_theta_[a];
    const double ct = std::cos(th), st = std::sin(th);
    const Mode& m = kt_modes_[a];
    double inner = 0.0;
    for (std::size_t b = 0; b < kt_rho_.size(); ++b) {
      const double rho = kt_rho_[b];
      const double x = t * rho * ct;
      const double Fv = std::sin(t * rho * st + m.theta) + kTailSign * G(m, x);
      inner += kt_wrho_[b] * std::pow(rho, d - 1) * (1.0 - std::pow(rho, 2.0 * s_)) * (1.0 - 2.0 * Fv * Fv);
    }
    total += kt_wtheta_[a] * std::pow(ct, d - 2) * inner;
  }
  return cd / kPi * total;
}

double HalfLineModel::zeta(double mu) const {
  if (mu <= 1.0) return 0.0;
  const double L = spectral_edge(mu, s_);
  auto f = [&](double ph) {
    const double l = L * std::sin(ph);
    return (mu - std::pow(l * l + 1.0, s_)) * J_reg(l) * L * std::cos(ph);
  };
  const double body = integrate(f, 0.0, 0.5 * kPi, quad_).value;
  return (0.25 * kPi * (mu - 1.0) + body) / (kPi * mu);
}

XiShiftResult HalfLineModel::xi_shift(double mu, double truncation, double tol) const {
  if (!(truncation > 0.0)) throw DomainError("xi_shift: truncation must be positive");
  XiShiftResult out;
  out.truncation = truncation;
  if (mu <= 1.0) return out;
  const double L = spectral_edge(mu, s_);
  const double period = kPi / L;
  // Cesaro mean of int_0^T' (e - e+) dt over T' in [T, T + period].
  auto value_at = [&](double T) {
    auto f = [&](double ph) {
      const double l = L * std::sin(ph);
      const Mode m = mode(l);
      const double th2 = 2.0 * m.theta;
      const double osc = std::sin(2.0 * l * T + l * period + th2) * sinc(l * period) / (2.0 * l) -
                         std::sin(th2) / (2.0 * l);
      const double gpart = J_tail_G(m, 0.0) - J_tail_G(m, T);
      return (osc + gpart) * L * std::cos(ph);
    };
    QuadratureSpec q = quad_;
    q.max_subdivisions = std::max<std::size_t>(q.max_subdivisions, 20000);
    return integrate(f, 0.0, 0.5 * kPi, q).value / kPi;
  };
  out.value = value_at(truncation);
  const double doubled = value_at(2.0 * truncation);
  out.doubling_delta = std::abs(doubled - out.value);
  if (out.doubling_delta > tol * std::max(1.0, std::abs(out.value)))
    throw TruncationUnstable("xi_shift: doubling the truncation changed the value beyond tolerance", out.value,
                             out.doubling_delta);
  return out;
}

double HalfLineModel::transform_norm_sq(int n, double beta) const {
  if (n < 0 || !(beta > 0.0)) throw DomainError("transform_norm_sq: need n >= 0 and beta > 0");
  const double fact = std::tgamma(n + 1.0);
  auto phi = [&](double l) {
    const Mode m = mode(l);
    // int_0^inf x^n e^{-beta x} sin(l x + theta) dx = Im(e^{i theta} n! / (beta - i l)^{n+1})
    const double r = std::hypot(beta, l);
    const double arg = m.theta + (n + 1) * std::atan2(l, beta);
    double v = fact * std::sin(arg) / std::pow(r, n + 1);
    double g = 0.0;
    for (Eigen::Index i = 0; i < m.c.size(); ++i) g += m.c[i] * fact / std::pow(beta + xi_[i], n + 1);
    v += kTailSign * g;
    return 2.0 / kPi * v * v;
  };
  QuadratureSpec q = quad_;
  q.rel_tol = std::max(q.rel_tol, 1e-7);
  return integrate(phi, 0.0, kInf, q).value;
}

const HalfLineModel& model_for(double s, GammaReading reading) {
  thread_local std::map<std::pair<double, int>, std::unique_ptr<HalfLineModel>> cache;
  auto key = std::make_pair(s, static_cast<int>(reading));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<HalfLineModel>(s, QuadratureSpec{}, reading)).first;
  return *it->second;
}

double eigenfunction_F(double lambda, double x, double s) {
  if (x < 0.0) throw DomainError("eigenfunction_F: x must be non-negative");
  return model_for(s).F(lambda, x);
}

double kernel_e_plus(double t, double u, double mu, double s) { return model_for(s).e_plus(t, u, mu); }

double kernel_a_plus(double t, double mu, double s) { return model_for(s).a_plus(t, mu); }

double K_layer(double t, const FractionalOrder& order) {
  order.validate();
  return model_for(order.s).K(t, order.d);
}

double zeta_shift(double mu, double s) { return model_for(s).zeta(mu); }

XiShiftResult xi_shift(double mu, double s, double truncation, double tol) {
  return model_for(s).xi_shift(mu, truncation, tol);
}

}  // namespace fraclap
