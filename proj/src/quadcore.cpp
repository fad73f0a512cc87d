#include "fraclap/quadcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace fraclap {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208931577180, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  int piece;
  double lo, hi;
  double value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

struct Piece {
  RealFn g;
};

void gk21(const RealFn& g, double lo, double hi, double& value, double& err) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
  if (!std::isfinite(value) || !std::isfinite(err))
    throw NumericalError("non-finite integrand value in quadrature");
}

IntegralResult adapt(const std::vector<Piece>& pieces, const std::vector<std::pair<double, double>>& ranges,
                     const QuadratureSpec& spec) {
  spec.validate();
  std::priority_queue<Segment> queue;
  IntegralResult out;
  double total = 0.0, total_err = 0.0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    Segment s{static_cast<int>(p), ranges[p].first, ranges[p].second, 0.0, 0.0};
    gk21(pieces[p].g, s.lo, s.hi, s.value, s.err);
    out.evaluations += 21;
    total += s.value;
    total_err += s.err;
    queue.push(s);
  }
  std::size_t subdivisions = pieces.size();
  // Segments that cannot be split further are retired; their error stays in the total.
  double retired_err = 0.0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (queue.empty()) break;
    if (subdivisions >= spec.max_subdivisions)
      throw NonConvergence("adaptive quadrature did not converge within " +
                               std::to_string(spec.max_subdivisions) + " subdivisions",
                           total, total_err);
    Segment s = queue.top();
    queue.pop();
    const double mid = 0.5 * (s.lo + s.hi);
    if (!(mid > s.lo && mid < s.hi) ||
        std::abs(s.hi - s.lo) < 1e3 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      retired_err += s.err;
      if (retired_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
        throw NonConvergence("quadrature interval collapsed before reaching tolerance", total, total_err);
      continue;
    }
    Segment left{s.piece, s.lo, mid, 0.0, 0.0};
    Segment right{s.piece, mid, s.hi, 0.0, 0.0};
    gk21(pieces[s.piece].g, left.lo, left.hi, left.value, left.err);
    gk21(pieces[s.piece].g, right.lo, right.hi, right.value, right.err);
    out.evaluations += 42;
    total += left.value + right.value - s.value;
    total_err += left.err + right.err - s.err;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }
  // Re-sum to limit accumulated cancellation in the running totals.
  double sum = 0.0, err = retired_err;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().err;
    queue.pop();
  }
  out.value = sum;
  out.err_estimate = std::max(err, 0.0);
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be non-negative");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be at least 1");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec out = *this;
  out.rel_tol /= factor;
  out.abs_tol /= factor;
  out.max_subdivisions *= 4;
  return out;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

double sphere_area(int n) {
  if (n < 0) throw DomainError("sphere_area: dimension must be non-negative");
  const double m = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / gamma_fn(m);
}

double ball_volume(int n) {
  if (n < 0) throw DomainError("ball_volume: dimension must be non-negative");
  return std::pow(std::numbers::pi, 0.5 * n) / gamma_fn(0.5 * n + 1.0);
}

double c_sd(double s, int d) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("c_sd: s must lie in (0, 1)");
  if (d < 1) throw DomainError("c_sd: dimension must be positive");
  // |Gamma(-s)| = Gamma(1-s) / s for 0 < s < 1.
  const double abs_gamma_minus_s = std::tgamma(1.0 - s) / s;
  return std::pow(2.0, 2.0 * s - 1.0) * std::pow(std::numbers::pi, -0.5 * d) * std::tgamma(0.5 * d + s) /
         abs_gamma_minus_s;
}

IntegralResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec, Endpoints ends) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
  if (a == b) return {};
  if (std::isinf(a)) throw DomainError("integrate: lower limit must be finite");
  if (b < a) {
    IntegralResult r = integrate(f, b, a, spec, ends);
    r.value = -r.value;
    return r;
  }
  std::vector<Piece> pieces;
  std::vector<std::pair<double, double>> ranges;
  if (std::isinf(b)) {
    const double c = std::max(a, 0.0) + 1.0;
    if (c > a) {
      pieces.push_back({[&f](double x) { return f(x); }});
      ranges.emplace_back(a, c);
    }
    pieces.push_back({[&f, c](double u) { return f(c / u) * c / (u * u); }});
    ranges.emplace_back(0.0, 1.0);
    return adapt(pieces, ranges, spec);
  }
  const double w = b - a;
  switch (ends) {
    case Endpoints::regular:
      pieces.push_back({[&f](double x) { return f(x); }});
      ranges.emplace_back(a, b);
      break;
    case Endpoints::singular_left:
      pieces.push_back({[&f, a, w](double u) { return f(a + w * u * u) * 2.0 * w * u; }});
      ranges.emplace_back(0.0, 1.0);
      break;
    case Endpoints::singular_right:
      pieces.push_back({[&f, b, w](double u) { return f(b - w * u * u) * 2.0 * w * u; }});
      ranges.emplace_back(0.0, 1.0);
      break;
    case Endpoints::singular_both:
      pieces.push_back({[&f, a, w](double u) {
        return f(a + w * u * u * (3.0 - 2.0 * u)) * 6.0 * w * u * (1.0 - u);
      }});
      ranges.emplace_back(0.0, 1.0);
      break;
  }
  return adapt(pieces, ranges, spec);
}

IntegralResult integrate_oscillatory(const RealFn& envelope, double omega, double phase, double a,
                                     const QuadratureSpec& spec) {
  if (!(omega > 0.0)) throw DomainError("integrate_oscillatory: omega must be positive");
  const double period = 2.0 * std::numbers::pi / omega;
  auto integrand = [&](double t) { return envelope(t) * std::cos(omega * t + phase); };
  if (spec.oscillatory_policy == OscillatoryPolicy::none)
    return integrate(integrand, a, std::numeric_limits<double>::infinity(), spec);

  const double cut = std::max(a, 0.0) + 40.0 * period + 20.0;
  QuadratureSpec local = spec;
  local.max_subdivisions = std::max<std::size_t>(spec.max_subdivisions, 8000);
  IntegralResult body = integrate(integrand, a, cut, local);

  if (spec.oscillatory_policy == OscillatoryPolicy::closed_form_tail) {
    const double step = 1e-3 * std::max(1.0, cut);
    const double e0 = envelope(cut);
    const double ep = envelope(cut + step), em = envelope(cut - step);
    const double e1 = (ep - em) / (2.0 * step);
    const double e2 = (ep - 2.0 * e0 + em) / (step * step);
    const double arg = omega * cut + phase;
    const double t1 = -e0 * std::sin(arg) / omega;
    const double t2 = -e1 * std::cos(arg) / (omega * omega);
    const double t3 = e2 * std::sin(arg) / (omega * omega * omega);
    body.value += t1 + t2 + t3;
    body.err_estimate += std::abs(t3) + 1e-6 * std::abs(t2);
    body.evaluations += 3;
    return body;
  }

  // Cesaro average of the running integral over one period beyond the cut.
  IntegralResult extra = integrate([&](double t) { return (cut + period - t) / period * integrand(t); }, cut,
                                   cut + period, local);
  body.value += extra.value;
  const double step = 1e-3 * std::max(1.0, cut);
  const double slope = (envelope(cut + step) - envelope(cut - step)) / (2.0 * step);
  body.err_estimate += extra.err_estimate + std::abs(slope) / (omega * omega);
  body.evaluations += extra.evaluations + 2;
  return body;
}

IntegralResult laplace(const RealFn& f, double t, const QuadratureSpec& spec) {
  if (!(t > 0.0)) throw DomainError("laplace: t must be positive");
  return integrate(
      [&f, t](double xi) {
        const double e = std::exp(-t * xi);
        return e == 0.0 ? 0.0 : e * f(xi);
      },
      0.0, std::numeric_limits<double>::infinity(), spec);
}

void gauss_legendre(int n, double* nodes, double* weights) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? x : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace fraclap
