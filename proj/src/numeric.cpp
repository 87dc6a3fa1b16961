#include "biphase/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace biphase {

CriticalParams CriticalParams::make(std::uint64_t n, double eps) {
  if (n == 0) throw std::domain_error("CriticalParams: n must be positive");
  if (!(eps > -1.0 && eps < 1.0) || eps == 0.0)
    throw std::domain_error("CriticalParams: eps must be in (-1,1) \\ {0}");
  double p = (1.0 + eps) / static_cast<double>(n);
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("CriticalParams: p = (1+eps)/n outside [0,1]");
  return CriticalParams{n, eps, p};
}

DerivedScalars derive_scalars(const CriticalParams& params) {
  DerivedScalars d;
  d.delta = delta(params.eps);
  if (params.eps > 0.0) {
    d.eps_prime = epsilon_prime(params.eps);
    d.giant_order_prediction = giant_order_prediction(params.n, params.eps);
    d.giant_excess_prediction = giant_excess_prediction(params.n, params.eps);
  }
  return d;
}

double delta(double eps) {
  if (eps <= -1.0) throw std::domain_error("delta: eps <= -1");
  if (eps == 0.0) throw std::domain_error("delta: eps = 0");
  return eps - std::log1p(eps);
}

double epsilon_prime(double eps) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::domain_error("epsilon_prime: eps must be in (0,1)");
  const double rhs = (1.0 + eps) * std::exp(-eps);
  // f(y) = (1-y)e^y - rhs is strictly decreasing on (0,1): f' = -y e^y < 0.
  double lo = 0.0, hi = 1.0 - 1e-15;
  while (hi - lo > 1e-14) {
    double mid = 0.5 * (lo + hi);
    double f = (1.0 - mid) * std::exp(mid) - rhs;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double poisson_lambda(double r1, double r2) {
  if (r1 < 0.0 || r2 < r1)
    throw std::domain_error("poisson_lambda: need 0 <= r1 <= r2");
  return (std::exp(-r1) - std::exp(-r2)) / std::sqrt(M_PI);
}

double exp_integral_e1(double x) {
  if (x <= 0.0) throw std::domain_error("exp_integral_e1: x must be > 0");
  if (x < 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    constexpr double kEulerGamma = 0.57721566490153286060651209;
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -x / k;
      double add = -term / k;
      sum += add;
      if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Continued fraction e^{-x}/(x+1-1/(x+3-4/(x+5-9/(...)))), modified Lentz.
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

namespace detail {

namespace {
double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(double (*f)(double), double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol,
                    int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(double (*f)(double), double a, double b, double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace detail

namespace {
double nu_integrand(double t) { return std::exp(-t) / t; }
}  // namespace

double poisson_nu(double u1, double u2) {
  if (u1 == u2 && u1 >= 0.0) return 0.0;
  if (u1 <= 0.0 || u2 < u1)
    throw std::domain_error("poisson_nu: need 0 < u1 <= u2");
  double via_e1 = 0.5 * (exp_integral_e1(u1) - exp_integral_e1(u2));
  double via_quad =
      0.5 * detail::adaptive_simpson(nu_integrand, u1, u2, 1e-12);
  // E1 is the analytically exact route; quadrature is the cross-check.
  if (std::fabs(via_e1 - via_quad) > 1e-9) return via_quad;
  return via_e1;
}

double tree_order_threshold(std::uint64_t n, double eps, double alpha) {
  double x = std::fabs(eps) * std::fabs(eps) * std::fabs(eps) *
             static_cast<double>(n);
  if (!(x > M_E))
    throw std::domain_error("tree_order_threshold: need |eps|^3 n > e");
  double lx = std::log(x);
  return (lx - 2.5 * std::log(lx) + alpha) / delta(eps);
}

double giant_order_prediction(std::uint64_t n, double eps) {
  double ep = epsilon_prime(eps);  // validates eps > 0
  return 2.0 * (eps + ep) * static_cast<double>(n) / (1.0 + eps);
}

double giant_excess_prediction(std::uint64_t n, double eps) {
  if (eps <= 0.0)
    throw std::domain_error("giant_excess_prediction: eps must be > 0");
  return (4.0 / 3.0) * eps * eps * eps * static_cast<double>(n);
}

GaussianSumResult verify_gaussian_sum(std::uint64_t k, std::uint64_t L,
                                      unsigned m, std::uint64_t n) {
  if (L >= k) throw std::domain_error("verify_gaussian_sum: need L + 1 <= k");
  if (k > n) throw std::domain_error("verify_gaussian_sum: need k <= n");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double sum = 0.0, comp = 0.0;  // Kahan
  for (std::int64_t d = -static_cast<std::int64_t>(L);
       d <= static_cast<std::int64_t>(L); ++d) {
    const double dd = static_cast<double>(d);
    double lt = -dd * dd / (2.0 * nd);
    if (m > 0) lt -= m * std::log(kd * kd - dd * dd);
    if (d != 0) lt += dd * (std::log(kd - dd) - std::log(kd + dd));
    double term = std::exp(lt);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double asym = std::sqrt(M_PI / 2.0) *
                std::pow(kd, 0.5 - 2.0 * static_cast<double>(m));
  return GaussianSumResult{sum, asym, sum / asym};
}

double sprinkle_probability(double p1, double p2) {
  if (p1 < 0.0 || p2 > 1.0)
    throw std::domain_error("sprinkle_probability: probabilities in [0,1]");
  if (p1 > p2) throw std::domain_error("sprinkle_probability: p1 > p2");
  if (p1 >= 1.0) throw std::domain_error("sprinkle_probability: p1 >= 1");
  return (p2 - p1) / (1.0 - p1);
}

}  // namespace biphase
