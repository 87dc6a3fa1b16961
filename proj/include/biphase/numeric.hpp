#pragma once

#include <cstdint>
#include <optional>

namespace biphase {

// Parameters of the near-critical regime p = (1+eps)/n on two classes of n
// vertices each.
struct CriticalParams {
  std::uint64_t n;
  double eps;
  double p;

  static CriticalParams make(std::uint64_t n, double eps);
  bool supercritical() const { return eps > 0.0; }
};

struct DerivedScalars {
  double delta;
  std::optional<double> eps_prime;               // only for eps > 0
  std::optional<double> giant_order_prediction;  // only for eps > 0
  std::optional<double> giant_excess_prediction; // only for eps > 0
};

DerivedScalars derive_scalars(const CriticalParams& params);

// delta(eps) = eps - log(1+eps); > 0 for eps in (-1,1)\{0}, ~ eps^2/2 near 0.
double delta(double eps);

// Unique y in (0,1) with (1-y)e^y = (1+eps)e^{-eps}; bisection to interval
// width 1e-14. Satisfies y = eps - (2/3)eps^2 + O(eps^3).
double epsilon_prime(double eps);

// (e^{-r1} - e^{-r2})/sqrt(pi); limiting mean of the tree-window count.
double poisson_lambda(double r1, double r2);

// (1/2) \int_{u1}^{u2} e^{-t}/t dt via E1 differences, quadrature-checked;
// limiting mean of the unicyclic-window count.
double poisson_nu(double u1, double u2);

// Exponential integral E1(x) = \int_x^inf e^{-t}/t dt, x > 0.
// Series for x < 1, continued fraction otherwise.
double exp_integral_e1(double x);

// (1/delta) (log(|eps|^3 n) - (5/2) log log(|eps|^3 n) + alpha).
// Requires |eps|^3 n > e.
double tree_order_threshold(std::uint64_t n, double eps, double alpha);

// 2 (eps + eps') n / (1 + eps), eps > 0.
double giant_order_prediction(std::uint64_t n, double eps);

// (4/3) eps^3 n, eps > 0.
double giant_excess_prediction(std::uint64_t n, double eps);

struct GaussianSumResult {
  double exact_sum;
  double asymptotic;  // sqrt(pi/2) k^{1/2-2m}
  double ratio;
};

// Direct compensated summation of
//   sum_{d=-L}^{L} (k^2-d^2)^{-m} ((k-d)/(k+d))^d exp(-d^2/(2n))
// against the asymptotic sqrt(pi/2) k^{1/2-2m}. Requires L+1 <= k <= n.
GaussianSumResult verify_gaussian_sum(std::uint64_t k, std::uint64_t L,
                                      unsigned m, std::uint64_t n);

// q with p1 + (1-p1) q = p2, i.e. q = (p2-p1)/(1-p1).
double sprinkle_probability(double p1, double p2);

namespace detail {
// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
double adaptive_simpson(double (*f)(double), double a, double b, double tol);
}  // namespace detail

}  // namespace biphase
