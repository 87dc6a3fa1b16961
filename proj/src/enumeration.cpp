#include "biphase/enumeration.hpp"

#include <cmath>
#include <stdexcept>

namespace biphase {

void BipartiteShape::validate() const {
  if (i < 0 || j < 0 || i + j < 1)
    throw std::domain_error("BipartiteShape: need i,j >= 0 and i+j >= 1");
  if (ell < -1) throw std::domain_error("BipartiteShape: ell < -1");
  if (edges() < 0) throw std::domain_error("BipartiteShape: negative edges");
  if (edges() > i * j)
    throw std::domain_error("BipartiteShape: edges exceed i*j");
}

BigCount count_trees(std::uint64_t i, std::uint64_t j) {
  if (i < 1 || j < 1) throw std::domain_error("count_trees: need i,j >= 1");
  return big_pow(i, j - 1) * big_pow(j, i - 1);
}

BigCount count_forests(std::uint64_t i, std::uint64_t j, std::uint64_t s,
                       std::uint64_t t) {
  if (i < 1 || j < 1) throw std::domain_error("count_forests: need i,j >= 1");
  if (s > i || t > j)
    throw std::domain_error("count_forests: need s <= i and t <= j");
  if (s + t == 0) throw std::domain_error("count_forests: need s + t >= 1");
  // i^{j-t-1} j^{i-s-1} (sj + ti - st).  An exponent of -1 only occurs at
  // t = j (resp. s = i), where the trailing factor carries the cancelling
  // power: with t = j the factor is sj + ji - sj = ij, and with both s = i,
  // t = j it is ij as well.
  if (t == j && s == i) return BigCount(1);  // ij / (i j)
  if (t == j) return big_pow(j, i - s);      // i^{-1} j^{i-s-1} (ij) = j^{i-s}
  if (s == i) return big_pow(i, j - t);
  BigCount tail(s * j + t * i - s * t);
  return big_pow(i, j - t - 1) * big_pow(j, i - s - 1) * tail;
}

BigCount count_unicyclic(std::uint64_t i, std::uint64_t j) {
  if (i < 1 || j < 1)
    throw std::domain_error("count_unicyclic: need i,j >= 1");
  if (std::min(i, j) < 2) return BigCount(0);
  mpq_class sum(0);
  const std::uint64_t rmax = std::min(i, j);
  for (std::uint64_t r = 2; r <= rmax; ++r) {
    mpq_class term(falling_factorial(i, r) * falling_factorial(j, r) *
                       BigCount(i + j - r),
                   big_pow(i, r) * big_pow(j, r));
    term.canonicalize();
    sum += term;
  }
  mpq_class total = mpq_class(count_trees(i, j)) * sum / 2;
  total.canonicalize();
  if (total.get_den() != 1)
    throw std::logic_error("count_unicyclic: sum did not reduce to an integer");
  return total.get_num();
}

LogReal unicyclic_asymptotic(std::uint64_t i, std::uint64_t j) {
  if (i < 2 || j < 2)
    throw std::domain_error("unicyclic_asymptotic: need i,j >= 2");
  double li = std::log(static_cast<double>(i));
  double lj = std::log(static_cast<double>(j));
  double lg = 0.5 * std::log(M_PI / 8.0) +
              0.5 * std::log(static_cast<double>(i + j)) + (j - 0.5) * li +
              (i - 0.5) * lj;
  return LogReal::from_log(lg);
}

LogReal complex_upper_bound(std::uint64_t i, std::uint64_t j,
                            std::uint64_t ell, double c) {
  if (c <= 0.0) throw std::domain_error("complex_upper_bound: need c > 0");
  if (2 * i < j || 2 * j < i)
    throw std::domain_error("complex_upper_bound: need 1/2 <= i/j <= 2");
  if (ell < 1 || i * j < i + j + ell)
    throw std::domain_error(
        "complex_upper_bound: need 1 <= ell <= ij - i - j");
  double li = std::log(static_cast<double>(i));
  double lj = std::log(static_cast<double>(j));
  double ld = static_cast<double>(ell);
  double lg = static_cast<double>(j) * li + static_cast<double>(i) * lj +
              0.5 * (3.0 * ld - 1.0) * std::log(static_cast<double>(i + j)) +
              0.5 * ld * std::log(c / ld);
  return LogReal::from_log(lg);
}

BigCount naive_complex_bound(std::uint64_t i, std::uint64_t j,
                             std::uint64_t ell) {
  return big_binomial(i * j, i + j + ell);
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::domain_error("log_binomial: k > n");
  if (k > n - k) k = n - k;
  if (k == 0) return 0.0;
  if (k <= 4096) {
    // sum log((n-t)/(t+1)) with Kahan compensation
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t t = 0; t < k; ++t) {
      double term = std::log(static_cast<double>(n - t)) -
                    std::log(static_cast<double>(t + 1));
      double y = term - comp;
      double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
    return sum;
  }
  double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
         std::lgamma(nd - kd + 1.0);
}

namespace {
LogReal expected_components_log(std::uint64_t n, double p,
                                const BipartiteShape& shape,
                                const LogReal& count) {
  shape.validate();
  if (shape.i > static_cast<std::int64_t>(n) ||
      shape.j > static_cast<std::int64_t>(n))
    throw std::domain_error("expected_components: i or j exceeds n");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("expected_components: need 0 < p < 1");
  const std::int64_t k = shape.order();
  const std::int64_t m = shape.edges();
  const std::int64_t empty =
      k * static_cast<std::int64_t>(n) - shape.i * shape.j - m;
  if (empty < 0)
    throw std::domain_error("expected_components: kn - ij - k - ell < 0");
  if (count.is_zero()) return LogReal::zero();
  double lg = log_binomial(n, static_cast<std::uint64_t>(shape.i)) +
              log_binomial(n, static_cast<std::uint64_t>(shape.j)) +
              count.log_magnitude() + static_cast<double>(m) * std::log(p) +
              static_cast<double>(empty) * std::log1p(-p);
  return LogReal::from_log(lg);
}
}  // namespace

LogReal expected_components(std::uint64_t n, double p,
                            const BipartiteShape& shape,
                            const BigCount& count) {
  return expected_components_log(n, p, shape, to_logreal(count));
}

LogReal expected_components(std::uint64_t n, double p,
                            const BipartiteShape& shape,
                            const LogReal& count) {
  return expected_components_log(n, p, shape, count);
}

}  // namespace biphase
