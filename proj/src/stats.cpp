#include "biphase/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biphase {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::domain_error("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::domain_error("sample_variance: need >= 2");
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double stderr_of_mean(const std::vector<double>& xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double poisson_pmf(std::uint64_t k, double lambda) {
  if (lambda < 0.0) throw std::domain_error("poisson_pmf: lambda < 0");
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

double tv_to_poisson(const std::vector<std::uint64_t>& counts,
                     double lambda) {
  if (counts.empty()) throw std::domain_error("tv_to_poisson: empty sample");
  std::uint64_t kmax = *std::max_element(counts.begin(), counts.end());
  std::uint64_t scan =
      std::max<std::uint64_t>(kmax, static_cast<std::uint64_t>(lambda) + 40);
  std::vector<std::uint64_t> bins(scan + 1, 0);
  for (std::uint64_t c : counts) ++bins[c];
  const double total = static_cast<double>(counts.size());
  double tv = 0.0, pois_mass = 0.0;
  for (std::uint64_t k = 0; k <= scan; ++k) {
    double pk = poisson_pmf(k, lambda);
    pois_mass += pk;
    tv += std::fabs(static_cast<double>(bins[k]) / total - pk);
  }
  tv += 1.0 - std::min(1.0, pois_mass);  // Poisson tail beyond the scan
  return 0.5 * tv;
}

double second_factorial_moment(const std::vector<std::uint64_t>& counts) {
  if (counts.empty())
    throw std::domain_error("second_factorial_moment: empty sample");
  double s = 0.0;
  for (std::uint64_t c : counts)
    s += static_cast<double>(c) * (static_cast<double>(c) - 1.0);
  return s / static_cast<double>(counts.size());
}

double chi_square_bernoulli(std::uint64_t hits, std::uint64_t trials,
                            double p) {
  if (trials == 0 || p <= 0.0 || p >= 1.0)
    throw std::domain_error("chi_square_bernoulli: bad arguments");
  double e1 = static_cast<double>(trials) * p;
  double e0 = static_cast<double>(trials) * (1.0 - p);
  double o1 = static_cast<double>(hits);
  double o0 = static_cast<double>(trials - hits);
  return (o1 - e1) * (o1 - e1) / e1 + (o0 - e0) * (o0 - e0) / e0;
}

}  // namespace biphase
