#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace biphase {

// chi-square df=1 critical value at significance 0.01
inline constexpr double kChi2Df1P99 = 6.6348966010212145;

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // unbiased
double stderr_of_mean(const std::vector<double>& xs);

double poisson_pmf(std::uint64_t k, double lambda);

// Total variation distance between the empirical distribution of counts and
// Poisson(lambda), tail mass beyond the scanned range included exactly.
double tv_to_poisson(const std::vector<std::uint64_t>& counts, double lambda);

// mean of x(x-1) over the samples
double second_factorial_moment(const std::vector<std::uint64_t>& counts);

// Goodness-of-fit statistic for `hits` successes in `trials` Bernoulli(p)
// draws against the two-cell expectation.
double chi_square_bernoulli(std::uint64_t hits, std::uint64_t trials,
                            double p);

}  // namespace biphase
