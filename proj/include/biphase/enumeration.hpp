#pragma once

#include <cstdint>

#include "biphase/bigcount.hpp"
#include "biphase/logreal.hpp"

namespace biphase {

// Component/graph signature: i vertices in class 1, j in class 2, excess ell
// (edges minus order). Trees have ell = -1, unicyclic 0, complex >= 1.
struct BipartiteShape {
  std::int64_t i;
  std::int64_t j;
  std::int64_t ell;

  std::int64_t order() const { return i + j; }
  std::int64_t edges() const { return i + j + ell; }

  // edges in [0, i*j], ell >= -1, at least one vertex
  void validate() const;
};

// Scoins: number of labeled spanning trees of K_{i,j} = i^{j-1} j^{i-1}.
BigCount count_trees(std::uint64_t i, std::uint64_t j);

// Moon: rooted bipartite forests with s+t components, the s+t designated
// roots in distinct components: i^{j-t-1} j^{i-s-1} (sj + ti - st).
// Computed in factored integer form (negative exponents cancel).
BigCount count_forests(std::uint64_t i, std::uint64_t j, std::uint64_t s,
                       std::uint64_t t);

// Connected unicyclic bipartite graphs:
//   (1/2) i^{j-1} j^{i-1} sum_{r=2}^{min(i,j)} (i)_r (j)_r / (i^r j^r) (i+j-r),
// evaluated in exact rationals; integrality asserted. 0 when min(i,j) < 2.
BigCount count_unicyclic(std::uint64_t i, std::uint64_t j);

// sqrt(pi/8) sqrt(i+j) i^{j-1/2} j^{i-1/2}, in log space.
LogReal unicyclic_asymptotic(std::uint64_t i, std::uint64_t j);

// i^j j^i (i+j)^{(3 ell - 1)/2} (c/ell)^{ell/2} in log space.
// Requires 1 <= ell <= ij - i - j and 1/2 <= i/j <= 2.
LogReal complex_upper_bound(std::uint64_t i, std::uint64_t j,
                            std::uint64_t ell, double c);

// binom(ij, i+j+ell): all bipartite graphs with that many edges, connected
// or not; the naive bound used when ell > i+j.
BigCount naive_complex_bound(std::uint64_t i, std::uint64_t j,
                             std::uint64_t ell);

// log binom(n, k); exact compensated log-sum for small k, lgamma otherwise.
double log_binomial(std::uint64_t n, std::uint64_t k);

// E(X(i,j,ell)) = binom(n,i) binom(n,j) count p^{k+ell} (1-p)^{kn-ij-k-ell}
// in log space. count is supplied by the caller (exact value or bound).
LogReal expected_components(std::uint64_t n, double p,
                            const BipartiteShape& shape,
                            const BigCount& count);

// Same with the count already in log space (for bounds).
LogReal expected_components(std::uint64_t n, double p,
                            const BipartiteShape& shape, const LogReal& count);

}  // namespace biphase
