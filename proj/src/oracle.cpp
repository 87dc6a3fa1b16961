#include "biphase/oracle.hpp"

#include <array>
#include <vector>

namespace biphase {

namespace {

constexpr std::uint64_t kMaxVerts = 64;

// find with path halving on a small fixed array
std::uint32_t uf_find(std::array<std::uint32_t, kMaxVerts>& parent,
                      std::uint32_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

OracleResult count_connected_detail(std::uint64_t i, std::uint64_t j,
                                    std::uint64_t m, OracleBudget budget) {
  const std::uint64_t slots = i * j;
  const std::uint64_t k = i + j;
  if (k < 1) throw std::domain_error("count_connected_oracle: need i + j >= 1");
  if (slots > budget.max_slots)
    throw BudgetExceeded("count_connected_oracle: i*j = " +
                         std::to_string(slots) + " exceeds slot budget " +
                         std::to_string(budget.max_slots));
  BigCount total = big_binomial(slots, m);
  if (total > BigCount(static_cast<unsigned long>(budget.max_subsets)))
    throw BudgetExceeded("count_connected_oracle: binom(" +
                         std::to_string(slots) + "," + std::to_string(m) +
                         ") = " + to_decimal(total) +
                         " exceeds subset budget " +
                         std::to_string(budget.max_subsets));
  if (m > slots) return OracleResult{BigCount(0), BigCount(0)};
  if (m == 0) {
    // empty edge set connects only the single-vertex graph
    return OracleResult{BigCount(k == 1 ? 1 : 0), BigCount(1)};
  }

  // slot e = a*j + b  <->  edge (a, i + b)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_of(slots);
  for (std::uint64_t a = 0; a < i; ++a)
    for (std::uint64_t b = 0; b < j; ++b)
      edge_of[a * j + b] = {static_cast<std::uint32_t>(a),
                            static_cast<std::uint32_t>(i + b)};

  std::vector<std::uint64_t> idx(m);
  for (std::uint64_t t = 0; t < m; ++t) idx[t] = t;

  std::uint64_t connected = 0, visited = 0;
  std::array<std::uint32_t, kMaxVerts> parent{};
  for (;;) {
    ++visited;
    for (std::uint64_t v = 0; v < k; ++v)
      parent[v] = static_cast<std::uint32_t>(v);
    std::uint64_t comps = k;
    for (std::uint64_t t = 0; t < m; ++t) {
      auto [a, b] = edge_of[idx[t]];
      std::uint32_t ra = uf_find(parent, a), rb = uf_find(parent, b);
      if (ra != rb) {
        parent[ra] = rb;
        --comps;
      }
    }
    if (comps == 1) ++connected;

    // next m-combination of [0, slots)
    std::uint64_t t = m;
    while (t > 0 && idx[t - 1] == slots - m + (t - 1)) --t;
    if (t == 0) break;
    ++idx[t - 1];
    for (std::uint64_t u = t; u < m; ++u) idx[u] = idx[u - 1] + 1;
  }
  if (BigCount(static_cast<unsigned long>(visited)) != total)
    throw std::logic_error("count_connected_oracle: enumeration mismatch");
  return OracleResult{BigCount(static_cast<unsigned long>(connected)),
                      std::move(total)};
}

BigCount count_connected_oracle(std::uint64_t i, std::uint64_t j,
                                std::uint64_t m, OracleBudget budget) {
  return count_connected_detail(i, j, m, budget).connected;
}

}  // namespace biphase
