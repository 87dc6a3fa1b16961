#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "biphase/bigcount.hpp"

namespace biphase {

struct OracleBudget {
  std::uint64_t max_slots = 24;             // i*j
  std::uint64_t max_subsets = 10'000'000;   // binom(i*j, m)
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  BigCount connected;  // m-edge subsets spanning all i+j vertices, connected
  BigCount subsets;    // subsets enumerated (= binom(ij, m))
};

// Exhaustive enumeration of all m-edge subsets of K_{i,j}; connectivity via
// union-find per subset. Exact; throws BudgetExceeded beyond the budget.
OracleResult count_connected_detail(std::uint64_t i, std::uint64_t j,
                                    std::uint64_t m, OracleBudget budget = {});

BigCount count_connected_oracle(std::uint64_t i, std::uint64_t j,
                                std::uint64_t m, OracleBudget budget = {});

}  // namespace biphase
