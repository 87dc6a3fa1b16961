#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "json.hpp"

#include "biphase/sampler.hpp"

namespace biphase {

struct ComponentRecord {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t edges = 0;

  std::uint64_t order() const { return n1 + n2; }
  std::int64_t excess() const {
    return static_cast<std::int64_t>(edges) -
           static_cast<std::int64_t>(order());
  }
  bool is_tree() const { return excess() == -1; }
  bool is_unicyclic() const { return excess() == 0; }
  bool is_complex() const { return excess() >= 1; }
};

struct ClassifyFlags {
  bool balanced;
  bool eps_uniform;
  bool small;
};

// balanced: n1 <= 2 n2 and n2 <= 2 n1; eps-uniform: |n1-n2| < eps^{1/4} sqrt(n);
// small: order <= floor(n^{2/3}).
ClassifyFlags classify(const ComponentRecord& rec, std::uint64_t n,
                       double eps);

// Exact floor(n^{2/3}), i.e. the largest k with k^3 <= n^2.
std::uint64_t floor_n_two_thirds(std::uint64_t n);

// Exact ceil(n^{2/3}); the default census order_cap.
std::uint64_t ceil_n_two_thirds(std::uint64_t n);

struct ComponentCensus {
  std::uint64_t n = 0;
  double eps = 0.0;
  std::uint64_t order_cap = 0;
  bool include_order1 = true;

  std::uint64_t tree_count = 0;
  std::uint64_t unicyclic_count = 0;
  std::uint64_t complex_count = 0;
  std::uint64_t component_count = 0;

  // order -> number of components, per class (not capped)
  std::map<std::uint64_t, std::uint64_t> tree_hist;
  std::map<std::uint64_t, std::uint64_t> unicyclic_hist;
  std::map<std::uint64_t, std::uint64_t> complex_hist;

  // eps-uniform tree components by order (vertex-count statistics)
  std::map<std::uint64_t, std::uint64_t> uniform_tree_hist;

  // (i, j, ell) -> count, only for order <= order_cap
  std::map<std::array<std::int64_t, 3>, std::uint64_t> shape_map;

  ComponentRecord L1, L2;
  std::uint64_t L1_root = 0, L2_root = 0;
  bool has_L2 = false;

  // vertices in tree/unicyclic components of order <= floor(n^{2/3});
  // Y(-1) honours include_order1
  std::uint64_t y_minus1 = 0;
  std::uint64_t y_0 = 0;
  std::uint64_t isolated_count = 0;

  std::uint64_t unbalanced_threshold = 0;
  std::uint64_t unbalanced_large_count = 0;
  std::uint64_t nonuniform_small_tree_count = 0;

  std::uint64_t total_vertices = 0;
  std::uint64_t total_edges = 0;

  std::uint64_t vertices_in_orders_at_least(std::uint64_t k0) const;
  std::uint64_t max_tree_order() const;
};

// One pass over the roots of a finalized sample. order_cap bounds the shape
// map; the histograms are complete. include_order1 selects whether isolated
// vertices (degenerate order-1 trees) count toward Y(-1).
ComponentCensus build_census(GraphSample& sample, double eps,
                             std::uint64_t order_cap,
                             bool include_order1 = true);

// Tree components with order in [ceil(threshold(r1)), floor(threshold(r2))].
std::uint64_t window_count_trees(const ComponentCensus& census,
                                 std::uint64_t n, double eps, double r1,
                                 double r2);

// Unicyclic components with order in [ceil(u1/delta), floor(u2/delta)].
std::uint64_t window_count_unicyclic(const ComponentCensus& census,
                                     std::uint64_t n, double eps, double u1,
                                     double u2);

nlohmann::ordered_json census_to_json(const ComponentCensus& census);

}  // namespace biphase
