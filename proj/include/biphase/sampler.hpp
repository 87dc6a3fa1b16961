#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace biphase {

struct SprinkleRound {
  double p_prev;
  double p_next;
  double q;  // sprinkle_probability(p_prev, p_next)
  std::uint64_t new_edges;
  std::int64_t delta_excess_giant;
};

struct RootCounters {
  std::uint32_t n1;
  std::uint32_t n2;
  std::uint64_t edges;

  std::uint64_t order() const {
    return static_cast<std::uint64_t>(n1) + n2;
  }
  std::int64_t excess() const {
    return static_cast<std::int64_t>(edges) -
           static_cast<std::int64_t>(order());
  }
};

// One G(n,n,p) realization: union-find over 2n vertices with per-root
// class/edge counters. Vertices [0,n) are class 1, [n,2n) class 2; edge
// slot e <-> (e/n, n + e%n). Edges themselves are not stored; sprinkling
// lazily materializes the sorted slot set so that slot-wise unions stay
// exact (a re-drawn occupied slot is a no-op).
class GraphSample {
 public:
  GraphSample() = default;

  // Each of the n^2 slots present independently with probability p;
  // geometric skip generation, deterministic in (n, p, seed).
  static GraphSample sample(std::uint64_t n, double p, std::uint64_t seed);

  // Same as sample() but reuses this object's capacity.
  void assign(std::uint64_t n, double p, std::uint64_t seed);

  // Test/debug constructor from an explicit edge list (u in [0,n),
  // v in [n,2n)); duplicates rejected.
  static GraphSample from_edges(
      std::uint64_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  // Unions an independent G(n,n,q) with q = sprinkle_probability(p, p_next)
  // into the sample; composed occupancy per slot is exactly Bernoulli(p_next).
  SprinkleRound sprinkle(double p_next, std::uint64_t seed);

  std::uint32_t find_root(std::uint64_t v);

  // Full path compression; after this parent[v] is a root for every v.
  void finalize();

  std::uint64_t n() const { return n_; }
  double p() const { return p_; }
  std::uint64_t total_edges() const { return total_edges_; }
  std::uint64_t num_vertices() const { return 2 * n_; }

  bool is_root(std::uint64_t v) const { return parent_[v] == v; }
  RootCounters counters(std::uint64_t root) const {
    return RootCounters{n1_[root], n2_[root], edges_[root]};
  }

  // (order, root) of the largest component; ties broken by smaller root id.
  std::pair<std::uint64_t, std::uint32_t> largest_component();

  // Slot occupancy query; requires the slot set (sprinkled samples, or call
  // materialize_slots() first).
  bool slot_occupied(std::uint64_t slot) const;
  void materialize_slots();

  // Debug dump, one "u v" line per edge, sorted by slot index. Small n only.
  void dump_edges(std::ostream& os);

 private:
  void init_arrays();
  void add_edge(std::uint32_t u, std::uint32_t v);
  std::uint32_t find(std::uint32_t v);

  std::uint64_t n_ = 0;
  double p_ = 0.0;
  double base_p_ = 0.0;
  std::uint64_t base_seed_ = 0;
  bool from_edges_ = false;
  std::uint64_t total_edges_ = 0;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<std::uint32_t> n1_, n2_;
  std::vector<std::uint64_t> edges_;
  std::vector<std::uint64_t> slots_;
  bool slots_valid_ = false;
};

}  // namespace biphase
