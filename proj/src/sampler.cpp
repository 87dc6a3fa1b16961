#include "biphase/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "biphase/numeric.hpp"
#include "biphase/rng.hpp"

namespace biphase {

namespace {

// geometric skip: failures before the next success of a Bernoulli(p) stream
std::uint64_t geometric_gap(StreamRng& rng, double log1mp) {
  double g = std::floor(std::log(rng.next_unit()) / log1mp);
  if (g >= 0x1.0p63) return UINT64_MAX;  // beyond any slot space
  return static_cast<std::uint64_t>(g);
}

}  // namespace

void GraphSample::init_arrays() {
  const std::uint64_t v2 = 2 * n_;
  parent_.resize(v2);
  rank_.assign(v2, 0);
  n1_.assign(v2, 0);
  n2_.assign(v2, 0);
  edges_.assign(v2, 0);
  for (std::uint64_t v = 0; v < v2; ++v) {
    parent_[v] = static_cast<std::uint32_t>(v);
    if (v < n_)
      n1_[v] = 1;
    else
      n2_[v] = 1;
  }
  total_edges_ = 0;
  slots_.clear();
  slots_valid_ = false;
}

std::uint32_t GraphSample::find(std::uint32_t v) {
  std::uint32_t root = v;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[v] != root) {
    std::uint32_t next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return root;
}

std::uint32_t GraphSample::find_root(std::uint64_t v) {
  if (v >= 2 * n_) throw std::out_of_range("find_root: vertex id out of range");
  return find(static_cast<std::uint32_t>(v));
}

void GraphSample::add_edge(std::uint32_t u, std::uint32_t v) {
  std::uint32_t ru = find(u), rv = find(v);
  ++total_edges_;
  if (ru == rv) {
    ++edges_[ru];
    return;
  }
  if (rank_[ru] < rank_[rv]) std::swap(ru, rv);
  parent_[rv] = ru;
  if (rank_[ru] == rank_[rv]) ++rank_[ru];
  n1_[ru] += n1_[rv];
  n2_[ru] += n2_[rv];
  edges_[ru] += edges_[rv] + 1;
}

GraphSample GraphSample::sample(std::uint64_t n, double p,
                                std::uint64_t seed) {
  GraphSample g;
  g.assign(n, p, seed);
  return g;
}

void GraphSample::assign(std::uint64_t n, double p, std::uint64_t seed) {
  if (n == 0 || n > (1ull << 31))
    throw std::domain_error("GraphSample: n out of range");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("GraphSample: p outside [0,1]");
  n_ = n;
  p_ = base_p_ = p;
  base_seed_ = seed;
  from_edges_ = false;
  init_arrays();

  const std::uint64_t nslots = n * n;
  if (p == 0.0) return;
  if (p == 1.0) {
    for (std::uint64_t e = 0; e < nslots; ++e)
      add_edge(static_cast<std::uint32_t>(e / n),
               static_cast<std::uint32_t>(n + e % n));
    return;
  }
  StreamRng rng(seed);
  const double log1mp = std::log1p(-p);
  std::uint64_t gap = geometric_gap(rng, log1mp);
  std::uint64_t cur = gap;
  while (cur < nslots && gap != UINT64_MAX) {
    add_edge(static_cast<std::uint32_t>(cur / n),
             static_cast<std::uint32_t>(n + cur % n));
    gap = geometric_gap(rng, log1mp);
    cur += 1 + gap;
  }
}

GraphSample GraphSample::from_edges(
    std::uint64_t n,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  GraphSample g;
  g.n_ = n;
  g.p_ = g.base_p_ = 0.0;
  g.base_seed_ = 0;
  g.from_edges_ = true;
  g.init_arrays();
  g.slots_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v < n || v >= 2 * n)
      throw std::domain_error("from_edges: edge not bipartite (u<n<=v<2n)");
    g.slots_.push_back(static_cast<std::uint64_t>(u) * n + (v - n));
  }
  std::sort(g.slots_.begin(), g.slots_.end());
  if (std::adjacent_find(g.slots_.begin(), g.slots_.end()) != g.slots_.end())
    throw std::domain_error("from_edges: duplicate edge slot");
  for (std::uint64_t s : g.slots_)
    g.add_edge(static_cast<std::uint32_t>(s / n),
               static_cast<std::uint32_t>(n + s % n));
  g.slots_valid_ = true;
  return g;
}

void GraphSample::materialize_slots() {
  if (slots_valid_) return;
  // re-run the base stream; slot order is increasing by construction
  slots_.clear();
  slots_.reserve(total_edges_);
  const std::uint64_t nslots = n_ * n_;
  if (base_p_ > 0.0 && base_p_ < 1.0) {
    StreamRng rng(base_seed_);
    const double log1mp = std::log1p(-base_p_);
    std::uint64_t gap = geometric_gap(rng, log1mp);
    std::uint64_t cur = gap;
    while (cur < nslots && gap != UINT64_MAX) {
      slots_.push_back(cur);
      gap = geometric_gap(rng, log1mp);
      cur += 1 + gap;
    }
  } else if (base_p_ == 1.0) {
    for (std::uint64_t e = 0; e < nslots; ++e) slots_.push_back(e);
  }
  if (slots_.size() != total_edges_)
    throw std::logic_error("materialize_slots: replay mismatch");
  slots_valid_ = true;
}

bool GraphSample::slot_occupied(std::uint64_t slot) const {
  if (!slots_valid_)
    throw std::logic_error("slot_occupied: slot set not materialized");
  return std::binary_search(slots_.begin(), slots_.end(), slot);
}

std::pair<std::uint64_t, std::uint32_t> GraphSample::largest_component() {
  std::uint64_t best_order = 0;
  std::uint32_t best_root = 0;
  const std::uint64_t v2 = 2 * n_;
  for (std::uint64_t v = 0; v < v2; ++v) {
    if (parent_[v] != v) continue;
    std::uint64_t order = counters(v).order();
    if (order > best_order) {
      best_order = order;
      best_root = static_cast<std::uint32_t>(v);
    }
  }
  return {best_order, best_root};
}

SprinkleRound GraphSample::sprinkle(double p_next, std::uint64_t seed) {
  if (p_next < p_) throw std::domain_error("sprinkle: p_next < current p");
  materialize_slots();
  const double q = sprinkle_probability(p_, p_next);

  auto [giant_order, giant_root] = largest_component();
  const std::int64_t excess_before = counters(giant_root).excess();

  std::vector<std::uint64_t> fresh;
  if (q > 0.0) {
    const std::uint64_t nslots = n_ * n_;
    if (q >= 1.0) {
      for (std::uint64_t e = 0; e < nslots; ++e)
        if (!std::binary_search(slots_.begin(), slots_.end(), e))
          fresh.push_back(e);
    } else {
      StreamRng rng(seed);
      const double log1mp = std::log1p(-q);
      std::uint64_t gap = geometric_gap(rng, log1mp);
      std::uint64_t cur = gap;
      while (cur < nslots && gap != UINT64_MAX) {
        // occupied slot: the union of simple graphs keeps a single edge
        if (!std::binary_search(slots_.begin(), slots_.end(), cur))
          fresh.push_back(cur);
        gap = geometric_gap(rng, log1mp);
        cur += 1 + gap;
      }
    }
    for (std::uint64_t s : fresh)
      add_edge(static_cast<std::uint32_t>(s / n_),
               static_cast<std::uint32_t>(n_ + s % n_));
    std::uint64_t old_size = slots_.size();
    slots_.insert(slots_.end(), fresh.begin(), fresh.end());
    std::inplace_merge(slots_.begin(), slots_.begin() + old_size,
                       slots_.end());
  }

  const std::int64_t excess_after =
      counters(find(giant_root)).excess();

  SprinkleRound round;
  round.p_prev = p_;
  round.p_next = p_next;
  round.q = q;
  round.new_edges = fresh.size();
  round.delta_excess_giant = excess_after - excess_before;
  p_ = p_next;
  return round;
}

void GraphSample::finalize() {
  const std::uint64_t v2 = 2 * n_;
  for (std::uint64_t v = 0; v < v2; ++v) find(static_cast<std::uint32_t>(v));
}

void GraphSample::dump_edges(std::ostream& os) {
  materialize_slots();
  for (std::uint64_t s : slots_)
    os << (s / n_) << ' ' << (n_ + s % n_) << '\n';
}

}  // namespace biphase
