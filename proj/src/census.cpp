#include "biphase/census.hpp"

#include <cmath>
#include <stdexcept>

#include "biphase/numeric.hpp"

namespace biphase {

std::uint64_t floor_n_two_thirds(std::uint64_t n) {
  std::uint64_t k = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(n), 2.0 / 3.0)));
  auto cube_le = [](std::uint64_t x, unsigned __int128 target) {
    unsigned __int128 c = static_cast<unsigned __int128>(x) * x * x;
    return c <= target;
  };
  unsigned __int128 n2 = static_cast<unsigned __int128>(n) * n;
  while (k > 0 && !cube_le(k, n2)) --k;
  while (cube_le(k + 1, n2)) ++k;
  return k;
}

std::uint64_t ceil_n_two_thirds(std::uint64_t n) {
  std::uint64_t f = floor_n_two_thirds(n);
  unsigned __int128 n2 = static_cast<unsigned __int128>(n) * n;
  unsigned __int128 f3 = static_cast<unsigned __int128>(f) * f * f;
  return f3 == n2 ? f : f + 1;
}

ClassifyFlags classify(const ComponentRecord& rec, std::uint64_t n,
                       double eps) {
  if (eps <= 0.0)
    throw std::domain_error("classify: eps must be > 0 for the uniformity test");
  ClassifyFlags f;
  f.balanced = rec.n1 <= 2 * rec.n2 && rec.n2 <= 2 * rec.n1;
  double diff = rec.n1 >= rec.n2 ? static_cast<double>(rec.n1 - rec.n2)
                                 : static_cast<double>(rec.n2 - rec.n1);
  f.eps_uniform =
      diff < std::pow(eps, 0.25) * std::sqrt(static_cast<double>(n));
  f.small = rec.order() <= floor_n_two_thirds(n);
  return f;
}

ComponentCensus build_census(GraphSample& sample, double eps,
                             std::uint64_t order_cap, bool include_order1) {
  sample.finalize();
  ComponentCensus c;
  c.n = sample.n();
  c.eps = eps;
  c.order_cap = order_cap;
  c.include_order1 = include_order1;
  c.total_vertices = sample.num_vertices();
  c.total_edges = sample.total_edges();

  const std::uint64_t n = sample.n();
  const std::uint64_t small_cap = floor_n_two_thirds(n);
  const double uniform_bound =
      std::pow(std::fabs(eps), 0.25) * std::sqrt(static_cast<double>(n));
  c.unbalanced_threshold = static_cast<std::uint64_t>(
      std::ceil(2000.0 * std::log(static_cast<double>(n))));

  std::uint64_t second_order = 0;
  const std::uint64_t v2 = sample.num_vertices();
  for (std::uint64_t v = 0; v < v2; ++v) {
    if (!sample.is_root(v)) continue;
    RootCounters rc = sample.counters(v);
    ComponentRecord rec{rc.n1, rc.n2, rc.edges};
    const std::uint64_t order = rec.order();
    const std::int64_t excess = rec.excess();
    ++c.component_count;

    if (excess == -1) {
      ++c.tree_count;
      ++c.tree_hist[order];
    } else if (excess == 0) {
      ++c.unicyclic_count;
      ++c.unicyclic_hist[order];
    } else {
      ++c.complex_count;
      ++c.complex_hist[order];
    }

    if (order == 1) ++c.isolated_count;

    double diff = rec.n1 >= rec.n2 ? static_cast<double>(rec.n1 - rec.n2)
                                   : static_cast<double>(rec.n2 - rec.n1);
    bool uniform = diff < uniform_bound;
    bool balanced = rec.n1 <= 2 * rec.n2 && rec.n2 <= 2 * rec.n1;

    if (order <= small_cap) {
      if (excess == -1) {
        if (order > 1 || include_order1) c.y_minus1 += order;
        if (uniform) c.uniform_tree_hist[order] += 1;
        if (!uniform) ++c.nonuniform_small_tree_count;
      } else if (excess == 0) {
        c.y_0 += order;
      }
    }
    if (!balanced && order >= c.unbalanced_threshold)
      ++c.unbalanced_large_count;

    if (order <= order_cap)
      ++c.shape_map[{static_cast<std::int64_t>(rec.n1),
                     static_cast<std::int64_t>(rec.n2), excess}];

    // top-2 by (order desc, root asc); scan order makes the tie-break
    if (order > c.L1.order()) {
      c.L2 = c.L1;
      c.L2_root = c.L1_root;
      second_order = c.L1.order();
      c.has_L2 = c.component_count > 1;
      c.L1 = rec;
      c.L1_root = static_cast<std::uint64_t>(v);
    } else if (order > second_order) {
      c.L2 = rec;
      c.L2_root = static_cast<std::uint64_t>(v);
      second_order = order;
      c.has_L2 = true;
    }
  }
  return c;
}

namespace {
std::uint64_t window_count(const std::map<std::uint64_t, std::uint64_t>& hist,
                           double lower, double upper,
                           std::uint64_t order_cap) {
  double lo = std::ceil(lower);
  double hi = std::floor(upper);
  if (hi > static_cast<double>(order_cap))
    throw std::domain_error("window count: window exceeds census order_cap");
  if (lo > hi) return 0;
  std::uint64_t a = static_cast<std::uint64_t>(std::max(lo, 1.0));
  std::uint64_t b = static_cast<std::uint64_t>(hi);
  std::uint64_t total = 0;
  for (auto it = hist.lower_bound(a); it != hist.end() && it->first <= b; ++it)
    total += it->second;
  return total;
}
}  // namespace

std::uint64_t window_count_trees(const ComponentCensus& census,
                                 std::uint64_t n, double eps, double r1,
                                 double r2) {
  double lo = tree_order_threshold(n, eps, r1);
  double hi = tree_order_threshold(n, eps, r2);
  return window_count(census.tree_hist, lo, hi, census.order_cap);
}

std::uint64_t window_count_unicyclic(const ComponentCensus& census,
                                     std::uint64_t n, double eps, double u1,
                                     double u2) {
  (void)n;  // signature mirrors window_count_trees; the window needs only eps
  double d = delta(eps);
  return window_count(census.unicyclic_hist, u1 / d, u2 / d,
                      census.order_cap);
}

std::uint64_t ComponentCensus::vertices_in_orders_at_least(
    std::uint64_t k0) const {
  std::uint64_t total = 0;
  for (const auto* hist : {&tree_hist, &unicyclic_hist, &complex_hist})
    for (auto it = hist->lower_bound(k0); it != hist->end(); ++it)
      total += it->first * it->second;
  return total;
}

std::uint64_t ComponentCensus::max_tree_order() const {
  return tree_hist.empty() ? 0 : tree_hist.rbegin()->first;
}

nlohmann::ordered_json census_to_json(const ComponentCensus& census) {
  nlohmann::ordered_json j;
  j["trees"] = census.tree_count;
  j["unicyclic"] = census.unicyclic_count;
  j["complex"] = census.complex_count;
  auto rec_json = [](const ComponentRecord& r) {
    nlohmann::ordered_json o;
    o["n1"] = r.n1;
    o["n2"] = r.n2;
    o["edges"] = r.edges;
    return o;
  };
  j["L1"] = rec_json(census.L1);
  j["L2"] = census.has_L2 ? rec_json(census.L2) : nlohmann::ordered_json();
  nlohmann::ordered_json hists;
  auto hist_json = [](const std::map<std::uint64_t, std::uint64_t>& h) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (auto [order, count] : h) a.push_back({order, count});
    return a;
  };
  hists["trees"] = hist_json(census.tree_hist);
  hists["unicyclic"] = hist_json(census.unicyclic_hist);
  hists["complex"] = hist_json(census.complex_hist);
  j["histograms"] = hists;
  nlohmann::ordered_json shapes = nlohmann::ordered_json::array();
  for (const auto& [key, count] : census.shape_map)
    shapes.push_back({key[0], key[1], key[2], count});
  j["shape_map"] = shapes;
  j["Y_minus1"] = census.y_minus1;
  j["Y_0"] = census.y_0;
  j["isolated"] = census.isolated_count;
  j["components"] = census.component_count;
  j["total_edges"] = census.total_edges;
  return j;
}

}  // namespace biphase
