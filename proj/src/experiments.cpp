#include "biphase/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "biphase/census.hpp"
#include "biphase/numeric.hpp"
#include "biphase/rng.hpp"
#include "biphase/sampler.hpp"
#include "biphase/stats.hpp"

namespace biphase {

namespace {

using nlohmann::ordered_json;

double regime_size(const ExperimentConfig& cfg) {
  double a = std::fabs(cfg.eps);
  return a * a * a * static_cast<double>(cfg.n);
}

struct Windows {
  bool has_tree = false;
  std::uint64_t tw_lo = 1, tw_hi = 0;
  std::uint64_t uw_lo = 1, uw_hi = 0;
  std::uint64_t small_cap = 0;
  std::uint64_t z1_cap = 0;
  std::uint64_t tail_k0 = 0;
  std::uint64_t order_cap = 0;
};

Windows make_windows(const ExperimentConfig& cfg) {
  Windows w;
  w.small_cap = floor_n_two_thirds(cfg.n);
  const double ae = std::fabs(cfg.eps);
  if (regime_size(cfg) > M_E) {
    double lo = tree_order_threshold(cfg.n, cfg.eps, cfg.r1);
    double hi = tree_order_threshold(cfg.n, cfg.eps, cfg.r2);
    w.has_tree = true;
    w.tw_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(lo)));
    w.tw_hi = static_cast<std::uint64_t>(std::max(0.0, std::floor(hi)));
  }
  double d = delta(cfg.eps);
  w.uw_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(cfg.u1 / d)));
  w.uw_hi = static_cast<std::uint64_t>(std::max(0.0, std::floor(cfg.u2 / d)));
  w.z1_cap = static_cast<std::uint64_t>(
      std::floor(std::sqrt(static_cast<double>(cfg.n) / (3.0 * ae))));
  w.z1_cap = std::min(w.z1_cap, w.small_cap);
  w.tail_k0 = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(static_cast<double>(cfg.n) / (3.0 * ae))));
  w.order_cap = std::max({w.small_cap, w.has_tree ? w.tw_hi : 0, w.uw_hi});
  return w;
}

TrialSummary summarize(const ComponentCensus& c, const Windows& w,
                       std::uint64_t seed) {
  TrialSummary s;
  s.seed = seed;
  if (w.has_tree)
    for (auto it = c.tree_hist.lower_bound(w.tw_lo);
         it != c.tree_hist.end() && it->first <= w.tw_hi; ++it)
      s.y_window += it->second;
  for (auto it = c.unicyclic_hist.lower_bound(w.uw_lo);
       it != c.unicyclic_hist.end() && it->first <= w.uw_hi; ++it)
    s.z_window += it->second;
  s.y_minus1 = c.y_minus1;
  s.y_0 = c.y_0;
  for (auto it = c.uniform_tree_hist.begin();
       it != c.uniform_tree_hist.end() && it->first <= w.z1_cap; ++it)
    s.z1_vertices += it->first * it->second;
  s.l1_n1 = c.L1.n1;
  s.l1_n2 = c.L1.n2;
  s.l1_edges = c.L1.edges;
  s.l2_order = c.has_L2 ? c.L2.order() : 0;
  s.complex_count = c.complex_count;
  for (auto it = c.complex_hist.begin();
       it != c.complex_hist.end() && it->first <= w.small_cap; ++it)
    s.small_complex_count += it->second;
  s.max_tree_order = c.max_tree_order();
  s.vertices_tail = c.vertices_in_orders_at_least(w.tail_k0);
  s.total_edges = c.total_edges;
  return s;
}

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t, unsigned)>& fn) {
  if (threads <= 1) {
    for (std::uint64_t t = 0; t < count; ++t) fn(t, 0);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        std::uint64_t t = next.fetch_add(1);
        if (t >= count) break;
        fn(t, w);
      }
    });
  }
  for (auto& th : pool) th.join();
}

ordered_json config_echo_json(const ExperimentConfig& cfg) {
  // thread count deliberately omitted: reports must be byte-identical
  // across thread counts
  ordered_json j;
  j["n"] = cfg.n;
  j["eps"] = cfg.eps;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["r1"] = cfg.r1;
  j["r2"] = cfg.r2;
  j["u1"] = cfg.u1;
  j["u2"] = cfg.u2;
  j["include_order1"] = cfg.include_order1;
  return j;
}

ExperimentReport base_report(const std::string& name,
                             const ExperimentConfig& cfg) {
  ExperimentReport r;
  r.name = name;
  r.config_echo = config_echo_json(cfg);
  return r;
}

void gate_regime(ExperimentReport& r, const ExperimentConfig& cfg,
                 double min_size) {
  double size = regime_size(cfg);
  r.statistics["eps3n"] = size;
  if (size < min_size) {
    r.regime_ok = false;
    r.asserted = false;
    std::ostringstream os;
    os << "|eps|^3 n = " << size << " below recommended " << min_size
       << "; assertions downgraded to report-only";
    r.regime_note = os.str();
    r.notes.push_back(r.regime_note);
  }
}

bool within_rel(double value, double target, double rel) {
  return std::fabs(value - target) <= rel * std::fabs(target);
}

std::string csv_from(const std::vector<std::string>& header,
                     const std::vector<TrialSummary>& s,
                     const std::function<std::string(std::uint64_t,
                                                     const TrialSummary&)>& row) {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c)
    os << (c ? "," : "") << header[c];
  os << '\n';
  for (std::uint64_t t = 0; t < s.size(); ++t) os << row(t, s[t]) << '\n';
  return os.str();
}

}  // namespace

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["config"] = config_echo;
  j["predictions"] = predictions;
  j["estimates"] = estimates;
  j["stderr"] = stderrs;
  j["statistic"] = statistics;
  j["regime_ok"] = regime_ok;
  j["asserted"] = asserted;
  j["pass"] = pass;
  j["notes"] = notes;
  return j;
}

std::vector<TrialSummary> run_trial_summaries(const ExperimentConfig& cfg) {
  if (cfg.trials < 1)
    throw std::domain_error("run_trial_summaries: trials >= 1 required");
  CriticalParams params = CriticalParams::make(cfg.n, cfg.eps);
  Windows w = make_windows(cfg);
  std::vector<TrialSummary> out(cfg.trials);
  unsigned threads = std::max(1u, cfg.threads);
  std::vector<GraphSample> arenas(threads);
  parallel_for(cfg.trials, threads, [&](std::uint64_t t, unsigned worker) {
    std::uint64_t seed = stream_key(cfg.master_seed, t, 0);
    GraphSample& g = arenas[worker];
    g.assign(cfg.n, params.p, seed);
    ComponentCensus c =
        build_census(g, cfg.eps, w.order_cap, cfg.include_order1);
    out[t] = summarize(c, w, seed);
  });
  return out;
}

// ---------------------------------------------------------------------------
// exact finite-n window expectations

double window_expectation_trees_exact(std::uint64_t n, double eps,
                                      std::uint64_t lo, std::uint64_t hi) {
  const double p = (1.0 + eps) / static_cast<double>(n);
  const double lp = std::log(p), l1p = std::log1p(-p);
  const double nd = static_cast<double>(n);
  const double lgn1 = std::lgamma(nd + 1.0);
  double total = 0.0;
  for (std::uint64_t k = lo; k <= hi && k <= 2 * n; ++k) {
    double sum = 0.0;
    for (std::uint64_t i = 1; i < k; ++i) {
      const std::uint64_t j = k - i;
      if (i > n || j > n) continue;
      const double id = static_cast<double>(i), jd = static_cast<double>(j);
      double lg = (lgn1 - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0)) +
                  (lgn1 - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0)) +
                  (jd - 1.0) * std::log(id) + (id - 1.0) * std::log(jd) +
                  (static_cast<double>(k) - 1.0) * lp +
                  (static_cast<double>(k) * nd - id * jd -
                   static_cast<double>(k) + 1.0) *
                      l1p;
      sum += std::exp(lg);
    }
    total += sum;
  }
  return total;
}

double window_expectation_unicyclic_exact(std::uint64_t n, double eps,
                                          std::uint64_t lo, std::uint64_t hi) {
  const double p = (1.0 + eps) / static_cast<double>(n);
  const double lp = std::log(p), l1p = std::log1p(-p);
  const double nd = static_cast<double>(n);
  const double lgn1 = std::lgamma(nd + 1.0);
  // table of logs up to the largest order in play
  std::vector<double> ltab(hi + 2, 0.0);
  for (std::uint64_t v = 1; v < ltab.size(); ++v)
    ltab[v] = std::log(static_cast<double>(v));
  double total = 0.0;
  for (std::uint64_t k = lo; k <= hi && k <= 2 * n; ++k) {
    double sum = 0.0;
    for (std::uint64_t i = 2; i + 2 <= k; ++i) {
      const std::uint64_t j = k - i;
      if (i > n || j > n) continue;
      const double id = static_cast<double>(i), jd = static_cast<double>(j);
      // log C(i,j,0): (1/2) i^{j-1} j^{i-1} sum_r (i)_r (j)_r / (i^r j^r) (k-r)
      double rsum = 0.0, logprod = 0.0;
      const std::uint64_t rmax = std::min(i, j);
      for (std::uint64_t r = 1; r <= rmax; ++r) {
        logprod += ltab[i - r + 1] - ltab[i] + ltab[j - r + 1] - ltab[j];
        if (r >= 2)
          rsum += std::exp(logprod) * static_cast<double>(k - r);
      }
      if (rsum <= 0.0) continue;
      double lgC = -M_LN2 + (jd - 1.0) * ltab[i] + (id - 1.0) * ltab[j] +
                   std::log(rsum);
      double lg = (lgn1 - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0)) +
                  (lgn1 - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0)) +
                  lgC + static_cast<double>(k) * lp +
                  (static_cast<double>(k) * nd - id * jd -
                   static_cast<double>(k)) *
                      l1p;
      sum += std::exp(lg);
    }
    total += sum;
  }
  return total;
}

// ---------------------------------------------------------------------------
// evaluators

ExperimentReport eval_poisson_trees(const ExperimentConfig& cfg,
                                    const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("poisson_trees", cfg);
  gate_regime(r, cfg, 50.0);
  const double lambda = poisson_lambda(cfg.r1, cfg.r2);
  r.predictions["lambda"] = lambda;
  r.predictions["lambda_sq"] = lambda * lambda;

  Windows w = make_windows(cfg);
  if (w.has_tree) {
    r.predictions["window"] = {w.tw_lo, w.tw_hi};
    r.predictions["window_expectation_exact"] =
        window_expectation_trees_exact(cfg.n, cfg.eps, w.tw_lo, w.tw_hi);
  }

  std::vector<std::uint64_t> ys;
  std::vector<double> yd;
  ys.reserve(s.size());
  for (const auto& t : s) {
    ys.push_back(t.y_window);
    yd.push_back(static_cast<double>(t.y_window));
  }
  double m = mean(yd);
  double fm2 = second_factorial_moment(ys);
  double tv = tv_to_poisson(ys, lambda);
  r.estimates["mean_Y"] = m;
  r.estimates["second_factorial_moment"] = fm2;
  r.estimates["tv_to_po_lambda"] = tv;
  r.stderrs["mean_Y"] = s.size() > 1 ? stderr_of_mean(yd) : 0.0;

  const double mean_rel = cfg.tol_or("mean_rel", 0.15);
  const double tv_max = cfg.tol_or("tv_max", 0.08);
  const double fm2_rel = cfg.tol_or("fm2_rel", 0.30);
  bool mean_ok, tv_ok, fm2_ok;
  if (cfg.r1 == cfg.r2) {
    // degenerate window: constant-0 statistic against Po(0)
    mean_ok = m == 0.0;
    tv_ok = tv == 0.0;
    fm2_ok = fm2 == 0.0;
  } else {
    mean_ok = within_rel(m, lambda, mean_rel);
    tv_ok = tv <= tv_max;
    fm2_ok = within_rel(fm2, lambda * lambda, fm2_rel);
  }
  r.statistics["mean_ok"] = mean_ok;
  r.statistics["tv_ok"] = tv_ok;
  r.statistics["fm2_ok"] = fm2_ok;
  if (!mean_ok && w.has_tree && s.size() > 1) {
    double exact = r.predictions["window_expectation_exact"].get<double>();
    if (std::fabs(m - exact) <= 4.0 * stderr_of_mean(yd))
      r.notes.push_back(
          "empirical mean is consistent with the exact finite-n window "
          "expectation; the gap is to the asymptotic constant lambda");
  }
  if (r.asserted) r.pass = mean_ok && tv_ok && fm2_ok;
  r.csv = csv_from({"trial", "seed", "Y"}, s,
                   [](std::uint64_t t, const TrialSummary& ts) {
                     std::ostringstream os;
                     os << t << ',' << ts.seed << ',' << ts.y_window;
                     return os.str();
                   });
  return r;
}

ExperimentReport eval_poisson_unicyclic(const ExperimentConfig& cfg,
                                        const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("poisson_unicyclic", cfg);
  gate_regime(r, cfg, 50.0);
  const double nu = poisson_nu(cfg.u1, cfg.u2);
  r.predictions["nu"] = nu;
  Windows w = make_windows(cfg);
  r.predictions["window"] = {w.uw_lo, w.uw_hi};
  if (w.uw_lo <= w.uw_hi)
    r.predictions["window_expectation_exact"] =
        window_expectation_unicyclic_exact(cfg.n, cfg.eps, w.uw_lo, w.uw_hi);

  std::vector<std::uint64_t> zs;
  std::vector<double> zd;
  for (const auto& t : s) {
    zs.push_back(t.z_window);
    zd.push_back(static_cast<double>(t.z_window));
  }
  double m = mean(zd);
  double tv = tv_to_poisson(zs, nu);
  r.estimates["mean_Z"] = m;
  r.estimates["tv_to_po_nu"] = tv;
  r.stderrs["mean_Z"] = s.size() > 1 ? stderr_of_mean(zd) : 0.0;

  const double mean_rel = cfg.tol_or("mean_rel", 0.25);
  bool mean_ok = cfg.u1 == cfg.u2 ? m == 0.0 : within_rel(m, nu, mean_rel);
  r.statistics["mean_ok"] = mean_ok;
  if (!mean_ok && w.uw_lo <= w.uw_hi && s.size() > 1) {
    double exact = r.predictions["window_expectation_exact"].get<double>();
    if (std::fabs(m - exact) <= 4.0 * stderr_of_mean(zd))
      r.notes.push_back(
          "empirical mean is consistent with the exact finite-n window "
          "expectation; the gap is to the asymptotic constant nu");
  }
  if (r.asserted) r.pass = mean_ok;
  r.csv = csv_from({"trial", "seed", "Z"}, s,
                   [](std::uint64_t t, const TrialSummary& ts) {
                     std::ostringstream os;
                     os << t << ',' << ts.seed << ',' << ts.z_window;
                     return os.str();
                   });
  return r;
}

ExperimentReport eval_no_large_tree(const ExperimentConfig& cfg,
                                    const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("no_large_tree", cfg);
  gate_regime(r, cfg, 50.0);
  if (regime_size(cfg) <= M_E) {
    r.notes.push_back("|eps|^3 n <= e: order threshold undefined");
    return r;
  }
  ordered_json fracs = ordered_json::object();
  std::vector<double> fvals;
  for (double alpha : cfg.alphas) {
    double thr = tree_order_threshold(cfg.n, cfg.eps, alpha);
    std::uint64_t hits = 0;
    for (const auto& t : s)
      if (static_cast<double>(t.max_tree_order) > thr) ++hits;
    double f = static_cast<double>(hits) / static_cast<double>(s.size());
    fracs[std::to_string(alpha)] = f;
    fvals.push_back(f);
    r.predictions["threshold_alpha_" + std::to_string(alpha)] = thr;
  }
  r.estimates["fraction_exceeding"] = fracs;
  bool monotone_ok =
      fvals.size() < 2 || fvals.back() <= fvals.front();
  r.statistics["monotone_ok"] = monotone_ok;
  bool frac4_ok = true;
  const double frac4_max = cfg.tol_or("frac_alpha4_max", 0.2);
  for (std::size_t a = 0; a < cfg.alphas.size(); ++a)
    if (cfg.alphas[a] == 4.0) frac4_ok = fvals[a] <= frac4_max;
  r.statistics["frac_alpha4_ok"] = frac4_ok;
  if (r.asserted) r.pass = monotone_ok && frac4_ok;
  r.csv = csv_from({"trial", "seed", "max_tree_order"}, s,
                   [](std::uint64_t t, const TrialSummary& ts) {
                     std::ostringstream os;
                     os << t << ',' << ts.seed << ',' << ts.max_tree_order;
                     return os.str();
                   });
  return r;
}

ExperimentReport eval_no_complex(const ExperimentConfig& cfg,
                                 const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("no_complex", cfg);
  gate_regime(r, cfg, 50.0);
  const bool subcritical = cfg.eps < 0.0;
  std::uint64_t hits = 0;
  for (const auto& t : s) {
    std::uint64_t c = subcritical ? t.complex_count : t.small_complex_count;
    if (c > 0) ++hits;
  }
  double f = static_cast<double>(hits) / static_cast<double>(s.size());
  r.estimates[subcritical ? "fraction_with_complex"
                          : "fraction_with_small_complex"] = f;
  r.predictions["markov_scale"] = 1.0 / regime_size(cfg);
  const double frac_max = cfg.tol_or("frac_max", 0.08);
  bool ok = f <= frac_max;
  r.statistics["fraction_ok"] = ok;
  if (r.asserted) r.pass = ok;
  r.csv = csv_from(
      {"trial", "seed", "complex", "small_complex"}, s,
      [](std::uint64_t t, const TrialSummary& ts) {
        std::ostringstream os;
        os << t << ',' << ts.seed << ',' << ts.complex_count << ','
           << ts.small_complex_count;
        return os.str();
      });
  return r;
}

ExperimentReport eval_giant(const ExperimentConfig& cfg,
                            const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("giant", cfg);
  if (cfg.eps <= 0.0)
    throw std::domain_error("exp_giant: eps must be > 0");
  gate_regime(r, cfg, 100.0);
  const double pred = giant_order_prediction(cfg.n, cfg.eps);
  const std::uint64_t n23 = floor_n_two_thirds(cfg.n);
  const double band = 2.0 * std::sqrt(cfg.eps);
  r.predictions["L1_order"] = pred;
  r.predictions["L2_cap"] = n23;
  r.predictions["class_band"] = band;

  std::vector<double> orders;
  std::uint64_t l2_hits = 0, imbalance_hits = 0;
  for (const auto& t : s) {
    orders.push_back(static_cast<double>(t.l1_order()));
    if (t.l2_order > n23) ++l2_hits;
    double n1 = static_cast<double>(t.l1_n1), n2 = static_cast<double>(t.l1_n2);
    if (n1 > (1.0 + band) * n2 || n1 < (1.0 - band) * n2) ++imbalance_hits;
  }
  double m = mean(orders);
  double l2f = static_cast<double>(l2_hits) / static_cast<double>(s.size());
  double imf =
      static_cast<double>(imbalance_hits) / static_cast<double>(s.size());
  r.estimates["mean_L1_order"] = m;
  r.estimates["frac_L2_large"] = l2f;
  r.estimates["frac_imbalanced"] = imf;
  r.stderrs["mean_L1_order"] = s.size() > 1 ? stderr_of_mean(orders) : 0.0;

  bool mean_ok = within_rel(m, pred, cfg.tol_or("mean_rel", 0.03));
  bool l2_ok = l2f <= cfg.tol_or("l2_frac_max", 0.05);
  bool imb_ok = imf <= cfg.tol_or("imbalance_frac_max", 0.05);
  r.statistics["mean_ok"] = mean_ok;
  r.statistics["l2_ok"] = l2_ok;
  r.statistics["imbalance_ok"] = imb_ok;
  if (r.asserted) r.pass = mean_ok && l2_ok && imb_ok;
  r.csv = csv_from(
      {"trial", "seed", "L1_n1", "L1_n2", "L1_edges", "L2_order"}, s,
      [](std::uint64_t t, const TrialSummary& ts) {
        std::ostringstream os;
        os << t << ',' << ts.seed << ',' << ts.l1_n1 << ',' << ts.l1_n2 << ','
           << ts.l1_edges << ',' << ts.l2_order;
        return os.str();
      });
  return r;
}

ExperimentReport eval_excess(const ExperimentConfig& cfg,
                             const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("excess", cfg);
  if (cfg.eps <= 0.0)
    throw std::domain_error("exp_excess: eps must be > 0");
  gate_regime(r, cfg, 500.0);
  const double pred = giant_excess_prediction(cfg.n, cfg.eps);
  r.predictions["L1_excess"] = pred;
  std::vector<double> ex;
  for (const auto& t : s) ex.push_back(static_cast<double>(t.l1_excess()));
  double m = mean(ex);
  r.estimates["mean_L1_excess"] = m;
  r.stderrs["mean_L1_excess"] = s.size() > 1 ? stderr_of_mean(ex) : 0.0;
  bool mean_ok = within_rel(m, pred, cfg.tol_or("mean_rel", 0.15));
  r.statistics["mean_ok"] = mean_ok;
  if (r.asserted) r.pass = mean_ok;
  r.csv = csv_from({"trial", "seed", "L1_excess"}, s,
                   [](std::uint64_t t, const TrialSummary& ts) {
                     std::ostringstream os;
                     os << t << ',' << ts.seed << ',' << ts.l1_excess();
                     return os.str();
                   });
  return r;
}

ExperimentReport eval_small_vertex_counts(const ExperimentConfig& cfg,
                                          const std::vector<TrialSummary>& s) {
  ExperimentReport r = base_report("small_vertex_counts", cfg);
  if (cfg.eps <= 0.0)
    throw std::domain_error("exp_small_vertex_counts: eps must be > 0");
  gate_regime(r, cfg, M_E);
  const double ep = epsilon_prime(cfg.eps);
  const double y1_pred = 2.0 * (1.0 - ep) * static_cast<double>(cfg.n) /
                         (1.0 + cfg.eps);
  const double d = delta(cfg.eps);
  const double omega = std::pow(regime_size(cfg), 1.0 / 6.0);
  r.predictions["Y_minus1"] = y1_pred;
  r.predictions["Y0_scale"] = 1.0 / d;
  r.predictions["Y0_bound_4omega_over_delta"] = 4.0 * omega / d;

  std::vector<double> y1, y0, z1;
  std::uint64_t y0_exceed = 0;
  for (const auto& t : s) {
    y1.push_back(static_cast<double>(t.y_minus1));
    y0.push_back(static_cast<double>(t.y_0));
    z1.push_back(static_cast<double>(t.z1_vertices));
    if (static_cast<double>(t.y_0) > 4.0 * omega / d) ++y0_exceed;
  }
  double y1m = mean(y1);
  double var_scaled =
      sample_variance(z1) * cfg.eps / static_cast<double>(cfg.n);
  r.estimates["mean_Y_minus1"] = y1m;
  r.estimates["mean_Y0_times_delta"] = mean(y0) * d;
  r.estimates["frac_Y0_above_bound"] =
      static_cast<double>(y0_exceed) / static_cast<double>(s.size());
  r.estimates["var_Z1_times_eps_over_n"] = var_scaled;
  r.stderrs["mean_Y_minus1"] = s.size() > 1 ? stderr_of_mean(y1) : 0.0;

  bool y1_ok = within_rel(y1m, y1_pred, cfg.tol_or("y1_mean_rel", 0.01));
  bool var_ok = var_scaled <= cfg.tol_or("var_scaled_max", 10.0);
  r.statistics["y_minus1_ok"] = y1_ok;
  r.statistics["var_ok"] = var_ok;
  if (r.asserted) r.pass = y1_ok && var_ok;
  r.csv = csv_from({"trial", "seed", "Y_minus1", "Y_0", "Z1"}, s,
                   [](std::uint64_t t, const TrialSummary& ts) {
                     std::ostringstream os;
                     os << t << ',' << ts.seed << ',' << ts.y_minus1 << ','
                        << ts.y_0 << ',' << ts.z1_vertices;
                     return os.str();
                   });
  return r;
}

// ---------------------------------------------------------------------------
// sprinkling schedule

std::vector<ScheduleRoundStat> run_sprinkle_schedule(
    const ExperimentConfig& cfg) {
  if (cfg.eps <= 0.0)
    throw std::domain_error("run_sprinkle_schedule: eps must be > 0");
  const double nd = static_cast<double>(cfg.n);
  const double omega = std::pow(regime_size(cfg), 1.0 / 6.0);
  const double ratio = 1.0 + std::pow(omega, -cfg.schedule_ratio_pow);
  std::vector<double> eps_seq;
  double e = std::pow(omega, cfg.schedule_omega_pow) * std::pow(nd, -1.0 / 3.0);
  while (e < cfg.eps) {
    eps_seq.push_back(e);
    e *= ratio;
  }
  eps_seq.push_back(cfg.eps);
  if (eps_seq.size() < 2)
    throw std::domain_error("run_sprinkle_schedule: schedule degenerate");

  const std::size_t rounds = eps_seq.size() - 1;
  std::vector<ScheduleRoundStat> stats(rounds);
  for (std::size_t i = 0; i < rounds; ++i) {
    double ei = eps_seq[i], en = eps_seq[i + 1];
    double epi = epsilon_prime(ei);
    stats[i].eps_from = ei;
    stats[i].eps_to = en;
    stats[i].q = sprinkle_probability((1.0 + ei) / nd, (1.0 + en) / nd);
    stats[i].predicted_delta =
        (ei + epi) * (ei + epi) / ((1.0 + ei) * (1.0 + ei)) * nd * (en - ei);
    stats[i].in_regime = ei * ei * ei * nd >= 100.0;
    stats[i].all_positive = true;
  }

  const std::uint64_t trials = std::max<std::uint64_t>(1, cfg.sprinkle_trials);
  std::vector<std::vector<std::int64_t>> deltas(
      rounds, std::vector<std::int64_t>(trials));
  std::vector<std::vector<std::uint64_t>> news(
      rounds, std::vector<std::uint64_t>(trials));
  unsigned threads = std::max(1u, cfg.threads);
  std::vector<GraphSample> arenas(threads);
  parallel_for(trials, threads, [&](std::uint64_t t, unsigned worker) {
    GraphSample& g = arenas[worker];
    g.assign(cfg.n, (1.0 + eps_seq[0]) / nd,
             stream_key(cfg.master_seed, t, 0));
    for (std::size_t i = 0; i < rounds; ++i) {
      SprinkleRound round = g.sprinkle((1.0 + eps_seq[i + 1]) / nd,
                                       stream_key(cfg.master_seed, t, i + 1));
      deltas[i][t] = round.delta_excess_giant;
      news[i][t] = round.new_edges;
    }
  });
  for (std::size_t i = 0; i < rounds; ++i) {
    double dm = 0.0, nm = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      dm += static_cast<double>(deltas[i][t]);
      nm += static_cast<double>(news[i][t]);
      if (deltas[i][t] <= 0) stats[i].all_positive = false;
    }
    stats[i].mean_delta_excess = dm / static_cast<double>(trials);
    stats[i].mean_new_edges = nm / static_cast<double>(trials);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// wrappers

namespace {
ExperimentReport timed(ExperimentReport r,
                       std::chrono::steady_clock::time_point t0) {
  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}
}  // namespace

ExperimentReport exp_poisson_trees(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_poisson_trees(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_poisson_unicyclic(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_poisson_unicyclic(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_no_large_tree(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_no_large_tree(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_no_complex(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_no_complex(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_giant(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_giant(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_excess(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r = eval_excess(cfg, run_trial_summaries(cfg));
  // multi-round exposure: per-round excess increments vs prediction
  std::vector<ScheduleRoundStat> sched = run_sprinkle_schedule(cfg);
  ordered_json rounds = ordered_json::array();
  bool positivity_ok = true;
  for (const auto& st : sched) {
    ordered_json o;
    o["eps_from"] = st.eps_from;
    o["eps_to"] = st.eps_to;
    o["q"] = st.q;
    o["mean_new_edges"] = st.mean_new_edges;
    o["mean_delta_excess"] = st.mean_delta_excess;
    o["predicted_delta"] = st.predicted_delta;
    o["in_regime"] = st.in_regime;
    o["all_positive"] = st.all_positive;
    rounds.push_back(o);
    if (st.in_regime && !st.all_positive) positivity_ok = false;
  }
  r.estimates["sprinkle_rounds"] = rounds;
  r.statistics["sprinkle_positivity_ok"] = positivity_ok;
  if (r.asserted) r.pass = r.pass && positivity_ok;
  return timed(std::move(r), t0);
}

ExperimentReport exp_small_vertex_counts(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  return timed(eval_small_vertex_counts(cfg, run_trial_summaries(cfg)), t0);
}

ExperimentReport exp_subcritical_tail(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.eps <= 0.0)
    throw std::domain_error(
        "exp_subcritical_tail: pass eps > 0; the run uses p = (1-eps)/n");
  ExperimentReport r = base_report("subcritical_tail", cfg);
  ordered_json ratios = ordered_json::object();
  std::vector<double> ratio_seq;
  for (std::uint64_t n : cfg.n_grid) {
    ExperimentConfig sub = cfg;
    sub.n = n;
    sub.eps = -cfg.eps;  // p = (1 - eps)/n
    std::vector<TrialSummary> s = run_trial_summaries(sub);
    std::vector<double> vt;
    for (const auto& t : s) vt.push_back(static_cast<double>(t.vertices_tail));
    double scale = std::sqrt(static_cast<double>(n) / cfg.eps);
    double ratio = mean(vt) / scale;
    ratios[std::to_string(n)] = ratio;
    ratio_seq.push_back(ratio);
  }
  r.estimates["tail_ratio_by_n"] = ratios;
  // non-increasing with a strict drop overall; an all-zero tail (deep
  // subcritical) is already at the limit
  bool decreasing = true;
  for (std::size_t i = 1; i < ratio_seq.size(); ++i)
    if (ratio_seq[i] > ratio_seq[i - 1]) decreasing = false;
  if (!ratio_seq.empty() && ratio_seq.front() > 0.0 &&
      !(ratio_seq.back() < ratio_seq.front()))
    decreasing = false;
  bool cap_ok = true;
  const double ratio_max = cfg.tol_or("ratio_max", 1.0);
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i)
    if (cfg.n_grid[i] >= 1000000 && ratio_seq[i] > ratio_max) cap_ok = false;
  r.statistics["decreasing_ok"] = decreasing;
  r.statistics["ratio_cap_ok"] = cap_ok;
  r.pass = decreasing && cap_ok;
  return timed(std::move(r), t0);
}

// ---------------------------------------------------------------------------
// config files

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  auto as_u64 = [&] { return std::stoull(value); };
  auto as_f = [&] { return std::stod(value); };
  auto as_list_u64 = [&] {
    std::vector<std::uint64_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
  };
  auto as_list_f = [&] {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
  };
  if (key == "n")
    cfg.n = as_u64();
  else if (key == "eps")
    cfg.eps = as_f();
  else if (key == "trials")
    cfg.trials = as_u64();
  else if (key == "seed" || key == "master_seed")
    cfg.master_seed = as_u64();
  else if (key == "threads")
    cfg.threads = static_cast<unsigned>(as_u64());
  else if (key == "r1")
    cfg.r1 = as_f();
  else if (key == "r2")
    cfg.r2 = as_f();
  else if (key == "u1")
    cfg.u1 = as_f();
  else if (key == "u2")
    cfg.u2 = as_f();
  else if (key == "alphas")
    cfg.alphas = as_list_f();
  else if (key == "n_grid")
    cfg.n_grid = as_list_u64();
  else if (key == "sprinkle_trials")
    cfg.sprinkle_trials = as_u64();
  else if (key == "schedule_omega_pow")
    cfg.schedule_omega_pow = as_f();
  else if (key == "schedule_ratio_pow")
    cfg.schedule_ratio_pow = as_f();
  else if (key == "include_order1")
    cfg.include_order1 = value == "1" || value == "true";
  else if (key.rfind("tol.", 0) == 0)
    cfg.tol[key.substr(4)] = as_f();
  else
    throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg = base;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    apply_config_kv(cfg, key, value);
  }
  return cfg;
}

}  // namespace biphase
