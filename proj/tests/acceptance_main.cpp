// Acceptance suite: one pass/fail line per criterion, exact configurations
// and tolerances pinned in code. Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <vector>

#include "biphase/census.hpp"
#include "biphase/enumeration.hpp"
#include "biphase/experiments.hpp"
#include "biphase/numeric.hpp"
#include "biphase/oracle.hpp"
#include "biphase/rng.hpp"
#include "biphase/sampler.hpp"
#include "biphase/stats.hpp"

using namespace biphase;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 42;  // disjoint from pilot seed 1000

int failures = 0;

void report(int id, bool pass, const std::string& name,
            const std::string& detail, double seconds) {
  std::cout << '[' << (id < 10 ? " " : "") << id << "] "
            << (pass ? "PASS" : "FAIL") << ' ' << name << ": " << detail
            << "  (" << seconds << " s)" << std::endl;
  if (!pass) ++failures;
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// ---- criterion 1: oracle equivalence ------------------------------------
void criterion_1() {
  Timer t;
  bool ok = true;
  std::string bad;
  for (std::uint64_t i = 1; i <= 7 && ok; ++i)
    for (std::uint64_t j = 1; i + j <= 8 && ok; ++j) {
      if (count_connected_oracle(i, j, i + j - 1) != count_trees(i, j)) {
        ok = false;
        bad = "trees(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
      if (count_connected_oracle(i, j, i + j) != count_unicyclic(i, j)) {
        ok = false;
        bad = "unicyclic(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  for (std::uint64_t i = 1; i <= 6 && ok; ++i)
    for (std::uint64_t j = 1; j <= 6 && ok; ++j)
      if (count_forests(i, j, 1, 0) != count_trees(i, j)) {
        ok = false;
        bad = "forest(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
  report(1, ok, "oracle equivalence (exact, i+j <= 8; forests i,j <= 6)",
         ok ? "all counts equal the edge-subset oracle" : "mismatch at " + bad,
         t.seconds());
}

// ---- criterion 2: complex-bound sanity -----------------------------------
void criterion_2() {
  Timer t;
  double c_min = 0.0;
  bool ok = true;
  for (std::uint64_t i = 1; i <= 7; ++i)
    for (std::uint64_t j = 1; i + j <= 8; ++j) {
      if (2 * i < j || 2 * j < i) continue;
      if (i * j < i + j + 1) continue;
      std::uint64_t lmax = std::min<std::uint64_t>(3, i * j - i - j);
      for (std::uint64_t ell = 1; ell <= lmax; ++ell) {
        BigCount exact = count_connected_oracle(i, j, i + j + ell);
        if (exact == 0) continue;
        LogReal bound100 = complex_upper_bound(i, j, ell, 100.0);
        if (!(to_logreal(exact) <= bound100)) ok = false;
        // minimal c for this shape: c = ell * (C / (i^j j^i k^{(3l-1)/2}))^{2/l}
        double ld = static_cast<double>(ell);
        double log_base =
            to_logreal(exact).log_magnitude() -
            (static_cast<double>(j) * std::log(static_cast<double>(i)) +
             static_cast<double>(i) * std::log(static_cast<double>(j)) +
             0.5 * (3.0 * ld - 1.0) * std::log(static_cast<double>(i + j)));
        double c_shape = ld * std::exp(2.0 / ld * log_base);
        c_min = std::max(c_min, c_shape);
      }
    }
  ok = ok && c_min <= 100.0;
  std::ostringstream os;
  os << "minimal c over the brute-forced table = " << c_min
     << " (bound holds with c = 100)";
  report(2, ok, "complex-bound sanity (i+j <= 8, 1 <= ell <= 3, balanced)",
         os.str(), t.seconds());
}

// ---- criterion 3: exhaustive expectation at n = 2 ------------------------
void criterion_3() {
  Timer t;
  bool ok = true;
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75}) {
    std::map<std::array<std::int64_t, 3>, double> acc;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
      int m = 0;
      for (int e = 0; e < 4; ++e)
        if (mask & (1 << e)) {
          edges.push_back({static_cast<std::uint32_t>(e / 2),
                           static_cast<std::uint32_t>(2 + e % 2)});
          ++m;
        }
      GraphSample g = GraphSample::from_edges(2, edges);
      ComponentCensus c = build_census(g, 0.05, 10);
      double w = std::pow(p, m) * std::pow(1.0 - p, 4 - m);
      for (const auto& [key, count] : c.shape_map)
        acc[key] += w * static_cast<double>(count);
    }
    for (const auto& [key, expect] : acc) {
      auto [i, j, ell] = key;
      BigCount cnt =
          count_connected_oracle(static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j),
                                 static_cast<std::uint64_t>(i + j + ell));
      double formula =
          expected_components(2, p, BipartiteShape{i, j, ell}, cnt).value();
      worst = std::max(worst, std::fabs(formula - expect));
      if (std::fabs(formula - expect) > 1e-12) ok = false;
    }
  }
  std::ostringstream os;
  os << "max |formula - exhaustive| = " << worst << " (tolerance 1e-12)";
  report(3, ok, "exhaustive expectation check at n=2, p in {.25,.5,.75}",
         os.str(), t.seconds());
}

// ---- criterion 4: eps' solver --------------------------------------------
void criterion_4() {
  Timer t;
  double worst_res = 0.0, worst_exp = 0.0;
  bool ok = true;
  for (double eps = 0.001; eps <= 0.3 + 1e-12; eps += 0.001) {
    double y = epsilon_prime(eps);
    double res = std::fabs((1.0 - y) * std::exp(y) -
                           (1.0 + eps) * std::exp(-eps));
    worst_res = std::max(worst_res, res);
    if (res > 1e-12) ok = false;
    double dev = std::fabs(y - (eps - 2.0 / 3.0 * eps * eps));
    worst_exp = std::max(worst_exp, dev / (eps * eps * eps));
    if (dev > eps * eps * eps) ok = false;
  }
  std::ostringstream os;
  os << "max residual = " << worst_res
     << " (<= 1e-12); max |eps' - expansion| / eps^3 = " << worst_exp
     << " (<= 1)";
  report(4, ok, "eps' solver residual and expansion on eps in [1e-3, 0.3]",
         os.str(), t.seconds());
}

// ---- criterion 5: Gaussian-sum lemma --------------------------------------
void criterion_5() {
  Timer t;
  GaussianSumResult m0 = verify_gaussian_sum(10000, 9999, 0, 1000000000);
  GaussianSumResult m1 = verify_gaussian_sum(10000, 9999, 1, 1000000000);
  bool ok = std::fabs(m0.ratio - 1.0) <= 0.01 &&
            std::fabs(m1.ratio - 1.0) <= 0.05;
  std::ostringstream os;
  os << "m=0 ratio = " << m0.ratio << " (within 1%); m=1 ratio = " << m1.ratio
     << " (within 5%)";
  report(5, ok, "Gaussian-sum lemma at k=1e4, L=9999, n=1e9", os.str(),
         t.seconds());
}

// ---- criteria 6, 7, 11 share one 2000-trial run at n = 1e6 ----------------
struct SharedRun {
  ExperimentConfig cfg;
  std::vector<TrialSummary> summaries;
};

SharedRun shared_run(unsigned threads) {
  SharedRun run;
  run.cfg.n = 1000000;
  run.cfg.eps = 0.05;
  run.cfg.trials = 2000;
  run.cfg.master_seed = kAcceptanceSeed;
  run.cfg.threads = threads;
  run.cfg.r1 = 0.0;
  run.cfg.r2 = 1.0;
  run.cfg.u1 = 1.0;
  run.cfg.u2 = 2.0;
  run.summaries = run_trial_summaries(run.cfg);
  return run;
}

void criterion_6(const SharedRun& run, double seconds_share) {
  Timer t;
  ExperimentReport r = eval_poisson_trees(run.cfg, run.summaries);
  double lambda = r.predictions["lambda"].get<double>();
  double m = r.estimates["mean_Y"].get<double>();
  double tv = r.estimates["tv_to_po_lambda"].get<double>();
  double fm2 = r.estimates["second_factorial_moment"].get<double>();
  bool ok = r.pass;
  std::ostringstream os;
  os << "mean Y = " << m << " vs lambda = " << lambda << " +-15%; TV = " << tv
     << " (<= 0.08); (Y)_2 = " << fm2 << " vs lambda^2 = " << lambda * lambda
     << " +-30%";
  if (!ok) {
    os << "\n      [ANALYSIS] exact finite-n E(Y) over the window = "
       << r.predictions["window_expectation_exact"].get<double>()
       << " (matches the Monte Carlo mean): the theorem's constant is "
          "unreachable at this scale (a parity factor 2 in lambda and the "
          "(5/2)loglog window correction; see the ledger). The criterion is "
          "asserted as written.";
  }
  report(6, ok, "Poisson tree law (n=1e6, eps=0.05, window (0,1), 2000 trials)",
         os.str(), seconds_share + t.seconds());
}

void criterion_7(const SharedRun& run, double seconds_share) {
  Timer t;
  ExperimentReport r = eval_poisson_unicyclic(run.cfg, run.summaries);
  double nu = r.predictions["nu"].get<double>();
  double m = r.estimates["mean_Z"].get<double>();
  bool ok = r.pass;
  std::ostringstream os;
  os << "mean Z = " << m << " vs nu = " << nu << " +-25%";
  if (!ok) {
    os << "\n      [ANALYSIS] exact finite-n E(Z) over the window = "
       << r.predictions["window_expectation_exact"].get<double>()
       << " (matches the Monte Carlo mean and equals ~nu/2: parity factor in "
          "the published constant; see the ledger). The criterion is asserted "
          "as written.";
  }
  report(7, ok,
         "Poisson unicyclic law (same run, window (1,2))", os.str(),
         seconds_share + t.seconds());
}

void criterion_8(unsigned threads) {
  Timer t;
  ExperimentConfig cfg;
  cfg.n = 1000000;
  cfg.eps = 0.05;
  cfg.trials = 200;
  cfg.master_seed = kAcceptanceSeed + 1;
  cfg.threads = threads;
  ExperimentReport r = eval_giant(cfg, run_trial_summaries(cfg));
  std::ostringstream os;
  os << "mean L1 = " << r.estimates["mean_L1_order"].get<double>() << " vs "
     << r.predictions["L1_order"].get<double>()
     << " +-3%; frac L2 > n^(2/3) = " << r.estimates["frac_L2_large"].get<double>()
     << " (<= 0.05); imbalance frac = "
     << r.estimates["frac_imbalanced"].get<double>() << " (<= 0.05)";
  report(8, r.pass, "giant order (n=1e6, eps=0.05, 200 trials)", os.str(),
         t.seconds());
}

void criterion_9(unsigned threads) {
  Timer t;
  ExperimentConfig cfg;
  cfg.n = 10000000;
  cfg.eps = 0.05;
  cfg.trials = 100;
  cfg.master_seed = kAcceptanceSeed + 2;
  cfg.threads = threads;
  ExperimentReport r = eval_excess(cfg, run_trial_summaries(cfg));
  std::ostringstream os;
  os << "mean excess = " << r.estimates["mean_L1_excess"].get<double>()
     << " vs " << r.predictions["L1_excess"].get<double>() << " +-15%";
  report(9, r.pass, "giant excess (n=1e7, eps=0.05, 100 trials)", os.str(),
         t.seconds());
}

void criterion_10(unsigned threads) {
  Timer t;
  ExperimentConfig cfg;
  cfg.n = 1000000;
  cfg.eps = -0.05;
  cfg.trials = 1000;
  cfg.master_seed = kAcceptanceSeed + 3;
  cfg.threads = threads;
  ExperimentReport r = eval_no_complex(cfg, run_trial_summaries(cfg));
  std::ostringstream os;
  os << "fraction of trials with a complex component = "
     << r.estimates["fraction_with_complex"].get<double>() << " (<= 0.08)";
  report(10, r.pass, "subcritical complex-freeness (n=1e6, eps=-0.05, 1000 trials)",
         os.str(), t.seconds());
}

void criterion_11(const SharedRun& run, unsigned threads,
                  double seconds_share) {
  Timer t;
  ExperimentReport big = eval_small_vertex_counts(run.cfg, run.summaries);
  ExperimentConfig small_cfg;
  small_cfg.n = 100000;
  small_cfg.eps = 0.05;
  small_cfg.trials = 500;
  small_cfg.master_seed = kAcceptanceSeed + 4;
  small_cfg.threads = threads;
  ExperimentReport small =
      eval_small_vertex_counts(small_cfg, run_trial_summaries(small_cfg));
  double y1 = big.estimates["mean_Y_minus1"].get<double>();
  double y1_pred = big.predictions["Y_minus1"].get<double>();
  double var_big = big.estimates["var_Z1_times_eps_over_n"].get<double>();
  double var_small = small.estimates["var_Z1_times_eps_over_n"].get<double>();
  bool y1_ok = std::fabs(y1 - y1_pred) <= 0.01 * y1_pred;
  bool var_ok = var_big <= 10.0 && var_small <= 10.0;
  std::ostringstream os;
  os << "mean Y(-1) = " << y1 << " vs " << y1_pred
     << " +-1%; Var(Z1) eps/n = " << var_small << " (n=1e5), " << var_big
     << " (n=1e6), both <= 10";
  report(11, y1_ok && var_ok,
         "small-vertex counts (shares samples with 6-7; extra n=1e5 run)",
         os.str(), seconds_share + t.seconds());
}

void criterion_12(unsigned threads) {
  Timer t;
  (void)threads;
  // algebra: p1 + (1-p1) q = p2 exactly (floating rounding only)
  bool algebra_ok = true;
  for (double p1 : {0.0, 1e-6, 0.25, 0.5, 0.9})
    for (double p2 : {0.3, 0.6, 0.99}) {
      if (p2 < p1) continue;
      double q = sprinkle_probability(p1, p2);
      if (std::fabs(p1 + (1.0 - p1) * q - p2) > 1e-15) algebra_ok = false;
    }

  // chi-square of per-slot occupancy after one round: n=1e5, 500 seeds
  const std::uint64_t n = 100000;
  const double p1 = 0.9 / static_cast<double>(n);
  const double p2 = 1.1 / static_cast<double>(n);
  const std::uint64_t kSlots = 100000;  // evenly spread fixed slot set
  const std::uint64_t stride = n * n / kSlots;
  std::uint64_t hits = 0;
  const std::uint64_t seeds = 500;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    GraphSample g =
        GraphSample::sample(n, p1, stream_key(kAcceptanceSeed + 5, s, 0));
    g.sprinkle(p2, stream_key(kAcceptanceSeed + 5, s, 1));
    for (std::uint64_t t2 = 0; t2 < kSlots; ++t2)
      if (g.slot_occupied(t2 * stride)) ++hits;
  }
  double chi2 = chi_square_bernoulli(hits, seeds * kSlots, p2);
  bool chi_ok = chi2 <= kChi2Df1P99;
  std::ostringstream os;
  os << "algebra exact; occupancy hits = " << hits << " of " << seeds * kSlots
     << " (expect " << static_cast<double>(seeds * kSlots) * p2
     << "), chi2 = " << chi2 << " <= " << kChi2Df1P99 << " (df 1, 0.01)";
  report(12, algebra_ok && chi_ok,
         "coupling identity (algebra + chi-square, n=1e5, 500 seeds)",
         os.str(), t.seconds());
}

void criterion_13() {
  Timer t;
  ExperimentConfig cfg;
  cfg.n = 100000;
  cfg.eps = 0.05;
  cfg.trials = 300;
  cfg.master_seed = kAcceptanceSeed + 6;
  std::string dumps[3];
  unsigned counts[3] = {1, 4, 16};
  for (int v = 0; v < 3; ++v) {
    cfg.threads = counts[v];
    dumps[v] = exp_poisson_trees(cfg).to_json().dump();
  }
  bool ok = dumps[0] == dumps[1] && dumps[1] == dumps[2];
  report(13, ok, "determinism (byte-identical reports at threads 1/4/16)",
         ok ? "reports identical" : "reports differ", t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  unsigned threads = 1;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--threads") == 0 && a + 1 < argc)
      threads = static_cast<unsigned>(std::strtoul(argv[++a], nullptr, 10));
  }
  std::cout << "acceptance suite (seed " << kAcceptanceSeed << ", threads "
            << threads << ")\n";

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();

  Timer shared_timer;
  SharedRun run = shared_run(threads);
  double shared_s = shared_timer.seconds() / 3.0;  // attributed to 6, 7, 11
  criterion_6(run, shared_s);
  criterion_7(run, shared_s);
  criterion_8(threads);
  criterion_9(threads);
  criterion_10(threads);
  criterion_11(run, threads, shared_s);
  criterion_12(threads);
  criterion_13();

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) +
                                    " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
