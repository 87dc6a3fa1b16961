#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace biphase {

struct ExperimentConfig {
  std::uint64_t n = 1'000'000;
  double eps = 0.05;
  std::uint64_t trials = 100;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;

  double r1 = 0.0, r2 = 1.0;  // tree window parameters
  double u1 = 1.0, u2 = 2.0;  // unicyclic window parameters
  std::vector<double> alphas = {1.0, 2.0, 4.0, 8.0};
  std::vector<std::uint64_t> n_grid = {100000, 1000000, 10000000};
  std::uint64_t sprinkle_trials = 4;
  // schedule eps_i = omega^a n^{-1/3} (1 + omega^{-b})^{i-1}, omega=(eps^3 n)^{1/6}
  double schedule_omega_pow = 0.2;
  double schedule_ratio_pow = 0.1;
  bool include_order1 = true;

  std::map<std::string, double> tol;  // per-experiment tolerance overrides

  double tol_or(const std::string& key, double dflt) const {
    auto it = tol.find(key);
    return it == tol.end() ? dflt : it->second;
  }
};

// flat "key = value" file; '#' starts a comment. Values override `base`.
ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base = {});
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

struct ExperimentReport {
  std::string name;
  nlohmann::ordered_json config_echo;
  nlohmann::ordered_json predictions;
  nlohmann::ordered_json estimates;
  nlohmann::ordered_json stderrs;
  nlohmann::ordered_json statistics;
  bool regime_ok = true;
  std::string regime_note;
  bool asserted = true;  // false => report-only (regime guard tripped)
  bool pass = true;
  std::vector<std::string> notes;
  std::string csv;      // per-trial rows, header included
  double wall_ms = 0.0; // informational; never serialized

  nlohmann::ordered_json to_json() const;
};

// Per-trial reduction of a census; everything the evaluators consume.
struct TrialSummary {
  std::uint64_t seed = 0;
  std::uint64_t y_window = 0;
  std::uint64_t z_window = 0;
  std::uint64_t y_minus1 = 0;
  std::uint64_t y_0 = 0;
  std::uint64_t z1_vertices = 0;
  std::uint64_t l1_n1 = 0, l1_n2 = 0, l1_edges = 0;
  std::uint64_t l2_order = 0;
  std::uint64_t complex_count = 0;
  std::uint64_t small_complex_count = 0;
  std::uint64_t max_tree_order = 0;
  std::uint64_t vertices_tail = 0;
  std::uint64_t total_edges = 0;

  std::uint64_t l1_order() const { return l1_n1 + l1_n2; }
  std::int64_t l1_excess() const {
    return static_cast<std::int64_t>(l1_edges) -
           static_cast<std::int64_t>(l1_order());
  }
};

// Shared-sample runner: one pass of `trials` G(n,n,p) samples with
// p = (1+eps)/n, reduced to summaries. Deterministic in (config) regardless
// of thread count (trial t is keyed by stream_key(master_seed, t, 0) and the
// reduction happens in trial order).
std::vector<TrialSummary> run_trial_summaries(const ExperimentConfig& cfg);

// Evaluators: pure functions of (config, summaries); exp_* wrappers run the
// trials themselves. Criteria that share samples reuse one summary vector.
ExperimentReport eval_poisson_trees(const ExperimentConfig& cfg,
                                    const std::vector<TrialSummary>& s);
ExperimentReport eval_poisson_unicyclic(const ExperimentConfig& cfg,
                                        const std::vector<TrialSummary>& s);
ExperimentReport eval_no_large_tree(const ExperimentConfig& cfg,
                                    const std::vector<TrialSummary>& s);
ExperimentReport eval_no_complex(const ExperimentConfig& cfg,
                                 const std::vector<TrialSummary>& s);
ExperimentReport eval_giant(const ExperimentConfig& cfg,
                            const std::vector<TrialSummary>& s);
ExperimentReport eval_excess(const ExperimentConfig& cfg,
                             const std::vector<TrialSummary>& s);
ExperimentReport eval_small_vertex_counts(const ExperimentConfig& cfg,
                                          const std::vector<TrialSummary>& s);

ExperimentReport exp_poisson_trees(const ExperimentConfig& cfg);
ExperimentReport exp_poisson_unicyclic(const ExperimentConfig& cfg);
ExperimentReport exp_no_large_tree(const ExperimentConfig& cfg);
ExperimentReport exp_no_complex(const ExperimentConfig& cfg);
ExperimentReport exp_giant(const ExperimentConfig& cfg);
ExperimentReport exp_excess(const ExperimentConfig& cfg);
ExperimentReport exp_small_vertex_counts(const ExperimentConfig& cfg);
ExperimentReport exp_subcritical_tail(const ExperimentConfig& cfg);

// Exact finite-n theory values for the window statistics, obtained by
// summing expected_components over the window (lgamma path). Reported next
// to the asymptotic lambda/nu so finite-size effects are visible.
double window_expectation_trees_exact(std::uint64_t n, double eps,
                                      std::uint64_t lo, std::uint64_t hi);
double window_expectation_unicyclic_exact(std::uint64_t n, double eps,
                                          std::uint64_t lo, std::uint64_t hi);

// Multi-round sprinkling schedule (part of exp_excess).
struct ScheduleRoundStat {
  double eps_from;
  double eps_to;
  double q;
  double mean_new_edges;
  double mean_delta_excess;
  double predicted_delta;
  bool in_regime;       // eps_from^3 n >= 100
  bool all_positive;    // every trial's delta positive
};
std::vector<ScheduleRoundStat> run_sprinkle_schedule(
    const ExperimentConfig& cfg);

}  // namespace biphase
