#include <cstdlib>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "biphase/census.hpp"
#include "biphase/enumeration.hpp"
#include "biphase/experiments.hpp"
#include "biphase/numeric.hpp"
#include "biphase/oracle.hpp"
#include "biphase/sampler.hpp"

namespace {

using nlohmann::ordered_json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BIPHASE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("BIPHASE_SEED is not a valid integer");
    }
  }
  return 0;
}

void emit(const std::string& format, const std::string& plain,
          const ordered_json& json) {
  if (format == "json")
    std::cout << json.dump() << '\n';
  else
    std::cout << plain << '\n';
}

ordered_json logreal_json(const biphase::LogReal& v) {
  ordered_json j;
  j["sign"] = v.is_zero() ? 0 : 1;
  if (v.is_zero())
    j["log_magnitude"] = nullptr;
  else
    j["log_magnitude"] = v.log_magnitude();
  j["scientific"] = v.to_scientific();
  return j;
}

std::string logreal_plain(const biphase::LogReal& v) {
  if (v.is_zero()) return "0 (log = -inf)";
  std::ostringstream os;
  os << v.to_scientific() << " (log = " << v.log_magnitude() << ")";
  return os.str();
}

int run_selftest() {
  using namespace biphase;
  bool all_ok = true;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
    if (!ok) all_ok = false;
  };
  // oracle equivalence over all shapes with i+j <= 8
  bool trees_ok = true, uni_ok = true;
  for (std::uint64_t i = 1; i <= 7; ++i)
    for (std::uint64_t j = 1; i + j <= 8; ++j) {
      if (count_connected_oracle(i, j, i + j - 1) != count_trees(i, j))
        trees_ok = false;
      if (count_connected_oracle(i, j, i + j) != count_unicyclic(i, j))
        uni_ok = false;
    }
  check(trees_ok, "count_trees equals edge-subset oracle for all i+j <= 8");
  check(uni_ok, "count_unicyclic equals edge-subset oracle for all i+j <= 8");
  bool forest_ok = true;
  for (std::uint64_t i = 1; i <= 6; ++i)
    for (std::uint64_t j = 1; j <= 6; ++j)
      if (count_forests(i, j, 1, 0) != count_trees(i, j)) forest_ok = false;
  check(forest_ok, "count_forests(i,j,1,0) reduces to count_trees, i,j <= 6");
  bool sym_ok = true;
  for (std::uint64_t i = 1; i <= 6; ++i)
    for (std::uint64_t j = 1; j <= 6; ++j) {
      if (count_trees(i, j) != count_trees(j, i)) sym_ok = false;
      if (count_unicyclic(i, j) != count_unicyclic(j, i)) sym_ok = false;
    }
  check(sym_ok, "tree/unicyclic counts symmetric in (i,j)");
  bool total_ok = true;
  for (std::uint64_t m = 0; m <= 9; ++m) {
    OracleResult res = count_connected_detail(3, 3, m);
    if (res.subsets != big_binomial(9, m)) total_ok = false;
  }
  check(total_ok, "oracle enumerates binom(ij,m) subsets for each m");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite random graph enumeration & simulation toolkit"};
  app.require_subcommand(1);
  std::string format = "plain";
  app.add_option("--format", format, "output format: plain or json")
      ->check(CLI::IsMember({"plain", "json"}));

  // --- count -------------------------------------------------------------
  auto* count = app.add_subcommand("count", "exact enumeration");
  count->require_subcommand(1);
  std::uint64_t ci = 1, cj = 1, cs = 0, ct = 0, cm = 0, cell = 1;
  double cc = 100.0;
  std::uint64_t budget_subsets = 10'000'000;

  auto* count_trees_cmd = count->add_subcommand("trees", "spanning trees of K_{i,j}");
  count_trees_cmd->add_option("--i", ci)->required();
  count_trees_cmd->add_option("--j", cj)->required();

  auto* count_uni_cmd = count->add_subcommand("unicyclic", "connected unicyclic bipartite graphs");
  count_uni_cmd->add_option("--i", ci)->required();
  count_uni_cmd->add_option("--j", cj)->required();

  auto* count_forest_cmd = count->add_subcommand("forest", "rooted bipartite forests");
  count_forest_cmd->add_option("--i", ci)->required();
  count_forest_cmd->add_option("--j", cj)->required();
  count_forest_cmd->add_option("--s", cs)->required();
  count_forest_cmd->add_option("--t", ct)->required();

  auto* count_oracle_cmd = count->add_subcommand("oracle", "brute-force connected count");
  count_oracle_cmd->add_option("--i", ci)->required();
  count_oracle_cmd->add_option("--j", cj)->required();
  count_oracle_cmd->add_option("--m", cm)->required();
  count_oracle_cmd->add_option("--budget", budget_subsets, "subset budget");

  auto* count_bound_cmd = count->add_subcommand("bound", "complex-count upper bounds");
  count_bound_cmd->add_option("--i", ci)->required();
  count_bound_cmd->add_option("--j", cj)->required();
  count_bound_cmd->add_option("--ell", cell)->required();
  count_bound_cmd->add_option("--c", cc, "constant in the analytic bound");

  // --- expect ------------------------------------------------------------
  auto* expect = app.add_subcommand("expect", "expected component count E(X(i,j,ell))");
  std::uint64_t en = 2;
  double eeps = 0.05;
  std::int64_t ei = 1, ej = 1, eell = -1;
  expect->add_option("--n", en)->required();
  expect->add_option("--eps", eeps)->required();
  expect->add_option("--i", ei)->required();
  expect->add_option("--j", ej)->required();
  expect->add_option("--ell", eell)->required();
  expect->add_option("--c", cc, "constant for the ell >= 1 bound");

  // --- scalar ------------------------------------------------------------
  auto* scalar = app.add_subcommand("scalar", "closed-form scalars");
  scalar->require_subcommand(1);
  double seps = 0.05, sr1 = 0.0, sr2 = 1.0, su1 = 1.0, su2 = 2.0, salpha = 0.0;
  std::uint64_t sn = 1'000'000, sk = 10'000, sL = 9'999, sgn = 1'000'000'000;
  unsigned sm = 0;
  auto* sc_delta = scalar->add_subcommand("delta", "eps - log(1+eps)");
  sc_delta->add_option("--eps", seps)->required();
  auto* sc_ep = scalar->add_subcommand("eps-prime", "conjugate parameter");
  sc_ep->add_option("--eps", seps)->required();
  auto* sc_lambda = scalar->add_subcommand("lambda", "tree-window Poisson parameter");
  sc_lambda->add_option("--r1", sr1)->required();
  sc_lambda->add_option("--r2", sr2)->required();
  auto* sc_nu = scalar->add_subcommand("nu", "unicyclic-window Poisson parameter");
  sc_nu->add_option("--u1", su1)->required();
  sc_nu->add_option("--u2", su2)->required();
  auto* sc_thr = scalar->add_subcommand("threshold", "tree order threshold");
  sc_thr->add_option("--n", sn)->required();
  sc_thr->add_option("--eps", seps)->required();
  sc_thr->add_option("--alpha", salpha)->required();
  auto* sc_giant = scalar->add_subcommand("giant", "giant order prediction");
  sc_giant->add_option("--n", sn)->required();
  sc_giant->add_option("--eps", seps)->required();
  auto* sc_excess = scalar->add_subcommand("excess", "giant excess prediction");
  sc_excess->add_option("--n", sn)->required();
  sc_excess->add_option("--eps", seps)->required();
  auto* sc_gauss = scalar->add_subcommand("gaussian-sum", "Gaussian-sum lemma check");
  sc_gauss->add_option("--k", sk)->required();
  sc_gauss->add_option("--L", sL)->required();
  sc_gauss->add_option("--m", sm)->required();
  sc_gauss->add_option("--n", sgn)->required();

  // --- sample ------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "one G(n,n,p) sample + census");
  std::uint64_t san = 1000;
  double saeps = 0.05;
  std::uint64_t saseed = default_seed();
  bool dump_edges = false;
  sample_cmd->add_option("--n", san)->required();
  sample_cmd->add_option("--eps", saeps)->required();
  sample_cmd->add_option("--seed", saseed);
  sample_cmd->add_flag("--dump-edges", dump_edges, "emit one edge per line (small n)");

  // --- experiment ----------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo verification suites");
  std::string exp_name;
  exp_cmd->add_option("name", exp_name,
                      "poisson-trees|poisson-unicyclic|no-large-tree|no-complex|"
                      "giant|excess|small-vertex-counts|subcritical-tail")
      ->required();
  std::string config_path, out_path, csv_path;
  exp_cmd->add_option("--config", config_path, "flat key=value config file");
  exp_cmd->add_option("--out", out_path, "write report JSON here (default stdout)");
  exp_cmd->add_option("--csv", csv_path, "write per-trial CSV rows here");
  std::vector<std::string> overrides;
  exp_cmd->add_option("--set", overrides, "config overrides key=value")
      ->expected(-1);
  std::uint64_t xn = 0, xtrials = 0, xseed = 0;
  double xeps = 0.0;
  unsigned xthreads = 0;
  exp_cmd->add_option("--n", xn);
  exp_cmd->add_option("--eps", xeps);
  exp_cmd->add_option("--trials", xtrials);
  auto* seed_opt = exp_cmd->add_option("--seed", xseed);
  exp_cmd->add_option("--threads", xthreads);

  // --- selftest ------------------------------------------------------------
  app.add_subcommand("selftest", "oracle-equivalence suite");

  // global flags (--format) remain usable after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands(
             [](const CLI::App*) { return true; })) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace biphase;
    if (count->parsed()) {
      if (count_trees_cmd->parsed()) {
        BigCount v = count_trees(ci, cj);
        emit(format, to_decimal(v), {{"count", to_decimal(v)}});
      } else if (count_uni_cmd->parsed()) {
        BigCount v = count_unicyclic(ci, cj);
        emit(format, to_decimal(v), {{"count", to_decimal(v)}});
      } else if (count_forest_cmd->parsed()) {
        BigCount v = count_forests(ci, cj, cs, ct);
        emit(format, to_decimal(v), {{"count", to_decimal(v)}});
      } else if (count_oracle_cmd->parsed()) {
        OracleBudget budget;
        budget.max_subsets = budget_subsets;
        BigCount v = count_connected_oracle(ci, cj, cm, budget);
        emit(format, to_decimal(v), {{"count", to_decimal(v)}});
      } else if (count_bound_cmd->parsed()) {
        ordered_json j;
        std::ostringstream plain;
        if (cell >= 1 && ci * cj >= ci + cj + cell &&
            2 * ci >= cj && 2 * cj >= ci) {
          LogReal b = complex_upper_bound(ci, cj, cell, cc);
          j["analytic_bound"] = logreal_json(b);
          plain << "analytic bound: " << logreal_plain(b) << '\n';
        } else {
          j["analytic_bound"] = nullptr;
          plain << "analytic bound: outside domain (needs 1 <= ell <= ij-i-j, "
                   "1/2 <= i/j <= 2)\n";
        }
        BigCount naive = naive_complex_bound(ci, cj, cell);
        j["naive_bound"] = to_decimal(naive);
        plain << "naive bound binom(ij, k+ell): " << to_decimal(naive);
        emit(format, plain.str(), j);
      }
    } else if (expect->parsed()) {
      CriticalParams params = CriticalParams::make(en, eeps);
      BipartiteShape shape{ei, ej, eell};
      LogReal result;
      std::string kind;
      if (eell <= 0) {
        BigCount cnt = eell == -1 ? count_trees(ei, ej)
                                  : count_unicyclic(ei, ej);
        result = expected_components(en, params.p, shape, cnt);
        kind = "exact";
      } else {
        LogReal bound = complex_upper_bound(
            static_cast<std::uint64_t>(ei), static_cast<std::uint64_t>(ej),
            static_cast<std::uint64_t>(eell), cc);
        result = expected_components(en, params.p, shape, bound);
        kind = "upper_bound";
      }
      ordered_json j;
      j["kind"] = kind;
      j["value"] = logreal_json(result);
      emit(format, kind + ": " + logreal_plain(result), j);
    } else if (scalar->parsed()) {
      double v = 0.0;
      std::string name;
      if (sc_delta->parsed()) {
        v = delta(seps);
        name = "delta";
      } else if (sc_ep->parsed()) {
        v = epsilon_prime(seps);
        name = "eps_prime";
      } else if (sc_lambda->parsed()) {
        v = poisson_lambda(sr1, sr2);
        name = "lambda";
      } else if (sc_nu->parsed()) {
        v = poisson_nu(su1, su2);
        name = "nu";
      } else if (sc_thr->parsed()) {
        v = tree_order_threshold(sn, seps, salpha);
        name = "threshold";
      } else if (sc_giant->parsed()) {
        v = giant_order_prediction(sn, seps);
        name = "giant_order";
      } else if (sc_excess->parsed()) {
        v = giant_excess_prediction(sn, seps);
        name = "giant_excess";
      } else if (sc_gauss->parsed()) {
        GaussianSumResult g = verify_gaussian_sum(sk, sL, sm, sgn);
        ordered_json j;
        j["exact_sum"] = g.exact_sum;
        j["asymptotic"] = g.asymptotic;
        j["ratio"] = g.ratio;
        std::ostringstream plain;
        plain << "exact_sum = " << g.exact_sum
              << "\nasymptotic = " << g.asymptotic << "\nratio = " << g.ratio;
        emit(format, plain.str(), j);
        return 0;
      }
      std::ostringstream plain;
      plain.precision(17);
      plain << v;
      emit(format, plain.str(), {{name, v}});
    } else if (sample_cmd->parsed()) {
      CriticalParams params = CriticalParams::make(san, saeps);
      GraphSample g = GraphSample::sample(san, params.p, saseed);
      if (dump_edges) g.dump_edges(std::cout);
      ComponentCensus census =
          build_census(g, saeps, ceil_n_two_thirds(san));
      ordered_json j = census_to_json(census);
      j["seed"] = saseed;
      std::cout << j.dump() << '\n';
    } else if (exp_cmd->parsed()) {
      ExperimentConfig cfg;
      cfg.master_seed = default_seed();
      if (!config_path.empty()) cfg = parse_config_file(config_path, cfg);
      for (const std::string& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("--set expects key=value, got: " + kv);
        apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (xn) cfg.n = xn;
      if (xeps != 0.0) cfg.eps = xeps;
      if (xtrials) cfg.trials = xtrials;
      if (seed_opt->count() > 0) cfg.master_seed = xseed;
      if (xthreads) cfg.threads = xthreads;
      ExperimentReport report;
      if (exp_name == "poisson-trees")
        report = exp_poisson_trees(cfg);
      else if (exp_name == "poisson-unicyclic")
        report = exp_poisson_unicyclic(cfg);
      else if (exp_name == "no-large-tree")
        report = exp_no_large_tree(cfg);
      else if (exp_name == "no-complex")
        report = exp_no_complex(cfg);
      else if (exp_name == "giant")
        report = exp_giant(cfg);
      else if (exp_name == "excess")
        report = exp_excess(cfg);
      else if (exp_name == "small-vertex-counts")
        report = exp_small_vertex_counts(cfg);
      else if (exp_name == "subcritical-tail")
        report = exp_subcritical_tail(cfg);
      else
        throw std::invalid_argument("unknown experiment: " + exp_name);
      std::string out = report.to_json().dump();
      if (out_path.empty()) {
        std::cout << out << '\n';
      } else {
        std::ofstream f(out_path);
        f << out << '\n';
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        f << report.csv;
      }
      std::cerr << "wall_ms = " << report.wall_ms << '\n';
      return report.asserted && !report.pass ? 1 : 0;
    } else if (app.get_subcommand("selftest")->parsed()) {
      return run_selftest();
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
