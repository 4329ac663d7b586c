#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bayescut/bench.hpp"
#include "bayescut/discovery.hpp"
#include "bayescut/effect.hpp"
#include "bayescut/errors.hpp"
#include "bayescut/graph_io.hpp"
#include "bayescut/mec.hpp"
#include "bayescut/sample_complexity.hpp"
#include "bayescut/scm.hpp"
#include "bayescut/separating.hpp"

using namespace bayescut;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

std::string join(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const std::map<std::string, SepsysMode> kSepsys{{"g", SepsysMode::graph}, {"nk", SepsysMode::nk}};
const std::map<std::string, PriorMode> kPrior{{"mec", PriorMode::mec}, {"uniform", PriorMode::uniform}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian causal discovery from interventional samples"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "random SCM on a chordal or Barabasi-Albert DAG (JSON)");
  int gen_n = 5;
  double gen_rho = 0.5;
  int gen_ba_m = 0;
  int gen_card = 2;
  double gen_eps = kDefaultPositivityFloor;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "vertex count")->check(CLI::Range(2, 30));
  gen->add_option("--rho", gen_rho, "density")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--ba-m", gen_ba_m, "Barabasi-Albert edges per vertex (0: chordal generator)");
  gen->add_option("--cardinality", gen_card, "alphabet size")->check(CLI::Range(2, 64));
  gen->add_option("--eps", gen_eps, "positivity floor");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // discover
  auto* disc = app.add_subcommand("discover", "learn the DAG of an SCM oracle");
  std::string disc_scm;
  std::string disc_sepsys = "g";
  int disc_k = 1;
  std::size_t disc_samples = 1000;
  std::string disc_prior = "mec";
  bool disc_fixed = false;
  std::uint64_t disc_seed = 0;
  std::string disc_trace;
  std::string disc_out;
  disc->add_option("--scm", disc_scm)->required();
  disc->add_option("--sepsys", disc_sepsys)->check(CLI::IsMember({"g", "nk"}));
  disc->add_option("--k", disc_k)->check(CLI::PositiveNumber);
  disc->add_option("--samples", disc_samples);
  disc->add_option("--prior", disc_prior)->check(CLI::IsMember({"mec", "uniform"}));
  disc->add_flag("--fixed-do", disc_fixed, "set every intervened vertex to 0");
  disc->add_option("--seed", disc_seed);
  disc->add_option("--trace", disc_trace, "per-sample CSV trace");
  disc->add_option("--out", disc_out, "learned DAG (JSON, default stdout)");

  // baseline
  auto* base = app.add_subcommand("baseline", "random-intervention chi-square baseline");
  std::string base_scm;
  std::string base_sepsys = "g";
  int base_k = 1;
  std::size_t base_samples = 1000;
  double base_alpha = 0.05;
  std::uint64_t base_seed = 0;
  std::string base_out;
  base->add_option("--scm", base_scm)->required();
  base->add_option("--sepsys", base_sepsys)->check(CLI::IsMember({"g", "nk"}));
  base->add_option("--k", base_k)->check(CLI::PositiveNumber);
  base->add_option("--samples", base_samples);
  base->add_option("--alpha", base_alpha)->check(CLI::Range(0.0, 1.0));
  base->add_option("--seed", base_seed);
  base->add_option("--out", base_out);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "SHD against samples over random trials (CSV)");
  BenchConfig cfg;
  std::vector<std::size_t> bench_grid;
  std::vector<std::string> bench_algos{"bayes", "random-baseline"};
  std::string bench_sepsys = "g";
  std::string bench_prior = "mec";
  std::string bench_out;
  bench->add_option("--n", cfg.n)->check(CLI::Range(2, 30));
  bench->add_option("--rho", cfg.rho)->check(CLI::Range(0.0, 1.0));
  bench->add_option("--ba-m", cfg.ba_m, "use the Barabasi-Albert generator with this m");
  bench->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  bench->add_option("--grid", bench_grid, "sample counts, strictly increasing")->delimiter(',');
  bench->add_option("--algorithms", bench_algos)->delimiter(',')->check(CLI::IsMember({"bayes", "random-baseline"}));
  bench->add_option("--sepsys", bench_sepsys)->check(CLI::IsMember({"g", "nk"}));
  bench->add_option("--k", cfg.k)->check(CLI::PositiveNumber);
  bench->add_option("--prior", bench_prior)->check(CLI::IsMember({"mec", "uniform"}));
  bench->add_option("--cardinality", cfg.cardinality)->check(CLI::Range(2, 64));
  bench->add_option("--eps", cfg.eps);
  bench->add_option("--alpha", cfg.alpha)->check(CLI::Range(0.0, 1.0));
  bench->add_option("--threads", cfg.threads);
  bench->add_option("--seed", cfg.seed);
  bench->add_option("--out", bench_out);

  // case-study
  auto* cs = app.add_subcommand("case-study", "effect of x on y from interventions on x's neighborhood (CSV)");
  std::string cs_scm;
  int cs_x = 0;
  int cs_y = 0;
  int cs_xv = 0;
  CaseStudyOptions cs_opt;
  std::string cs_prior = "mec";
  std::string cs_out;
  cs->add_option("--scm", cs_scm)->required();
  cs->add_option("--x", cs_x)->required();
  cs->add_option("--y", cs_y)->required();
  cs->add_option("--x-value", cs_xv);
  cs->add_option("--samples", cs_opt.samples);
  cs->add_option("--grid", cs_opt.grid)->delimiter(',');
  cs->add_option("--prior", cs_prior)->check(CLI::IsMember({"mec", "uniform"}));
  cs->add_option("--seed", cs_opt.seed);
  cs->add_option("--out", cs_out);

  // mec
  auto* mec = app.add_subcommand("mec", "size of (and uniform samples from) an equivalence class");
  std::string mec_graph;
  bool mec_dag_input = false;
  std::size_t mec_samples = 0;
  std::uint64_t mec_seed = 0;
  mec->add_option("--graph", mec_graph, "graph JSON (essential graph, MPDAG or UCCG)")->required();
  mec->add_flag("--from-dag", mec_dag_input, "input is a DAG; use its essential graph");
  mec->add_option("--sample", mec_samples, "number of uniform DAG samples to print");
  mec->add_option("--seed", mec_seed);

  // sepsys
  auto* sep = app.add_subcommand("sepsys", "separating system (JSON)");
  int sep_n = 0;
  int sep_k = 1;
  std::string sep_graph;
  std::string sep_mode = "nk";
  sep->add_option("--n", sep_n, "ground set size for an (n,k) system");
  sep->add_option("--k", sep_k)->check(CLI::PositiveNumber);
  sep->add_option("--graph", sep_graph, "essential graph JSON; builds one system per chain component");
  sep->add_option("--mode", sep_mode)->check(CLI::IsMember({"g", "nk"}));
  sep->add_option("--seed", gen_seed, "unused; accepted for uniformity");

  // sample-complexity
  auto* sc = app.add_subcommand("sample-complexity", "samples per target for a posterior guarantee");
  SampleComplexityInput sc_in;
  bool sc_per_target = false;
  sc->add_option("--beta", sc_in.beta)->required();
  sc->add_option("--d-min", sc_in.d_min)->required();
  sc->add_option("--k", sc_in.k)->required();
  sc->add_option("--d-m", sc_in.d_m)->required();
  sc->add_option("--delta", sc_in.delta)->required();
  sc->add_option("--gamma", sc_in.gamma)->required();
  sc->add_option("--p-star", sc_in.p_star)->required();
  sc->add_option("--p", sc_in.p_targets, "number of targets (per-target mode)");
  sc->add_flag("--per-target", sc_per_target);
  sc->add_option("--seed", gen_seed, "unused; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const MixedGraph dag = gen_ba_m > 0 ? random_ba_dag(gen_n, gen_ba_m, gen_seed)
                                          : random_chordal_dag(gen_n, gen_rho, gen_seed);
      const DiscreteScm scm = random_cpt_scm(dag, gen_card, gen_eps, gen_seed + 1);
      write_text(gen_out, to_json(scm).dump(2) + "\n");
    } else if (*disc) {
      const DiscreteScm scm = scm_from_json(read_json(disc_scm));
      const SeparatingSystem system = system_for_essential(cpdag_of(scm.dag()), kSepsys.at(disc_sepsys), disc_k);
      DiscoveryOptions opt;
      opt.samples = disc_samples;
      opt.prior = kPrior.at(disc_prior);
      opt.fixed_do = disc_fixed;
      opt.seed = disc_seed;
      opt.trace_shd = !disc_trace.empty();
      const DiscoveryResult res = run_discovery(scm, system, opt);
      if (!disc_trace.empty()) {
        std::string csv = "sample_index,target,do_values,shd\n";
        for (const auto& row : res.trace)
          csv += std::to_string(row.sample_index) + "," + join(row.target, ';') + "," + join(row.do_values, ';') + "," +
                 std::to_string(row.shd) + "\n";
        write_text(disc_trace, csv);
      }
      json doc;
      doc["dag"] = graph_to_json(res.dag);
      doc["shd"] = shd(res.dag, scm.dag());
      doc["samples"] = res.state.total_samples;
      doc["separating_system"] = to_json(system);
      json post = json::array();
      for (const auto& t : res.state.targets) post.push_back({{"target", t.configs.target}, {"posterior", t.posterior()}});
      doc["posteriors"] = post;
      write_text(disc_out, doc.dump(2) + "\n");
    } else if (*base) {
      const DiscreteScm scm = scm_from_json(read_json(base_scm));
      const SeparatingSystem system = system_for_essential(cpdag_of(scm.dag()), kSepsys.at(base_sepsys), base_k);
      const BaselineResult res = random_intervention_baseline(scm, system, {base_samples, base_alpha, base_seed, {}});
      json undecided = json::array();
      for (auto [u, v] : res.undecided) undecided.push_back({u, v});
      json doc{{"dag", graph_to_json(res.dag)}, {"shd", shd(res.dag, scm.dag())}, {"undecided", undecided}};
      write_text(base_out, doc.dump(2) + "\n");
    } else if (*bench) {
      if (!bench_grid.empty()) cfg.grid = bench_grid;
      if (bench->count("--ba-m")) cfg.model = GraphModel::barabasi_albert;
      cfg.sepsys = kSepsys.at(bench_sepsys);
      cfg.prior = kPrior.at(bench_prior);
      cfg.run_bayes = std::find(bench_algos.begin(), bench_algos.end(), "bayes") != bench_algos.end();
      cfg.run_baseline = std::find(bench_algos.begin(), bench_algos.end(), "random-baseline") != bench_algos.end();
      const BenchResult res = run_benchmark(cfg);
      for (const auto& t : res.trials)
        if (t.failed) std::cerr << "trial " << t.trial << " failed: " << t.error << "\n";
      write_text(bench_out, bench_csv(res.rows));
    } else if (*cs) {
      const DiscreteScm scm = scm_from_json(read_json(cs_scm));
      cs_opt.prior = kPrior.at(cs_prior);
      const CaseStudyResult res = run_case_study(scm, cs_x, cs_y, cs_xv, cs_opt);
      std::string csv = "samples,dbar_kl,dbar_tvd\n";
      for (std::size_t i = 0; i < res.grid.size(); ++i)
        csv += std::to_string(res.grid[i]) + "," + fmt(res.dbar_kl[i]) + "," + fmt(res.dbar_tvd[i]) + "\n";
      write_text(cs_out, csv);
    } else if (*mec) {
      json doc = read_json(mec_graph);
      if (doc.contains("dag") && !doc.contains("n")) doc = doc.at("dag");
      MixedGraph g = graph_from_json(doc);
      if (mec_dag_input) g = cpdag_of(g);
      std::cout << mec_size(g) << "\n";
      Rng rng = make_rng(mec_seed);
      for (std::size_t i = 0; i < mec_samples; ++i) std::cout << graph_to_json(sample_uniform_dag(g, rng)).dump() << "\n";
    } else if (*sep) {
      SeparatingSystem s;
      if (!sep_graph.empty()) {
        const MixedGraph g = graph_from_json(read_json(sep_graph));
        s = system_for_essential(g, kSepsys.at(sep_mode), sep_k);
      } else {
        s = nk_separating_system(sep_n, sep_k);
      }
      std::cout << to_json(s).dump() << "\n";
    } else if (*sc) {
      std::cout << required_samples(sc_in, sc_per_target) << "\n";
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
