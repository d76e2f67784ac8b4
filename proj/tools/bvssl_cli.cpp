#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "bvssl/cliques.hpp"
#include "bvssl/error.hpp"
#include "bvssl/graph_learner.hpp"
#include "bvssl/io.hpp"
#include "bvssl/pipeline.hpp"
#include "bvssl/simbench.hpp"

namespace fs = std::filesystem;
using namespace bvssl;

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_key(CLI::App* app, const std::string& flag, const std::string& key, Overrides& overrides,
             const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out) / name).string();
}

std::string fmt(double x) { return format_double(x); }

std::string join_members(const std::vector<int>& members) {
  std::string s;
  for (std::size_t k = 0; k < members.size(); ++k) s += (k ? ";" : "") + std::to_string(members[k] + 1);
  return s;
}

LoadedData load_training(const RunConfig& cfg, bool need_response) {
  if (cfg.data.empty() || cfg.schema.empty()) {
    throw Error(ErrorKind::validation, "--data and --schema are required");
  }
  LoadedData d = load_dataset(cfg.data, cfg.schema);
  if (need_response && !d.response) {
    throw Error(ErrorKind::validation, "the schema declares no response column (kind 'response')");
  }
  return d;
}

PriorGraph build_prior(const RunConfig& cfg, int p) {
  if (cfg.prior.empty()) return PriorGraph::empty(p);
  PriorGraph prior;
  if (cfg.platforms > 1) {
    if (p % cfg.platforms != 0) {
      throw Error(ErrorKind::validation, std::to_string(p) + " columns do not split into " +
                                             std::to_string(cfg.platforms) + " platforms");
    }
    const Eigen::MatrixXi genes = load_adjacency(cfg.prior, p / cfg.platforms);
    prior = PriorGraph::from_adjacency(expand_prior_graph(genes, cfg.platforms), cfg.kappa, cfg.absence_kappa);
  } else {
    prior = load_prior_graph(cfg.prior, p, cfg.kappa, cfg.absence_kappa);
  }
  prior.validate(cfg.shrinkage);
  return prior;
}

void write_edges(const RunConfig& cfg, const GraphRunResult& g, Eigen::Index n) {
  const GraphEstimate& e = g.estimate;
  const Eigen::Index p = e.adjacency.rows();
  std::ostringstream edges;
  edges << "i,j,rho_hat,rho_ref,included\n";
  int count = 0;
  double p_sum = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      edges << i + 1 << ',' << j + 1 << ',' << fmt(e.rho_hat(i, j)) << ',' << fmt(e.rho_ref(i, j)) << ','
            << e.adjacency(i, j) << '\n';
      count += e.adjacency(i, j);
      p_sum += g.summary.p_edge_mean.size() ? g.summary.p_edge_mean(i, j) : 0.0;
    }
  }
  write_text_file(out_path(cfg, "edges.csv"), edges.str());
  const double pairs = static_cast<double>(p * (p - 1) / 2);
  std::ostringstream summary;
  summary << "key,value\n"
          << "nodes," << p << '\n'
          << "observations," << n << '\n'
          << "edges," << count << '\n'
          << "density," << fmt(pairs > 0 ? count / pairs : 0.0) << '\n'
          << "mean_edge_probability," << fmt(pairs > 0 ? p_sum / pairs : 0.0) << '\n'
          << "retained_draws," << g.summary.retained << '\n';
  write_text_file(out_path(cfg, "graph_summary.csv"), summary.str());
}

void write_cliques(const RunConfig& cfg, const CliqueSet& cliques) {
  std::ostringstream out;
  out << "clique,size,members\n";
  for (std::size_t k = 0; k < cliques.q(); ++k) {
    out << k + 1 << ',' << cliques.cliques[k].size() << ',' << join_members(cliques.cliques[k]) << '\n';
  }
  write_text_file(out_path(cfg, "cliques.csv"), out.str());
}

void write_selection(const RunConfig& cfg, const PipelineResult& fit, const LoadedData& train) {
  const PosteriorSummary& post = fit.posterior;
  const MixedDataset& d = train.data;
  std::ostringstream incl;
  incl << "level,index,name,probability\n";
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    incl << "variable," << j + 1 << ',' << d.column(j).name << ',' << fmt(post.var_incl[j]) << '\n';
  }
  for (std::size_t k = 0; k < fit.cliques.q(); ++k) {
    incl << "clique," << k + 1 << ',' << join_members(fit.cliques.cliques[k]) << ','
         << fmt(post.clique_incl[static_cast<Eigen::Index>(k)]) << '\n';
  }
  write_text_file(out_path(cfg, "inclusion.csv"), incl.str());

  std::ostringstream coef;
  coef << "index,name,posterior_mean\n0,(intercept)," << fmt(post.alpha_hat) << '\n';
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    coef << j + 1 << ',' << d.column(j).name << ',' << fmt(post.beta_mean[j]) << '\n';
  }
  write_text_file(out_path(cfg, "coefficients.csv"), coef.str());

  std::ostringstream fdr;
  fdr << "index,name,probability\n";
  for (int j : fdr_threshold(post.var_incl, cfg.fdr_alpha)) {
    fdr << j + 1 << ',' << d.column(j).name << ',' << fmt(post.var_incl[j]) << '\n';
  }
  write_text_file(out_path(cfg, "fdr_selected.csv"), fdr.str());

  // In-sample predictions unless a test file is given.
  const LoadedData test = cfg.test.empty() ? train : load_dataset(cfg.test, cfg.schema);
  const std::vector<PredictiveInterval> preds = fit.predict(test.data);
  std::ostringstream pred;
  pred << "row,mean,lower95,upper95" << (test.response ? ",observed" : "") << '\n';
  for (std::size_t i = 0; i < preds.size(); ++i) {
    pred << i + 1 << ',' << fmt(preds[i].mean) << ',' << fmt(preds[i].lower95) << ',' << fmt(preds[i].upper95);
    if (test.response) pred << ',' << fmt((*test.response)[static_cast<Eigen::Index>(i)]);
    pred << '\n';
  }
  write_text_file(out_path(cfg, "predictions.csv"), pred.str());
}

int cmd_learn_graph(const RunConfig& cfg) {
  const LoadedData train = load_training(cfg, false);
  const PriorGraph prior = build_prior(cfg, static_cast<int>(train.data.p()));
  Rng rng(cfg.seed);
  const PipelineConfig pc = cfg.pipeline_config();
  const GraphRunResult g = run_graph_mcmc(train.data.standardize(), prior, pc.shrinkage, pc.graph, rng);
  write_edges(cfg, g, train.data.n());
  return 0;
}

int cmd_cliques(const RunConfig& cfg, const std::string& graph_path, int nodes) {
  if (graph_path.empty()) throw Error(ErrorKind::validation, "--graph is required");
  if (nodes < 1) throw Error(ErrorKind::validation, "--nodes must be >= 1");
  Eigen::MatrixXi adj = load_adjacency(graph_path, nodes);
  if (cfg.platforms > 1) adj = expand_prior_graph(adj, cfg.platforms);
  const PipelineConfig pc = cfg.pipeline_config();
  write_cliques(cfg, maximal_cliques(adj, pc.clique_limits));
  return 0;
}

int cmd_select(const RunConfig& cfg, const std::string& graph_path) {
  const LoadedData train = load_training(cfg, true);
  const Eigen::Index p = train.data.p();
  const Eigen::MatrixXi adj = graph_path.empty() ? Eigen::MatrixXi::Zero(p, p).eval()
                                                 : load_adjacency(graph_path, static_cast<int>(p));
  Rng rng(cfg.seed);
  const PipelineResult fit = run_structured_selection(train.data, *train.response, adj, cfg.pipeline_config(), rng);
  write_cliques(cfg, fit.cliques);
  write_selection(cfg, fit, train);
  return 0;
}

int cmd_pipeline(const RunConfig& cfg) {
  const LoadedData train = load_training(cfg, true);
  const PriorGraph prior = build_prior(cfg, static_cast<int>(train.data.p()));
  Rng rng(cfg.seed);
  const PipelineResult fit = run_pipeline(train.data, *train.response, prior, cfg.pipeline_config(), rng);
  write_edges(cfg, fit.graph, train.data.n());
  write_cliques(cfg, fit.cliques);
  write_selection(cfg, fit, train);
  return 0;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) grid.push_back(parse_double(item, "--sweep"));
  if (grid.empty()) throw Error(ErrorKind::validation, "--sweep needs at least one kappa value");
  return grid;
}

void export_case(const RunConfig& cfg, const SimCase& sim) {
  const SimData data = generate_case(sim, derive_seed(cfg.seed, 0));
  const std::vector<SchemaEntry> schema = schema_for(data.train, true, 0);
  write_dataset(out_path(cfg, "train.csv"), LoadedData{data.train, data.y_train, schema});
  write_dataset(out_path(cfg, "test.csv"), LoadedData{data.test, data.y_test, schema});
  std::ostringstream schema_text;
  write_schema(schema_text, schema);
  write_text_file(out_path(cfg, "schema.txt"), schema_text.str());
  std::ostringstream graph;
  for (Eigen::Index i = 0; i < data.graph.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < data.graph.cols(); ++j) {
      if (data.graph(i, j)) graph << i + 1 << ' ' << j + 1 << '\n';
    }
  }
  write_text_file(out_path(cfg, "true_graph.txt"), graph.str());
}

int cmd_simulate(const RunConfig& cfg, const std::string& sweep, bool export_only) {
  const CaseId id = parse_case_id(cfg.sim_case);
  const SimCase sim = make_sim_case(id, cfg.sim_p, cfg.n_train, cfg.n_test);
  if (export_only) {
    export_case(cfg, sim);
    return 0;
  }
  BenchConfig bench;
  bench.pipeline = cfg.pipeline_config();
  bench.method = cfg.method == "ssvs" ? MethodKind::ssvs : MethodKind::bvs_sl;
  bench.prior_mode = cfg.prior_mode == "truth"          ? PriorMode::truth
                     : cfg.prior_mode == "misspecified" ? PriorMode::misspecified
                                                        : PriorMode::none;
  bench.kappa = cfg.kappa;
  bench.misspecified_edges = cfg.misspecified_edges;
  bench.replicates = cfg.replicates;
  bench.seed = cfg.seed;
  bench.threads = cfg.threads;
  const std::string name = to_string(id);

  if (!sweep.empty()) {
    const SweepResult res = belief_sweep(sim, parse_grid(sweep), bench);
    std::ostringstream out;
    out << "case,kappa,replicate,auc_roc,auc_prc\n";
    for (const SweepEntry& e : res.entries) {
      out << name << ',' << fmt(e.kappa) << ',' << e.replicate + 1 << ',' << fmt(e.auc_roc) << ','
          << fmt(e.auc_prc) << '\n';
    }
    for (const SweepEntry& e : res.means) {
      out << name << ',' << fmt(e.kappa) << ",mean," << fmt(e.auc_roc) << ',' << fmt(e.auc_prc) << '\n';
    }
    write_text_file(out_path(cfg, "sweep.csv"), out.str());
    return 0;
  }

  const std::vector<ReplicateResult> reps = run_benchmark(sim, bench);
  std::ostringstream metrics;
  std::ostringstream roc;
  std::ostringstream prc;
  metrics << "case,replicate,mspe,auc_roc,auc_prc,power_at_10,ms,fp,cov95\n";
  roc << "case,replicate,fpr,tpr\n";
  prc << "case,replicate,recall,precision\n";
  for (const ReplicateResult& r : reps) {
    const SimMetrics& m = r.metrics;
    const std::string tag = name + ',' + std::to_string(r.replicate + 1) + ',';
    metrics << tag << fmt(m.mspe) << ',' << fmt(m.auc_roc) << ',' << fmt(m.auc_prc) << ',' << fmt(m.power_at_10)
            << ',' << m.ms << ',' << m.fp << ',' << fmt(m.cov95) << '\n';
    for (const CurvePoint& pt : r.curves.roc) roc << tag << fmt(pt.x) << ',' << fmt(pt.y) << '\n';
    for (const CurvePoint& pt : r.curves.prc) prc << tag << fmt(pt.x) << ',' << fmt(pt.y) << '\n';
  }
  write_text_file(out_path(cfg, "metrics.csv"), metrics.str());
  write_text_file(out_path(cfg, "roc_points.csv"), roc.str());
  write_text_file(out_path(cfg, "prc_points.csv"), prc.str());
  return 0;
}

int cmd_calibrate(const RunConfig& cfg, double confidence, int a0) {
  if (a0 != 0 && a0 != 1) throw Error(ErrorKind::validation, "--a0 must be 0 or 1");
  const double kappa = calibrate_belief(confidence, a0, cfg.shrinkage.a_p, cfg.shrinkage.b_p);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", kappa);
  std::cout << buf << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian variable selection with structure learning for mixed covariates"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Overrides overrides;
  std::string config_path;
  bool dump = false;
  app.add_option("--config", config_path, "key = value configuration file");
  add_key(&app, "--seed", "seed", overrides, "master random seed (fallback: BVSSL_SEED)");
  add_key(&app, "--out", "out", overrides, "output directory");
  add_key(&app, "--threads", "threads", overrides, "parallel replicates (simulate)");
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  const auto add_mcmc = [&](CLI::App* sub) {
    add_key(sub, "--iterations", "iterations", overrides, "MCMC iterations");
    add_key(sub, "--burn-in", "burn_in", overrides, "discarded initial iterations");
  };
  const auto add_data = [&](CLI::App* sub) {
    add_key(sub, "--data", "data", overrides, "training CSV");
    add_key(sub, "--schema", "schema", overrides, "column schema file");
  };

  CLI::App* learn = app.add_subcommand("learn-graph", "estimate the covariate graph");
  add_data(learn);
  add_mcmc(learn);
  add_key(learn, "--prior", "prior", overrides, "prior edge list 'i j [kappa]'");
  add_key(learn, "--kappa", "kappa", overrides, "default belief for prior edges");
  add_key(learn, "--platforms", "platforms", overrides, "expand a gene-level prior over D platforms");
  add_key(learn, "--n-mc", "n_mc", overrides, "reference-posterior draws");

  std::string graph_path;
  int nodes = 0;
  CLI::App* cliq = app.add_subcommand("cliques", "maximal cliques of a graph");
  cliq->add_option("--graph", graph_path, "edge list or edges.csv")->required();
  cliq->add_option("--nodes", nodes, "number of nodes in the graph file")->required();
  add_key(cliq, "--platforms", "platforms", overrides, "expand over D platforms first");
  add_key(cliq, "--max-cliques", "max_cliques", overrides, "abort beyond this many cliques");

  CLI::App* select = app.add_subcommand("select", "clique-structured variable selection");
  add_data(select);
  add_mcmc(select);
  select->add_option("--graph", graph_path, "covariate graph (default: no edges)");
  add_key(select, "--test", "test", overrides, "test CSV for predictions");
  add_key(select, "--fdr-alpha", "fdr_alpha", overrides, "Bayesian FDR level");

  CLI::App* pipe = app.add_subcommand("pipeline", "graph learning then structured selection");
  add_data(pipe);
  add_mcmc(pipe);
  add_key(pipe, "--prior", "prior", overrides, "prior edge list 'i j [kappa]'");
  add_key(pipe, "--kappa", "kappa", overrides, "default belief for prior edges");
  add_key(pipe, "--platforms", "platforms", overrides, "expand a gene-level prior over D platforms");
  add_key(pipe, "--test", "test", overrides, "test CSV for predictions");
  add_key(pipe, "--fdr-alpha", "fdr_alpha", overrides, "Bayesian FDR level");
  add_key(pipe, "--n-mc", "n_mc", overrides, "reference-posterior draws");

  std::string sweep;
  CLI::App* sim = app.add_subcommand("simulate", "simulation benchmark");
  add_mcmc(sim);
  add_key(sim, "--case", "case", overrides, "Ia, Ib, Ic or Id");
  add_key(sim, "--p", "p", overrides, "number of covariates");
  add_key(sim, "--replicates", "replicates", overrides, "number of replicates");
  add_key(sim, "--prior", "prior_mode", overrides, "none, truth or misspecified");
  add_key(sim, "--misspecified", "misspecified_edges", overrides, "flipped pairs for --prior misspecified");
  add_key(sim, "--kappa", "kappa", overrides, "belief for prior edges");
  add_key(sim, "--method", "method", overrides, "bvs-sl or ssvs");
  add_key(sim, "--n-mc", "n_mc", overrides, "reference-posterior draws");
  sim->add_option("--sweep", sweep, "comma-separated kappa grid");
  bool export_only = false;
  sim->add_flag("--export", export_only, "write replicate 1's data files instead of running methods");

  double confidence = 0.0;
  int a0 = 1;
  CLI::App* calib = app.add_subcommand("calibrate-belief", "belief parameter for a target edge probability");
  calib->add_option("--confidence", confidence, "target E(p) in (0, 1)")->required();
  calib->add_option("--a0", a0, "prior edge state (1 present, 0 absent)");
  add_key(calib, "--a-p", "a_p", overrides, "Beta shape a_p");
  add_key(calib, "--b-p", "b_p", overrides, "Beta shape b_p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (const char* env = std::getenv("BVSSL_SEED")) set_config_value(cfg, "seed", env);
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    for (const auto& [key, value] : overrides) set_config_value(cfg, key, value);
    cfg.validate();
    if (dump) {
      std::cout << dump_config(cfg);
      return 0;
    }
    if (learn->parsed()) return cmd_learn_graph(cfg);
    if (cliq->parsed()) return cmd_cliques(cfg, graph_path, nodes);
    if (select->parsed()) return cmd_select(cfg, graph_path);
    if (pipe->parsed()) return cmd_pipeline(cfg);
    if (sim->parsed()) return cmd_simulate(cfg, sweep, export_only);
    if (calib->parsed()) return cmd_calibrate(cfg, confidence, a0);
    std::cerr << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
