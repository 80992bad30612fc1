// Command-line driver: generate / fit / diagnose / replicate.
#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flat_config.hpp"
#include "pipeline.hpp"
#include "sbm/trace_io.hpp"
#include "sbm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

sbm::SymMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (!row.empty()) rows.push_back(parse_double_list(row));
  }
  const int k = static_cast<int>(rows.size());
  sbm::SymMatrix p(k);
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != k) {
      throw std::invalid_argument("connectivity matrix must be square");
    }
    for (int b = 0; b < k; ++b) {
      const double v = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (a <= b) {
        p.set(a, b, v);
      } else if (std::abs(p(b, a) - v) > 1e-12) {
        throw std::invalid_argument("connectivity matrix must be symmetric");
      }
    }
  }
  return p;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct GenerateArgs {
  std::string out;
  std::uint64_t seed = 0;
  int reps = 1;
  // sbm
  int n = 100;
  std::string pi_text;
  std::string p_text;
  int planted_k = 0;
  double p_in = 0.0, p_out = 0.0;
  // lfr
  sbm::LfrSpec lfr{200, 2.0, 2.0, 5, 50, 20.0, 49, 0.2};
};

void run_generate(const std::string& kind, const GenerateArgs& args) {
  Timer timer;
  const fs::path out_dir =
      pipeline::resolve_out_dir(args.out, "asbm-generate-s" + std::to_string(args.seed));
  fs::create_directories(out_dir);

  json config;
  config["kind"] = kind;
  config["reps"] = args.reps;
  std::vector<std::string> outputs;

  for (int rep = 0; rep < args.reps; ++rep) {
    fs::path dir = out_dir;
    if (args.reps > 1) {
      char name[16];
      std::snprintf(name, sizeof(name), "rep%03d", rep);
      dir = out_dir / name;
    }
    sbm::RngStream rng(sbm::derive_child_seed(args.seed, static_cast<std::uint64_t>(rep)));
    sbm::GeneratedNetwork net;
    if (kind == "star") {
      net = sbm::generate_star_example(rng);
    } else if (kind == "sbm") {
      sbm::SbmSpec spec;
      spec.n = args.n;
      if (args.planted_k > 0) {
        spec.pi.assign(static_cast<std::size_t>(args.planted_k), 1.0 / args.planted_k);
        spec.p = sbm::SymMatrix(args.planted_k, args.p_out);
        for (int a = 0; a < args.planted_k; ++a) spec.p.set(a, a, args.p_in);
        config["k"] = args.planted_k;
        config["pIn"] = args.p_in;
        config["pOut"] = args.p_out;
      } else {
        if (args.pi_text.empty() || args.p_text.empty()) {
          throw std::invalid_argument("generate sbm needs either --k/--p-in/--p-out or --pi/--p");
        }
        spec.pi = parse_double_list(args.pi_text);
        spec.p = parse_matrix(args.p_text);
        config["pi"] = spec.pi;
        config["p"] = args.p_text;
      }
      config["n"] = args.n;
      net = sbm::generate_sbm(rng, spec);
    } else {  // lfr
      config["n"] = args.lfr.n;
      config["t1"] = args.lfr.t1;
      config["t2"] = args.lfr.t2;
      config["nMin"] = args.lfr.n_min;
      config["nMax"] = args.lfr.n_max;
      config["dAvg"] = args.lfr.d_avg;
      config["dMax"] = args.lfr.d_max;
      config["mu"] = args.lfr.mu;
      net = sbm::generate_lfr(rng, args.lfr);
    }
    pipeline::write_network_files(dir, net);
    outputs.push_back((dir / "network.edges").string());
  }
  pipeline::write_manifest(out_dir, "generate " + kind, config, args.seed, {}, outputs,
                           timer.seconds());
  std::cout << "wrote " << args.reps << " network(s) under " << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian community detection in stochastic block models"};
  app.set_version_flag("--version", sbm::kVersion);
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "Write synthetic benchmark networks");
  gen->require_subcommand(1);
  GenerateArgs gen_args;

  std::string config_path;
  auto add_common_gen = [&](CLI::App* cmd) {
    cmd->add_option("--seed", gen_args.seed, "master seed");
    cmd->add_option("--out", gen_args.out, "output directory");
    cmd->add_option("--reps", gen_args.reps, "number of seeded networks")->check(CLI::PositiveNumber);
    cmd->add_option("--config", config_path, "flat key=value run configuration");
  };

  auto* gen_sbm = gen->add_subcommand("sbm", "planted stochastic block model");
  gen_sbm->add_option("--n", gen_args.n, "node count");
  gen_sbm->add_option("--pi", gen_args.pi_text, "block probabilities, e.g. 0.6,0.2,0.2");
  gen_sbm->add_option("--p", gen_args.p_text, "connectivity rows, e.g. 0.3,0.1;0.1,0.25");
  gen_sbm->add_option("--k", gen_args.planted_k, "planted blocks (with --p-in/--p-out)");
  gen_sbm->add_option("--p-in", gen_args.p_in, "within-block probability");
  gen_sbm->add_option("--p-out", gen_args.p_out, "between-block probability");
  add_common_gen(gen_sbm);

  auto* gen_star = gen->add_subcommand("star", "the 100-node core/periphery design");
  add_common_gen(gen_star);

  auto* gen_lfr = gen->add_subcommand("lfr", "power-law benchmark with planted communities");
  gen_lfr->add_option("--n", gen_args.lfr.n, "node count");
  gen_lfr->add_option("--t1", gen_args.lfr.t1, "degree exponent");
  gen_lfr->add_option("--t2", gen_args.lfr.t2, "community size exponent");
  gen_lfr->add_option("--nmin", gen_args.lfr.n_min, "minimum community size");
  gen_lfr->add_option("--nmax", gen_args.lfr.n_max, "maximum community size");
  gen_lfr->add_option("--davg", gen_args.lfr.d_avg, "target mean degree");
  gen_lfr->add_option("--dmax", gen_args.lfr.d_max, "maximum degree");
  gen_lfr->add_option("--mu", gen_args.lfr.mu, "mixing parameter in (0,1)");
  add_common_gen(gen_lfr);

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "Run Gibbs sampler chains on an edge list");
  std::string fit_input, fit_variant = "asbm", fit_out, fit_init = "random";
  sbm::SamplerConfig fit_cfg;
  long fit_iters = 3000;  // posterior sweeps after burn-in
  int fit_chains = 2, fit_workers = 0, fit_k = 0, fit_init_k = 0;
  std::uint64_t fit_seed = 0;
  fit->add_option("--input", fit_input, "edge-list file")->required();
  fit->add_option("--variant", fit_variant, "sbm-k | asbm-k | sbm | asbm");
  fit->add_option("--k", fit_k, "block count (fixed-k variants)");
  fit->add_option("--gamma", fit_cfg.gamma, "Dirichlet concentration (fixed-k)");
  fit->add_option("--alpha", fit_cfg.alpha, "beta prior shape");
  fit->add_option("--beta", fit_cfg.beta, "beta prior shape");
  fit->add_option("--lambda", fit_cfg.lambda, "Gnedin parameter");
  fit->add_option("--m", fit_cfg.aux_m, "auxiliary communities (asbm)");
  fit->add_option("--iters", fit_iters, "posterior sweeps kept after burn-in");
  fit->add_option("--burnin", fit_cfg.burn_in, "burn-in sweeps");
  fit->add_option("--thin", fit_cfg.thinning, "thinning stride");
  fit->add_option("--chains", fit_chains, "independent chains")->check(CLI::PositiveNumber);
  fit->add_option("--workers", fit_workers, "parallel chain workers (0 = chains)");
  fit->add_option("--seed", fit_seed, "master seed");
  fit->add_option("--init", fit_init, "random | singletons");
  fit->add_option("--init-k", fit_init_k, "initial blocks for random init");
  fit->add_option("--out", fit_out, "output directory");
  fit->add_option("--config", config_path, "flat key=value run configuration");

  // ---- diagnose ----
  auto* diag = app.add_subcommand("diagnose", "Convergence report and point estimate from traces");
  std::string diag_fit_dir, diag_truth, diag_out;
  std::vector<std::string> diag_traces;
  double diag_threshold = 1.1;
  std::uint64_t diag_seed = 0;
  diag->add_option("--fit", diag_fit_dir, "fit output directory (discovers chain*/)");
  diag->add_option("--trace", diag_traces, "explicit chain directories");
  diag->add_option("--truth", diag_truth, "ground-truth label CSV");
  diag->add_option("--threshold", diag_threshold, "convergence threshold on split R-hat");
  diag->add_option("--seed", diag_seed, "seed for the point-estimate search");
  diag->add_option("--out", diag_out, "output directory");
  diag->add_option("--config", config_path, "flat key=value run configuration");

  // ---- replicate ----
  auto* repl = app.add_subcommand("replicate", "generate -> fit -> diagnose over a (mu, davg) grid");
  pipeline::ReplicateStudy study;
  study.lfr = {200, 2.0, 2.0, 5, 50, 20.0, 49, 0.2};
  study.sampler.iterations = 3000;  // reinterpreted below as post-burn-in sweeps
  std::string repl_mu = "0.1,0.4", repl_davg = "10,25", repl_variants = "sbm,asbm", repl_out;
  long repl_iters = 3000;
  int repl_reps = 5;
  std::uint64_t repl_seed = 0;
  repl->add_option("--mu", repl_mu, "comma list of mixing parameters");
  repl->add_option("--davg", repl_davg, "comma list of mean degrees");
  repl->add_option("--reps", repl_reps, "networks per cell")->check(CLI::PositiveNumber);
  repl->add_option("--variants", repl_variants, "comma list from {sbm,asbm,sbm-k,asbm-k}");
  repl->add_option("--n", study.lfr.n, "node count");
  repl->add_option("--t1", study.lfr.t1, "degree exponent");
  repl->add_option("--t2", study.lfr.t2, "community size exponent");
  repl->add_option("--nmin", study.lfr.n_min, "minimum community size");
  repl->add_option("--nmax", study.lfr.n_max, "maximum community size");
  repl->add_option("--dmax", study.lfr.d_max, "maximum degree");
  repl->add_option("--lambda", study.sampler.lambda, "Gnedin parameter");
  repl->add_option("--alpha", study.sampler.alpha, "beta prior shape");
  repl->add_option("--beta", study.sampler.beta, "beta prior shape");
  repl->add_option("--m", study.sampler.aux_m, "auxiliary communities");
  repl->add_option("--iters", repl_iters, "posterior sweeps kept after burn-in");
  repl->add_option("--burnin", study.sampler.burn_in, "burn-in sweeps");
  repl->add_option("--thin", study.sampler.thinning, "thinning stride");
  repl->add_option("--chains", study.chains, "chains per run")->check(CLI::PositiveNumber);
  repl->add_option("--threshold", study.threshold, "convergence threshold");
  repl->add_option("--workers", study.workers, "parallel cell workers")->check(CLI::PositiveNumber);
  repl->add_option("--seed", repl_seed, "master seed");
  repl->add_option("--out", repl_out, "output directory");
  repl->add_option("--config", config_path, "flat key=value run configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      for (CLI::App* cmd : {gen_sbm, gen_star, gen_lfr, fit, diag, repl}) {
        if (cmd->parsed()) pipeline::apply_flat_config(cmd, config_path);
      }
    }
    if (gen_sbm->parsed()) run_generate("sbm", gen_args);
    if (gen_star->parsed()) run_generate("star", gen_args);
    if (gen_lfr->parsed()) run_generate("lfr", gen_args);

    if (fit->parsed()) {
      Timer timer;
      fit_cfg.variant = sbm::parse_variant(fit_variant);
      if (sbm::is_fixed_k(fit_cfg.variant)) {
        if (fit_k < 1) throw std::invalid_argument("--k is required for fixed-k variants");
        fit_cfg.fixed_k = fit_k;
      }
      fit_cfg.iterations = fit_cfg.burn_in + fit_iters;
      fit_cfg.init = fit_init == "singletons" ? sbm::SamplerConfig::Init::singletons
                                              : sbm::SamplerConfig::Init::random_blocks;
      fit_cfg.init_k = fit_init_k;
      const sbm::Graph g = sbm::Graph::load_edge_list(fs::path(fit_input));
      fit_cfg.validate(g.node_count());
      const fs::path out_dir =
          pipeline::resolve_out_dir(fit_out, "asbm-fit-s" + std::to_string(fit_seed));
      const int workers = fit_workers > 0 ? fit_workers : fit_chains;
      const auto result = pipeline::run_fit(g, fit_cfg, fit_chains, fit_seed, out_dir, workers);
      json config;
      config["sampler"] = fit_cfg;
      config["chains"] = fit_chains;
      config["itersPostBurnin"] = fit_iters;
      std::vector<std::string> outputs;
      for (const auto& d : result.chain_dirs) outputs.push_back(d.string());
      pipeline::write_manifest(out_dir, "fit", config, fit_seed, {fit_input}, outputs,
                               timer.seconds());
      std::cout << "wrote " << fit_chains << " chain trace(s) under " << out_dir.string() << "\n";
    }

    if (diag->parsed()) {
      Timer timer;
      std::vector<fs::path> trace_dirs;
      for (const auto& t : diag_traces) trace_dirs.emplace_back(t);
      if (!diag_fit_dir.empty()) {
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(diag_fit_dir)) {
          if (entry.is_directory() && entry.path().filename().string().starts_with("chain")) {
            found.push_back(entry.path());
          }
        }
        std::sort(found.begin(), found.end());
        trace_dirs.insert(trace_dirs.end(), found.begin(), found.end());
      }
      if (trace_dirs.size() < 2) {
        throw pipeline::DiagnosticsError("need at least two chain directories (--fit or --trace)");
      }
      std::vector<sbm::ChainTrace> traces;
      for (const auto& d : trace_dirs) traces.push_back(sbm::read_chain_trace(d));
      std::vector<int> truth;
      if (!diag_truth.empty()) truth = pipeline::read_truth_labels(fs::path(diag_truth));
      const auto result = pipeline::diagnose_traces(traces, diag_truth.empty() ? nullptr : &truth,
                                                    diag_threshold, diag_seed);
      const fs::path out_dir = pipeline::resolve_out_dir(diag_out, "asbm-diagnose");
      pipeline::write_diagnose_files(out_dir, result, diag_threshold);
      json config;
      config["threshold"] = diag_threshold;
      config["traces"] = diag_traces;
      config["fitDir"] = diag_fit_dir;
      std::vector<std::string> inputs;
      for (const auto& d : trace_dirs) inputs.push_back(d.string());
      pipeline::write_manifest(out_dir, "diagnose", config, diag_seed, inputs,
                               {(out_dir / "report.json").string()}, timer.seconds());
      std::cout << "report written to " << (out_dir / "report.json").string() << "\n";
    }

    if (repl->parsed()) {
      Timer timer;
      study.mu_values = parse_double_list(repl_mu);
      study.d_avg_values = parse_double_list(repl_davg);
      study.reps = repl_reps;
      study.variants = parse_string_list(repl_variants);
      study.sampler.iterations = study.sampler.burn_in + repl_iters;
      const fs::path out_dir =
          pipeline::resolve_out_dir(repl_out, "asbm-replicate-s" + std::to_string(repl_seed));
      pipeline::run_replicate(study, repl_seed, out_dir);
      json config;
      config["mu"] = study.mu_values;
      config["davg"] = study.d_avg_values;
      config["reps"] = study.reps;
      config["variants"] = study.variants;
      config["chains"] = study.chains;
      config["threshold"] = study.threshold;
      config["sampler"] = study.sampler;
      pipeline::write_manifest(out_dir, "replicate", config, repl_seed, {},
                               {(out_dir / "summary.csv").string()}, timer.seconds());
      std::cout << "summary written to " << (out_dir / "summary.csv").string() << "\n";
    }
  } catch (const sbm::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return 3;
  } catch (const pipeline::DiagnosticsError& e) {
    std::cerr << "diagnostics error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
