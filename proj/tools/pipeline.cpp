#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "sbm/trace_io.hpp"
#include "sbm/version.hpp"

namespace pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_out_dir(const std::string& out_flag, const std::string& fallback_name) {
  if (!out_flag.empty()) return fs::path(out_flag);
  const char* root = std::getenv("ASBM_OUT_ROOT");
  return fs::path(root ? root : ".") / fallback_name;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double duration_seconds) {
  json manifest;
  manifest["command"] = command;
  manifest["version"] = sbm::kVersion;
  manifest["seed"] = seed;
  manifest["config"] = config;
  manifest["inputs"] = inputs;
  manifest["outputs"] = outputs;
  manifest["durationSeconds"] = duration_seconds;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

void write_network_files(const fs::path& dir, const sbm::GeneratedNetwork& net) {
  fs::create_directories(dir);
  net.graph.save_edge_list(dir / "network.edges");

  std::ofstream truth(dir / "truth.csv");
  if (!truth) throw std::runtime_error("cannot write truth.csv");
  truth << "node,label\n";
  for (std::size_t i = 0; i < net.z_true.size(); ++i) {
    truth << i << "," << net.z_true[i] << "\n";
  }

  const int n = net.graph.node_count();
  std::vector<long> sizes;
  for (int zi : net.z_true) {
    if (zi >= static_cast<int>(sizes.size())) sizes.resize(static_cast<std::size_t>(zi) + 1, 0);
    ++sizes[static_cast<std::size_t>(zi)];
  }
  json stats;
  stats["n"] = n;
  stats["edges"] = net.graph.edge_count();
  stats["meanDegree"] = n > 0 ? 2.0 * static_cast<double>(net.graph.edge_count()) / n : 0.0;
  stats["density"] =
      n > 1 ? static_cast<double>(net.graph.edge_count()) / (0.5 * n * (n - 1.0)) : 0.0;
  stats["communitySizes"] = sizes;
  stats["communities"] = sizes.size();
  if (net.graph.edge_count() > 0) {
    stats["realizedMixing"] = sbm::realized_mixing(net.graph, net.z_true);
  }
  std::ofstream sj(dir / "stats.json");
  sj << stats.dump(2) << "\n";
}

std::vector<int> read_truth_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read truth labels: " + path.string());
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      try {
        labels.push_back(std::stoi(line));
      } catch (const std::exception&) {
        if (labels.empty()) continue;  // header
        throw std::invalid_argument("malformed truth line: " + line);
      }
      continue;
    }
    const std::string first = line.substr(0, comma);
    const std::string second = line.substr(comma + 1);
    try {
      const int node = std::stoi(first);
      const int label = std::stoi(second);
      if (node != static_cast<int>(labels.size())) {
        throw std::invalid_argument("truth rows must be ordered by node id");
      }
      labels.push_back(label);
    } catch (const std::invalid_argument&) {
      if (labels.empty()) continue;  // header row
      throw;
    }
  }
  if (labels.empty()) throw std::invalid_argument("no labels found in " + path.string());
  return labels;
}

FitResult run_fit(const sbm::Graph& g, sbm::SamplerConfig base, int chains, std::uint64_t seed,
                  const fs::path& dir, int workers) {
  if (chains < 1) throw std::invalid_argument("need at least one chain");
  fs::create_directories(dir);
  FitResult result;
  result.traces.resize(static_cast<std::size_t>(chains));
  result.chain_dirs.resize(static_cast<std::size_t>(chains));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  const int pool = std::max(1, std::min(workers, chains));
  std::vector<std::thread> threads;
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= chains || failed.load()) return;
        try {
          sbm::SamplerConfig cfg = base;
          cfg.seed = sbm::derive_child_seed(seed, static_cast<std::uint64_t>(c));
          result.traces[static_cast<std::size_t>(c)] = sbm::run_chain(g, cfg);
          char name[32];
          std::snprintf(name, sizeof(name), "chain%03d", c);
          const fs::path chain_dir = dir / name;
          sbm::write_chain_trace(result.traces[static_cast<std::size_t>(c)], chain_dir);
          result.chain_dirs[static_cast<std::size_t>(c)] = chain_dir;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          failed.store(true);
          error_message = e.what();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failed.load()) throw std::runtime_error("chain failed: " + error_message);
  return result;
}

DiagnoseResult diagnose_traces(const std::vector<sbm::ChainTrace>& traces,
                               const std::vector<int>* truth, double threshold,
                               std::uint64_t seed) {
  if (traces.size() < 2) throw DiagnosticsError("diagnostics need at least two traces");
  const int n = traces.front().n;
  const auto variant = traces.front().config.variant;
  const std::size_t records = traces.front().records.size();
  for (const auto& t : traces) {
    if (t.n != n) throw DiagnosticsError("traces disagree on the node count");
    if (t.config.variant != variant) throw DiagnosticsError("traces mix sampler variants");
    if (t.records.size() != records) throw DiagnosticsError("traces have mismatched lengths");
  }
  if (records < 8) throw DiagnosticsError("traces are too short to diagnose");
  if (truth && static_cast<int>(truth->size()) != n) {
    throw DiagnosticsError("ground-truth labels disagree with the trace node count");
  }

  DiagnoseResult out;
  std::vector<std::vector<double>> deviance_chains;
  std::vector<std::vector<int>> pooled;
  std::vector<sbm::SymMatrix> snapshots;
  for (const auto& t : traces) {
    std::vector<double> dev;
    dev.reserve(t.records.size());
    for (const auto& rec : t.records) {
      dev.push_back(rec.deviance);
      pooled.push_back(rec.z);
      snapshots.push_back(rec.p);
    }
    out.ess.push_back(sbm::effective_sample_size(dev));
    out.ess_per_sample.push_back(out.ess.back() / static_cast<double>(dev.size()));
    deviance_chains.push_back(std::move(dev));
  }
  out.rhat_deviance = sbm::split_rhat(deviance_chains);
  out.converged = out.rhat_deviance < threshold;
  out.psm = sbm::posterior_similarity(pooled);
  out.estimate = sbm::point_estimate_partition(pooled, out.psm, seed);
  out.p_hat = sbm::order_blocks_by_size(pooled, snapshots);
  if (truth) {
    out.ari = sbm::adjusted_rand_index(out.estimate.partition, *truth);
    int k_true = 0;
    std::vector<int> seen;
    for (int zi : *truth) {
      if (std::find(seen.begin(), seen.end(), zi) == seen.end()) seen.push_back(zi);
    }
    k_true = static_cast<int>(seen.size());
    out.k_error = sbm::relative_k_error(out.estimate.k_hat, k_true);
  }
  return out;
}

json diagnose_report_json(const DiagnoseResult& result, double threshold) {
  json report;
  report["rhatDeviance"] = result.rhat_deviance;
  report["essPerSample"] = result.ess_per_sample;
  report["ess"] = result.ess;
  report["kHat"] = result.estimate.k_hat;
  report["pointLoss"] = result.estimate.loss;
  report["ari"] = result.ari.has_value() ? json(*result.ari) : json(nullptr);
  report["relativeKError"] = result.k_error.has_value() ? json(*result.k_error) : json(nullptr);
  report["converged"] = result.converged;
  report["threshold"] = threshold;
  return report;
}

void write_diagnose_files(const fs::path& dir, const DiagnoseResult& result, double threshold) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    out << diagnose_report_json(result, threshold).dump(2) << "\n";
  }
  {
    std::ofstream out(dir / "psm.csv");
    for (int i = 0; i < result.psm.n; ++i) {
      for (int j = 0; j < result.psm.n; ++j) {
        out << (j ? "," : "") << sbm::format_double(result.psm(i, j));
      }
      out << "\n";
    }
  }
  {
    std::ofstream out(dir / "phat.csv");
    for (int a = 0; a < result.p_hat.k_hat; ++a) {
      for (int b = 0; b < result.p_hat.k_hat; ++b) {
        out << (b ? "," : "") << sbm::format_double(result.p_hat.p_hat(a, b));
      }
      out << "\n";
    }
  }
  {
    std::ofstream out(dir / "partition.csv");
    out << "node,label\n";
    for (std::size_t i = 0; i < result.estimate.partition.size(); ++i) {
      out << i << "," << result.estimate.partition[i] << "\n";
    }
  }
}

namespace {

std::string format_cell_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::string run_replicate(const ReplicateStudy& study, std::uint64_t seed,
                          const fs::path& out_dir) {
  if (study.mu_values.empty() || study.d_avg_values.empty() || study.reps < 1) {
    throw std::invalid_argument("replicate needs mu values, degree values and reps >= 1");
  }
  for (const auto& v : study.variants) sbm::parse_variant(v);  // validated up front

  struct Task {
    std::size_t mu_index, d_index;
    int rep;
    std::uint64_t net_seed;
    fs::path dir;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < study.mu_values.size(); ++mi) {
    for (std::size_t di = 0; di < study.d_avg_values.size(); ++di) {
      for (int rep = 0; rep < study.reps; ++rep) {
        Task t;
        t.mu_index = mi;
        t.d_index = di;
        t.rep = rep;
        const std::uint64_t linear =
            (mi * study.d_avg_values.size() + di) * static_cast<std::uint64_t>(study.reps) +
            static_cast<std::uint64_t>(rep);
        t.net_seed = sbm::derive_child_seed(seed, linear);
        std::ostringstream name;
        name << "mu" << study.mu_values[mi] << "_d" << study.d_avg_values[di] << "/rep";
        name << std::setw(3) << std::setfill('0') << rep;
        t.dir = out_dir / "cells" / name.str();
        tasks.push_back(std::move(t));
      }
    }
  }

  struct Row {
    std::string status = "ok";
    std::vector<std::string> per_variant;  // one CSV fragment per variant
  };
  std::vector<Row> rows(tasks.size());

  std::atomic<std::size_t> next{0};
  const int pool = std::max(1, study.workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= tasks.size()) return;
        const Task& task = tasks[idx];
        Row& row = rows[idx];
        try {
          sbm::LfrSpec spec = study.lfr;
          spec.mu = study.mu_values[task.mu_index];
          spec.d_avg = study.d_avg_values[task.d_index];
          sbm::RngStream net_rng(task.net_seed);
          const auto net = sbm::generate_lfr(net_rng, spec);
          write_network_files(task.dir, net);

          for (std::size_t v = 0; v < study.variants.size(); ++v) {
            sbm::SamplerConfig cfg = study.sampler;
            cfg.variant = sbm::parse_variant(study.variants[v]);
            const std::uint64_t fit_seed =
                sbm::derive_child_seed(task.net_seed, 1000 + v);
            const auto fit = run_fit(net.graph, cfg, study.chains, fit_seed,
                                     task.dir / study.variants[v], 1);
            const auto diag = diagnose_traces(fit.traces, &net.z_true, study.threshold,
                                              sbm::derive_child_seed(task.net_seed, 7));
            {
              std::ofstream rep_out(task.dir / study.variants[v] / "report.json");
              rep_out << diagnose_report_json(diag, study.threshold).dump(2) << "\n";
            }
            double mean_ess = 0.0;
            for (double e : diag.ess_per_sample) mean_ess += e;
            mean_ess /= static_cast<double>(diag.ess_per_sample.size());
            std::ostringstream frag;
            frag << (diag.converged ? "1" : "0") << "," << format_cell_double(*diag.ari) << ","
                 << format_cell_double(*diag.k_error) << "," << format_cell_double(mean_ess)
                 << ",ok";
            row.per_variant.push_back(frag.str());
          }
        } catch (const sbm::GenerationError& e) {
          row.status = "generation_infeasible";
          row.per_variant.assign(study.variants.size(), ",,,," + row.status);
        } catch (const std::exception& e) {
          row.status = "failed";
          row.per_variant.assign(study.variants.size(), ",,,,failed");
        }
      }
    });
  }
  for (auto& t : threads) t.join();

  std::ostringstream csv;
  csv << "mu,davg,rep,variant,converged,ari,kErr,essPerSample,status\n";
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const Task& task = tasks[idx];
    for (std::size_t v = 0; v < study.variants.size(); ++v) {
      csv << study.mu_values[task.mu_index] << "," << study.d_avg_values[task.d_index] << ","
          << task.rep << "," << study.variants[v] << ",";
      if (v < rows[idx].per_variant.size()) {
        csv << rows[idx].per_variant[v];
      } else {
        csv << ",,,," << rows[idx].status;
      }
      csv << "\n";
    }
  }
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "summary.csv");
  out << csv.str();
  return csv.str();
}

}  // namespace pipeline
