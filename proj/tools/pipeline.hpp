#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbm/diagnostics.hpp"
#include "sbm/generators.hpp"
#include "sbm/sampler.hpp"

#include "json.hpp"

namespace pipeline {

// Maps to CLI exit code 4.
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output root resolution: explicit path, else $ASBM_OUT_ROOT, else cwd.
std::filesystem::path resolve_out_dir(const std::string& out_flag, const std::string& fallback_name);

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    double duration_seconds);

struct GenerateOutcome {
  std::filesystem::path dir;
  sbm::GeneratedNetwork network;
};

// Writes network.edges, truth.csv and stats.json into `dir`.
void write_network_files(const std::filesystem::path& dir, const sbm::GeneratedNetwork& net);

std::vector<int> read_truth_labels(const std::filesystem::path& path);

struct FitResult {
  std::vector<sbm::ChainTrace> traces;
  std::vector<std::filesystem::path> chain_dirs;
};

// Runs `chains` chains with stream seeds derived from the master seed,
// worker-pooled, and writes each trace under dir/chainNNN.
FitResult run_fit(const sbm::Graph& g, sbm::SamplerConfig base, int chains, std::uint64_t seed,
                  const std::filesystem::path& dir, int workers);

struct DiagnoseResult {
  double rhat_deviance = 0.0;
  std::vector<double> ess;             // absolute, one per chain
  std::vector<double> ess_per_sample;  // ESS / kept samples, one per chain
  sbm::PointEstimate estimate;
  std::optional<double> ari;
  std::optional<double> k_error;
  bool converged = false;
  sbm::PsmMatrix psm;
  sbm::AlignedPAverage p_hat;
};

DiagnoseResult diagnose_traces(const std::vector<sbm::ChainTrace>& traces,
                               const std::vector<int>* truth, double threshold,
                               std::uint64_t seed);

nlohmann::json diagnose_report_json(const DiagnoseResult& result, double threshold);

void write_diagnose_files(const std::filesystem::path& dir, const DiagnoseResult& result,
                          double threshold);

struct ReplicateStudy {
  std::vector<double> mu_values;
  std::vector<double> d_avg_values;
  int reps = 5;
  std::vector<std::string> variants{"sbm", "asbm"};
  sbm::LfrSpec lfr;           // mu/d_avg filled per cell
  sbm::SamplerConfig sampler; // schedule + hyperparameters; variant/seed filled per run
  int chains = 2;
  double threshold = 1.1;
  int workers = 1;
};

// Runs generate -> fit -> diagnose over the grid; returns the summary CSV text
// (also written to out_dir / "summary.csv").
std::string run_replicate(const ReplicateStudy& study, std::uint64_t seed,
                          const std::filesystem::path& out_dir);

}  // namespace pipeline
