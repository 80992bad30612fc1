#pragma once

#include <filesystem>

#include "sbm/sampler.hpp"

#include "json.hpp"

namespace sbm {

// On-disk layout of one chain, all inside `dir`:
//   labels.csv   one row per kept iteration, n label columns
//   pmatrix.csv  per row: k followed by the k*k row-major entries of P
//   scalars.csv  iter,k,deviance,epsilon (epsilon empty for standard runs)
//   chain.json   config echo, seed, n, record count
void write_chain_trace(const ChainTrace& trace, const std::filesystem::path& dir);
ChainTrace read_chain_trace(const std::filesystem::path& dir);

void to_json(nlohmann::json& j, const SamplerConfig& cfg);
void from_json(const nlohmann::json& j, SamplerConfig& cfg);

// Round-trip-exact decimal formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace sbm
