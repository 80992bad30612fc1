#include "sbm/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sbm {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return in;
}

}  // namespace

void to_json(nlohmann::json& j, const SamplerConfig& cfg) {
  j = nlohmann::json{{"variant", variant_name(cfg.variant)},
                     {"fixedK", cfg.fixed_k},
                     {"gamma", cfg.gamma},
                     {"alpha", cfg.alpha},
                     {"beta", cfg.beta},
                     {"lambda", cfg.lambda},
                     {"auxM", cfg.aux_m},
                     {"iterations", cfg.iterations},
                     {"burnIn", cfg.burn_in},
                     {"thinning", cfg.thinning},
                     {"seed", cfg.seed},
                     {"init", cfg.init == SamplerConfig::Init::random_blocks
                                  ? "random"
                                  : (cfg.init == SamplerConfig::Init::singletons ? "singletons"
                                                                                 : "given")},
                     {"initK", cfg.init_k}};
  if (cfg.init == SamplerConfig::Init::given) j["initLabels"] = cfg.init_labels;
}

void from_json(const nlohmann::json& j, SamplerConfig& cfg) {
  cfg.variant = parse_variant(j.at("variant").get<std::string>());
  cfg.fixed_k = j.value("fixedK", 0);
  cfg.gamma = j.value("gamma", 1.0);
  cfg.alpha = j.value("alpha", 1.0);
  cfg.beta = j.value("beta", 1.0);
  cfg.lambda = j.value("lambda", 0.45);
  cfg.aux_m = j.value("auxM", 3);
  cfg.iterations = j.value("iterations", 4000L);
  cfg.burn_in = j.value("burnIn", 1000L);
  cfg.thinning = j.value("thinning", 5L);
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
  const std::string init = j.value("init", "random");
  cfg.init = init == "singletons" ? SamplerConfig::Init::singletons
                                  : (init == "given" ? SamplerConfig::Init::given
                                                     : SamplerConfig::Init::random_blocks);
  cfg.init_k = j.value("initK", 0);
  if (j.contains("initLabels")) cfg.init_labels = j.at("initLabels").get<std::vector<int>>();
}

void write_chain_trace(const ChainTrace& trace, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  auto labels = open_out(dir / "labels.csv");
  for (const auto& rec : trace.records) {
    for (std::size_t i = 0; i < rec.z.size(); ++i) {
      labels << (i ? "," : "") << rec.z[i];
    }
    labels << "\n";
  }

  auto pmat = open_out(dir / "pmatrix.csv");
  for (const auto& rec : trace.records) {
    pmat << rec.k;
    for (int a = 0; a < rec.k; ++a) {
      for (int b = 0; b < rec.k; ++b) pmat << "," << format_double(rec.p(a, b));
    }
    pmat << "\n";
  }

  auto scalars = open_out(dir / "scalars.csv");
  scalars << "iter,k,deviance,epsilon\n";
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    const auto& rec = trace.records[t];
    scalars << t << "," << rec.k << "," << format_double(rec.deviance) << ",";
    if (rec.epsilon.has_value()) scalars << format_double(*rec.epsilon);
    scalars << "\n";
  }

  nlohmann::json side;
  side["config"] = trace.config;
  side["n"] = trace.n;
  side["records"] = trace.records.size();
  auto sidecar = open_out(dir / "chain.json");
  sidecar << side.dump(2) << "\n";
}

ChainTrace read_chain_trace(const std::filesystem::path& dir) {
  ChainTrace trace;
  {
    auto sidecar = open_in(dir / "chain.json");
    nlohmann::json side = nlohmann::json::parse(sidecar);
    trace.config = side.at("config").get<SamplerConfig>();
    trace.n = side.at("n").get<int>();
  }

  std::string line;
  {
    auto labels = open_in(dir / "labels.csv");
    while (std::getline(labels, line)) {
      if (line.empty()) continue;
      TraceRecord rec;
      for (const auto& f : split_csv(line)) rec.z.push_back(std::stoi(f));
      if (static_cast<int>(rec.z.size()) != trace.n) {
        throw std::runtime_error("labels.csv row width mismatch");
      }
      trace.records.push_back(std::move(rec));
    }
  }
  {
    auto pmat = open_in(dir / "pmatrix.csv");
    std::size_t t = 0;
    while (std::getline(pmat, line)) {
      if (line.empty()) continue;
      if (t >= trace.records.size()) throw std::runtime_error("pmatrix.csv has extra rows");
      const auto fields = split_csv(line);
      const int k = std::stoi(fields.at(0));
      if (static_cast<int>(fields.size()) != 1 + k * k) {
        throw std::runtime_error("pmatrix.csv row width mismatch");
      }
      trace.records[t].k = k;
      trace.records[t].p = SymMatrix(k);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          trace.records[t].p.set(a, b, std::stod(fields.at(1 + static_cast<std::size_t>(a) * k + b)));
        }
      }
      ++t;
    }
    if (t != trace.records.size()) throw std::runtime_error("pmatrix.csv is short");
  }
  {
    auto scalars = open_in(dir / "scalars.csv");
    std::getline(scalars, line);  // header
    std::size_t t = 0;
    while (std::getline(scalars, line)) {
      if (line.empty()) continue;
      if (t >= trace.records.size()) throw std::runtime_error("scalars.csv has extra rows");
      const auto fields = split_csv(line);
      if (fields.size() < 4) throw std::runtime_error("scalars.csv row is short");
      trace.records[t].deviance = std::stod(fields.at(2));
      if (!fields.at(3).empty()) trace.records[t].epsilon = std::stod(fields.at(3));
      ++t;
    }
    if (t != trace.records.size()) throw std::runtime_error("scalars.csv is short");
  }
  return trace;
}

}  // namespace sbm
