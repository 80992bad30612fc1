#pragma once

#include <stdexcept>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/rng.hpp"
#include "sbm/sym_matrix.hpp"

namespace sbm {

// Raised when a benchmark spec cannot be realized (maps to CLI exit code 3).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SbmSpec {
  int n = 0;
  std::vector<double> pi;  // block assignment probabilities, sums to 1
  SymMatrix p;             // symmetric connectivity matrix, entries in [0,1]
};

struct LfrSpec {
  int n = 0;
  double t1 = 2.0;   // degree power-law exponent
  double t2 = 2.0;   // community-size power-law exponent
  int n_min = 0;
  int n_max = 0;
  double d_avg = 0;  // target mean degree
  int d_max = 0;
  double mu = 0.0;   // mixing parameter: fraction of out-group edge endpoints
};

struct GeneratedNetwork {
  Graph graph;
  std::vector<int> z_true;
};

GeneratedNetwork generate_sbm(RngStream& rng, const SbmSpec& spec);

// The three-community core/periphery design: deterministic block sizes
// (60, 20, 20) wired through star_example_p().
GeneratedNetwork generate_star_example(RngStream& rng);
SymMatrix star_example_p();
std::vector<int> star_example_labels();

GeneratedNetwork generate_lfr(RngStream& rng, const LfrSpec& spec);

// Fraction of edges whose endpoints lie in different blocks.
double realized_mixing(const Graph& g, std::span<const int> z);

}  // namespace sbm
