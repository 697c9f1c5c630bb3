#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "olcq/classical_path.hpp"
#include "olcq/statevector.hpp"
#include "olcq/util.hpp"

namespace olcq {

struct SpsaGains {
  double a = 0.15;
  double c = 0.1;
  double stability = -1;  // the usual A; negative means max_iters / 10
  double a_exp = 0.602;
  double c_exp = 0.101;
};

enum class OptimizerKind { Spsa, CoordinateSearch };

struct VqeConfig {
  AnsatzSpec ansatz;  // nodes/bits_per_position filled from the Hamiltonian
  std::uint64_t shots = 4000;
  int max_iters = 300;
  double cvar_alpha = 0.2;
  OptimizerKind optimizer = OptimizerKind::Spsa;
  SpsaGains gains;
  std::uint64_t seed = 1;
  bool recovery_enabled = true;
  bool fix_endpoints = true;
  std::optional<std::vector<double>> warm_start_params;
  double init_spread = 0.5;  // cold-start angles uniform in [-spread, spread]
  // Stop once the tracked best sequence is anomaly- and violation-free.
  bool stop_when_violation_free = false;
};

struct IterationStat {
  int iter = 0;
  double cvar = 0;       // mean of the two SPSA probe CVaRs
  double min_cost = 0;   // lowest sampled cost this iteration
  int best_violations = 0;   // of the best-ever sequence after this iteration
  double best_energy = 0;
  std::uint64_t anomalies = 0;  // shots whose decoded sequence had anomalies
  std::map<int, std::uint64_t> violation_hist;  // shots per violation count (costed sequences)

  double mean_violations() const;
};

struct VqeResult {
  std::vector<int> best_sequence;
  double best_energy = 0;
  int anomalies_at_best = 0;
  int violations_at_best = 0;
  // Violations present, but some rotation of the sequence has none: the
  // optimizer found the right edge set in the wrong phase. Reported only;
  // no rotation correction is applied.
  bool cyclic_error_at_best = false;
  std::vector<IterationStat> history;
  std::vector<double> final_params;
};

// CVaR over shots: sort shot costs ascending and average the lowest
// ceil(alpha * shots) of them. alpha = 1 is the plain sample mean.
double cvar_expectation(const SampleSet& samples, double alpha,
                        const std::function<double(const std::string&)>& cost);

// A position is anomalous when its code falls outside [0, N) or repeats an
// earlier position's code (the first occurrence is kept). Returns the
// anomalous positions and the missing nodes; the two sets always have equal
// size.
std::pair<std::vector<std::size_t>, std::vector<int>> classify_sequence(
    std::span<const int> codes, int n);

struct RecoveryReport {
  std::vector<std::pair<std::size_t, int>> anomalous;  // (position, code)
  std::vector<int> missing;
  // Applied replacements in order: (position, old code, new node).
  std::vector<std::tuple<std::size_t, int, int>> mapping;
  // Initial Hamming distances, row-major over (anomalous, missing).
  std::vector<int> hamming;
};

// Greedy Hamming-distance repair: repeatedly map the anomalous code
// closest (in K-bit Hamming distance) to a missing node onto it. Ties pick
// the smallest anomalous position, then the smallest missing node. The
// output is always a permutation of 0..N-1; permutations pass through
// unchanged.
std::pair<std::vector<int>, RecoveryReport> recover_bitstring(
    std::vector<int> codes, int n, int k);

// One standard SPSA update: theta -= a_k * g where g is the simultaneous
// two-point gradient estimate at perturbation c_k, a_k = a/(k+1+A)^a_exp,
// c_k = c/(k+1)^c_exp. A negative `stability` is treated as 0 here; run_vqe
// resolves its max_iters/10 default before stepping.
std::vector<double> spsa_step(std::vector<double> params, int iteration,
                              const SpsaGains& gains,
                              const std::function<double(std::span<const double>)>& objective,
                              Rng& rng);

VqeResult run_vqe(const OverlapGraph& graph, const DiagonalHamiltonian& hamiltonian,
                  const VqeConfig& config);

// Checkpoint format: a fingerprint header (ansatz kind, reps, qubits,
// parameter count) followed by one value per line. Loading verifies the
// fingerprint against `expected` and throws std::invalid_argument on any
// mismatch.
void save_checkpoint(std::ostream& out, const AnsatzSpec& spec,
                     std::span<const double> params);
std::vector<double> load_checkpoint(std::istream& in, const AnsatzSpec& expected);

// One `iter,cvar,min_cost,best_violations,anomaly_count` row per iteration.
void write_history_csv(std::ostream& out, const VqeResult& result);

}  // namespace olcq
