#pragma once

#include <optional>
#include <vector>

#include "olcq/overlap.hpp"

namespace olcq {

enum class Provenance { Dp, Brute, Vqe };

struct PathSolution {
  std::vector<int> sequence;
  double total_weight = 0;  // sum of W over consecutive pairs
  int violations = 0;
  int anomalies = 0;
  Provenance provenance = Provenance::Dp;
};

// Exact minimum-weight Hamiltonian path via bitmask dynamic programming
// (states O(N * 2^N), transitions O(N)). Transitions are restricted to
// graph edges and weighted by `costs`. Among equal-weight optima the
// lexicographically smallest sequence is returned. Nullopt when no
// Hamiltonian path exists; throws for N > 24.
std::optional<PathSolution> hamiltonian_path_dp(const OverlapGraph& graph,
                                                const CostMatrix& costs);

// Permutation-enumeration oracle, refuses N > 10. Same tie-break contract
// as the DP solver.
std::optional<PathSolution> brute_force_path(const OverlapGraph& graph,
                                             const CostMatrix& costs);

// Number of consecutive pairs in `sequence` that are not graph edges.
// Entries must lie in [0, N); throws std::invalid_argument otherwise.
int count_violations(const std::vector<int>& sequence, const OverlapGraph& graph);

// Same count but tolerant of anomalous entries: a pair involving a code
// outside [0, N) counts as a violation instead of throwing.
int count_violations_lenient(const std::vector<int>& sequence,
                             const std::vector<bool>& adjacency, int n);

// True when `sequence` is a permutation with violations that disappear
// under some rotation, i.e. the edges are right but the path got rotated.
// Only meaningful for sequences that do have violations.
bool is_rotated_valid_path(const std::vector<int>& sequence,
                           const std::vector<bool>& adjacency, int n);

}  // namespace olcq
