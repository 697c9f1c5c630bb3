#include "olcq/classical_path.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace olcq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::optional<PathSolution> hamiltonian_path_dp(const OverlapGraph& graph,
                                                const CostMatrix& costs) {
  const int n = graph.node_count();
  if (n < 1) throw std::invalid_argument("hamiltonian_path_dp: empty graph");
  if (n > 24) throw std::invalid_argument("hamiltonian_path_dp: N > 24 exceeds the DP memory budget");
  if (costs.n != n) throw std::invalid_argument("hamiltonian_path_dp: cost matrix size mismatch");

  std::vector<std::vector<int>> succ(n);
  for (const GraphEdge& e : graph.edges) succ[e.from].push_back(e.to);
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  const std::uint32_t full = (1u << n) - 1;
  // h[v][S] = minimum weight of a path that starts at v and visits exactly
  // the node set S (bitmask, v in S), moving only along graph edges.
  std::vector<double> h(static_cast<std::size_t>(n) << n, kInf);
  auto at = [&](int v, std::uint32_t s) -> double& {
    return h[(static_cast<std::size_t>(v) << n) | s];
  };

  for (int v = 0; v < n; ++v) at(v, 1u << v) = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if ((s & (s - 1)) == 0) continue;  // singletons are the base case
    for (int v = 0; v < n; ++v) {
      if (!(s & (1u << v))) continue;
      const std::uint32_t rest = s & ~(1u << v);
      double best = kInf;
      for (int w : succ[v]) {
        if (!(rest & (1u << w))) continue;
        double cand = at(w, rest);
        if (cand == kInf) continue;
        cand += costs.at(v, w);
        if (cand < best) best = cand;
      }
      at(v, s) = best;
    }
  }

  double best = kInf;
  int start = -1;
  for (int v = 0; v < n; ++v) {
    if (at(v, full) < best) {
      best = at(v, full);
      start = v;  // smallest v wins ties because of the strict `<`
    }
  }
  if (start < 0) return std::nullopt;

  // Greedy forward reconstruction gives the lexicographically smallest
  // optimal sequence: at each node take the smallest successor that still
  // completes an optimal path. The comparisons are exact because both sides
  // repeat the very additions the DP performed.
  PathSolution sol;
  sol.provenance = Provenance::Dp;
  sol.total_weight = best;
  sol.sequence.reserve(n);
  int u = start;
  std::uint32_t s = full;
  sol.sequence.push_back(u);
  while (s != (1u << u)) {
    const std::uint32_t rest = s & ~(1u << u);
    int next = -1;
    for (int w : succ[u]) {
      if (!(rest & (1u << w))) continue;
      if (costs.at(u, w) + at(w, rest) == at(u, s)) {
        next = w;
        break;  // successors are sorted ascending
      }
    }
    if (next < 0) throw std::logic_error("hamiltonian_path_dp: reconstruction failed");
    sol.sequence.push_back(next);
    s = rest;
    u = next;
  }
  return sol;
}

std::optional<PathSolution> brute_force_path(const OverlapGraph& graph,
                                             const CostMatrix& costs) {
  const int n = graph.node_count();
  if (n < 1) throw std::invalid_argument("brute_force_path: empty graph");
  if (n > 10) throw std::invalid_argument("brute_force_path: refusing N > 10 (factorial blowup)");
  if (costs.n != n) throw std::invalid_argument("brute_force_path: cost matrix size mismatch");

  const std::vector<bool> adj = graph.adjacency();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  std::optional<PathSolution> best;
  do {
    double weight = 0;
    bool valid = true;
    for (int t = 0; t + 1 < n; ++t) {
      if (!adj[static_cast<std::size_t>(perm[t]) * n + perm[t + 1]]) {
        valid = false;
        break;
      }
      weight += costs.at(perm[t], perm[t + 1]);
    }
    if (!valid) continue;
    if (!best || weight < best->total_weight) {
      PathSolution sol;
      sol.sequence = perm;
      sol.total_weight = weight;
      sol.provenance = Provenance::Brute;
      best = std::move(sol);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

int count_violations(const std::vector<int>& sequence, const OverlapGraph& graph) {
  const int n = graph.node_count();
  for (int v : sequence)
    if (v < 0 || v >= n)
      throw std::invalid_argument("count_violations: node id out of range");
  return count_violations_lenient(sequence, graph.adjacency(), n);
}

int count_violations_lenient(const std::vector<int>& sequence,
                             const std::vector<bool>& adjacency, int n) {
  int violations = 0;
  for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
    const int u = sequence[t], v = sequence[t + 1];
    if (u < 0 || u >= n || v < 0 || v >= n ||
        !adjacency[static_cast<std::size_t>(u) * n + v])
      ++violations;
  }
  return violations;
}

bool is_rotated_valid_path(const std::vector<int>& sequence,
                           const std::vector<bool>& adjacency, int n) {
  if (static_cast<int>(sequence.size()) != n || n < 2) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : sequence) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  std::vector<int> rotated(sequence);
  for (int shift = 1; shift < n; ++shift) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (count_violations_lenient(rotated, adjacency, n) == 0) return true;
  }
  return false;
}

}  // namespace olcq
