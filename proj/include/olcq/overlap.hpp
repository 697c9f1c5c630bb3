#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "olcq/align.hpp"
#include "olcq/read.hpp"

namespace olcq {

struct OverlapHit {
  double score = 0;
  std::size_t overlap_len = 0;
  int mismatches = 0;
};

// Aligns a suffix window of `a` against a prefix window of `b` and applies
// the acceptance filters (min_score, min_overlap_len, max_mismatches).
// Returns nullopt when the pair does not form an edge.
std::optional<OverlapHit> overlap_score(const Read& a, const Read& b,
                                        const AlignmentParams& params);

// Drops the later read of any pair whose global identity reaches
// `identity`; surviving reads keep their input order.
std::vector<Read> dedup_reads(std::vector<Read> reads, double identity,
                              const AlignmentParams& params);

struct GraphEdge {
  int from = 0;
  int to = 0;
  double score = 0;
  std::size_t overlap_len = 0;
};

struct OverlapGraph {
  std::vector<std::string> node_ids;  // index = node id
  std::vector<GraphEdge> edges;

  int node_count() const { return static_cast<int>(node_ids.size()); }
  bool has_edge(int from, int to) const;
  // Row-major n*n adjacency flags for fast membership tests.
  std::vector<bool> adjacency() const;
};

struct GraphBuildOptions {
  int max_nodes = 24;
  int threads = 1;
};

// Evaluates every ordered read pair with overlap_score. Throws
// std::invalid_argument for fewer than 2 or more than max_nodes reads.
OverlapGraph build_olc_graph(const std::vector<Read>& reads,
                             const AlignmentParams& params,
                             const GraphBuildOptions& options = {});

struct CostMatrix {
  int n = 0;
  std::vector<double> w;  // row-major n*n
  double alpha = 1;
  double gamma = 2;

  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }
};

// W[i][j] = -alpha on edges, gamma otherwise (diagonal stays gamma). When
// dense_penalty_scale is set, off-diagonal non-edges incident to a
// high-degree node (total degree >= n-1) get gamma scaled by it.
CostMatrix cost_matrix(const OverlapGraph& graph, double alpha, double gamma,
                       std::optional<double> dense_penalty_scale = {});

void write_graph(std::ostream& out, const OverlapGraph& graph);
OverlapGraph read_graph(std::istream& in);
void write_cost_matrix(std::ostream& out, const CostMatrix& matrix);
CostMatrix read_cost_matrix(std::istream& in);

}  // namespace olcq
