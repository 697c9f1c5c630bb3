#include "olcq/overlap.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "olcq/util.hpp"

namespace olcq {

std::optional<OverlapHit> overlap_score(const Read& a, const Read& b,
                                        const AlignmentParams& params) {
  if (a.bases.empty() || b.bases.empty()) return std::nullopt;
  const std::size_t wa = std::min(a.bases.size(), params.window_cap);
  const std::size_t wb = std::min(b.bases.size(), params.window_cap);
  std::string_view suffix = std::string_view(a.bases).substr(a.bases.size() - wa);
  std::string_view prefix = std::string_view(b.bases).substr(0, wb);

  Alignment aln = overlap_align(suffix, prefix, params);
  if (aln.score < params.min_score) return std::nullopt;
  if (aln.overlap_len < params.min_overlap_len) return std::nullopt;
  if (aln.mismatches > params.max_mismatches) return std::nullopt;
  return OverlapHit{aln.score, aln.overlap_len, aln.mismatches};
}

std::vector<Read> dedup_reads(std::vector<Read> reads, double identity,
                              const AlignmentParams& params) {
  AlignmentParams p = params;
  p.dedup_identity = identity;
  std::vector<Read> kept;
  for (Read& candidate : reads) {
    bool duplicate = false;
    for (const Read& existing : kept) {
      const std::size_t la = existing.length(), lb = candidate.length();
      if (la == 0 || lb == 0) continue;
      // identity <= min(la, lb) / max(la, lb); skip hopeless pairs cheaply.
      const double cap = static_cast<double>(std::min(la, lb)) /
                         static_cast<double>(std::max(la, lb));
      if (cap < identity) continue;
      if (existing.bases == candidate.bases ||
          global_identity(existing.bases, candidate.bases, p) >= identity) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(candidate));
  }
  return kept;
}

bool OverlapGraph::has_edge(int from, int to) const {
  for (const GraphEdge& e : edges)
    if (e.from == from && e.to == to) return true;
  return false;
}

std::vector<bool> OverlapGraph::adjacency() const {
  const std::size_t n = node_ids.size();
  std::vector<bool> adj(n * n, false);
  for (const GraphEdge& e : edges)
    adj[static_cast<std::size_t>(e.from) * n + e.to] = true;
  return adj;
}

OverlapGraph build_olc_graph(const std::vector<Read>& reads,
                             const AlignmentParams& params,
                             const GraphBuildOptions& options) {
  const int n = static_cast<int>(reads.size());
  if (n < 2) throw std::invalid_argument("build_olc_graph: need at least 2 reads");
  if (n > options.max_nodes)
    throw std::invalid_argument("build_olc_graph: " + std::to_string(n) +
                                " reads exceeds the node cap of " +
                                std::to_string(options.max_nodes));

  OverlapGraph graph;
  graph.node_ids.reserve(reads.size());
  for (const Read& r : reads) graph.node_ids.push_back(r.id);

  // Ordered pairs, flattened so scoring can run in parallel with a
  // deterministic merge by pair index.
  std::vector<std::optional<OverlapHit>> hits(
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(hits.size(), options.threads, [&](std::size_t pair) {
    const int i = static_cast<int>(pair) / n;
    const int j = static_cast<int>(pair) % n;
    if (i == j) return;
    hits[pair] = overlap_score(reads[i], reads[j], params);
  });
  for (std::size_t pair = 0; pair < hits.size(); ++pair) {
    if (!hits[pair]) continue;
    const int i = static_cast<int>(pair) / n;
    const int j = static_cast<int>(pair) % n;
    graph.edges.push_back({i, j, hits[pair]->score, hits[pair]->overlap_len});
  }
  return graph;
}

CostMatrix cost_matrix(const OverlapGraph& graph, double alpha, double gamma,
                       std::optional<double> dense_penalty_scale) {
  if (!(alpha > 0) || !(gamma > 0))
    throw std::invalid_argument("cost_matrix: alpha and gamma must be positive");
  const int n = graph.node_count();
  CostMatrix m;
  m.n = n;
  m.alpha = alpha;
  m.gamma = gamma;
  m.w.assign(static_cast<std::size_t>(n) * n, gamma);

  if (dense_penalty_scale) {
    std::vector<int> degree(n, 0);
    for (const GraphEdge& e : graph.edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && (degree[i] >= n - 1 || degree[j] >= n - 1))
          m.at(i, j) = gamma * *dense_penalty_scale;
  }
  for (const GraphEdge& e : graph.edges) m.at(e.from, e.to) = -alpha;
  return m;
}

void write_graph(std::ostream& out, const OverlapGraph& graph) {
  out << "nodes " << graph.node_count() << '\n';
  for (int i = 0; i < graph.node_count(); ++i)
    out << "node " << i << ' ' << graph.node_ids[i] << '\n';
  for (const GraphEdge& e : graph.edges)
    out << "edge " << e.from << ' ' << e.to << ' ' << format_double(e.score) << ' '
        << e.overlap_len << '\n';
}

OverlapGraph read_graph(std::istream& in) {
  OverlapGraph graph;
  std::string line;
  std::size_t lineno = 0;
  long long n = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields[0] == "nodes") {
      if (fields.size() != 2) throw ParseError("nodes line needs a count", lineno);
      n = std::stoll(fields[1]);
      graph.node_ids.assign(static_cast<std::size_t>(n), "");
    } else if (fields[0] == "node") {
      if (fields.size() != 3 || n < 0) throw ParseError("bad node line", lineno);
      long long idx = std::stoll(fields[1]);
      if (idx < 0 || idx >= n) throw ParseError("node index out of range", lineno);
      graph.node_ids[static_cast<std::size_t>(idx)] = fields[2];
    } else if (fields[0] == "edge") {
      if (fields.size() != 5 || n < 0) throw ParseError("bad edge line", lineno);
      GraphEdge e;
      e.from = std::stoi(fields[1]);
      e.to = std::stoi(fields[2]);
      e.score = std::stod(fields[3]);
      e.overlap_len = static_cast<std::size_t>(std::stoull(fields[4]));
      if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
        throw ParseError("edge endpoint out of range", lineno);
      graph.edges.push_back(e);
    } else {
      throw ParseError("unknown graph record '" + fields[0] + "'", lineno);
    }
  }
  if (n < 0) throw std::runtime_error("graph file has no `nodes` line");
  return graph;
}

void write_cost_matrix(std::ostream& out, const CostMatrix& m) {
  out << "costs " << m.n << ' ' << format_double(m.alpha) << ' '
      << format_double(m.gamma) << '\n';
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) out << ' ';
      out << format_double(m.at(i, j));
    }
    out << '\n';
  }
}

CostMatrix read_cost_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty cost matrix file");
  auto header = split_ws(line);
  if (header.size() != 4 || header[0] != "costs")
    throw ParseError("expected `costs n alpha gamma` header", 1);
  CostMatrix m;
  m.n = std::stoi(header[1]);
  m.alpha = std::stod(header[2]);
  m.gamma = std::stod(header[3]);
  m.w.reserve(static_cast<std::size_t>(m.n) * m.n);
  std::size_t lineno = 1;
  for (int i = 0; i < m.n; ++i) {
    if (!std::getline(in, line)) throw ParseError("missing matrix row", lineno + 1);
    ++lineno;
    auto fields = split_ws(line);
    if (static_cast<int>(fields.size()) != m.n)
      throw ParseError("matrix row has wrong width", lineno);
    for (const std::string& f : fields) m.w.push_back(std::stod(f));
  }
  return m;
}

}  // namespace olcq
