#pragma once

// Shared graph and sequence fixtures for the test and acceptance suites.

#include <string>
#include <vector>

#include "olcq/overlap.hpp"
#include "olcq/read.hpp"
#include "olcq/util.hpp"

namespace olcq::testing {

inline OverlapGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                               double score = 40, std::size_t overlap = 20) {
  OverlapGraph g;
  for (int i = 0; i < n; ++i) g.node_ids.push_back("r" + std::to_string(i));
  for (auto [a, b] : edges) g.edges.push_back({a, b, score, overlap});
  return g;
}

// 0 -> 1 -> 2 -> ... -> n-1.
inline OverlapGraph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return make_graph(n, edges);
}

// Six nodes whose single Hamiltonian path is 0 1 2 5 3 4, with distractor
// edges so the instance is not a bare chain.
inline OverlapGraph paper_style_graph6() {
  return make_graph(6, {{0, 1}, {1, 2}, {2, 5}, {5, 3}, {3, 4},
                        {0, 2}, {1, 3}, {2, 4}});
}

// Random digraph: each ordered pair becomes an edge with probability
// `density`; edge weights are quantized so ties actually happen.
inline std::pair<OverlapGraph, CostMatrix> random_instance(Rng& rng, int n,
                                                           double density,
                                                           double gamma = 2) {
  OverlapGraph g;
  for (int i = 0; i < n; ++i) g.node_ids.push_back("r" + std::to_string(i));
  CostMatrix m;
  m.n = n;
  m.alpha = 1;
  m.gamma = gamma;
  m.w.assign(static_cast<std::size_t>(n) * n, gamma);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform() >= density) continue;
      const double weight = -2.0 + 0.25 * static_cast<double>(rng.below(17));
      g.edges.push_back({i, j, 10, 5});
      m.at(i, j) = weight;
    }
  }
  return {std::move(g), std::move(m)};
}

inline std::string random_dna(Rng& rng, std::size_t len) {
  static const char bases[] = "ACGT";
  std::string s;
  s.reserve(len);
  for (std::size_t i = 0; i < len; ++i) s.push_back(bases[rng.below(4)]);
  return s;
}

// Cuts `tmpl` into `n_reads` reads where consecutive reads share exactly
// `overlap` bases; the union covers the template.
inline std::vector<Read> fragment_template(const std::string& tmpl, int n_reads,
                                           std::size_t overlap) {
  std::vector<Read> reads;
  const std::size_t len = tmpl.size();
  const std::size_t stride = (len - overlap) / static_cast<std::size_t>(n_reads - 1);
  for (int i = 0; i < n_reads; ++i) {
    const std::size_t begin = static_cast<std::size_t>(i) * stride;
    const std::size_t end =
        i + 1 == n_reads ? len : std::min(len, begin + stride + overlap);
    Read r;
    r.id = "frag" + std::to_string(i);
    r.bases = tmpl.substr(begin, end - begin);
    r.quals.assign(r.bases.size(), 40);
    reads.push_back(std::move(r));
  }
  return reads;
}

inline Read make_read(std::string id, std::string bases, int q = 40) {
  Read r;
  r.id = std::move(id);
  r.bases = std::move(bases);
  r.quals.assign(r.bases.size(), static_cast<std::uint8_t>(q));
  return r;
}

}  // namespace olcq::testing
