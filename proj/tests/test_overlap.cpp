#include <doctest.h>

#include <sstream>

#include "olcq/overlap.hpp"
#include "olcq/util.hpp"
#include "support/fixtures.hpp"

using namespace olcq;
using olcq::testing::make_read;

TEST_CASE("overlap_score accepts an exact suffix-prefix overlap") {
  AlignmentParams p;
  p.min_overlap_len = 4;
  p.min_score = 5;
  auto hit = overlap_score(make_read("a", "AAAACCCC"), make_read("b", "CCCCGGGG"), p);
  REQUIRE(hit.has_value());
  CHECK(hit->overlap_len == 4);
  CHECK(hit->mismatches == 0);
  CHECK(hit->score == doctest::Approx(8));
}

TEST_CASE("overlap_score rejects by score, length and mismatches") {
  AlignmentParams p;
  p.min_overlap_len = 4;
  p.min_score = 5;
  CHECK_FALSE(overlap_score(make_read("a", "AAAA"), make_read("b", "GGGG"), p));

  // 30-base overlap carrying 5 mismatches: rejected at max_mismatches 4,
  // accepted once the cap is raised.
  Rng rng(41);
  std::string core = olcq::testing::random_dna(rng, 30);
  std::string mutated = core;
  for (std::size_t i : {3u, 9u, 15u, 21u, 27u})
    mutated[i] = mutated[i] == 'A' ? 'C' : 'A';
  Read left = make_read("l", olcq::testing::random_dna(rng, 20) + core);
  Read right = make_read("r", mutated + olcq::testing::random_dna(rng, 20));
  p.min_overlap_len = 20;
  p.min_score = 10;
  p.max_mismatches = 4;
  CHECK_FALSE(overlap_score(left, right, p));
  p.max_mismatches = 5;
  auto hit = overlap_score(left, right, p);
  REQUIRE(hit.has_value());
  CHECK(hit->mismatches == 5);
}

TEST_CASE("dedup keeps the earlier read of a near-identical pair") {
  AlignmentParams p;
  Rng rng(43);
  std::string base = olcq::testing::random_dna(rng, 1000);
  std::string twin = base;
  twin[10] = twin[10] == 'A' ? 'G' : 'A';
  twin[500] = twin[500] == 'C' ? 'T' : 'C';  // identity 0.998

  auto identical = dedup_reads({make_read("a", base), make_read("b", base)}, 0.999, p);
  REQUIRE(identical.size() == 1);
  CHECK(identical[0].id == "a");

  auto near_pair = dedup_reads({make_read("a", base), make_read("b", twin)}, 0.999, p);
  CHECK(near_pair.size() == 2);

  auto distinct = dedup_reads({make_read("a", olcq::testing::random_dna(rng, 100)),
                               make_read("b", olcq::testing::random_dna(rng, 100)),
                               make_read("c", olcq::testing::random_dna(rng, 100))},
                              0.999, p);
  CHECK(distinct.size() == 3);
  CHECK(distinct[0].id == "a");
  CHECK(distinct[2].id == "c");
}

TEST_CASE("build_olc_graph recovers a fragment chain") {
  Rng rng(47);
  std::string tmpl = olcq::testing::random_dna(rng, 600);
  auto reads = olcq::testing::fragment_template(tmpl, 4, 60);
  REQUIRE(reads.size() == 4);

  AlignmentParams p;
  p.min_overlap_len = 40;
  p.min_score = 80;
  OverlapGraph g = build_olc_graph(reads, p);
  CHECK(g.node_count() == 4);
  REQUIRE(g.edges.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(g.has_edge(i, i + 1));
}

TEST_CASE("build_olc_graph edge cases") {
  AlignmentParams p;
  CHECK_THROWS_AS(build_olc_graph({make_read("a", "ACGT")}, p), std::invalid_argument);

  GraphBuildOptions opts;
  opts.max_nodes = 2;
  CHECK_THROWS_AS(build_olc_graph({make_read("a", "ACGTACGT"),
                                   make_read("b", "ACGTACGT"),
                                   make_read("c", "ACGTACGT")},
                                  p, opts),
                  std::invalid_argument);

  Rng rng(53);
  auto no_overlap = build_olc_graph({make_read("a", olcq::testing::random_dna(rng, 100)),
                                     make_read("b", olcq::testing::random_dna(rng, 100))},
                                    p);
  CHECK(no_overlap.edges.empty());
}

TEST_CASE("window cap limits the region an overlap can use") {
  Rng rng(63);
  const std::string junction = olcq::testing::random_dna(rng, 50);
  Read left = olcq::testing::make_read("l", olcq::testing::random_dna(rng, 200) + junction);
  Read right = olcq::testing::make_read("r", junction + olcq::testing::random_dna(rng, 200));

  AlignmentParams p;
  p.min_overlap_len = 40;
  p.min_score = 60;
  auto full = overlap_score(left, right, p);
  REQUIRE(full.has_value());
  CHECK(full->overlap_len == 50);

  // Any window at least as long as the true overlap still sees it.
  p.window_cap = 60;
  auto capped = overlap_score(left, right, p);
  REQUIRE(capped.has_value());
  CHECK(capped->overlap_len == 50);

  // A window shorter than the overlap cannot align its ends, so the pair
  // drops out entirely.
  p.window_cap = 30;
  p.min_overlap_len = 5;
  p.min_score = 10;
  CHECK_FALSE(overlap_score(left, right, p));
}

TEST_CASE("accepted overlaps always satisfy the acceptance filters") {
  Rng rng(67);
  AlignmentParams p;
  p.min_overlap_len = 15;
  p.min_score = 25;
  p.max_mismatches = 3;
  for (int trial = 0; trial < 120; ++trial) {
    // Pairs with a planted partial overlap carrying a few mutations.
    std::string junction = olcq::testing::random_dna(rng, 10 + rng.below(30));
    std::string left = olcq::testing::random_dna(rng, 40) + junction;
    for (std::size_t i = 0; i < junction.size(); i += 7)
      if (rng.below(2)) junction[i] = junction[i] == 'A' ? 'G' : 'A';
    std::string right = junction + olcq::testing::random_dna(rng, 40);
    auto hit = overlap_score(olcq::testing::make_read("l", left),
                             olcq::testing::make_read("r", right), p);
    if (hit) {
      CHECK(hit->overlap_len >= p.min_overlap_len);
      CHECK(hit->mismatches <= p.max_mismatches);
      CHECK(hit->score >= p.min_score);
    }
  }
}

TEST_CASE("graph construction is identical across thread counts") {
  Rng rng(59);
  std::string tmpl = olcq::testing::random_dna(rng, 900);
  auto reads = olcq::testing::fragment_template(tmpl, 6, 50);
  AlignmentParams p;
  p.min_overlap_len = 30;
  p.min_score = 60;
  GraphBuildOptions serial{24, 1};
  GraphBuildOptions parallel{24, 4};
  OverlapGraph a = build_olc_graph(reads, p, serial);
  OverlapGraph b = build_olc_graph(reads, p, parallel);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i].from == b.edges[i].from);
    CHECK(a.edges[i].to == b.edges[i].to);
    CHECK(a.edges[i].score == b.edges[i].score);
  }
}

TEST_CASE("cost matrix from a path graph") {
  OverlapGraph g = olcq::testing::path_graph(3);
  CostMatrix m = cost_matrix(g, 1, 2);
  CHECK(m.at(0, 1) == doctest::Approx(-1));
  CHECK(m.at(1, 2) == doctest::Approx(-1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!((i == 0 && j == 1) || (i == 1 && j == 2)))
        CHECK(m.at(i, j) == doctest::Approx(2));
}

TEST_CASE("cost matrix with no edges and with dense penalty scaling") {
  OverlapGraph empty = olcq::testing::make_graph(3, {});
  CostMatrix m = cost_matrix(empty, 1, 2);
  for (double v : m.w) CHECK(v == doctest::Approx(2));

  // Complete digraph on 4 nodes minus the edge 2->1.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && !(i == 2 && j == 1)) edges.emplace_back(i, j);
  OverlapGraph dense = olcq::testing::make_graph(4, edges);
  CostMatrix scaled = cost_matrix(dense, 1, 2, 2.0);
  CHECK(scaled.at(2, 1) == doctest::Approx(4));  // the one non-edge, scaled
  for (int i = 0; i < 4; ++i) CHECK(scaled.at(i, i) == doctest::Approx(2));
  CHECK(scaled.at(0, 1) == doctest::Approx(-1));

  CHECK(*std::min_element(scaled.w.begin(), scaled.w.end()) == doctest::Approx(-1));
}

TEST_CASE("graph and cost matrix serialization round-trips") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    auto [g, m] = olcq::testing::random_instance(rng, n, 0.5);

    std::ostringstream gout;
    write_graph(gout, g);
    std::istringstream gin(gout.str());
    OverlapGraph g2 = read_graph(gin);
    CHECK(g2.node_count() == g.node_count());
    REQUIRE(g2.edges.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      CHECK(g2.edges[i].from == g.edges[i].from);
      CHECK(g2.edges[i].to == g.edges[i].to);
      CHECK(g2.edges[i].score == doctest::Approx(g.edges[i].score));
      CHECK(g2.edges[i].overlap_len == g.edges[i].overlap_len);
    }
    CHECK(g2.node_ids == g.node_ids);

    std::ostringstream mout;
    write_cost_matrix(mout, m);
    std::istringstream min(mout.str());
    CostMatrix m2 = read_cost_matrix(min);
    CHECK(m2.n == m.n);
    CHECK(m2.alpha == m.alpha);
    CHECK(m2.gamma == m.gamma);
    for (std::size_t i = 0; i < m.w.size(); ++i) CHECK(m2.w[i] == m.w[i]);
  }
}

TEST_CASE("malformed graph files are rejected") {
  std::istringstream bad1("edge 0 1 5 10\n");
  CHECK_THROWS(read_graph(bad1));
  std::istringstream bad2("nodes 2\nedge 0 5 1 1\n");
  CHECK_THROWS_AS(read_graph(bad2), ParseError);
  std::istringstream bad3("costs 2 1\n");
  CHECK_THROWS_AS(read_cost_matrix(bad3), ParseError);
}
