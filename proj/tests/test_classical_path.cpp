#include <doctest.h>

#include <chrono>

#include "olcq/classical_path.hpp"
#include "olcq/util.hpp"
#include "support/fixtures.hpp"

using namespace olcq;
using namespace olcq::testing;

TEST_CASE("dp solves a path graph") {
  OverlapGraph g = path_graph(4);
  CostMatrix m = cost_matrix(g, 1, 2);
  auto sol = hamiltonian_path_dp(g, m);
  REQUIRE(sol.has_value());
  CHECK(sol->sequence == std::vector<int>{0, 1, 2, 3});
  CHECK(sol->total_weight == doctest::Approx(-3));
  CHECK(sol->provenance == Provenance::Dp);
  CHECK(count_violations(sol->sequence, g) == 0);
}

TEST_CASE("dp returns nothing when a node is unreachable") {
  // Node 3 has no edges at all.
  OverlapGraph g = make_graph(4, {{0, 1}, {1, 2}});
  CostMatrix m = cost_matrix(g, 1, 2);
  CHECK_FALSE(hamiltonian_path_dp(g, m).has_value());
}

TEST_CASE("brute force on trivial graphs") {
  // Complete 3-node digraph, every edge weight -1.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) edges.emplace_back(i, j);
  OverlapGraph k3 = make_graph(3, edges);
  CostMatrix m = cost_matrix(k3, 1, 2);
  auto sol = brute_force_path(k3, m);
  REQUIRE(sol.has_value());
  CHECK(sol->total_weight == doctest::Approx(-2));
  CHECK(sol->sequence == std::vector<int>{0, 1, 2});  // lexicographic tie-break

  OverlapGraph single = make_graph(2, {{0, 1}});
  auto sol2 = brute_force_path(single, cost_matrix(single, 1, 2));
  REQUIRE(sol2.has_value());
  CHECK(sol2->sequence == std::vector<int>{0, 1});

  OverlapGraph none = make_graph(2, {});
  CHECK_FALSE(brute_force_path(none, cost_matrix(none, 1, 2)).has_value());

  OverlapGraph big = path_graph(11);
  CHECK_THROWS_AS(brute_force_path(big, cost_matrix(big, 1, 2)), std::invalid_argument);
}

TEST_CASE("dp agrees with brute force on random digraphs") {
  Rng rng(101);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));  // up to 8 nodes
    const double density = (trial % 3 == 0) ? 0.2 : (trial % 3 == 1) ? 0.5 : 0.8;
    auto [g, m] = random_instance(rng, n, density);
    auto dp = hamiltonian_path_dp(g, m);
    auto brute = brute_force_path(g, m);
    REQUIRE(dp.has_value() == brute.has_value());
    if (dp) {
      ++solved;
      CHECK(dp->total_weight == doctest::Approx(brute->total_weight).epsilon(1e-12));
      CHECK(dp->sequence == brute->sequence);  // shared lexicographic tie-break
      CHECK(count_violations(dp->sequence, g) == 0);
    }
  }
  CHECK(solved > 20);  // the densities above must actually produce instances
}

TEST_CASE("dp is deterministic across repeat solves") {
  Rng rng(103);
  auto [g, m] = random_instance(rng, 7, 0.5);
  auto first = hamiltonian_path_dp(g, m);
  auto second = hamiltonian_path_dp(g, m);
  REQUIRE(first.has_value() == second.has_value());
  if (first) {
    CHECK(first->sequence == second->sequence);
    CHECK(first->total_weight == second->total_weight);
  }
}

TEST_CASE("count_violations") {
  OverlapGraph g = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 4},
                                  {2, 5}, {5, 3}});
  // 3 -> 5 is absent: exactly one violation.
  CHECK(count_violations({0, 1, 2, 3, 5, 4}, g) == 1);
  CHECK(count_violations({0, 1, 2, 5, 3, 4}, g) == 0);

  OverlapGraph chain = path_graph(5);
  CHECK(count_violations({4, 3, 2, 1, 0}, chain) == 4);  // nothing reversed exists

  CHECK_THROWS_AS(count_violations({0, 9}, chain), std::invalid_argument);
  CHECK_THROWS_AS(count_violations({-1, 0}, chain), std::invalid_argument);
}

TEST_CASE("lenient violation counting treats out-of-range codes as violations") {
  OverlapGraph g = path_graph(4);
  auto adj = g.adjacency();
  CHECK(count_violations_lenient({0, 1, 2, 3}, adj, 4) == 0);
  CHECK(count_violations_lenient({0, 7, 2, 3}, adj, 4) == 2);
}

TEST_CASE("rotated valid paths are recognized") {
  OverlapGraph g = path_graph(4);
  auto adj = g.adjacency();
  // [1,2,3,0] carries one violation (3->0), and shifting it back by one
  // recovers the valid path.
  CHECK(count_violations_lenient({1, 2, 3, 0}, adj, 4) == 1);
  CHECK(is_rotated_valid_path({1, 2, 3, 0}, adj, 4));
  CHECK(is_rotated_valid_path({2, 3, 0, 1}, adj, 4));
  // A scrambled permutation is not a rotation of the path.
  CHECK_FALSE(is_rotated_valid_path({0, 2, 1, 3}, adj, 4));
  // Non-permutations never qualify.
  CHECK_FALSE(is_rotated_valid_path({0, 1, 1, 3}, adj, 4));
  CHECK_FALSE(is_rotated_valid_path({0, 1, 2, 7}, adj, 4));
}

TEST_CASE("a 16-node dp instance solves quickly") {
  OverlapGraph g = path_graph(16);
  // Add some shortcuts so the instance is not a pure chain.
  g.edges.push_back({0, 2, 40, 20});
  g.edges.push_back({5, 9, 40, 20});
  g.edges.push_back({10, 15, 40, 20});
  CostMatrix m = cost_matrix(g, 1, 2);
  const auto t0 = std::chrono::steady_clock::now();
  auto sol = hamiltonian_path_dp(g, m);
  const double sec = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  REQUIRE(sol.has_value());
  CHECK(sol->total_weight == doctest::Approx(-15));
  CHECK(sec < 20.0);  // loose sanity bound, not a benchmark
}
