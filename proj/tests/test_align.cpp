#include <doctest.h>

#include <algorithm>
#include <string>

#include "olcq/align.hpp"
#include "olcq/util.hpp"
#include "support/fixtures.hpp"

using namespace olcq;

namespace {

// Independent oracle: enumerate every possible alignment of a against b
// recursively (pair / gap-in-a / gap-in-b at each step, any start and end)
// and return the best local score under affine gap costs. Exponential, so
// strings must stay tiny.
struct Enumerator {
  std::string_view a, b;
  const AlignmentParams& p;
  int best = 0;

  // state: 0 none/pair, 1 in gap-in-a, 2 in gap-in-b
  void walk(std::size_t i, std::size_t j, int score, int state, bool started) {
    if (started) best = std::max(best, score);
    if (i < a.size() && j < b.size()) {
      const int s = (a[i] == b[j] && a[i] != 'N') ? p.match : p.mismatch;
      walk(i + 1, j + 1, score + s, 0, true);
    }
    if (started) {  // local alignments never begin with a gap
      if (j < b.size()) {
        const int open = state == 1 ? 0 : p.gap_open;
        walk(i, j + 1, score + open + p.gap_extend, 1, true);
      }
      if (i < a.size()) {
        const int open = state == 2 ? 0 : p.gap_open;
        walk(i + 1, j, score + open + p.gap_extend, 2, true);
      }
    }
  }

  int run() {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) walk(i, j, 0, 0, false);
    return best;
  }
};

int oracle_score(std::string_view a, std::string_view b, const AlignmentParams& p) {
  Enumerator e{a, b, p};
  return e.run();
}

}  // namespace

TEST_CASE("local alignment of identical and disjoint sequences") {
  AlignmentParams p;
  Alignment same = local_align("ACGT", "ACGT", p);
  CHECK(same.score == doctest::Approx(8));
  CHECK(same.mismatches == 0);
  CHECK(same.overlap_len == 4);

  Alignment none = local_align("AAAA", "TTTT", p);
  CHECK(none.score == doctest::Approx(0));
  CHECK(none.columns.empty());
  CHECK(none.overlap_len == 0);
}

TEST_CASE("local alignment with one mismatch matches the enumeration oracle") {
  AlignmentParams p;  // the (2,-1,-2,-1) scoring this example is stated for
  p.mismatch = -1;
  p.gap_open = -2;
  p.gap_extend = -1;
  Alignment aln = local_align("ACGTT", "ACCTT", p);
  CHECK(aln.score == doctest::Approx(7));
  CHECK(aln.mismatches == 1);
  CHECK(oracle_score("ACGTT", "ACCTT", p) == 7);
}

TEST_CASE("local alignment score equals the oracle on random tiny strings") {
  AlignmentParams p;
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::string a = olcq::testing::random_dna(rng, 1 + rng.below(5));
    std::string b = olcq::testing::random_dna(rng, 1 + rng.below(5));
    CHECK(local_align(a, b, p).score == doctest::Approx(oracle_score(a, b, p)));
  }
}

TEST_CASE("local alignment score is symmetric under joint reversal") {
  AlignmentParams p;
  Rng rng(19);
  for (int trial = 0; trial < 80; ++trial) {
    std::string a = olcq::testing::random_dna(rng, 2 + rng.below(30));
    std::string b = olcq::testing::random_dna(rng, 2 + rng.below(30));
    std::string ra(a.rbegin(), a.rend());
    std::string rb(b.rbegin(), b.rend());
    CHECK(local_align(a, b, p).score == doctest::Approx(local_align(ra, rb, p).score));
  }
}

TEST_CASE("local alignment rejects empty input") {
  AlignmentParams p;
  CHECK_THROWS_AS(local_align("", "ACGT", p), std::invalid_argument);
  CHECK_THROWS_AS(local_align("ACGT", "", p), std::invalid_argument);
}

TEST_CASE("gap handling prefers the affine-optimal alignment") {
  AlignmentParams p;
  p.mismatch = -1;
  p.gap_open = -2;
  p.gap_extend = -1;
  // ACGTACGT vs ACGACGT: best local alignment deletes one T.
  Alignment aln = local_align("ACGTACGT", "ACGACGT", p);
  // 7 matched pairs (14) minus one 1-base gap (open -2, extend -1).
  CHECK(aln.score == doctest::Approx(11));
  const std::size_t gaps =
      aln.columns.size() > 0
          ? static_cast<std::size_t>(std::count_if(
                aln.columns.begin(), aln.columns.end(),
                [](const AlignedColumn& c) { return c.kind != AlignedColumn::Kind::Pair; }))
          : 0;
  CHECK(gaps == 1);
  CHECK(aln.overlap_len == 7);
}

TEST_CASE("alignment bookkeeping invariants hold on random inputs") {
  AlignmentParams p;
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::string a = olcq::testing::random_dna(rng, 4 + rng.below(40));
    std::string b = olcq::testing::random_dna(rng, 4 + rng.below(40));
    Alignment aln = local_align(a, b, p);
    CHECK(aln.overlap_len <= std::min(a.size(), b.size()));
    CHECK(aln.mismatches <= static_cast<int>(aln.overlap_len));
    // Recompute the score from the emitted columns.
    double score = 0;
    int state = 0;
    for (const auto& col : aln.columns) {
      if (col.kind == AlignedColumn::Kind::Pair) {
        score += (a[col.pos_a] == b[col.pos_b] && a[col.pos_a] != 'N') ? p.match
                                                                       : p.mismatch;
        state = 0;
      } else {
        const int cur = col.kind == AlignedColumn::Kind::GapInA ? 1 : 2;
        score += (state == cur ? 0 : p.gap_open) + p.gap_extend;
        state = cur;
      }
    }
    CHECK(score == doctest::Approx(aln.score));
  }
}

TEST_CASE("overlap alignment anchors to a's end and b's start") {
  AlignmentParams p;
  Alignment good = overlap_align("AAAACCCC", "CCCCGGGG", p);
  CHECK(good.score == doctest::Approx(8));
  CHECK(good.overlap_len == 4);
  CHECK(good.a_begin == 4);
  CHECK(good.b_end == 4);

  // The same junction placed at the wrong ends: a starts with it, b ends
  // with it. Local alignment loves this; dovetail alignment must not.
  Rng rng(23);
  const std::string junction = olcq::testing::random_dna(rng, 30);
  const std::string a = junction + olcq::testing::random_dna(rng, 100);
  const std::string b = olcq::testing::random_dna(rng, 100) + junction;
  CHECK(local_align(a, b, p).score >= 60);
  CHECK(overlap_align(a, b, p).score < 30);
}

TEST_CASE("overlap alignment tolerates mismatches inside the junction") {
  AlignmentParams p;
  Rng rng(29);
  std::string junction = olcq::testing::random_dna(rng, 40);
  const std::string a = olcq::testing::random_dna(rng, 80) + junction;
  junction[20] = junction[20] == 'A' ? 'C' : 'A';
  const std::string b = junction + olcq::testing::random_dna(rng, 80);
  Alignment aln = overlap_align(a, b, p);
  CHECK(aln.overlap_len == 40);
  CHECK(aln.mismatches == 1);
  CHECK(aln.score == doctest::Approx(39 * 2 - 3));
}

TEST_CASE("global identity for dedup decisions") {
  AlignmentParams p;
  CHECK(global_identity("ACGTACGT", "ACGTACGT", p) == doctest::Approx(1.0));

  // 1000 bases with 2 substitutions: identity 0.998.
  Rng rng(5);
  std::string a = olcq::testing::random_dna(rng, 1000);
  std::string b = a;
  b[100] = b[100] == 'A' ? 'C' : 'A';
  b[900] = b[900] == 'G' ? 'T' : 'G';
  CHECK(global_identity(a, b, p) == doctest::Approx(0.998));

  // A single insertion in 1000 bases stays above 0.999 per column count.
  std::string c = a.substr(0, 500) + "A" + a.substr(500);
  CHECK(global_identity(a, c, p) > 0.997);

  CHECK(global_identity("ACGT", "TTTT", p) < 0.5);
}
