#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace olcq {

struct AlignmentParams {
  // Defaults sit in the logarithmic phase: random sequence pairs score
  // O(log n) locally, so fixed acceptance thresholds stay meaningful.
  int match = 2;
  int mismatch = -3;
  int gap_open = -5;    // charged once per gap, on top of gap_extend
  int gap_extend = -2;  // charged per gapped column
  std::size_t min_overlap_len = 20;
  double min_score = 30;
  int max_mismatches = 4;
  double dedup_identity = 0.999;
  std::size_t window_cap = 1000;  // suffix/prefix window for overlap scoring
};

// One column of an alignment: a residue pair or a gap in either sequence.
struct AlignedColumn {
  enum class Kind { Pair, GapInA, GapInB };
  Kind kind = Kind::Pair;
  std::size_t pos_a = 0;  // valid unless GapInA
  std::size_t pos_b = 0;  // valid unless GapInB
};

struct Alignment {
  double score = 0;
  std::vector<AlignedColumn> columns;
  int mismatches = 0;          // residue pairs that differ (N never matches)
  std::size_t overlap_len = 0; // residue pairs, i.e. non-gap columns
  // Half-open local region covered in each sequence.
  std::size_t a_begin = 0, a_end = 0;
  std::size_t b_begin = 0, b_end = 0;
};

// Smith-Waterman local alignment with affine gaps (a gap of length L costs
// gap_open + L*gap_extend). Ties are resolved deterministically: the best
// cell is the first in row-major order, and traceback prefers a residue
// pair over a gap in `a` over a gap in `b`.
Alignment local_align(std::string_view a, std::string_view b,
                      const AlignmentParams& params);

// Dovetail alignment for overlap scoring: aligns a suffix of `a` against a
// prefix of `b`, anchored at a's last base and b's first base (leading
// bases of `a` and trailing bases of `b` are free). A shared substring in
// the interior of both sequences therefore scores poorly, unlike under
// plain local alignment. Same gap model and tie-breaks as local_align.
Alignment overlap_align(std::string_view a, std::string_view b,
                        const AlignmentParams& params);

// Global identity matches/columns for the pair, used by deduplication. The
// global alignment is banded; the band is wide enough that any pair at or
// above params.dedup_identity is scored exactly, and pairs outside the band
// can only be under-estimated (so they are never wrongly merged).
double global_identity(std::string_view a, std::string_view b,
                       const AlignmentParams& params);

}  // namespace olcq
