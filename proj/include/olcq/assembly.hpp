#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "olcq/align.hpp"
#include "olcq/read.hpp"

namespace olcq {

struct MergeStep {
  double score = 0;
  std::size_t overlap_len = 0;  // non-gap aligned positions of the merge alignment
  std::size_t appended = 0;     // bases taken from the incoming read
  bool low_score_append = false;  // read appended whole because score < 0
};

struct Contig {
  std::string sequence;
  std::vector<int> source_path;
  std::vector<MergeStep> merge_log;
};

// Iterative suffix-prefix merging along an ordered read path: align the
// contig's suffix window against the next read's prefix window; when the
// score is >= 0, skip the first overlap_len bases of the read and append
// the rest, otherwise append the read whole (flagged in the log). Throws
// std::invalid_argument on an empty path.
Contig generate_contig(std::span<const Read> ordered_reads,
                       const AlignmentParams& params);

void write_fasta(std::ostream& out, std::string_view sequence,
                 std::string_view id, std::size_t wrap = 70);

void write_merge_log(std::ostream& out, const Contig& contig);

}  // namespace olcq
