#include "olcq/assembly.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "olcq/util.hpp"

namespace olcq {

Contig generate_contig(std::span<const Read> ordered_reads,
                       const AlignmentParams& params) {
  if (ordered_reads.empty())
    throw std::invalid_argument("generate_contig: empty read path");

  Contig contig;
  contig.sequence = ordered_reads[0].bases;
  for (std::size_t i = 1; i < ordered_reads.size(); ++i) {
    const std::string& incoming = ordered_reads[i].bases;
    const std::size_t wc = std::min(contig.sequence.size(), params.window_cap);
    const std::size_t wr = std::min(incoming.size(), params.window_cap);
    std::string_view suffix =
        std::string_view(contig.sequence).substr(contig.sequence.size() - wc);
    std::string_view prefix = std::string_view(incoming).substr(0, wr);

    MergeStep step;
    if (wc == 0 || wr == 0) {
      step.low_score_append = wr == 0 ? false : true;
      step.appended = incoming.size();
      contig.sequence += incoming;
      contig.merge_log.push_back(step);
      continue;
    }

    const Alignment aln = local_align(suffix, prefix, params);
    step.score = aln.score;
    if (aln.score >= 0) {
      // Append the read past its overlapped positions.
      step.overlap_len = aln.overlap_len;
      const std::size_t skip = std::min(aln.overlap_len, incoming.size());
      step.appended = incoming.size() - skip;
      contig.sequence.append(incoming, skip, std::string::npos);
    } else {
      step.low_score_append = true;
      step.appended = incoming.size();
      contig.sequence += incoming;
    }
    contig.merge_log.push_back(step);
  }
  return contig;
}

void write_fasta(std::ostream& out, std::string_view sequence, std::string_view id,
                 std::size_t wrap) {
  if (wrap < 1) throw std::invalid_argument("write_fasta: wrap must be >= 1");
  out << '>' << id << '\n';
  if (sequence.empty()) {
    out << '\n';
    return;
  }
  for (std::size_t i = 0; i < sequence.size(); i += wrap)
    out << sequence.substr(i, wrap) << '\n';
}

void write_merge_log(std::ostream& out, const Contig& contig) {
  out << "path";
  for (int v : contig.source_path) out << ' ' << v;
  out << '\n';
  out << "contig_length " << contig.sequence.size() << '\n';
  std::size_t step_no = 1;
  for (const MergeStep& s : contig.merge_log) {
    out << "step " << step_no++ << " score " << format_double(s.score)
        << " overlap " << s.overlap_len << " appended " << s.appended;
    if (s.low_score_append) out << " warning low-score-append";
    out << '\n';
  }
}

}  // namespace olcq
