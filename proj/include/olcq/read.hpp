#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace olcq {

// One sequenced fragment. `bases` is restricted to {A,C,G,T,N}; `quals`
// holds decoded Phred scores and always has the same length as `bases`.
struct Read {
  std::string id;
  std::string bases;
  std::vector<std::uint8_t> quals;

  std::size_t length() const { return bases.size(); }
};

// Parses 4-line FASTQ records. Lowercase bases are uppercased and '.' is
// mapped to N; anything else outside {A,C,G,T,N} aborts with the line
// number, as does a record whose quality string length differs from its
// sequence. `offset` is the quality encoding offset (33 or 64).
std::vector<Read> parse_fastq(std::istream& in, int offset = 33);
std::vector<Read> parse_fastq_file(const std::string& path, int offset = 33);

// FASTA input gets all-zero quality scores.
std::vector<Read> parse_fasta(std::istream& in);

// Sniffs '@' vs '>' on the first record to pick the parser.
std::vector<Read> load_reads(const std::string& path, int fastq_offset = 33);

void write_fastq(std::ostream& out, const std::vector<Read>& reads,
                 int offset = 33);
void write_fasta_reads(std::ostream& out, const std::vector<Read>& reads,
                       std::size_t wrap = 70);

}  // namespace olcq
