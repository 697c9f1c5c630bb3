#include "olcq/read.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "olcq/preprocess.hpp"
#include "olcq/util.hpp"

namespace olcq {

namespace {

char normalize_base(char c, std::size_t line) {
  switch (c) {
    case 'a': case 'A': return 'A';
    case 'c': case 'C': return 'C';
    case 'g': case 'G': return 'G';
    case 't': case 'T': return 'T';
    case 'n': case 'N': case '.': return 'N';
    default:
      throw ParseError(std::string("invalid base character '") + c + "'", line);
  }
}

std::string header_id(std::string_view header) {
  // Everything up to the first whitespace, standard FASTQ/FASTA practice.
  std::size_t end = header.find_first_of(" \t");
  return std::string(header.substr(0, end));
}

}  // namespace

std::vector<Read> parse_fastq(std::istream& in, int offset) {
  std::vector<Read> reads;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;  // tolerate a trailing blank line
    if (line.empty() || line[0] != '@')
      throw ParseError("expected '@' header", lineno);
    Read read;
    read.id = header_id(std::string_view(line).substr(1));

    std::string seq, plus, qual;
    if (!std::getline(in, seq)) throw ParseError("missing sequence line", lineno + 1);
    ++lineno;
    if (!seq.empty() && seq.back() == '\r') seq.pop_back();
    const std::size_t seq_line = lineno;
    if (!std::getline(in, plus)) throw ParseError("missing '+' line", lineno + 1);
    ++lineno;
    if (plus.empty() || plus[0] != '+') throw ParseError("expected '+' separator", lineno);
    if (!std::getline(in, qual)) throw ParseError("missing quality line", lineno + 1);
    ++lineno;
    if (!qual.empty() && qual.back() == '\r') qual.pop_back();
    if (qual.size() != seq.size())
      throw ParseError("quality length differs from sequence length", lineno);

    read.bases.reserve(seq.size());
    for (char c : seq) read.bases.push_back(normalize_base(c, seq_line));
    read.quals.reserve(qual.size());
    for (char c : qual) {
      int q;
      try {
        q = decode_quality(c, offset);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
      }
      read.quals.push_back(static_cast<std::uint8_t>(q));
    }
    reads.push_back(std::move(read));
  }
  return reads;
}

std::vector<Read> parse_fastq_file(const std::string& path, int offset) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FASTQ file: " + path);
  return parse_fastq(in, offset);
}

std::vector<Read> parse_fasta(std::istream& in) {
  std::vector<Read> reads;
  std::string line;
  std::size_t lineno = 0;
  Read current;
  bool have_record = false;
  auto flush = [&] {
    if (!have_record) return;
    current.quals.assign(current.bases.size(), 0);
    reads.push_back(std::move(current));
    current = Read{};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      current.id = header_id(std::string_view(line).substr(1));
      have_record = true;
      continue;
    }
    if (!have_record) throw ParseError("sequence data before '>' header", lineno);
    for (char c : line) current.bases.push_back(normalize_base(c, lineno));
  }
  flush();
  return reads;
}

std::vector<Read> load_reads(const std::string& path, int fastq_offset) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reads file: " + path);
  int first = in.peek();
  if (first == '>') return parse_fasta(in);
  return parse_fastq(in, fastq_offset);
}

void write_fastq(std::ostream& out, const std::vector<Read>& reads, int offset) {
  for (const Read& r : reads) {
    out << '@' << r.id << '\n' << r.bases << "\n+\n";
    for (std::uint8_t q : r.quals)
      out << static_cast<char>(q + offset);
    out << '\n';
  }
}

void write_fasta_reads(std::ostream& out, const std::vector<Read>& reads,
                       std::size_t wrap) {
  for (const Read& r : reads) {
    out << '>' << r.id << '\n';
    for (std::size_t i = 0; i < r.bases.size(); i += wrap)
      out << std::string_view(r.bases).substr(i, wrap) << '\n';
    if (r.bases.empty()) out << '\n';
  }
}

}  // namespace olcq
