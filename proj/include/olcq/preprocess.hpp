#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "olcq/read.hpp"

namespace olcq {

// Phred score from an error probability in (0, 1]: round(-10*log10(p)),
// never negative. Throws std::domain_error outside the domain.
int phred_from_prob(double p);

// Q = ascii - offset. Throws std::invalid_argument when the result would be
// negative (malformed FASTQ for the claimed encoding).
int decode_quality(char ascii, int offset = 33);

// GC percentage over A/T/G/C bases only; N is ignored on both sides of the
// ratio. Throws std::domain_error when the read has no countable base.
double gc_content(const Read& read);

struct PositionQuality {
  std::size_t position = 0;
  double mean_q = 0;
  int min_q = 0;
  int max_q = 0;
};

// Per-position A/C/G/T fractions over non-N bases. When a position holds
// only N bases all four fractions are zero.
struct PositionComposition {
  std::size_t position = 0;
  double a = 0, c = 0, g = 0, t = 0;
};

struct QualityReport {
  std::size_t total_reads = 0;
  std::vector<PositionQuality> per_base_quality;
  std::map<int, std::size_t> per_read_mean_quality;  // histogram over round(mean Q)
  std::vector<PositionComposition> per_base_composition;
  std::map<int, std::size_t> per_read_gc;  // histogram over round(GC%), all-N reads skipped
  // Category counts keyed on round(mean Q): poor 0-20, medium 21-28, best >= 29.
  std::size_t reads_poor = 0;
  std::size_t reads_medium = 0;
  std::size_t reads_best = 0;
};

// Throws std::invalid_argument on an empty read set.
QualityReport qc_report(const std::vector<Read>& reads);

void write_report_text(std::ostream& out, const QualityReport& report);
void write_report_kv(std::ostream& out, const QualityReport& report);

enum class FilterPolicy { AnyPosition, Mean };

// AnyPosition keeps a read iff every base has Q >= min_q; Mean uses the
// read's mean quality. Input order is preserved.
std::vector<Read> filter_reads(std::vector<Read> reads, int min_q,
                               FilterPolicy policy = FilterPolicy::AnyPosition);

struct AdapterSet {
  std::vector<std::pair<std::string, std::string>> adapters;  // (name, sequence)

  // The six stock adapters (Illumina universal / small-RNA 3' and 5',
  // Nextera transposase, poly-A, poly-G).
  static AdapterSet defaults();
  // One `name sequence` pair per line; '#' comments allowed.
  static AdapterSet load(std::istream& in);
};

struct TrimOptions {
  int min_prefix_match = 6;     // shortest adapter-prefix suffix hit to clip
  std::size_t min_length = 50;  // reads shorter than this after trimming are dropped
};

// Truncates each read at the earliest full-adapter occurrence, then removes
// a read suffix matching an adapter prefix of length >= min_prefix_match
// (the longest such match wins). Qualities are clipped in lockstep.
std::vector<Read> trim_adapters(std::vector<Read> reads, const AdapterSet& adapters,
                                const TrimOptions& options = {});

}  // namespace olcq
