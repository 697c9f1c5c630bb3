#include "olcq/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "olcq/util.hpp"

namespace olcq {

int phred_from_prob(double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::domain_error("error probability must lie in (0, 1]");
  double q = -10.0 * std::log10(p);
  long long rounded = std::llround(q);
  return rounded < 0 ? 0 : static_cast<int>(rounded);
}

int decode_quality(char ascii, int offset) {
  int q = static_cast<unsigned char>(ascii) - offset;
  if (q < 0)
    throw std::invalid_argument("quality character below encoding offset");
  return q;
}

double gc_content(const Read& read) {
  std::size_t gc = 0, total = 0;
  for (char b : read.bases) {
    if (b == 'N') continue;
    ++total;
    if (b == 'G' || b == 'C') ++gc;
  }
  if (total == 0)
    throw std::domain_error("GC content undefined: read has no A/C/G/T base");
  return 100.0 * static_cast<double>(gc) / static_cast<double>(total);
}

namespace {

double mean_quality(const Read& r) {
  if (r.quals.empty()) return 0;
  double sum = 0;
  for (std::uint8_t q : r.quals) sum += q;
  return sum / static_cast<double>(r.quals.size());
}

}  // namespace

QualityReport qc_report(const std::vector<Read>& reads) {
  if (reads.empty()) throw std::invalid_argument("qc_report: empty read set");
  QualityReport rep;
  rep.total_reads = reads.size();

  std::size_t max_len = 0;
  for (const Read& r : reads) max_len = std::max(max_len, r.length());

  struct PosAccum {
    double q_sum = 0;
    std::size_t q_count = 0;
    int q_min = 1000, q_max = -1;
    std::size_t a = 0, c = 0, g = 0, t = 0;
  };
  std::vector<PosAccum> pos(max_len);

  for (const Read& r : reads) {
    for (std::size_t i = 0; i < r.length(); ++i) {
      PosAccum& p = pos[i];
      int q = r.quals[i];
      p.q_sum += q;
      ++p.q_count;
      p.q_min = std::min(p.q_min, q);
      p.q_max = std::max(p.q_max, q);
      switch (r.bases[i]) {
        case 'A': ++p.a; break;
        case 'C': ++p.c; break;
        case 'G': ++p.g; break;
        case 'T': ++p.t; break;
        default: break;  // N excluded from composition
      }
    }
    double mean = mean_quality(r);
    int mean_bin = static_cast<int>(std::llround(mean));
    ++rep.per_read_mean_quality[mean_bin];
    if (mean_bin <= 20)
      ++rep.reads_poor;
    else if (mean_bin <= 28)
      ++rep.reads_medium;
    else
      ++rep.reads_best;

    bool all_n = true;
    for (char b : r.bases)
      if (b != 'N') { all_n = false; break; }
    if (!all_n && !r.bases.empty())
      ++rep.per_read_gc[static_cast<int>(std::llround(gc_content(r)))];
  }

  rep.per_base_quality.reserve(max_len);
  rep.per_base_composition.reserve(max_len);
  for (std::size_t i = 0; i < max_len; ++i) {
    const PosAccum& p = pos[i];
    PositionQuality pq;
    pq.position = i;
    pq.mean_q = p.q_count ? p.q_sum / static_cast<double>(p.q_count) : 0;
    pq.min_q = p.q_count ? p.q_min : 0;
    pq.max_q = p.q_count ? p.q_max : 0;
    rep.per_base_quality.push_back(pq);

    PositionComposition pc;
    pc.position = i;
    const double acgt = static_cast<double>(p.a + p.c + p.g + p.t);
    if (acgt > 0) {
      pc.a = p.a / acgt;
      pc.c = p.c / acgt;
      pc.g = p.g / acgt;
      pc.t = p.t / acgt;
    }
    rep.per_base_composition.push_back(pc);
  }
  return rep;
}

void write_report_text(std::ostream& out, const QualityReport& rep) {
  out << "reads total " << rep.total_reads << "\n";
  out << "quality categories: poor(0-20) " << rep.reads_poor << "  medium(21-28) "
      << rep.reads_medium << "  best(29-42) " << rep.reads_best << "\n\n";

  out << "per-base quality (position mean min max)\n";
  for (const auto& p : rep.per_base_quality)
    out << "  " << p.position << ' ' << format_double(p.mean_q) << ' ' << p.min_q
        << ' ' << p.max_q << '\n';

  out << "\nper-base composition (position A C G T)\n";
  for (const auto& p : rep.per_base_composition)
    out << "  " << p.position << ' ' << format_double(p.a) << ' '
        << format_double(p.c) << ' ' << format_double(p.g) << ' '
        << format_double(p.t) << '\n';

  out << "\nmean-quality histogram (Q count)\n";
  for (const auto& [q, n] : rep.per_read_mean_quality)
    out << "  " << q << ' ' << n << '\n';

  out << "\nGC% histogram (pct count)\n";
  for (const auto& [pct, n] : rep.per_read_gc)
    out << "  " << pct << ' ' << n << '\n';
}

void write_report_kv(std::ostream& out, const QualityReport& rep) {
  out << "total_reads " << rep.total_reads << '\n';
  out << "reads_poor " << rep.reads_poor << '\n';
  out << "reads_medium " << rep.reads_medium << '\n';
  out << "reads_best " << rep.reads_best << '\n';
  for (const auto& p : rep.per_base_quality)
    out << "base_quality." << p.position << ' ' << format_double(p.mean_q) << ' '
        << p.min_q << ' ' << p.max_q << '\n';
  for (const auto& p : rep.per_base_composition)
    out << "base_composition." << p.position << ' ' << format_double(p.a) << ' '
        << format_double(p.c) << ' ' << format_double(p.g) << ' '
        << format_double(p.t) << '\n';
  for (const auto& [q, n] : rep.per_read_mean_quality)
    out << "mean_quality_hist." << q << ' ' << n << '\n';
  for (const auto& [pct, n] : rep.per_read_gc)
    out << "gc_hist." << pct << ' ' << n << '\n';
}

std::vector<Read> filter_reads(std::vector<Read> reads, int min_q,
                               FilterPolicy policy) {
  std::vector<Read> kept;
  kept.reserve(reads.size());
  for (Read& r : reads) {
    bool ok;
    if (policy == FilterPolicy::AnyPosition) {
      ok = true;
      for (std::uint8_t q : r.quals)
        if (q < min_q) { ok = false; break; }
    } else {
      ok = mean_quality(r) >= min_q;
    }
    if (ok) kept.push_back(std::move(r));
  }
  return kept;
}

AdapterSet AdapterSet::defaults() {
  return AdapterSet{{
      {"illumina_universal", "AGATCGGAAGAG"},
      {"illumina_small_rna_3p", "TGGAATTCTCGG"},
      {"illumina_small_rna_5p", "GATCGTCGGACT"},
      {"nextera_transposase", "CTGTCTCTTATA"},
      {"poly_a", "AAAAAAAAAA"},
      {"poly_g", "GGGGGGGGGG"},
  }};
}

AdapterSet AdapterSet::load(std::istream& in) {
  AdapterSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto fields = split_ws(body);
    if (fields.size() != 2)
      throw ParseError("adapter line must be `name sequence`", lineno);
    for (char c : fields[1])
      if (c != 'A' && c != 'C' && c != 'G' && c != 'T')
        throw ParseError("adapter sequence must be A/C/G/T only", lineno);
    set.adapters.emplace_back(fields[0], fields[1]);
  }
  return set;
}

std::vector<Read> trim_adapters(std::vector<Read> reads, const AdapterSet& adapters,
                                const TrimOptions& options) {
  const std::size_t min_prefix =
      options.min_prefix_match < 1 ? 1 : static_cast<std::size_t>(options.min_prefix_match);
  std::vector<Read> kept;
  kept.reserve(reads.size());
  for (Read& r : reads) {
    // Earliest full occurrence of any adapter truncates the read there.
    std::size_t cut = r.bases.size();
    for (const auto& [name, seq] : adapters.adapters) {
      (void)name;
      std::size_t at = r.bases.find(seq);
      if (at != std::string::npos) cut = std::min(cut, at);
    }
    // Then clip a read suffix that matches an adapter prefix; the longest
    // match across all adapters wins.
    std::size_t clip = 0;
    for (const auto& [name, seq] : adapters.adapters) {
      (void)name;
      std::size_t longest = std::min(cut, seq.empty() ? std::size_t{0} : seq.size() - 1);
      for (std::size_t len = longest; len >= min_prefix; --len) {
        if (std::string_view(r.bases).substr(cut - len, len) ==
            std::string_view(seq).substr(0, len)) {
          clip = std::max(clip, len);
          break;
        }
      }
    }
    std::size_t keep = cut - clip;
    if (keep < options.min_length) continue;
    r.bases.resize(keep);
    r.quals.resize(keep);
    kept.push_back(std::move(r));
  }
  return kept;
}

}  // namespace olcq
