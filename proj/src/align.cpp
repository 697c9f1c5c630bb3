#include "olcq/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace olcq {

namespace {

constexpr int kNegInf = std::numeric_limits<int>::min() / 4;

inline int score_pair(char x, char y, const AlignmentParams& p) {
  // N never matches, including against another N.
  if (x == y && x != 'N') return p.match;
  return p.mismatch;
}

}  // namespace

Alignment local_align(std::string_view a, std::string_view b,
                      const AlignmentParams& params) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("local_align: empty sequence");

  const std::size_t la = a.size(), lb = b.size();
  const int open_cost = params.gap_open + params.gap_extend;

  // Gotoh recurrences. h = best ending in a residue pair or anywhere,
  // e = best ending in a gap in `a` (consuming b), f = gap in `b`.
  const std::size_t width = lb + 1;
  std::vector<int> h((la + 1) * width, 0);
  std::vector<int> e((la + 1) * width, kNegInf);
  std::vector<int> f((la + 1) * width, kNegInf);
  auto idx = [width](std::size_t i, std::size_t j) { return i * width + j; };

  int best = 0;
  std::size_t bi = 0, bj = 0;  // first maximal cell in row-major order
  for (std::size_t i = 1; i <= la; ++i) {
    for (std::size_t j = 1; j <= lb; ++j) {
      e[idx(i, j)] = std::max(h[idx(i, j - 1)] + open_cost,
                              e[idx(i, j - 1)] + params.gap_extend);
      f[idx(i, j)] = std::max(h[idx(i - 1, j)] + open_cost,
                              f[idx(i - 1, j)] + params.gap_extend);
      int diag = h[idx(i - 1, j - 1)] + score_pair(a[i - 1], b[j - 1], params);
      int v = std::max({0, diag, e[idx(i, j)], f[idx(i, j)]});
      h[idx(i, j)] = v;
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }

  Alignment out;
  out.score = best;
  if (best == 0) return out;  // empty local alignment

  // Traceback from the best cell. State 0 follows h, 1 follows e, 2
  // follows f; preference when resolving h is diagonal, then e, then f.
  std::vector<AlignedColumn> rev;
  std::size_t i = bi, j = bj;
  int state = 0;
  while (true) {
    if (state == 0) {
      int v = h[idx(i, j)];
      if (v == 0) break;
      int diag = h[idx(i - 1, j - 1)] + score_pair(a[i - 1], b[j - 1], params);
      if (i > 0 && j > 0 && v == diag) {
        rev.push_back({AlignedColumn::Kind::Pair, i - 1, j - 1});
        --i;
        --j;
      } else if (v == e[idx(i, j)]) {
        state = 1;
      } else {
        state = 2;
      }
    } else if (state == 1) {
      rev.push_back({AlignedColumn::Kind::GapInA, 0, j - 1});
      int v = e[idx(i, j)];
      bool from_open = v == h[idx(i, j - 1)] + open_cost;
      --j;
      if (from_open) state = 0;
    } else {
      rev.push_back({AlignedColumn::Kind::GapInB, i - 1, 0});
      int v = f[idx(i, j)];
      bool from_open = v == h[idx(i - 1, j)] + open_cost;
      --i;
      if (from_open) state = 0;
    }
  }

  out.columns.assign(rev.rbegin(), rev.rend());
  out.a_begin = i;
  out.a_end = bi;
  out.b_begin = j;
  out.b_end = bj;
  for (const AlignedColumn& col : out.columns) {
    if (col.kind != AlignedColumn::Kind::Pair) continue;
    ++out.overlap_len;
    if (score_pair(a[col.pos_a], b[col.pos_b], params) != params.match)
      ++out.mismatches;
  }
  return out;
}

Alignment overlap_align(std::string_view a, std::string_view b,
                        const AlignmentParams& params) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("overlap_align: empty sequence");

  const std::size_t la = a.size(), lb = b.size();
  const int open_cost = params.gap_open + params.gap_extend;
  const std::size_t width = lb + 1;
  std::vector<int> h((la + 1) * width, kNegInf);
  std::vector<int> e((la + 1) * width, kNegInf);
  std::vector<int> f((la + 1) * width, kNegInf);
  auto idx = [width](std::size_t i, std::size_t j) { return i * width + j; };

  // Column 0 is free: the alignment may begin at any position of `a`.
  for (std::size_t i = 0; i <= la; ++i) h[idx(i, 0)] = 0;
  for (std::size_t j = 1; j <= lb; ++j) {
    e[idx(0, j)] = std::max(h[idx(0, j - 1)] + open_cost,
                            e[idx(0, j - 1)] + params.gap_extend);
    h[idx(0, j)] = e[idx(0, j)];
  }

  for (std::size_t i = 1; i <= la; ++i) {
    for (std::size_t j = 1; j <= lb; ++j) {
      e[idx(i, j)] = std::max(h[idx(i, j - 1)] + open_cost,
                              e[idx(i, j - 1)] + params.gap_extend);
      f[idx(i, j)] = std::max(h[idx(i - 1, j)] + open_cost,
                              f[idx(i - 1, j)] + params.gap_extend);
      const int diag =
          h[idx(i - 1, j - 1)] + score_pair(a[i - 1], b[j - 1], params);
      h[idx(i, j)] = std::max({diag, e[idx(i, j)], f[idx(i, j)]});
    }
  }

  // The alignment must consume `a` to its end; the unconsumed tail of `b`
  // is the part that extends past the overlap.
  int best = kNegInf;
  std::size_t bj = 0;
  for (std::size_t j = 1; j <= lb; ++j) {
    if (h[idx(la, j)] > best) {
      best = h[idx(la, j)];
      bj = j;
    }
  }

  Alignment out;
  out.score = best;
  if (bj == 0) return out;

  std::vector<AlignedColumn> rev;
  std::size_t i = la, j = bj;
  int state = 0;
  while (j > 0) {
    if (state == 0) {
      const int v = h[idx(i, j)];
      if (i > 0 && v == h[idx(i - 1, j - 1)] + score_pair(a[i - 1], b[j - 1], params)) {
        rev.push_back({AlignedColumn::Kind::Pair, i - 1, j - 1});
        --i;
        --j;
      } else if (v == e[idx(i, j)]) {
        state = 1;
      } else {
        state = 2;
      }
    } else if (state == 1) {
      rev.push_back({AlignedColumn::Kind::GapInA, 0, j - 1});
      const bool from_open = e[idx(i, j)] == h[idx(i, j - 1)] + open_cost;
      --j;
      if (from_open) state = 0;
    } else {
      rev.push_back({AlignedColumn::Kind::GapInB, i - 1, 0});
      const bool from_open = f[idx(i, j)] == h[idx(i - 1, j)] + open_cost;
      --i;
      if (from_open) state = 0;
    }
  }

  out.columns.assign(rev.rbegin(), rev.rend());
  out.a_begin = i;
  out.a_end = la;
  out.b_begin = 0;
  out.b_end = bj;
  for (const AlignedColumn& col : out.columns) {
    if (col.kind != AlignedColumn::Kind::Pair) continue;
    ++out.overlap_len;
    if (score_pair(a[col.pos_a], b[col.pos_b], params) != params.match)
      ++out.mismatches;
  }
  return out;
}

double global_identity(std::string_view a, std::string_view b,
                       const AlignmentParams& params) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t la = a.size(), lb = b.size();

  // Any pair at identity >= dedup_identity has at most
  // (1 - identity) * (la + lb) non-match columns, so a band of that radius
  // around the main diagonal contains its optimal alignment.
  const double slack = std::max(0.0, 1.0 - params.dedup_identity);
  const std::size_t diff = la > lb ? la - lb : lb - la;
  const std::size_t band =
      diff + static_cast<std::size_t>(std::ceil(slack * static_cast<double>(la + lb))) + 1;

  const std::size_t width = lb + 1;
  // score + matches + columns tracked together along the optimal path so no
  // traceback storage is needed.
  struct Cell {
    int score = kNegInf;
    int matches = 0;
    int columns = 0;
  };
  std::vector<Cell> prev(width), cur(width);

  auto in_band = [&](std::size_t i, std::size_t j) {
    const auto di = static_cast<long long>(i), dj = static_cast<long long>(j);
    return std::llabs(di - dj) <= static_cast<long long>(band);
  };

  prev[0] = {0, 0, 0};
  for (std::size_t j = 1; j <= lb && in_band(0, j); ++j)
    prev[j] = {static_cast<int>(j) * params.gap_extend, 0, static_cast<int>(j)};

  for (std::size_t i = 1; i <= la; ++i) {
    const std::size_t j_lo = i > band ? i - band : 1;
    const std::size_t j_hi = std::min(lb, i + band);
    // The band moves by at most one column per row, so clearing one cell of
    // margin on each side removes any stale out-of-band values.
    for (std::size_t j = j_lo > 1 ? j_lo - 1 : 0; j <= std::min(lb, j_hi + 1); ++j)
      cur[j] = Cell{};
    if (in_band(i, 0))
      cur[0] = {static_cast<int>(i) * params.gap_extend, 0, static_cast<int>(i)};
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      // Dedup scoring uses linear gap costs (gap_extend per column).
      Cell best;
      if (prev[j - 1].score > kNegInf) {
        bool is_match = a[i - 1] == b[j - 1] && a[i - 1] != 'N';
        best = prev[j - 1];
        best.score += is_match ? params.match : params.mismatch;
        best.matches += is_match ? 1 : 0;
        best.columns += 1;
      }
      if (prev[j].score > kNegInf) {
        int s = prev[j].score + params.gap_extend;
        if (s > best.score) best = {s, prev[j].matches, prev[j].columns + 1};
      }
      if (cur[j - 1].score > kNegInf) {
        int s = cur[j - 1].score + params.gap_extend;
        if (s > best.score) best = {s, cur[j - 1].matches, cur[j - 1].columns + 1};
      }
      cur[j] = best;
    }
    std::swap(prev, cur);
  }

  const Cell& end = prev[lb];
  if (end.score <= kNegInf || end.columns == 0) return 0.0;
  return static_cast<double>(end.matches) / static_cast<double>(end.columns);
}

}  // namespace olcq
