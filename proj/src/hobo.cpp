#include "olcq/hobo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "olcq/util.hpp"

namespace olcq {

namespace {

constexpr double kCoeffDrop = 1e-12;

int ceil_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// In-place Walsh-Hadamard transform: F[S] = sum_m f[m] * (-1)^popcount(m & S).
void wht(std::vector<double>& f) {
  const std::size_t size = f.size();
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t i = 0; i < size; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = f[j], b = f[j + len];
        f[j] = a + b;
        f[j + len] = a - b;
      }
    }
  }
}

// Accumulates signed Z-products keyed by a 128-bit support mask, merging
// like terms as they arrive.
class TermAccumulator {
public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  void add(const Key& support, double coeff) { terms_[support] += coeff; }

  static Key key_from_qubits(std::span<const int> qubits) {
    Key key{0, 0};
    for (int q : qubits) {
      if (q < 64)
        key.first |= 1ull << q;
      else
        key.second |= 1ull << (q - 64);
    }
    return key;
  }

  std::vector<PauliTerm> take_terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [key, coeff] : terms_) {
      if (std::abs(coeff) < kCoeffDrop) continue;
      PauliTerm term;
      term.coefficient = coeff;
      for (int q = 0; q < 64; ++q)
        if (key.first >> q & 1) term.z_support.push_back(q);
      for (int q = 0; q < 64; ++q)
        if (key.second >> q & 1) term.z_support.push_back(q + 64);
      out.push_back(std::move(term));
    }
    return out;
  }

private:
  std::map<Key, double> terms_;
};

double w_extended(const CostMatrix& m, int c1, int c2) {
  if (c1 >= 0 && c1 < m.n && c2 >= 0 && c2 < m.n) return m.at(c1, c2);
  return m.gamma;
}

// Shared HOBO expansion; `accum` merges terms across all contributions.
void expand_hobo(const CostMatrix& matrix, double a1, double a2,
                 const HoboOptions& options, TermAccumulator& accum) {
  const int n = matrix.n;
  const int k = ceil_log2(n);
  const std::size_t codes = std::size_t{1} << k;

  // Transition weights: one Walsh-Hadamard transform of the code-extended
  // cost matrix gives the coefficient of every Z-support over a block pair;
  // the same spectrum applies at each position t.
  std::vector<double> f(codes * codes);
  for (std::size_t i = 0; i < codes; ++i)
    for (std::size_t j = 0; j < codes; ++j)
      f[(i << k) | j] = w_extended(matrix, static_cast<int>(i), static_cast<int>(j));
  wht(f);
  const double norm = 1.0 / static_cast<double>(codes * codes);

  std::vector<int> support;
  for (int t = 0; t + 1 < n; ++t) {
    for (std::size_t s = 0; s < f.size(); ++s) {
      const double coeff = f[s] * norm;
      if (std::abs(coeff) < kCoeffDrop) continue;
      support.clear();
      for (int p = 0; p < 2 * k; ++p)
        if (s >> p & 1) support.push_back(t * k + (2 * k - 1 - p));
      accum.add(TermAccumulator::key_from_qubits(support), coeff);
    }
  }

  // Pairwise equality penalty: product over bit pairs of (I + Z Z)/2.
  const double eq_norm = a2 / static_cast<double>(codes);
  for (int t = 0; t < n; ++t) {
    for (int u = t + 1; u < n; ++u) {
      for (std::size_t bits = 0; bits < codes; ++bits) {
        support.clear();
        for (int b = 0; b < k; ++b) {
          if (!(bits >> b & 1)) continue;
          support.push_back(t * k + b);
          support.push_back(u * k + b);
        }
        std::sort(support.begin(), support.end());
        accum.add(TermAccumulator::key_from_qubits(support), eq_norm);
      }
    }
  }

  // Optional projector onto invalid codes (>= n) at every position.
  if (options.validity_penalty && static_cast<int>(codes) > n) {
    std::vector<double> v(codes, 0.0);
    for (std::size_t c = static_cast<std::size_t>(n); c < codes; ++c) v[c] = a1;
    wht(v);
    const double v_norm = 1.0 / static_cast<double>(codes);
    for (int t = 0; t < n; ++t) {
      for (std::size_t s = 0; s < codes; ++s) {
        const double coeff = v[s] * v_norm;
        if (std::abs(coeff) < kCoeffDrop) continue;
        support.clear();
        for (int p = 0; p < k; ++p)
          if (s >> p & 1) support.push_back(t * k + (k - 1 - p));
        accum.add(TermAccumulator::key_from_qubits(support), coeff);
      }
    }
  }
}

// QUBO expansion with squared one-hot penalties; every support touches at
// most two qubits, so terms are keyed directly on qubit indices.
class QuboAccumulator {
public:
  void add_const(double c) { constant_ += c; }
  void add_linear(int q, double c) { linear_[q] += c; }
  void add_quadratic(int q1, int q2, double c) {
    if (q1 > q2) std::swap(q1, q2);
    quadratic_[{q1, q2}] += c;
  }

  std::vector<PauliTerm> take_terms() const {
    std::vector<PauliTerm> out;
    if (std::abs(constant_) >= kCoeffDrop) out.push_back({constant_, {}});
    for (const auto& [q, c] : linear_)
      if (std::abs(c) >= kCoeffDrop) out.push_back({c, {q}});
    for (const auto& [qs, c] : quadratic_)
      if (std::abs(c) >= kCoeffDrop) out.push_back({c, {qs.first, qs.second}});
    return out;
  }

private:
  double constant_ = 0;
  std::map<int, double> linear_;
  std::map<std::pair<int, int>, double> quadratic_;
};

void expand_qubo(const CostMatrix& matrix, double a1, double a2,
                 QuboAccumulator& accum) {
  const int n = matrix.n;
  auto qubit = [n](int t, int i) { return t * n + i; };
  // b -> (I - Z)/2; products expand to constant, linear and ZZ pieces.
  auto add_product = [&](int qa, int qb, double w) {
    if (qa == qb) {  // b^2 = b
      accum.add_const(w / 2);
      accum.add_linear(qa, -w / 2);
      return;
    }
    accum.add_const(w / 4);
    accum.add_linear(qa, -w / 4);
    accum.add_linear(qb, -w / 4);
    accum.add_quadratic(qa, qb, w / 4);
  };
  auto add_bit = [&](int q, double w) {
    accum.add_const(w / 2);
    accum.add_linear(q, -w / 2);
  };

  // A1 * sum_t (1 - sum_i b_ti)^2, expanded with b^2 = b.
  for (int t = 0; t < n; ++t) {
    accum.add_const(a1);
    for (int i = 0; i < n; ++i) add_bit(qubit(t, i), -a1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        add_product(qubit(t, i), qubit(t, j), 2 * a1);
  }
  // A2 * sum_i (1 - sum_t b_ti)^2.
  for (int i = 0; i < n; ++i) {
    accum.add_const(a2);
    for (int t = 0; t < n; ++t) add_bit(qubit(t, i), -a2);
    for (int t = 0; t < n; ++t)
      for (int u = t + 1; u < n; ++u)
        add_product(qubit(t, i), qubit(u, i), 2 * a2);
  }
  // Transition weights.
  for (int t = 0; t + 1 < n; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        add_product(qubit(t, i), qubit(t + 1, j), matrix.at(i, j));
}

HamiltonianStats stats_from_terms(const std::vector<PauliTerm>& terms, int qubits) {
  HamiltonianStats s;
  s.qubits = qubits;
  s.terms = terms.size();
  for (const PauliTerm& t : terms)
    s.max_locality = std::max(s.max_locality, static_cast<int>(t.z_support.size()));
  return s;
}

}  // namespace

Encoding hobo_encoding(int nodes) {
  if (nodes < 2) throw std::invalid_argument("hobo_encoding: need at least 2 nodes");
  return Encoding{EncodingKind::Hobo, nodes, ceil_log2(nodes)};
}

Encoding qubo_encoding(int nodes) {
  if (nodes < 2) throw std::invalid_argument("qubo_encoding: need at least 2 nodes");
  return Encoding{EncodingKind::Qubo, nodes, nodes};
}

double evaluate_term(const PauliTerm& term, std::string_view bits) {
  int parity = 0;
  for (int q : term.z_support) parity ^= bits[static_cast<std::size_t>(q)] == '1';
  return parity ? -term.coefficient : term.coefficient;
}

std::string encode_node(int node, int k) {
  if (node < 0 || node >= (1 << k))
    throw std::out_of_range("encode_node: node does not fit in " + std::to_string(k) + " bits");
  std::string bits(static_cast<std::size_t>(k), '0');
  for (int b = 0; b < k; ++b)
    if (node >> (k - 1 - b) & 1) bits[static_cast<std::size_t>(b)] = '1';
  return bits;
}

int decode_block(std::string_view bits) {
  int value = 0;
  for (char c : bits) value = (value << 1) | (c == '1');
  return value;
}

std::vector<int> decode_bitstring(std::string_view bits, const Encoding& encoding) {
  if (static_cast<int>(bits.size()) != encoding.total_qubits())
    throw std::invalid_argument("decode_bitstring: expected " +
                                std::to_string(encoding.total_qubits()) +
                                " bits, got " + std::to_string(bits.size()));
  const int k = encoding.bits_per_position;
  std::vector<int> codes;
  codes.reserve(static_cast<std::size_t>(encoding.nodes));
  for (int t = 0; t < encoding.nodes; ++t) {
    std::string_view block = bits.substr(static_cast<std::size_t>(t) * k,
                                         static_cast<std::size_t>(k));
    if (encoding.kind == EncodingKind::Hobo) {
      codes.push_back(decode_block(block));
    } else {
      // One-hot block: exactly one set bit decodes to its index; anything
      // else is marked with the out-of-range code N.
      int node = -1;
      bool clean = true;
      for (int i = 0; i < k; ++i) {
        if (block[static_cast<std::size_t>(i)] != '1') continue;
        if (node >= 0) { clean = false; break; }
        node = i;
      }
      codes.push_back(clean && node >= 0 ? node : encoding.nodes);
    }
  }
  return codes;
}

double DiagonalHamiltonian::eval_bits(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != encoding.total_qubits())
    throw std::invalid_argument("eval_bits: bitstring length mismatch");
  if (encoding.kind == EncodingKind::Hobo) {
    std::vector<int> codes = decode_bitstring(bits, encoding);
    return eval_sequence(codes);
  }
  // QUBO: the one-hot cost evaluated directly on the raw bits.
  const int n = encoding.nodes;
  auto bit = [&](int t, int i) {
    return bits[static_cast<std::size_t>(t) * n + i] == '1' ? 1.0 : 0.0;
  };
  double cost = 0;
  for (int t = 0; t < n; ++t) {
    double row = 1;
    for (int i = 0; i < n; ++i) row -= bit(t, i);
    cost += a1 * row * row;
  }
  for (int i = 0; i < n; ++i) {
    double col = 1;
    for (int t = 0; t < n; ++t) col -= bit(t, i);
    cost += a2 * col * col;
  }
  for (int t = 0; t + 1 < n; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cost += matrix.at(i, j) * bit(t, i) * bit(t + 1, j);
  return cost;
}

double DiagonalHamiltonian::eval_sequence(std::span<const int> codes) const {
  const int n = encoding.nodes;
  if (static_cast<int>(codes.size()) != n)
    throw std::invalid_argument("eval_sequence: expected " + std::to_string(n) + " codes");
  double cost = 0;
  if (validity_penalty) {
    for (int c : codes)
      if (c < 0 || c >= n) cost += a1;
  }
  for (std::size_t t = 0; t < codes.size(); ++t)
    for (std::size_t u = t + 1; u < codes.size(); ++u)
      if (codes[t] == codes[u]) cost += a2;
  for (std::size_t t = 0; t + 1 < codes.size(); ++t)
    cost += w_extended(matrix, codes[t], codes[t + 1]);
  return cost;
}

DiagonalHamiltonian build_hobo_hamiltonian(const CostMatrix& matrix, double a1,
                                           double a2, const HoboOptions& options) {
  DiagonalHamiltonian h;
  h.encoding = hobo_encoding(matrix.n);
  h.a1 = a1;
  h.a2 = a2;
  h.validity_penalty = options.validity_penalty;
  h.matrix = matrix;
  TermAccumulator accum;
  expand_hobo(matrix, a1, a2, options, accum);
  h.terms = accum.take_terms();
  return h;
}

DiagonalHamiltonian build_qubo_hamiltonian(const CostMatrix& matrix, double a1,
                                           double a2) {
  if (matrix.n > 12)
    throw std::invalid_argument(
        "build_qubo_hamiltonian: full expansion refused for N > 12; use qubo_term_stats");
  DiagonalHamiltonian h;
  h.encoding = qubo_encoding(matrix.n);
  h.a1 = a1;
  h.a2 = a2;
  h.validity_penalty = true;  // Eq-style one-hot cost always penalizes bad blocks
  h.matrix = matrix;
  QuboAccumulator accum;
  expand_qubo(matrix, a1, a2, accum);
  h.terms = accum.take_terms();
  return h;
}

HamiltonianStats hamiltonian_stats(const DiagonalHamiltonian& h) {
  return stats_from_terms(h.terms, h.encoding.total_qubits());
}

HamiltonianStats hobo_term_stats(const CostMatrix& matrix, double a1, double a2,
                                 const HoboOptions& options) {
  TermAccumulator accum;
  expand_hobo(matrix, a1, a2, options, accum);
  return stats_from_terms(accum.take_terms(), hobo_encoding(matrix.n).total_qubits());
}

HamiltonianStats qubo_term_stats(const CostMatrix& matrix, double a1, double a2) {
  QuboAccumulator accum;
  expand_qubo(matrix, a1, a2, accum);
  return stats_from_terms(accum.take_terms(), qubo_encoding(matrix.n).total_qubits());
}

void dump_hamiltonian(std::ostream& out, const DiagonalHamiltonian& h) {
  out << "hamiltonian " << (h.encoding.kind == EncodingKind::Hobo ? "hobo" : "qubo")
      << " nodes " << h.encoding.nodes << " qubits " << h.encoding.total_qubits()
      << " terms " << h.terms.size() << '\n';
  for (const PauliTerm& t : h.terms) {
    out << format_double(t.coefficient);
    for (int q : t.z_support) out << ' ' << q;
    out << '\n';
  }
}

}  // namespace olcq
