#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "olcq/overlap.hpp"

namespace olcq {

enum class EncodingKind { Hobo, Qubo };

// Qubit layout for an N-node path problem. Position t occupies qubits
// [t*K, (t+1)*K); within a block the code is written MSB-first, and
// bitstring character q corresponds to qubit q (leftmost = qubit 0).
struct Encoding {
  EncodingKind kind = EncodingKind::Hobo;
  int nodes = 0;
  int bits_per_position = 0;  // ceil(log2 N) for HOBO, N for QUBO

  int total_qubits() const { return nodes * bits_per_position; }
};

Encoding hobo_encoding(int nodes);
Encoding qubo_encoding(int nodes);

// A signed product of Pauli Z over `z_support` (sorted, no duplicates);
// all other qubits carry identity. The cost operator is diagonal, so this
// is the only Pauli structure that appears.
struct PauliTerm {
  double coefficient = 0;
  std::vector<int> z_support;
};

// Z eigenvalue product of a term on a basis bitstring ('0' -> +1, '1' -> -1)
// times the coefficient.
double evaluate_term(const PauliTerm& term, std::string_view bits);

struct DiagonalHamiltonian {
  Encoding encoding;
  std::vector<PauliTerm> terms;
  double a1 = 0;
  double a2 = 0;
  bool validity_penalty = false;  // whether the A1 invalid-code term is active
  CostMatrix matrix;

  // Direct cost of a basis bitstring of length total_qubits(). For HOBO
  // this decodes the blocks and forwards to eval_sequence; for QUBO it is
  // the one-hot cost evaluated on the raw bits.
  double eval_bits(std::string_view bits) const;

  // Cost of a decoded code sequence (length N). Codes >= N contribute
  // gamma in every transition they touch and, when validity_penalty is
  // set, a1 each. Equal code pairs cost a2 each.
  double eval_sequence(std::span<const int> codes) const;
};

// MSB-first binary code of `node` in k bits; throws std::out_of_range for
// node >= 2^k. decode_block inverts it.
std::string encode_node(int node, int k);
int decode_block(std::string_view bits);

// Splits a length-N*K bitstring into per-position codes. HOBO blocks are
// read as MSB-first binary; QUBO blocks decode to the set bit's index when
// exactly one bit is set and to the out-of-range marker N otherwise.
// Anomalies (repeats, codes >= N) are preserved, not rejected. Throws
// std::invalid_argument on a length mismatch.
std::vector<int> decode_bitstring(std::string_view bits, const Encoding& encoding);

struct HoboOptions {
  bool validity_penalty = false;  // include the A1 projector onto codes >= N
};

// Expands the path cost into Z-product terms over N*ceil(log2 N) qubits:
// transition weights via projector products on adjacent blocks (codes >= N
// weighted gamma), the pairwise equality penalty A2, and optionally the A1
// validity projector. Like terms are merged; |coeff| < 1e-12 is dropped.
DiagonalHamiltonian build_hobo_hamiltonian(const CostMatrix& matrix, double a1,
                                           double a2, const HoboOptions& options = {});

// One-hot encoding over N^2 qubits with squared row/column penalties; at
// most two-local after expansion. Full expansion refuses N > 12 (use the
// counting mode below for larger instances).
DiagonalHamiltonian build_qubo_hamiltonian(const CostMatrix& matrix, double a1,
                                           double a2);

struct HamiltonianStats {
  int qubits = 0;
  std::size_t terms = 0;
  int max_locality = 0;
};

HamiltonianStats hamiltonian_stats(const DiagonalHamiltonian& hamiltonian);

// Counting mode: exact post-merge statistics without materializing the
// term list, valid for any N the encodings support.
HamiltonianStats hobo_term_stats(const CostMatrix& matrix, double a1, double a2,
                                 const HoboOptions& options = {});
HamiltonianStats qubo_term_stats(const CostMatrix& matrix, double a1, double a2);

// Text dump, one `coefficient q q q` line per term, for cross-checking.
void dump_hamiltonian(std::ostream& out, const DiagonalHamiltonian& hamiltonian);

}  // namespace olcq
