#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "olcq/hobo.hpp"
#include "olcq/overlap.hpp"

namespace olcq {

// Dense simulation is capped here: 2^24 amplitudes is 256 MiB.
inline constexpr int kMaxSimQubits = 24;

struct Gate {
  enum class Kind { U3, X, Cnot };
  Kind kind = Kind::U3;
  int q0 = 0;      // target (X, U3) or control (CNOT)
  int q1 = -1;     // CNOT target
  int slot = -1;   // U3: first of three angle slots; -1 means fixed angles
  std::array<double, 3> angles{};  // (theta_x, theta_y, theta_z) when slot < 0
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  int param_count = 0;
};

enum class AnsatzKind { Product, Block, FullLinear };

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::Block;
  int reps = 2;
  int nodes = 0;
  int bits_per_position = 0;

  int qubits() const { return nodes * bits_per_position; }
};

// Per rep: a U3 on every qubit, then the entangling layer (none for
// Product, a CNOT ladder within each K-qubit block for Block, one ladder
// across all qubits for FullLinear). Parameter slots are rep-major then
// qubit-major, 3 per U3. Throws when the register exceeds kMaxSimQubits.
Circuit build_ansatz(const AnsatzSpec& spec);

struct ReferenceState {
  int start_node = 0;
  int end_node = 0;
  std::vector<int> x_qubits;  // qubits flipped to encode start/end nodes
};

// Picks the path endpoints: a node with zero in-degree (start) / zero
// out-degree (end) when one exists, otherwise the node with the smallest
// total incoming / outgoing edge score. Ties go to the smaller node id,
// and a shared pick is broken toward distinct start/end. The X prefix sets
// block 0 to the start code and block N-1 to the end code.
ReferenceState prepare_reference(const OverlapGraph& graph, const Encoding& encoding);

using Amplitudes = std::vector<std::complex<double>>;

// Applies the circuit to |0...0>. U3(tx,ty,tz) = Rz(tz)*Ry(ty)*Rx(tx).
// Amplitude index bit (n-1-q) corresponds to qubit q, matching the
// bitstring convention in hobo.hpp. Throws on a parameter-count mismatch.
Amplitudes simulate(const Circuit& circuit, std::span<const double> params);

// Number of worker threads gate kernels may use (default 1).
void set_sim_threads(int threads);
int sim_threads();

// Sum over basis states of |amp|^2 times the direct bitstring cost.
double exact_expectation(const Amplitudes& state, const DiagonalHamiltonian& h);

// <Z_S> for a Z-support set, for cross-checking term-list expectations.
double z_product_expectation(const Amplitudes& state, std::span<const int> support);

struct SampleSet {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
};

// Multinomial draw from |amp|^2; deterministic for a fixed seed.
SampleSet sample(const Amplitudes& state, std::uint64_t shots, std::uint64_t seed);

std::string bitstring_of_index(std::uint64_t index, int num_qubits);

// Debug dump: `index re im` triples for amplitudes above `eps`.
void dump_statevector(std::ostream& out, const Amplitudes& state, double eps = 1e-12);

}  // namespace olcq
