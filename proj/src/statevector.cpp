#include "olcq/statevector.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "olcq/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace olcq {

namespace {

std::atomic<int> g_sim_threads{1};

using c64 = std::complex<double>;

struct Mat2 {
  c64 u00, u01, u10, u11;
};

Mat2 u3_matrix(double tx, double ty, double tz) {
  // Rz(tz) * Ry(ty) * Rx(tx), built by explicit 2x2 products.
  const c64 i(0, 1);
  const double cx = std::cos(tx / 2), sx = std::sin(tx / 2);
  const double cy = std::cos(ty / 2), sy = std::sin(ty / 2);
  const Mat2 rx{cx, -i * sx, -i * sx, cx};
  const Mat2 ry{cy, -sy, sy, cy};
  const c64 ez_m = std::exp(-i * (tz / 2)), ez_p = std::exp(i * (tz / 2));
  Mat2 ryrx{ry.u00 * rx.u00 + ry.u01 * rx.u10, ry.u00 * rx.u01 + ry.u01 * rx.u11,
            ry.u10 * rx.u00 + ry.u11 * rx.u10, ry.u10 * rx.u01 + ry.u11 * rx.u11};
  return {ez_m * ryrx.u00, ez_m * ryrx.u01, ez_p * ryrx.u10, ez_p * ryrx.u11};
}

inline std::uint64_t bit_of_qubit(int q, int n) {
  return std::uint64_t{1} << (n - 1 - q);
}

void apply_1q(Amplitudes& psi, int n, int q, const Mat2& u) {
  const std::uint64_t stride = bit_of_qubit(q, n);
  const std::uint64_t pairs = psi.size() >> 1;
  const std::uint64_t low = stride - 1;
  const std::uint64_t high = ~low;
  const std::int64_t count = static_cast<std::int64_t>(pairs);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_sim_threads.load()) \
    if (g_sim_threads.load() > 1 && count >= (1 << 14))
#endif
  for (std::int64_t kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::uint64_t>(kk);
    const std::uint64_t i0 = ((k & high) << 1) | (k & low);
    const std::uint64_t i1 = i0 | stride;
    const c64 a0 = psi[i0], a1 = psi[i1];
    psi[i0] = u.u00 * a0 + u.u01 * a1;
    psi[i1] = u.u10 * a0 + u.u11 * a1;
  }
}

void apply_x(Amplitudes& psi, int n, int q) {
  const std::uint64_t stride = bit_of_qubit(q, n);
  const std::uint64_t pairs = psi.size() >> 1;
  const std::uint64_t low = stride - 1;
  const std::uint64_t high = ~low;
  for (std::uint64_t k = 0; k < pairs; ++k) {
    const std::uint64_t i0 = ((k & high) << 1) | (k & low);
    std::swap(psi[i0], psi[i0 | stride]);
  }
}

void apply_cnot(Amplitudes& psi, int n, int control, int target) {
  const std::uint64_t cmask = bit_of_qubit(control, n);
  const std::uint64_t tmask = bit_of_qubit(target, n);
  const std::uint64_t pairs = psi.size() >> 1;
  const std::uint64_t low = tmask - 1;
  const std::uint64_t high = ~low;
  const std::int64_t count = static_cast<std::int64_t>(pairs);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_sim_threads.load()) \
    if (g_sim_threads.load() > 1 && count >= (1 << 14))
#endif
  for (std::int64_t kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::uint64_t>(kk);
    const std::uint64_t i0 = ((k & high) << 1) | (k & low);
    if (i0 & cmask) std::swap(psi[i0], psi[i0 | tmask]);
  }
}

}  // namespace

void set_sim_threads(int threads) { g_sim_threads.store(std::max(1, threads)); }
int sim_threads() { return g_sim_threads.load(); }

Circuit build_ansatz(const AnsatzSpec& spec) {
  const int nq = spec.qubits();
  if (spec.reps < 1) throw std::invalid_argument("build_ansatz: reps must be >= 1");
  if (nq < 1) throw std::invalid_argument("build_ansatz: empty register");
  if (nq > kMaxSimQubits)
    throw std::invalid_argument("build_ansatz: " + std::to_string(nq) +
                                " qubits exceeds the dense-simulation cap of " +
                                std::to_string(kMaxSimQubits));

  Circuit circuit;
  circuit.num_qubits = nq;
  int slot = 0;
  for (int rep = 0; rep < spec.reps; ++rep) {
    for (int q = 0; q < nq; ++q) {
      Gate g;
      g.kind = Gate::Kind::U3;
      g.q0 = q;
      g.slot = slot;
      slot += 3;
      circuit.gates.push_back(g);
    }
    switch (spec.kind) {
      case AnsatzKind::Product:
        break;
      case AnsatzKind::Block:
        for (int t = 0; t < spec.nodes; ++t) {
          const int base = t * spec.bits_per_position;
          for (int b = 0; b + 1 < spec.bits_per_position; ++b)
            circuit.gates.push_back(
                {Gate::Kind::Cnot, base + b, base + b + 1, -1, {}});
        }
        break;
      case AnsatzKind::FullLinear:
        for (int q = 0; q + 1 < nq; ++q)
          circuit.gates.push_back({Gate::Kind::Cnot, q, q + 1, -1, {}});
        break;
    }
  }
  circuit.param_count = slot;
  return circuit;
}

ReferenceState prepare_reference(const OverlapGraph& graph, const Encoding& encoding) {
  const int n = graph.node_count();
  if (n < 1) throw std::invalid_argument("prepare_reference: empty graph");

  std::vector<int> in_deg(n, 0), out_deg(n, 0);
  std::vector<double> in_w(n, 0), out_w(n, 0);
  for (const GraphEdge& e : graph.edges) {
    ++out_deg[e.from];
    ++in_deg[e.to];
    out_w[e.from] += e.score;
    in_w[e.to] += e.score;
  }

  auto pick = [n](const std::vector<int>& deg, const std::vector<double>& w,
                  int avoid) {
    for (int v = 0; v < n; ++v)
      if (deg[v] == 0 && v != avoid) return v;
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (v == avoid) continue;
      if (best < 0 || w[v] < w[best]) best = v;
    }
    return best;
  };

  ReferenceState ref;
  ref.start_node = pick(in_deg, in_w, -1);
  ref.end_node = pick(out_deg, out_w, n > 1 ? ref.start_node : -1);

  const int k = encoding.bits_per_position;
  const std::string start_code = encode_node(ref.start_node, k);
  const std::string end_code = encode_node(ref.end_node, k);
  for (int b = 0; b < k; ++b) {
    if (start_code[static_cast<std::size_t>(b)] == '1') ref.x_qubits.push_back(b);
    if (end_code[static_cast<std::size_t>(b)] == '1')
      ref.x_qubits.push_back((encoding.nodes - 1) * k + b);
  }
  std::sort(ref.x_qubits.begin(), ref.x_qubits.end());
  return ref;
}

Amplitudes simulate(const Circuit& circuit, std::span<const double> params) {
  if (circuit.num_qubits < 1 || circuit.num_qubits > kMaxSimQubits)
    throw std::invalid_argument("simulate: qubit count out of range");
  if (static_cast<int>(params.size()) != circuit.param_count)
    throw std::invalid_argument("simulate: expected " +
                                std::to_string(circuit.param_count) +
                                " parameters, got " + std::to_string(params.size()));

  Amplitudes psi(std::uint64_t{1} << circuit.num_qubits, c64{0, 0});
  psi[0] = 1.0;
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case Gate::Kind::U3: {
        double tx, ty, tz;
        if (g.slot >= 0) {
          tx = params[static_cast<std::size_t>(g.slot)];
          ty = params[static_cast<std::size_t>(g.slot) + 1];
          tz = params[static_cast<std::size_t>(g.slot) + 2];
        } else {
          tx = g.angles[0];
          ty = g.angles[1];
          tz = g.angles[2];
        }
        apply_1q(psi, circuit.num_qubits, g.q0, u3_matrix(tx, ty, tz));
        break;
      }
      case Gate::Kind::X:
        apply_x(psi, circuit.num_qubits, g.q0);
        break;
      case Gate::Kind::Cnot:
        if (g.q0 == g.q1)
          throw std::invalid_argument("simulate: CNOT control equals target");
        apply_cnot(psi, circuit.num_qubits, g.q0, g.q1);
        break;
    }
  }
  return psi;
}

double exact_expectation(const Amplitudes& state, const DiagonalHamiltonian& h) {
  const int n = h.encoding.total_qubits();
  if (state.size() != (std::uint64_t{1} << n))
    throw std::invalid_argument("exact_expectation: state size does not match encoding");
  double total = 0;
  std::string bits(static_cast<std::size_t>(n), '0');
  for (std::uint64_t idx = 0; idx < state.size(); ++idx) {
    const double p = std::norm(state[idx]);
    if (p == 0.0) continue;
    for (int q = 0; q < n; ++q)
      bits[static_cast<std::size_t>(q)] = (idx >> (n - 1 - q)) & 1 ? '1' : '0';
    total += p * h.eval_bits(bits);
  }
  return total;
}

double z_product_expectation(const Amplitudes& state, std::span<const int> support) {
  std::uint64_t dim = state.size();
  int n = 0;
  while ((std::uint64_t{1} << n) < dim) ++n;
  std::uint64_t mask = 0;
  for (int q : support) mask |= std::uint64_t{1} << (n - 1 - q);
  double total = 0;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const double p = std::norm(state[idx]);
    total += (std::popcount(idx & mask) & 1) ? -p : p;
  }
  return total;
}

SampleSet sample(const Amplitudes& state, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: need at least one shot");
  int n = 0;
  while ((std::uint64_t{1} << n) < state.size()) ++n;

  std::vector<double> cdf(state.size());
  double acc = 0;
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    acc += std::norm(state[i]);
    cdf[i] = acc;
  }

  Rng rng(seed);
  SampleSet out;
  out.shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    const auto idx = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    ++out.counts[bitstring_of_index(idx, n)];
  }
  return out;
}

std::string bitstring_of_index(std::uint64_t index, int num_qubits) {
  std::string bits(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 0; q < num_qubits; ++q)
    if (index >> (num_qubits - 1 - q) & 1) bits[static_cast<std::size_t>(q)] = '1';
  return bits;
}

void dump_statevector(std::ostream& out, const Amplitudes& state, double eps) {
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    if (std::abs(state[i]) <= eps) continue;
    out << i << ' ' << format_double(state[i].real()) << ' '
        << format_double(state[i].imag()) << '\n';
  }
}

}  // namespace olcq
